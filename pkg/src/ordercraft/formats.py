"""JSON and DOT encodings for posets, families, barriers, colourings and nets."""

from __future__ import annotations

import json
from typing import Any, Mapping

from .barriers import FiniteBarrier, block, decode_block, encode_block
from .coverability import Transition, Vass
from .dress_schiffels import DsFamily
from .errors import InvariantViolation, ParseError
from .poset import Poset, build_poset, label_of


def dumps(obj: Any, pretty: bool = False) -> str:
    """Deterministic JSON text; key order is always sorted."""
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _require(doc: Any, key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in doc:
        raise ParseError(f"{where}: missing {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise ParseError(f"{where}: {key!r} has the wrong type")
    return value


def _int_list(value: Any, where: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise ParseError(f"{where}: expected a list of integers")
    return value


# posets


def poset_from_json(doc: Any, where: str = "poset") -> Poset:
    elements = _require(doc, "elements", list, where)
    pairs = doc.get("pairs", [])
    mode = doc.get("mode", "covers")
    if not all(isinstance(e, str) for e in elements):
        raise ParseError(f"{where}: element labels must be strings")
    if not isinstance(pairs, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p) for p in pairs
    ):
        raise ParseError(f"{where}: pairs must be [string, string] lists")
    if mode not in ("covers", "relation"):
        raise ParseError(f"{where}: unknown mode {mode!r}")
    return build_poset(elements, [tuple(p) for p in pairs], mode=mode)


def poset_to_json(P: Poset) -> dict:
    """Labels in id order and the cover pairs only."""
    labels = P.labels
    if len(set(labels)) != len(labels):
        raise InvariantViolation("element labels are not distinct, so the poset cannot be serialized")
    pairs = [[labels[i], labels[j]] for i, j in zip(*P.cover_matrix.nonzero())]
    return {"elements": list(labels), "pairs": pairs, "mode": "covers"}


def poset_to_dot(P: Poset, name: str = "hasse") -> str:
    labels = P.labels
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for k, lab in enumerate(labels):
        lines.append(f"  n{k} [label={json.dumps(lab, ensure_ascii=False)}];")
    for i, j in zip(*P.cover_matrix.nonzero()):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# Dress-Schiffels families


def family_from_json(doc: Any) -> DsFamily:
    index = poset_from_json(_require(doc, "index", dict, "family"), "family.index")
    comps = _require(doc, "components", dict, "family")
    components, zeros = {}, {}
    for i in index:
        if i not in comps:
            raise ParseError(f"family: no component for index element {i!r}")
        entry = comps[i]
        components[i] = poset_from_json(_require(entry, "poset", dict, f"component {i}"), f"component {i}")
        zeros[i] = _require(entry, "zero", str, f"component {i}")
    extra = set(comps) - set(index.elements)
    if extra:
        raise ParseError(f"family: components for unknown index elements {sorted(extra)}")
    return DsFamily(index, components, zeros)


def family_to_json(fam: DsFamily) -> dict:
    return {
        "index": poset_to_json(fam.index),
        "components": {
            label_of(i): {"poset": poset_to_json(fam.components[i]), "zero": label_of(fam.zeros[i])}
            for i in fam.index
        },
    }


# barriers and colourings


def barrier_from_json(doc: Any) -> FiniteBarrier:
    base = _int_list(_require(doc, "base", list, "barrier"), "barrier.base")
    blocks = _require(doc, "blocks", list, "barrier")
    return FiniteBarrier(base, [block(_int_list(b, "barrier.blocks")) for b in blocks])


def barrier_to_json(B: FiniteBarrier) -> dict:
    return {"base": list(B.base), "blocks": [list(b) for b in B.blocks]}


def colouring_from_json(doc: Any) -> dict:
    if not isinstance(doc, dict):
        raise ParseError("colouring: expected an object keyed by block encodings")
    out = {}
    for key, value in doc.items():
        try:
            out[decode_block(key)] = value
        except ValueError:
            raise ParseError(f"colouring: bad block encoding {key!r}") from None
    return out


def colouring_to_json(colouring: Mapping) -> dict:
    return {encode_block(b): v for b, v in colouring.items()}


# nets


def vass_from_json(doc: Any) -> Vass:
    dimension = _require(doc, "dimension", int, "net")
    ts = _require(doc, "transitions", list, "net")
    transitions = []
    for k, t in enumerate(ts):
        where = f"net.transitions[{k}]"
        guard = _int_list(_require(t, "guard", list, where), where)
        delta = _int_list(_require(t, "delta", list, where), where)
        transitions.append(Transition(guard, delta))
    return Vass(dimension, tuple(transitions))


def vass_to_json(v: Vass) -> dict:
    return {
        "dimension": v.dimension,
        "transitions": [{"guard": list(t.guard), "delta": list(t.delta)} for t in v.transitions],
    }


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",")) if text.strip() else ()
    except ValueError:
        raise ParseError(f"bad vector {text!r}; expected comma-separated integers") from None
