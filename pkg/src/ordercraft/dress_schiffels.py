"""Dress-Schiffels products of pointed posets.

An element is a finitely supported choice function over an indexed family;
``f <= g`` iff ``f(i) < g(i)`` at every index that is maximal (in the index
order) among the coordinates where ``f`` and ``g`` differ.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Hashable, Mapping

import numpy as np

from .constructions import lex_sum
from .errors import FamilyMismatch, IndexNotLinear, InvariantViolation, PreconditionError
from .poset import Poset, PosetMap, check_cap, is_order_generating, is_order_preserving, label_of, restrict, width


class DsFamily:
    """Index poset plus one pointed component per index element."""

    def __init__(self, index: Poset, components: Mapping[Hashable, Poset], zeros: Mapping[Hashable, Hashable]):
        self.index = index
        self.components = {}
        self.zeros = {}
        for i in index:
            if i not in components:
                raise PreconditionError(f"no component for index element {i!r}")
            C = components[i]
            z = zeros[i]
            if C.up_masks[C.id(z)] != C.full_mask:
                raise PreconditionError(f"{z!r} is not the minimum of component {i!r}")
            self.components[i] = C
            self.zeros[i] = z

    @classmethod
    def pointed(cls, index: Poset, components: Mapping[Hashable, Poset]) -> "DsFamily":
        """Family whose zeros are the unique minima; rejects components without one."""
        zeros = {}
        for i in index:
            C = components[i]
            bottoms = [x for k, x in enumerate(C.elements) if C.up_masks[k] == C.full_mask]
            if not bottoms:
                raise PreconditionError(f"component {i!r} has no minimum")
            zeros[i] = bottoms[0]
        return cls(index, components, zeros)

    def vector(self, values: Mapping[Hashable, Hashable] | None = None) -> "DsVector":
        values = dict(values or {})
        items = []
        for i in self.index:
            if i in values:
                x = values.pop(i)
                self.components[i].id(x)
                if x != self.zeros[i]:
                    items.append((i, x))
        if values:
            raise PreconditionError(f"unknown index elements {sorted(map(label_of, values))}")
        return DsVector(self, tuple(items))

    def zero(self) -> "DsVector":
        return DsVector(self, ())

    def is_linear(self) -> bool:
        return width(self.index) <= 1


@dataclass(frozen=True, eq=False)
class DsVector:
    """Only non-zero coordinates are stored, in index id order."""

    family: DsFamily
    items: tuple

    def __getitem__(self, i: Hashable) -> Hashable:
        for k, x in self.items:
            if k == i:
                return x
        return self.family.zeros[i]

    @property
    def support(self) -> frozenset:
        return frozenset(k for k, _ in self.items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DsVector):
            return NotImplemented
        return self.family is other.family and self.items == other.items

    def __hash__(self) -> int:
        return hash(self.items)

    def label(self) -> str:
        return "{" + ",".join(f"{label_of(i)}:{label_of(x)}" for i, x in self.items) + "}"

    def __repr__(self) -> str:
        return f"DsVector({self.label()})"


def _check_same(f: DsVector, g: DsVector) -> DsFamily:
    if f.family is not g.family:
        raise FamilyMismatch("vectors belong to different families")
    return f.family


def delta(f: DsVector, g: DsVector) -> frozenset:
    """Index elements where ``f`` and ``g`` differ."""
    _check_same(f, g)
    a, b = dict(f.items), dict(g.items)
    return frozenset(i for i in a.keys() | b.keys() if a.get(i) != b.get(i))


def ds_leq(f: DsVector, g: DsVector) -> bool:
    fam = _check_same(f, g)
    d = delta(f, g)
    I = fam.index
    dmask = I.mask(d)
    for i in d:
        k = I.id(i)
        if I.up_masks[k] & dmask != 1 << k:
            continue
        C = fam.components[i]
        if not C.lt(f[i], g[i]):
            return False
    return True


def _coordinate_values(fam: DsFamily, caps) -> list[list[Hashable]]:
    out = []
    for i in fam.index:
        C = fam.components[i]
        nonzero = [x for x in C.elements if x != fam.zeros[i]]
        cap = caps if isinstance(caps, int) else None if caps is None else caps.get(i)
        if cap is not None:
            nonzero = nonzero[:cap]
        out.append([fam.zeros[i]] + nonzero)
    return out


def ds_fragment(fam: DsFamily, caps: int | Mapping[Hashable, int] | None = None, cap: int | None = None,
                check: bool = True) -> Poset:
    """Every vector whose coordinates lie within ``caps`` non-zero values, under ``ds_leq``.

    The relation is evaluated for all pairs at once with array operations; it
    agrees with :func:`ds_leq` pointwise.  With ``check`` the result is
    verified to be reflexive, antisymmetric and transitive.
    """
    values = _coordinate_values(fam, caps)
    total = int(np.prod([len(v) for v in values])) if values else 1
    check_cap(total, cap, "Dress-Schiffels fragment")
    index = list(fam.index)
    codes = np.array(list(cartesian(*[range(len(v)) for v in values])), dtype=np.int64).reshape(total, len(index))
    diff = [codes[:, c][:, None] != codes[:, c][None, :] for c in range(len(index))]
    rel = np.ones((total, total), dtype=bool)
    I = fam.index
    for c, i in enumerate(index):
        C = fam.components[i]
        vid = [C.id(x) for x in values[c]]
        strict = C.matrix[np.ix_(vid, vid)] & ~np.eye(len(vid), dtype=bool)
        dominated = np.zeros((total, total), dtype=bool)
        for c2 in range(len(index)):
            if c2 != c and I.matrix[c, c2]:
                dominated |= diff[c2]
        maximal = diff[c] & ~dominated
        rel &= ~maximal | strict[codes[:, c][:, None], codes[:, c][None, :]]
    keys = []
    for row in codes:
        keys.append(DsVector(fam, tuple((index[c], values[c][v]) for c, v in enumerate(row) if v)))
    return Poset.from_matrix(keys, rel, check=check)


def antilex_oracle(fam: DsFamily, f: DsVector, g: DsVector) -> bool:
    """Compare from the top index downwards; the first difference decides."""
    if f.family is not fam or g.family is not fam:
        raise FamilyMismatch("vectors belong to a different family")
    I = fam.index
    if not fam.is_linear():
        raise IndexNotLinear("index is not a chain")
    top_down = sorted(I.elements, key=lambda i: -I.down_masks[I.id(i)].bit_count())
    for i in top_down:
        x, y = f[i], g[i]
        if x != y:
            return fam.components[i].leq(x, y)
    return True


def antilex_relation(fam: DsFamily, vectors: list[DsVector]) -> np.ndarray:
    """:func:`antilex_oracle` for all pairs of ``vectors`` at once."""
    if not fam.is_linear():
        raise IndexNotLinear("index is not a chain")
    I = fam.index
    n = len(vectors)
    rel = np.ones((n, n), dtype=bool)
    decided = np.zeros((n, n), dtype=bool)
    for i in sorted(I.elements, key=lambda i: -I.down_masks[I.id(i)].bit_count()):
        C = fam.components[i]
        ids = np.array([C.id(v[i]) for v in vectors], dtype=np.int64)
        diff = ids[:, None] != ids[None, :]
        fresh = diff & ~decided
        rel[fresh] = C.matrix[ids[:, None], ids[None, :]][fresh]
        decided |= diff
    return rel


def singleton_vectors(fam: DsFamily) -> list[DsVector]:
    return [fam.vector({i: x}) for i in fam.index for x in fam.components[i] if x != fam.zeros[i]]


def singleton_sum_iso(fam: DsFamily, cap: int | None = None) -> PosetMap:
    """Map singleton-support vectors onto the lexicographic sum of the punctured components.

    The all-zero vector has no counterpart in the sum and is left out.
    Raises ``InvariantViolation`` unless the map preserves and reflects order.
    """
    vectors = singleton_vectors(fam)
    check_cap(len(vectors), cap, "singleton-support vectors")
    source = Poset.from_predicate(vectors, ds_leq)
    parts = {i: restrict(fam.components[i], [x for x in fam.components[i] if x != fam.zeros[i]])
             for i in fam.index}
    target = lex_sum(fam.index, parts)
    m = PosetMap(source, target, {v: v.items[0] for v in vectors})
    if len(set(m.assignment.values())) != len(target):
        raise InvariantViolation("singleton vectors do not biject onto the sum")
    if not is_order_preserving(m):
        raise InvariantViolation("singleton correspondence is not order-preserving")
    if not is_order_generating(m):
        raise InvariantViolation("singleton correspondence is not order-generating")
    return m


def fragment_chain(fam: DsFamily, caps: int) -> list[Poset]:
    """Fragments for caps ``0, 1, ..., caps``; each is a suborder of the next."""
    return [ds_fragment(fam, c) for c in range(caps + 1)]


def fragment_union_holds(fam: DsFamily, caps: int) -> bool:
    """The full fragment is the union of the capped ones, each an induced suborder of it."""
    full = ds_fragment(fam, caps)
    seen: set = set()
    for part in fragment_chain(fam, caps):
        if restrict(full, part.elements) != part:
            return False
        seen.update(part.elements)
    return seen == set(full.elements)
