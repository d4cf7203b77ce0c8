"""Antichain rank and spine/block decompositions of finite posets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .constructions import lex_sum
from .errors import InvariantViolation
from .poset import Poset, antichain, bits, check_cap, cones, is_augmentation, label_of, relabel, restrict


def antichain_rank(P: Poset, cap: int | None = None) -> int:
    """Longest strictly increasing chain of antichains starting at the empty one.

    Each step of such a chain adds at least one element, and adding one element
    at a time is always possible, so this is a maximum-clique search in the
    incomparability graph.  Candidates are bounded by a greedy partition into
    chains (colour classes of that graph).
    """
    n = len(P)
    check_cap(n, cap, "antichain rank")
    free = [P.full_mask & ~(P.up_masks[i] | P.down_masks[i]) for i in range(n)]
    best = 0

    def colour_order(candidates: int) -> list[tuple[int, int]]:
        out = []
        rest = candidates
        colour = 0
        while rest:
            colour += 1
            open_ = rest
            while open_:
                v = (open_ & -open_).bit_length() - 1
                open_ &= ~(1 << v) & ~free[v]
                rest &= ~(1 << v)
                out.append((v, colour))
        return out

    def expand(size: int, candidates: int) -> None:
        nonlocal best
        for v, bound in reversed(colour_order(candidates)):
            if size + bound <= best:
                return
            inner = candidates & free[v]
            if inner:
                expand(size + 1, inner)
            elif size + 1 > best:
                best = size + 1
            candidates &= ~(1 << v)

    if n:
        expand(0, P.full_mask)
    return best


@dataclass
class Decomposition:
    """``blocks[k]`` is the block whose designated maximum is ``spine[k]``."""

    poset: Poset
    spine: list
    blocks: list[frozenset]

    def to_json(self) -> dict:
        return {
            "spine": [label_of(p) for p in self.spine],
            "blocks": [sorted(label_of(x) for x in Z) for Z in self.blocks],
        }


@dataclass
class DecompositionReport:
    """Violations per clause; each witness is a triple."""

    clauses: dict[str, list[tuple]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.clauses.values())

    def failed(self) -> list[str]:
        return sorted(k for k, v in self.clauses.items() if v)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "clauses": {
                k: {"ok": not v, "witnesses": [[_witness_label(w) for w in t] for t in v]}
                for k, v in sorted(self.clauses.items())
            },
        }


def _witness_label(w) -> str | None:
    return None if w is None else label_of(w)


def singleton_decomposition(P: Poset) -> Decomposition:
    return Decomposition(P, list(P.elements), [frozenset([p]) for p in P.elements])


def _partition_problems(P: Poset, D: Decomposition) -> list[tuple]:
    owner: dict = {}
    out = []
    for k, Z in enumerate(D.blocks):
        for x in Z:
            if x not in P:
                out.append((x, None, D.spine[k]))
            elif x in owner:
                out.append((x, D.spine[owner[x]], D.spine[k]))
            else:
                owner[x] = k
    for x in P.elements:
        if x not in owner:
            out.append((x, None, None))
    if len(D.spine) != len(D.blocks):
        out.append((None, len(D.spine), len(D.blocks)))
    return out


def _block_problems(P: Poset, D: Decomposition) -> tuple[list[tuple], list[tuple]]:
    convex, maximum = [], []
    for p, Z in zip(D.spine, D.blocks):
        Z = [x for x in Z if x in P]
        zmask = P.mask(Z)
        if p not in P or p not in Z:
            maximum.append((p, None, "spine point outside its block"))
            continue
        pid = P.id(p)
        for x in Z:
            if not P.down_masks[pid] >> P.id(x) & 1:
                maximum.append((p, x, "not below the designated maximum"))
        between = 0
        for x in Z:
            between |= P.up_masks[P.id(x)]
        between &= P.down_closure(zmask)
        for z in bits(between & ~zmask):
            lo = next(x for x in Z if P.up_masks[P.id(x)] >> z & 1)
            hi = next(y for y in Z if P.down_masks[P.id(y)] >> z & 1)
            convex.append((lo, P.key(z), hi))
    return convex, maximum


def _lex_sum_problems(P: Poset, D: Decomposition) -> list[tuple]:
    masks = [P.mask(Z) for Z in D.blocks]
    above = [_common(P.up_masks, P, m) for m in masks]
    out = []
    for b, p in enumerate(D.spine):
        for g, q in enumerate(D.spine):
            if b == g or not P.lt(p, q) or masks[g] & ~above[b] == 0:
                continue
            for x in bits(masks[b]):
                for y in bits(masks[g] & ~(P.up_masks[x] & ~(1 << x))):
                    out.append((p, P.key(x), P.key(y)))
    return out


def _common(rows: tuple[int, ...], P: Poset, mask: int) -> int:
    """Elements strictly related to every member of ``mask`` through ``rows``."""
    out = P.full_mask
    for x in bits(mask):
        out &= rows[x] & ~(1 << x)
    return out


def spine_lex_sum(D: Decomposition) -> Poset:
    """The lexicographic sum of the blocks over the spine order, keyed by the original elements."""
    P = D.poset
    index = restrict(P, D.spine)
    parts = {p: restrict(P, Z) for p, Z in zip(D.spine, D.blocks)}
    return relabel(lex_sum(index, parts), lambda key: key[1])


def check_decomposition(P: Poset, D: Decomposition) -> DecompositionReport:
    """Partition, convexity, designated maxima and lexicographic-sum containment.

    The containment verdict comes from comparing ``P`` with an explicitly built
    lexicographic sum; the pairwise scan only supplies witnesses.
    """
    report = DecompositionReport()
    report.clauses["partition"] = _partition_problems(P, D)
    convex, maximum = _block_problems(P, D)
    report.clauses["convex"] = convex
    report.clauses["maximum"] = maximum
    if report.clauses["partition"] or maximum:
        report.clauses["lex_sum"] = []
        return report
    witnesses = _lex_sum_problems(P, D)
    if not is_augmentation(P, spine_lex_sum(D)) and not witnesses:
        witnesses = [(None, None, None)]
    report.clauses["lex_sum"] = witnesses
    return report


def decompose(P: Poset, coalesce: bool = False) -> Decomposition:
    """Singleton blocks, optionally merged greedily into covering blocks.

    A merge folds the block of ``p`` into the block whose maximum covers ``p``.
    Candidates are screened with bitmask tests on the merged block only; an
    accepted merge is then re-checked by :func:`check_decomposition`.  Passes
    repeat until no merge succeeds.  No minimality of the block count is claimed.
    """
    D = singleton_decomposition(P)
    if not coalesce:
        return D
    cover = P.cover_matrix
    spine = [P.id(p) for p in D.spine]
    masks = [1 << i for i in spine]
    changed = True
    while changed:
        changed = False
        for pid in list(spine):
            if pid not in spine:
                continue
            k = spine.index(pid)
            for qid in (int(j) for j in cover[pid].nonzero()[0]):
                if qid not in spine:
                    continue
                g = spine.index(qid)
                merged = masks[g] | masks[k]
                if not _merge_allowed(P, spine, masks, k, g, merged):
                    continue
                masks[g] = merged
                del spine[k], masks[k]
                D = Decomposition(P, [P.key(i) for i in spine], [P.keys_of(m) for m in masks])
                report = check_decomposition(P, D)
                if not report.ok:
                    raise InvariantViolation(f"merge broke the decomposition: {report.failed()}")
                changed = True
                break
    return D


def _merge_allowed(P: Poset, spine: list[int], masks: list[int], k: int, g: int, merged: int) -> bool:
    q = spine[g]
    if merged & ~P.down_masks[q]:
        return False
    if P.up_closure(merged) & P.down_closure(merged) & ~merged:
        return False
    below = _common(P.down_masks, P, merged)
    above = _common(P.up_masks, P, merged)
    for r, (pr, m) in enumerate(zip(spine, masks)):
        if r in (k, g):
            continue
        if P.up_masks[pr] >> q & 1 and m & ~below:
            return False
        if P.down_masks[pr] >> q & 1 and m & ~above:
            return False
    return True


def spine_of(D: Decomposition) -> Poset:
    """Induced order on the spine points, in spine order.

    A finite spine is trivially well-quasi-ordered; stronger ordinal-indexed
    properties of the spine are not certified.
    """
    P = D.poset
    ids = [P.id(p) for p in D.spine]
    return Poset(D.spine, P.matrix[ids][:, ids])


def cone_sum(P: Poset, q: Hashable) -> Poset:
    """Lexicographic sum of the comparable and incomparable parts of ``q`` over a 2-element antichain."""
    comparable, incomparable = cones(P, q)
    parts = {0: restrict(P, comparable), 1: restrict(P, incomparable)}
    return relabel(lex_sum(antichain(2), parts), lambda key: key[1])


def cone_sum_holds(P: Poset, qs: Iterable[Hashable] | None = None) -> bool:
    return all(is_augmentation(P, cone_sum(P, q)) for q in (P.elements if qs is None else qs))
