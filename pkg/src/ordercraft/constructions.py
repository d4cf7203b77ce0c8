"""Derived orders: products, lexicographic sums, sequence embeddability,
down-set lattices, the domination order, truncated Rado orders, and the
padding / prefix / complement maps used to compare them."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BaseMismatch,
    LengthExceeded,
    MissingPart,
    NotAntichain,
    NotMinimal,
    PreconditionError,
    SizeLimitExceeded,
)
from .poset import Poset, _maximal_mask, bits, check_cap, label_of, size_cap


def product(P: Poset, Q: Poset, cap: int | None = None) -> Poset:
    """Coordinatewise order on ``P x Q``; keys are pairs ``(p, q)``."""
    check_cap(len(P) * len(Q), cap, "product")
    keys = [(p, q) for p in P for q in Q]
    return Poset(keys, np.kron(P.matrix, Q.matrix).astype(bool))


def power(P: Poset, n: int, cap: int | None = None) -> Poset:
    """``P^n`` with coordinatewise order; keys are n-tuples of ``P`` keys."""
    check_cap(len(P) ** n, cap, "power")
    keys = list(cartesian(P.elements, repeat=n))
    m = np.ones((1, 1), dtype=bool)
    for _ in range(n):
        m = np.kron(m, P.matrix).astype(bool)
    return Poset(keys, m)


def lex_sum(index: Poset, parts: Mapping[Hashable, Poset], cap: int | None = None) -> Poset:
    """Lexicographic sum: ``(q, x) <= (q', x')`` iff ``q < q'``, or ``q = q'`` and ``x <= x'``."""
    for q in index:
        if q not in parts:
            raise MissingPart(f"no part for index element {q!r}")
    total = sum(len(parts[q]) for q in index)
    check_cap(total, cap, "lexicographic sum")
    keys = [(q, x) for q in index for x in parts[q]]
    sizes = [len(parts[q]) for q in index]
    strict = index.matrix & ~np.eye(len(index), dtype=bool)
    m = np.repeat(np.repeat(strict, sizes, axis=0), sizes, axis=1)
    start = 0
    for q, size in zip(index, sizes):
        m[start:start + size, start:start + size] = parts[q].matrix
        start += size
    return Poset(keys, m)


def disjoint_union(parts: Sequence[Poset]) -> Poset:
    """Union with no cross relations, as a lexicographic sum over an antichain."""
    idx = Poset(range(len(parts)), np.eye(len(parts), dtype=bool))
    return lex_sum(idx, dict(enumerate(parts)))


# sequences under embeddability


@dataclass(frozen=True)
class Seq:
    """A finite sequence over a base poset."""

    base: Poset
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        for x in self.entries:
            self.base.id(x)

    def __len__(self) -> int:
        return len(self.entries)

    def __hash__(self) -> int:
        return hash(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Seq):
            return NotImplemented
        return self.entries == other.entries and _same_base(self.base, other.base)


def _same_base(P: Poset, Q: Poset) -> bool:
    return P is Q or P == Q


def _greedy_witness(base: Poset, s: Sequence, t: Sequence) -> tuple[int, ...] | None:
    up = base.up_masks
    sid = [base.id(x) for x in s]
    tid = [base.id(y) for y in t]
    out = []
    j = 0
    for a in sid:
        while j < len(tid) and not (up[a] >> tid[j]) & 1:
            j += 1
        if j == len(tid):
            return None
        out.append(j)
        j += 1
    return tuple(out)


def embeds(s: Seq, t: Seq) -> tuple[int, ...] | None:
    """Leftmost strictly increasing ``rho`` with ``s[k] <= t[rho[k]]``, or ``None``.

    Taking the first admissible position at every step is optimal for
    subsequence-style matching, so ``None`` really means no witness exists.
    """
    if not _same_base(s.base, t.base):
        raise BaseMismatch("sequences live over different base posets")
    return _greedy_witness(s.base, s.entries, t.entries)


class SequenceOrder(Poset):
    """All sequences of length at most ``max_length`` over ``base``, ordered by embeddability."""

    def __init__(self, base: Poset, max_length: int, keys, matrix):
        super().__init__(keys, matrix)
        self.base = base
        self.max_length = max_length


def seq_embed_order(P: Poset, n: int, cap: int | None = None) -> SequenceOrder:
    """Sequence keys are tuples of base keys, shortest first.

    The construction checks antisymmetry on the result, so two distinct
    mutually embeddable sequences would raise ``CycleDetected``.
    """
    count = sum(len(P) ** k for k in range(n + 1))
    check_cap(count, cap, "sequence order")
    keys = [tuple(t) for k in range(n + 1) for t in cartesian(P.elements, repeat=k)]
    m = np.zeros((len(keys), len(keys)), dtype=bool)
    for i, s in enumerate(keys):
        for j, t in enumerate(keys):
            if len(s) <= len(t):
                m[i, j] = _greedy_witness(P, s, t) is not None
    checked = Poset.from_matrix(keys, m)
    return SequenceOrder(P, n, checked.elements, checked.matrix)


def gamma_index(f: Seq, a: Hashable) -> int:
    """Start of the trailing run of ``a`` in ``f`` (``len(f)`` if ``f`` does not end in ``a``)."""
    P = f.base
    i = P.id(a)
    if P.down_masks[i] != 1 << i:
        raise NotMinimal(f"{a!r} is not minimal in the base")
    g = len(f.entries)
    while g > 0 and f.entries[g - 1] == a:
        g -= 1
    return g


def pad_phi(f: Seq, n: int, a: Hashable) -> Seq:
    """``f`` cut at its trailing run of ``a``, then padded with ``a`` to length ``n``."""
    if len(f) > n:
        raise LengthExceeded(f"sequence of length {len(f)} does not fit in length {n}")
    g = gamma_index(f, a)
    return Seq(f.base, f.entries[:g] + (a,) * (n - g))


# down-sets


@dataclass(frozen=True)
class DownSet:
    ambient: Poset
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        P = self.ambient
        mask = P.mask(self.members)
        if P.down_closure(mask) != mask:
            raise PreconditionError("member set is not downward closed")

    @property
    def mask(self) -> int:
        return self.ambient.mask(self.members)

    def __le__(self, other: "DownSet") -> bool:
        return self.members <= other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DownSet):
            return NotImplemented
        return self.members == other.members


def antichain_masks(P: Poset, cap: int | None = None) -> list[int]:
    """Every antichain of ``P`` as a bitmask, the empty one first."""
    n = len(P)
    comparable = [P.up_masks[i] | P.down_masks[i] for i in range(n)]
    out = [0]
    limit = size_cap(cap)

    def extend(mask: int, allowed: int) -> None:
        for i in bits(allowed):
            new = mask | 1 << i
            out.append(new)
            if len(out) > limit:
                raise SizeLimitExceeded(f"more than {limit} antichains")
            extend(new, allowed & ~comparable[i] & ~((1 << (i + 1)) - 1))

    extend(0, P.full_mask)
    return out


def _containment_matrix(small: list[int], big: list[int]) -> np.ndarray:
    m = np.zeros((len(small), len(big)), dtype=bool)
    for i, a in enumerate(small):
        for j, b in enumerate(big):
            m[i, j] = a & ~b == 0
    return m


def _sorted_masks(masks: Iterable[int]) -> list[int]:
    return sorted(masks, key=lambda m: (m.bit_count(), tuple(bits(m))))


def downset_lattice(P: Poset, cap: int | None = None) -> Poset:
    """All down-sets of ``P`` (frozensets of keys) under inclusion."""
    masks = _sorted_masks({P.down_closure(a) for a in antichain_masks(P, cap)})
    check_cap(len(masks), cap, "down-set lattice")
    keys = [P.keys_of(m) for m in masks]
    return Poset(keys, _containment_matrix(masks, masks))


def dominates(P: Poset, A: Iterable[Hashable], B: Iterable[Hashable]) -> bool:
    """``A <=* B``: every element of ``A`` lies below some element of ``B``."""
    B = list(B)
    return all(any(P.leq(x, y) for y in B) for x in A)


def domination_class(P: Poset, A: Iterable[Hashable]) -> frozenset:
    """Canonical representative of ``A``'s domination class: its maximal elements."""
    return P.keys_of(_maximal_mask(P, P.mask(A)))


def domination_order(P: Poset, cap: int | None = None) -> Poset:
    """Factor poset of subsets of ``P`` under domination, one antichain per class."""
    masks = _sorted_masks(antichain_masks(P, cap))
    check_cap(len(masks), cap, "domination order")
    closures = [P.down_closure(m) for m in masks]
    keys = [P.keys_of(m) for m in masks]
    return Poset(keys, _containment_matrix(masks, closures))


def rado_leq(x: tuple[int, int], y: tuple[int, int]) -> bool:
    (a, b), (c, d) = x, y
    return (a == c and b <= d) or b < c


def rado_truncation(N: int, cap: int | None = None) -> Poset:
    """Pairs ``(a, b)`` with ``0 <= a < b <= N`` under Rado's order."""
    if N < 1:
        raise PreconditionError("N must be at least 1")
    check_cap(N * (N + 1) // 2, cap, "Rado truncation")
    keys = [(a, b) for a in range(N + 1) for b in range(a + 1, N + 1)]
    return Poset.from_predicate(keys, rado_leq)


def seq_downset(f: Seq, ambient: SequenceOrder) -> DownSet:
    """Down-closure in ``ambient`` of every prefix of ``f``, ``f`` included."""
    if not isinstance(ambient, SequenceOrder) or not _same_base(f.base, ambient.base):
        raise BaseMismatch("ambient is not a sequence order over the sequence's base")
    if len(f) > ambient.max_length:
        raise LengthExceeded(f"sequence longer than {ambient.max_length}")
    mask = 0
    for k in range(len(f) + 1):
        mask |= ambient.down_masks[ambient.id(f.entries[:k])]
    return DownSet(ambient, ambient.keys_of(mask))


def f_map(xs: Sequence[Hashable], ambient: Poset) -> DownSet:
    """Everything not above any entry of the antichain ``xs``.

    The complement of the result is the up-closure of ``xs``, whose minimal
    elements are exactly the entries of ``xs``.
    """
    ids = ambient.ids(xs)
    if len(set(ids)) != len(ids):
        raise NotAntichain("repeated entry")
    mask = 0
    for i in ids:
        mask |= 1 << i
    if not ambient.is_antichain_mask(mask):
        raise NotAntichain(f"{[label_of(x) for x in xs]} has comparable entries")
    return DownSet(ambient, ambient.keys_of(ambient.full_mask & ~ambient.up_closure(mask)))
