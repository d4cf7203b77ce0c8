"""Finite posets stored as a dense, transitively closed relation matrix.

Element keys are arbitrary hashable values (strings from input files, tuples
for products, frozensets for down-sets, ...).  Each key gets a stable integer
id equal to its position in ``Poset.elements``; algorithms work on ids and on
Python-int bitsets derived from the relation rows.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import CycleDetected, InvariantViolation, SizeLimitExceeded, UnknownElement

DEFAULT_CAP = 2**20


def size_cap(cap: int | None = None) -> int:
    """Element-count cap for exponential constructions.

    An explicit ``cap`` wins, then the ``ORDERCRAFT_CAP`` environment variable,
    then ``DEFAULT_CAP``.
    """
    if cap is not None:
        return cap
    env = os.environ.get("ORDERCRAFT_CAP")
    if env:
        return int(env)
    return DEFAULT_CAP


def check_cap(count: int, cap: int | None, what: str) -> None:
    limit = size_cap(cap)
    if count > limit:
        raise SizeLimitExceeded(f"{what} would have {count} elements, cap is {limit}")


def label_of(key: Any) -> str:
    """Human-readable label for an element key."""
    if isinstance(key, str):
        return key
    if hasattr(key, "label") and callable(key.label):
        return key.label()
    if isinstance(key, tuple):
        return "(" + ",".join(label_of(k) for k in key) + ")"
    if isinstance(key, frozenset):
        return "{" + ",".join(sorted(label_of(k) for k in key)) + "}"
    return str(key)


def bits(mask: int) -> Iterable[int]:
    """Yield the positions of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _row_masks(matrix: np.ndarray) -> tuple[int, ...]:
    if matrix.shape[0] == 0:
        return ()
    packed = np.packbits(matrix, axis=1, bitorder="little")
    return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)


def _close(matrix: np.ndarray) -> np.ndarray:
    m = matrix.copy()
    np.fill_diagonal(m, True)
    for k in range(m.shape[0]):
        m |= m[:, k : k + 1] & m[k : k + 1, :]
    return m


def law_violations(matrix: np.ndarray, limit: int = 1) -> list[tuple[str, tuple[int, ...]]]:
    """Witnesses (by id) of failures of reflexivity, antisymmetry, transitivity.

    Transitivity is decided over all triples at once: the boolean square of
    the relation must be contained in the relation.
    """
    out: list[tuple[str, tuple[int, ...]]] = []
    n = matrix.shape[0]
    if n == 0:
        return out
    diag = np.diagonal(matrix)
    for i in np.flatnonzero(~diag)[:limit]:
        out.append(("reflexivity", (int(i),)))
    both = matrix & matrix.T
    np.fill_diagonal(both, False)
    for i, j in np.argwhere(both)[:limit]:
        if i < j:
            out.append(("antisymmetry", (int(i), int(j))))
    m = matrix.astype(np.float32)
    composed = (m @ m) > 0
    bad = composed & ~matrix
    for i, k in np.argwhere(bad)[:limit]:
        j = int(np.flatnonzero(matrix[i] & matrix[:, k])[0])
        out.append(("transitivity", (int(i), j, int(k))))
    return out


class Poset:
    """Immutable finite poset.

    Construct with :func:`build_poset` or the ``from_*`` class methods; the
    plain constructor trusts its matrix and is meant for internal use.
    """

    __slots__ = ("_elements", "_index", "_leq", "__dict__")

    def __init__(self, elements: Sequence[Hashable], matrix: np.ndarray):
        self._elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self._elements)}
        if len(self._index) != len(self._elements):
            raise InvariantViolation("duplicate element keys")
        m = np.array(matrix, dtype=bool, copy=True).reshape(len(self._elements), len(self._elements))
        m.setflags(write=False)
        self._leq = m

    @classmethod
    def from_matrix(cls, elements: Sequence[Hashable], matrix: np.ndarray, check: bool = True) -> "Poset":
        matrix = np.asarray(matrix, dtype=bool)
        if check:
            problems = law_violations(matrix)
            if problems:
                law, ids = problems[0]
                keys = tuple(elements[i] for i in ids)
                if law == "antisymmetry":
                    raise CycleDetected(f"{keys[0]!r} and {keys[1]!r} are mutually related")
                raise InvariantViolation(f"{law} fails at {keys!r}")
        return cls(elements, matrix)

    @classmethod
    def from_predicate(
        cls, elements: Sequence[Hashable], leq: Callable[[Any, Any], bool], check: bool = True
    ) -> "Poset":
        elements = tuple(elements)
        n = len(elements)
        m = np.zeros((n, n), dtype=bool)
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                m[i, j] = i == j or bool(leq(x, y))
        return cls.from_matrix(elements, m, check=check)

    # basic access

    @property
    def elements(self) -> tuple:
        return self._elements

    @property
    def matrix(self) -> np.ndarray:
        return self._leq

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __contains__(self, x: object) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    def __repr__(self) -> str:
        shown = ", ".join(label_of(e) for e in self._elements[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"Poset([{shown}{more}], size={len(self)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        if len(self) != len(other) or set(self._index) != set(other._index):
            return False
        perm = [other._index[e] for e in self._elements]
        return bool(np.array_equal(self._leq, other._leq[np.ix_(perm, perm)]))

    __hash__ = None  # type: ignore[assignment]

    def id(self, x: Hashable) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise UnknownElement(f"{x!r} is not an element") from None

    def ids(self, xs: Iterable[Hashable]) -> list[int]:
        return [self.id(x) for x in xs]

    def key(self, i: int) -> Hashable:
        return self._elements[i]

    def mask(self, xs: Iterable[Hashable]) -> int:
        m = 0
        for i in self.ids(xs):
            m |= 1 << i
        return m

    def keys_of(self, mask: int) -> frozenset:
        return frozenset(self._elements[i] for i in bits(mask))

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(label_of(e) for e in self._elements)

    # order queries

    def leq(self, x: Hashable, y: Hashable) -> bool:
        return bool(self._leq[self.id(x), self.id(y)])

    def lt(self, x: Hashable, y: Hashable) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x: Hashable, y: Hashable) -> bool:
        i, j = self.id(x), self.id(y)
        return bool(self._leq[i, j] or self._leq[j, i])

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        """Bit j of ``up_masks[i]`` is set iff element i <= element j."""
        return _row_masks(self._leq)

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        return _row_masks(np.ascontiguousarray(self._leq.T))

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self)) - 1

    def up_closure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.up_masks[i]
        return out

    def down_closure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.down_masks[i]
        return out

    def is_antichain_mask(self, mask: int) -> bool:
        return all((self.up_masks[i] | self.down_masks[i]) & mask == 1 << i for i in bits(mask))

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        strict = self._leq & ~np.eye(len(self), dtype=bool)
        s = strict.astype(np.int32)
        return strict & ~((s @ s) > 0)

    def covers(self) -> list[tuple[Hashable, Hashable]]:
        """Hasse-diagram edges (x, y) with y covering x, in id order."""
        return [(self._elements[i], self._elements[j]) for i, j in np.argwhere(self.cover_matrix)]

    def relation_pairs(self) -> list[tuple[Hashable, Hashable]]:
        """All pairs x <= y, reflexive ones included."""
        return [(self._elements[i], self._elements[j]) for i, j in np.argwhere(self._leq)]


def build_poset(
    elements: Iterable[Hashable], pairs: Iterable[tuple[Hashable, Hashable]], mode: str = "covers"
) -> Poset:
    """Reflexive-transitive closure of ``pairs`` over ``elements``.

    ``mode="relation"`` additionally rejects a declared relation that is not
    already antisymmetric.  Either mode raises ``CycleDetected`` when the
    closure would identify two distinct elements.
    """
    if mode not in ("covers", "relation"):
        raise ValueError(f"unknown mode {mode!r}")
    elements = tuple(elements)
    index = {e: i for i, e in enumerate(elements)}
    if len(index) != len(elements):
        raise InvariantViolation("duplicate element keys")
    n = len(elements)
    m = np.zeros((n, n), dtype=bool)
    for x, y in pairs:
        if x not in index:
            raise UnknownElement(f"{x!r} is not declared")
        if y not in index:
            raise UnknownElement(f"{y!r} is not declared")
        m[index[x], index[y]] = True
    if mode == "relation":
        both = m & m.T
        np.fill_diagonal(both, False)
        if both.any():
            i, j = np.argwhere(both)[0]
            raise CycleDetected(f"{elements[i]!r} and {elements[j]!r} are mutually related")
    closed = _close(m)
    both = closed & closed.T
    np.fill_diagonal(both, False)
    if both.any():
        i, j = np.argwhere(both)[0]
        raise CycleDetected(f"cycle through {elements[i]!r} and {elements[j]!r}")
    return Poset(elements, closed)


def chain(n: int) -> Poset:
    """The chain 0 < 1 < ... < n-1 on integer keys."""
    return Poset(range(n), np.triu(np.ones((n, n), dtype=bool)))


def antichain(n: int) -> Poset:
    return Poset(range(n), np.eye(n, dtype=bool))


def minimals(P: Poset, S: Iterable[Hashable] | None = None) -> frozenset:
    """Elements of ``S`` (default: all of ``P``) with nothing of ``S`` strictly below."""
    mask = P.full_mask if S is None else P.mask(S)
    return P.keys_of(_minimal_mask(P, mask))


def maximals(P: Poset, S: Iterable[Hashable] | None = None) -> frozenset:
    mask = P.full_mask if S is None else P.mask(S)
    return P.keys_of(_maximal_mask(P, mask))


def _minimal_mask(P: Poset, mask: int) -> int:
    out = 0
    for i in bits(mask):
        if P.down_masks[i] & mask == 1 << i:
            out |= 1 << i
    return out


def _maximal_mask(P: Poset, mask: int) -> int:
    out = 0
    for i in bits(mask):
        if P.up_masks[i] & mask == 1 << i:
            out |= 1 << i
    return out


def cones(P: Poset, q: Hashable) -> tuple[frozenset, frozenset]:
    """Split ``P`` into the elements comparable with ``q`` and those incomparable."""
    i = P.id(q)
    comparable = P.up_masks[i] | P.down_masks[i]
    return P.keys_of(comparable), P.keys_of(P.full_mask & ~comparable)


def restrict(P: Poset, S: Iterable[Hashable]) -> Poset:
    """Induced suborder on ``S``, keeping ``P``'s id order."""
    ids = sorted(set(P.ids(S)))
    return Poset([P.key(i) for i in ids], P.matrix[np.ix_(ids, ids)])


def reverse(P: Poset) -> Poset:
    return Poset(P.elements, P.matrix.T)


def relabel(P: Poset, mapping: Mapping[Hashable, Hashable] | Callable[[Hashable], Hashable]) -> Poset:
    f = mapping if callable(mapping) else mapping.__getitem__
    return Poset([f(e) for e in P.elements], P.matrix)


def is_augmentation(Q: Poset, P: Poset) -> bool:
    """True iff ``Q`` has the same domain as ``P`` and contains its order."""
    if set(Q.elements) != set(P.elements):
        return False
    perm = [Q.id(e) for e in P.elements]
    q = Q.matrix[np.ix_(perm, perm)]
    return bool(np.all(q | ~P.matrix))


@dataclass(frozen=True)
class PosetMap:
    source: Poset
    target: Poset
    assignment: Mapping[Hashable, Hashable] = field(repr=False)

    def __post_init__(self):
        missing = [x for x in self.source if x not in self.assignment]
        if missing:
            raise UnknownElement(f"map is undefined on {missing[0]!r}")
        for x in self.source:
            if self.assignment[x] not in self.target:
                raise UnknownElement(f"image of {x!r} is not in the target")

    def __call__(self, x: Hashable) -> Hashable:
        return self.assignment[x]

    def _image_matrix(self) -> np.ndarray:
        img = [self.target.id(self.assignment[x]) for x in self.source]
        return self.target.matrix[np.ix_(img, img)]


def is_order_preserving(m: PosetMap) -> bool:
    """p <= p' implies m(p) <= m(p')."""
    return bool(np.all(~m.source.matrix | m._image_matrix()))


def is_order_generating(m: PosetMap) -> bool:
    """m(p) <= m(p') implies p <= p'."""
    return bool(np.all(~m._image_matrix() | m.source.matrix))


def is_surjective(m: PosetMap) -> bool:
    return {m.assignment[x] for x in m.source} == set(m.target.elements)


@dataclass(frozen=True)
class ElementSequence:
    ambient: Poset
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        for x in self.items:
            self.ambient.id(x)


def find_good_pair(s: ElementSequence) -> tuple[int, int] | None:
    """Lexicographically least ``(i, j)`` with ``i < j`` and ``s_i <= s_j``.

    ``None`` means the sequence is bad.
    """
    P = s.ambient
    ids = [P.id(x) for x in s.items]
    for i, a in enumerate(ids):
        up = P.up_masks[a]
        for j in range(i + 1, len(ids)):
            if up >> ids[j] & 1:
                return i, j
    return None


def width(P: Poset) -> int:
    """Size of a largest antichain.

    Dilworth: the minimum number of chains covering ``P`` is ``|P|`` minus a
    maximum matching in the bipartite graph of strict comparabilities.
    """
    n = len(P)
    strict = [P.up_masks[i] & ~(1 << i) for i in range(n)]
    match_right = [-1] * n
    matched = 0
    for root in range(n):
        # iterative augmenting-path search; recursion would overflow on long chains
        seen = 0
        stack = [(root, bits(strict[root]))]
        path: list[tuple[int, int]] = []
        found = False
        while stack and not found:
            u, it = stack[-1]
            for v in it:
                if seen >> v & 1:
                    continue
                seen |= 1 << v
                path.append((u, v))
                if match_right[v] < 0:
                    found = True
                else:
                    stack.append((match_right[v], bits(strict[match_right[v]])))
                break
            else:
                stack.pop()
                if path:
                    path.pop()
        if found:
            for u, v in path:
                match_right[v] = u
            matched += 1
    return n - matched
