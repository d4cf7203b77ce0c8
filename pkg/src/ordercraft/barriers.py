"""Barrier combinatorics over finite bases.

Blocks are sorted tuples of ints.  A finite family counts as a barrier when it
is a ⊆-antichain and every ``rank_bound``-sized subset of its base has exactly
one block as an initial segment; uniform families ``[base]^k`` are the
typical case.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

from .constructions import rado_truncation
from .errors import (
    BaseExhausted,
    BaseTooSmall,
    BlocksMissing,
    EmptyLeftOperand,
    InvalidBarrier,
    InvariantViolation,
    NotASquareBlock,
    NotSeparated,
    PreconditionError,
    RankTooLarge,
)
from .poset import Poset

Block = tuple[int, ...]


def block(xs: Iterable[int]) -> Block:
    return tuple(sorted(set(xs)))


def encode_block(b: Iterable[int]) -> str:
    return ",".join(str(x) for x in sorted(b))


def decode_block(text: str) -> Block:
    text = text.strip()
    if not text:
        return ()
    return block(int(x) for x in text.split(","))


def shift_extends(r: Iterable[int], s: Iterable[int]) -> bool:
    """``r ◁ s``: ``min r < min s`` and ``r`` minus its minimum is a proper initial segment of ``s``."""
    r, s = block(r), block(s)
    if not r:
        raise EmptyLeftOperand("left operand of shift-extension must be non-empty")
    if not s or r[0] >= s[0]:
        return False
    tail = r[1:]
    return len(tail) < len(s) and s[: len(tail)] == tail


@dataclass(frozen=True)
class FiniteBarrier:
    base: tuple[int, ...]
    blocks: tuple[Block, ...]
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(sorted(set(self.base))))
        object.__setattr__(self, "blocks", tuple(sorted({block(b) for b in self.blocks})))
        if self.validate:
            problem = barrier_problem(self)
            if problem:
                raise InvalidBarrier(problem)

    @property
    def rank_bound(self) -> int:
        return max((len(b) for b in self.blocks), default=0)

    @cached_property
    def effective_base(self) -> tuple[int, ...]:
        return tuple(sorted({x for b in self.blocks for x in b}))

    @cached_property
    def block_set(self) -> frozenset:
        return frozenset(self.blocks)

    def __contains__(self, b: object) -> bool:
        return block(b) in self.block_set  # type: ignore[arg-type]

    def __len__(self) -> int:
        return len(self.blocks)

    def initial_block(self, xs: Iterable[int]) -> Block | None:
        """The block that is an initial segment of the sorted ``xs``, if any."""
        xs = block(xs)
        for k in range(1, len(xs) + 1):
            if xs[:k] in self.block_set:
                return xs[:k]
        return None

    def restrict(self, Y: Iterable[int]) -> "FiniteBarrier":
        Y = set(Y)
        return FiniteBarrier(tuple(sorted(Y)), tuple(b for b in self.blocks if set(b) <= Y))


def barrier_problem(B: FiniteBarrier) -> str | None:
    """Why ``B`` fails the finite barrier conditions, or ``None``."""
    base = set(B.base)
    for b in B.blocks:
        if not b:
            return "empty block"
        if not set(b) <= base:
            return f"block {encode_block(b)} leaves the base"
    for y in B.blocks:
        for k in range(1, len(y)):
            for x in combinations(y, k):
                if x in B.block_set:
                    return f"block {encode_block(x)} is contained in {encode_block(y)}"
    k = B.rank_bound
    for S in combinations(B.effective_base, k):
        found = sum(1 for j in range(1, k + 1) if S[:j] in B.block_set)
        if found != 1:
            return f"{encode_block(S)} has {found} initial segments in the family"
    return None


def make_uniform_barrier(N: int, k: int) -> FiniteBarrier:
    """All ``k``-subsets of ``{0..N}``."""
    if k < 1:
        raise PreconditionError("rank must be positive")
    if k > N + 1:
        raise RankTooLarge(f"no {k}-subsets of a {N + 1}-element base")
    return FiniteBarrier(tuple(range(N + 1)), tuple(combinations(range(N + 1), k)), validate=False)


def shift_pairs(B: FiniteBarrier) -> Iterator[tuple[Block, Block]]:
    """All ``(s, t)`` in ``B`` with ``s ◁ t``, lexicographic in ``s`` then ``t``."""
    by_prefix: dict[Block, list[Block]] = defaultdict(list)
    for t in B.blocks:
        for k in range(len(t)):
            by_prefix[t[:k]].append(t)
    for s in B.blocks:
        for t in by_prefix.get(s[1:], ()):
            if t[0] > s[0]:
                yield s, t


def barrier_square(B: FiniteBarrier) -> FiniteBarrier:
    """``{s ∪ t : s ◁ t}``; the declared base is kept."""
    blocks = {block(s + t) for s, t in shift_pairs(B)}
    return FiniteBarrier(B.base, tuple(blocks), validate=False)


def barrier_cube(B: FiniteBarrier) -> FiniteBarrier:
    """``{u ∪ v ∪ w : u ◁ v ◁ w}`` computed directly from the definition."""
    succ: dict[Block, list[Block]] = defaultdict(list)
    for s, t in shift_pairs(B):
        succ[s].append(t)
    blocks = {block(u + v + w) for u in B.blocks for v in succ[u] for w in succ[v]}
    return FiniteBarrier(B.base, tuple(blocks), validate=False)


def split_square_block(u: Iterable[int], B: FiniteBarrier) -> tuple[Block, Block]:
    """The unique ``(s, t)`` in ``B`` with ``s ◁ t`` and ``s ∪ t = u``.

    ``t`` must be ``u`` without its minimum and ``s`` the block that is an
    initial segment of ``u``; the ⊆-antichain condition makes both unique.
    """
    u = block(u)
    if len(u) < 2:
        raise NotASquareBlock(f"{encode_block(u)} is too short")
    t = u[1:]
    s = B.initial_block(u)
    if s is None or t not in B.block_set or not shift_extends(s, t) or block(s + t) != u:
        raise NotASquareBlock(f"{encode_block(u)} is not s ∪ t for any s ◁ t in the barrier")
    return s, t


def successive_sequence(B: FiniteBarrier, r: Iterable[int], s: Iterable[int]) -> list[Block]:
    """The chain ``r = r_1 ◁ ... ◁ r_{|r|+1} = s`` inside ``r ∪ s``.

    ``r_i`` is the block of ``B`` that is an initial segment of ``r ∪ s``
    read from the ``i``-th element of ``r``.
    """
    r, s = block(r), block(s)
    for b in (r, s):
        if b not in B.block_set:
            raise PreconditionError(f"{encode_block(b)} is not a block")
    if not (r[-1] < s[0]):
        raise NotSeparated(f"{encode_block(r)} is not entirely below {encode_block(s)}")
    w = r + s
    seq: list[Block] = []
    for i in range(len(r) + 1):
        b = B.initial_block(w[i:])
        if b is None:
            raise BlocksMissing(f"no block starts {encode_block(w[i:])}")
        seq.append(b)
    if seq[0] != r or seq[-1] != s:
        raise InvariantViolation("successive sequence does not start at r and end at s")
    for a, b in zip(seq, seq[1:]):
        if not shift_extends(a, b):
            raise InvariantViolation(
                f"{encode_block(a)} does not shift-extend to {encode_block(b)} "
                f"(|r| = {len(r)}, |s| = {len(s)})"
            )
    return seq


def connect(B: FiniteBarrier, r: Iterable[int], s: Iterable[int]) -> tuple[list[Block], list[Block]]:
    """Successive sequences from ``r`` and from ``s`` meeting at the least block above both."""
    r, s = block(r), block(s)
    for b in (r, s):
        if b not in B.block_set:
            raise PreconditionError(f"{encode_block(b)} is not a block")
    if r == s:
        return [r], [r]
    top = max(r[-1], s[-1])
    for t in B.blocks:
        if t[0] <= top:
            continue
        try:
            return successive_sequence(B, r, t), successive_sequence(B, s, t)
        except (BlocksMissing, InvariantViolation):
            continue
    raise BaseExhausted(f"no block lies above both {encode_block(r)} and {encode_block(s)}")


# barrier sequences


@dataclass(frozen=True)
class BarrierSeq:
    barrier: FiniteBarrier
    target: Poset
    values: Mapping[Block, Hashable] = field(repr=False)

    def __post_init__(self):
        values = {block(k): v for k, v in self.values.items()}
        for b in self.barrier.blocks:
            if b not in values:
                raise PreconditionError(f"no value for block {encode_block(b)}")
            self.target.id(values[b])
        object.__setattr__(self, "values", values)

    def __call__(self, b: Iterable[int]) -> Hashable:
        return self.values[block(b)]

    def restrict(self, C: FiniteBarrier) -> "BarrierSeq":
        return BarrierSeq(C, self.target, {b: self.values[b] for b in C.blocks})


@dataclass(frozen=True)
class Classification:
    good: bool
    witness: tuple[Block, Block] | None
    perfect: bool

    @property
    def verdict(self) -> str:
        return "GOOD" if self.good else "BAD"


def classify_sequence(f: BarrierSeq) -> Classification:
    """Scan every ◁-pair once; the first increasing pair is the witness."""
    P = f.target
    up = P.up_masks
    witness = None
    perfect = True
    for s, t in shift_pairs(f.barrier):
        ok = (up[P.id(f.values[s])] >> P.id(f.values[t])) & 1
        if ok and witness is None:
            witness = (s, t)
        if not ok:
            perfect = False
        if witness is not None and not perfect:
            break
    return Classification(witness is not None, witness, perfect)


def rado_bad_array(N: int) -> BarrierSeq:
    """Pairs over ``{0..N}`` sent to themselves in Rado's order; bad at every size."""
    if N < 2:
        raise PreconditionError("N must be at least 2")
    B = make_uniform_barrier(N, 2)
    return BarrierSeq(B, rado_truncation(N), {b: b for b in B.blocks})


# Ramsey-style extraction


def _as_function(colouring: Mapping | Callable) -> Callable[[Block], Any]:
    if callable(colouring):
        return colouring
    table = {block(k) if not isinstance(k, str) else decode_block(k): v for k, v in colouring.items()}

    def look(b: Block) -> Any:
        try:
            return table[b]
        except KeyError:
            raise PreconditionError(f"no colour for {encode_block(b)}") from None

    return look


def _homogeneous_bases(base: tuple[int, ...], coloured: list[tuple[Block, Any]], m: int) -> Iterator[tuple[int, Any]]:
    """Base subsets (as bitmasks over positions in ``base``) of size ``m`` on which
    every coloured block they contain has one colour, in lexicographic order."""
    pos = {x: k for k, x in enumerate(base)}
    by_max: dict[int, list[tuple[int, Any]]] = defaultdict(list)
    for b, c in coloured:
        if all(x in pos for x in b):
            mask = 0
            for x in b:
                mask |= 1 << pos[x]
            by_max[pos[b[-1]]].append((mask, c))
    n = len(base)

    def search(start: int, chosen: int, size: int, colour: Any) -> Iterator[tuple[int, Any]]:
        if size == m:
            yield chosen, colour
            return
        for k in range(start, n - (m - size) + 1):
            new = chosen | 1 << k
            c = colour
            ok = True
            for mask, col in by_max.get(k, ()):
                if mask & ~new == 0:
                    if c is None:
                        c = col
                    elif col != c:
                        ok = False
                        break
            if ok:
                yield from search(k + 1, new, size + 1, c)

    yield from search(0, 0, 0, None)


def _extend(base: tuple[int, ...], coloured: list[tuple[Block, Any]], chosen: int, colour: Any) -> tuple[int, Any]:
    pos = {x: k for k, x in enumerate(base)}
    by_elem: dict[int, list[tuple[int, Any]]] = defaultdict(list)
    for b, c in coloured:
        if all(x in pos for x in b):
            mask = 0
            for x in b:
                mask |= 1 << pos[x]
            for x in b:
                by_elem[pos[x]].append((mask, c))
    for k in range(len(base)):
        if chosen >> k & 1:
            continue
        new = chosen | 1 << k
        c = colour
        ok = True
        for mask, col in by_elem.get(k, ()):
            if mask & ~new == 0:
                if c is None:
                    c = col
                elif col != c:
                    ok = False
                    break
        if ok:
            chosen, colour = new, c
    return chosen, colour


def _homogeneous(B: FiniteBarrier, colouring, m: int) -> tuple[FiniteBarrier, Any]:
    colour_of = _as_function(colouring)
    square = barrier_square(B)
    coloured = [(u, colour_of(u)) for u in square.blocks]
    colours = {c for _, c in coloured}
    if len(colours) <= 1 and len(B.base) >= m:
        return B, next(iter(colours), None)
    base = B.base
    for chosen, colour in _homogeneous_bases(base, coloured, m):
        for mask, col in (_extend(base, coloured, chosen, colour), (chosen, colour)):
            Y = [base[k] for k in range(len(base)) if mask >> k & 1]
            try:
                return B.restrict(Y), col
            except InvalidBarrier:
                continue
    raise BaseTooSmall(f"no {m}-element base subset carries a monochromatic square")


def homogeneous_subbarrier(B: FiniteBarrier, colouring: Mapping | Callable, m: int) -> FiniteBarrier:
    """A restriction ``H`` of ``B`` to at least ``m`` base points with ``H²`` one colour.

    The search is exhaustive over ``m``-subsets in lexicographic order (pruned
    as soon as two colours meet); the first hit is then grown greedily.
    """
    return _homogeneous(B, colouring, m)[0]


def dichotomy(f: BarrierSeq, m: int) -> tuple[FiniteBarrier, str]:
    """Restrict ``f`` to a sub-barrier on which it is bad or perfect."""
    B = f.barrier
    P = f.target

    def colour(u: Block) -> int:
        s, t = split_square_block(u, B)
        return 0 if P.leq(f.values[s], f.values[t]) else 1

    H, c = _homogeneous(B, colour, m)
    return H, "BAD" if c == 1 else "PERFECT"


def _sorted_values(values: Iterable[Any]) -> list[Any]:
    values = list(values)
    try:
        return sorted(values)
    except TypeError:
        return sorted(values, key=repr)


def choice_refine(
    B: FiniteBarrier,
    g: Mapping | Callable,
    beta: Mapping | Callable,
    m: int = 1,
) -> tuple[FiniteBarrier, dict[Block, Any]]:
    """Sub-barrier ``C`` and ``i`` with ``g([a, b]) = i(a)`` on all of ``C²``.

    Runs the inductive construction on the finite base: move ``p = min Y``
    into ``X``, then for each new block ``a`` ending at ``p`` shrink ``Y`` to
    the largest greedy set on which ``g(a ∪ b)`` takes a single value.  Blocks
    with no successor left in the base get the least value of ``beta(a)``.
    """
    g_of = _as_function(g)
    beta_of = _as_function(beta)
    for s, t in shift_pairs(B):
        if g_of(block(s + t)) not in set(beta_of(s)):
            raise PreconditionError(f"g({encode_block(s + t)}) is not in beta({encode_block(s)})")

    X: list[int] = []
    Y = list(B.base)
    choice: dict[Block, Any] = {}
    while Y:
        p, Z = Y[0], Y[1:]
        X.append(p)
        Xset = set(X)
        for a in (b for b in B.blocks if b[-1] == p and set(b) <= Xset):
            tail = a[1:]
            fresh = []
            for t in B.blocks:
                if len(t) > len(tail) and t[: len(tail)] == tail and set(t[len(tail):]) <= set(Z):
                    fresh.append((t[len(tail):], g_of(block(a + t))))
            options = _sorted_values(set(beta_of(a)))
            if not fresh:
                choice[a] = options[0]
                continue
            best: tuple[list[int], Any] | None = None
            for k in options:
                kept: list[int] = []
                for z in Z:
                    trial = set(kept) | {z}
                    if all(c == k for b, c in fresh if z in b and set(b) <= trial):
                        kept.append(z)
                if best is None or len(kept) > len(best[0]):
                    best = (kept, k)
            Z, choice[a] = best
        Y = Z
    if len(X) < m:
        raise BaseExhausted(f"construction kept only {len(X)} base points, {m} requested")
    C = B.restrict(X)
    i = {a: choice[a] for a in C.blocks}
    for s, t in shift_pairs(C):
        if g_of(block(s + t)) != i[s]:
            raise InvariantViolation(f"g({encode_block(s + t)}) differs from i({encode_block(s)})")
    return C, i


class Constancy(enum.Enum):
    CONSTANT = "constant"
    HYPOTHESIS_FAILS = "hypothesis fails"

    def __bool__(self) -> bool:
        return self is Constancy.CONSTANT


def constant_on_barrier(f: Mapping | Callable, B: FiniteBarrier) -> Constancy:
    """If ``f`` agrees across every ◁-pair, confirm it is constant on ``B``.

    A block carrying a different value than the first block must be linked to
    it: by :func:`connect` when some block lies above both, otherwise by an
    undirected ◁-path.  Either link forces equal values, so a difference there
    is an ``InvariantViolation``.  Blocks near the top of a finite base can be
    unreachable by both; a difference at such a block raises ``BaseExhausted``.
    """
    f_of = _as_function(f)
    pairs = list(shift_pairs(B))
    for s, t in pairs:
        if f_of(s) != f_of(t):
            return Constancy.HYPOTHESIS_FAILS
    if not B.blocks:
        return Constancy.CONSTANT
    first = B.blocks[0]
    value = f_of(first)
    component = _shift_component(B, first, pairs)
    for d in B.blocks[1:]:
        if f_of(d) == value:
            continue
        try:
            path_r, path_s = connect(B, first, d)
        except BaseExhausted:
            if d not in component:
                raise BaseExhausted(
                    f"{encode_block(d)} cannot be linked to {encode_block(first)} inside this finite base"
                ) from None
            raise InvariantViolation(f"f differs across a ◁-path from {encode_block(first)} to {encode_block(d)}")
        raise InvariantViolation(
            f"f agrees on ◁-pairs but differs along successive sequences {path_r} and {path_s}"
        )
    return Constancy.CONSTANT


def _shift_component(B: FiniteBarrier, start: Block, pairs: list[tuple[Block, Block]]) -> set[Block]:
    adjacent: dict[Block, set[Block]] = defaultdict(set)
    for s, t in pairs:
        adjacent[s].add(t)
        adjacent[t].add(s)
    reached = {start}
    frontier = [start]
    while frontier:
        for c in adjacent[frontier.pop()]:
            if c not in reached:
                reached.add(c)
                frontier.append(c)
    return reached
