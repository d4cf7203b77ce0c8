"""Coverability for vector addition systems with guards.

Upward-closed sets of markings are kept as finite bases of minimal vectors.
The backward search grows the set of markings from which the target can be
covered until it stabilises; the forward search is a bounded breadth-first
exploration used as an independent check.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, InvariantViolation, IterationCapExceeded, PreconditionError
from .poset import Poset, minimals

Vector = tuple[int, ...]


class Verdict(str, enum.Enum):
    COVERABLE = "COVERABLE"
    NOT_COVERABLE = "NOT_COVERABLE"
    INCONCLUSIVE = "INCONCLUSIVE"


def _vector(xs: Iterable[int], dimension: int, what: str) -> Vector:
    v = tuple(int(x) for x in xs)
    if len(v) != dimension:
        raise DimensionMismatch(f"{what} has length {len(v)}, expected {dimension}")
    return v


def _leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class Transition:
    guard: Vector
    delta: Vector

    def __post_init__(self):
        object.__setattr__(self, "guard", tuple(int(x) for x in self.guard))
        object.__setattr__(self, "delta", tuple(int(x) for x in self.delta))
        if len(self.guard) != len(self.delta):
            raise DimensionMismatch("guard and delta lengths differ")
        if any(g < 0 for g in self.guard):
            raise PreconditionError(f"negative guard {self.guard}")
        if any(g + d < 0 for g, d in zip(self.guard, self.delta)):
            raise PreconditionError(f"guard {self.guard} with delta {self.delta} can go negative")

    def fire(self, x: Vector) -> Vector | None:
        if not _leq(self.guard, x):
            return None
        return tuple(a + d for a, d in zip(x, self.delta))


@dataclass(frozen=True)
class Vass:
    dimension: int
    transitions: tuple[Transition, ...]

    def __post_init__(self):
        ts = tuple(t if isinstance(t, Transition) else Transition(*t) for t in self.transitions)
        object.__setattr__(self, "transitions", ts)
        for t in ts:
            if len(t.guard) != self.dimension:
                raise DimensionMismatch(f"transition {t} does not have dimension {self.dimension}")

    def successors(self, x: Vector) -> list[tuple[int, Vector]]:
        out = []
        for k, t in enumerate(self.transitions):
            y = t.fire(x)
            if y is not None:
                out.append((k, y))
        return out


@dataclass(frozen=True)
class UpwardBasis:
    """Minimal elements of an upward-closed set, sorted."""

    dimension: int
    minimals: tuple[Vector, ...]

    def contains(self, x: Sequence[int]) -> bool:
        return any(_leq(b, x) for b in self.minimals)

    def is_antichain(self) -> bool:
        return not any(a != b and _leq(a, b) for a in self.minimals for b in self.minimals)


def reduce_basis(dimension: int, vectors: Iterable[Sequence[int]]) -> UpwardBasis:
    """Minimal elements under the coordinatewise order, taken through the poset layer."""
    keys = sorted({_vector(v, dimension, "basis vector") for v in vectors})
    if not keys:
        return UpwardBasis(dimension, ())
    arr = np.array(keys, dtype=np.int64).reshape(len(keys), dimension)
    rel = np.all(arr[:, None, :] <= arr[None, :, :], axis=2)
    return UpwardBasis(dimension, tuple(sorted(minimals(Poset(keys, rel)))))


def pre_basis(U: UpwardBasis, t: Transition) -> UpwardBasis:
    """Basis of the markings from which firing ``t`` lands in the upward closure of ``U``."""
    if len(t.guard) != U.dimension:
        raise DimensionMismatch(f"transition has dimension {len(t.guard)}, basis has {U.dimension}")
    return reduce_basis(U.dimension, (
        tuple(max(x - d, g) for x, d, g in zip(b, t.delta, t.guard)) for b in U.minimals
    ))


@dataclass
class CoverResult:
    verdict: Verdict
    basis: UpwardBasis
    iterations: int
    firing_sequence: list[int] = field(default_factory=list)
    markings: list[Vector] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "iterations": self.iterations,
            "basis": [list(b) for b in self.basis.minimals],
            "firing_sequence": self.firing_sequence,
            "markings": [list(m) for m in self.markings],
        }


def backward_cover(v: Vass, init: Sequence[int], target: Sequence[int], max_iterations: int = 10_000) -> CoverResult:
    """Backward fixpoint from the target, plus a replayed firing sequence when coverable.

    Each stage's basis is kept; the firing sequence is rebuilt by walking
    forward from ``init`` through successively earlier stages.
    """
    init = _vector(init, v.dimension, "init")
    target = _vector(target, v.dimension, "target")
    basis = reduce_basis(v.dimension, [target])
    stages = [basis]
    for iterations in range(1, max_iterations + 1):
        pool = list(basis.minimals)
        for t in v.transitions:
            pool.extend(pre_basis(basis, t).minimals)
        new = reduce_basis(v.dimension, pool)
        if not new.is_antichain():
            raise InvariantViolation("reduced basis is not an antichain")
        if new == basis:
            break
        basis = new
        stages.append(basis)
    else:
        raise IterationCapExceeded(f"no fixpoint after {max_iterations} iterations")
    if not basis.contains(init):
        return CoverResult(Verdict.NOT_COVERABLE, basis, iterations)
    firing, markings = _replay(v, init, target, stages)
    return CoverResult(Verdict.COVERABLE, basis, iterations, firing, markings)


def _replay(v: Vass, init: Vector, target: Vector, stages: list[UpwardBasis]) -> tuple[list[int], list[Vector]]:
    k = next(k for k, U in enumerate(stages) if U.contains(init))
    x = init
    firing, markings = [], [init]
    while k > 0:
        for idx, y in v.successors(x):
            if stages[k - 1].contains(y):
                firing.append(idx)
                markings.append(y)
                x = y
                break
        else:
            raise InvariantViolation(f"replay stuck at {x} in stage {k}")
        k -= 1
    if not _leq(target, x):
        raise InvariantViolation(f"replay ended at {x}, which does not cover {target}")
    return firing, markings


@dataclass
class OracleResult:
    verdict: Verdict
    depth: int | None
    explored: int
    pruned: bool


def forward_oracle(
    v: Vass, init: Sequence[int], target: Sequence[int], depth_cap: int = 8, value_cap: int | None = None
) -> OracleResult:
    """Breadth-first search from ``init`` up to ``depth_cap`` firings.

    Markings with a coordinate above ``value_cap`` are not explored.  A marking
    below one already seen is skipped, since it cannot cover anything the
    larger one cannot.  ``NOT_COVERABLE`` is reported only when the search ran
    out of markings without hitting either cap.
    """
    init = _vector(init, v.dimension, "init")
    target = _vector(target, v.dimension, "target")
    if _leq(target, init):
        return OracleResult(Verdict.COVERABLE, 0, 1, False)
    seen = [init]
    frontier = deque([(init, 0)])
    pruned = False
    while frontier:
        x, depth = frontier.popleft()
        if depth == depth_cap:
            pruned = True
            continue
        for _, y in v.successors(x):
            if _leq(target, y):
                return OracleResult(Verdict.COVERABLE, depth + 1, len(seen) + 1, pruned)
            if value_cap is not None and max(y, default=0) > value_cap:
                pruned = True
                continue
            if any(_leq(y, s) for s in seen):
                continue
            seen.append(y)
            frontier.append((y, depth + 1))
    verdict = Verdict.INCONCLUSIVE if pruned else Verdict.NOT_COVERABLE
    return OracleResult(verdict, None, len(seen), pruned)
