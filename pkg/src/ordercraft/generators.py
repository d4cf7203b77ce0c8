"""Random and exhaustive instance generators for the property suites."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np

from .constructions import Seq, antichain_masks
from .coverability import Transition, Vass
from .dress_schiffels import DsFamily
from .poset import Poset, _close, chain


def random_poset(rng: np.random.Generator, n: int, density: float = 0.3, prefix: str = "p") -> Poset:
    """Transitive closure of a random DAG, with ids shuffled so id order is not a linear extension."""
    strict = np.triu(rng.random((n, n)) < density, k=1)
    closed = _close(strict | np.eye(n, dtype=bool))
    perm = rng.permutation(n)
    keys = [f"{prefix}{k}" for k in range(n)]
    return Poset(keys, closed[np.ix_(perm, perm)])


def _canonical(m: np.ndarray) -> bytes:
    n = len(m)
    return min(m[np.ix_(p, p)].tobytes() for p in map(list, permutations(range(n))))


@lru_cache(maxsize=None)
def _catalog(n: int) -> tuple[bytes, ...]:
    if n == 0:
        return (np.zeros((0, 0), dtype=bool).tobytes(),)
    found: dict[bytes, None] = {}
    for raw in _catalog(n - 1):
        small = np.frombuffer(raw, dtype=bool).reshape(n - 1, n - 1)
        P = Poset(range(n - 1), small)
        # every n-poset is an (n-1)-poset plus a maximal element above some down-set
        for a in antichain_masks(P):
            below = P.down_closure(a)
            m = np.zeros((n, n), dtype=bool)
            m[: n - 1, : n - 1] = small
            m[n - 1, n - 1] = True
            for i in range(n - 1):
                m[i, n - 1] = bool(below >> i & 1)
            found.setdefault(_canonical(m))
    return tuple(sorted(found))


def poset_catalog(n: int) -> list[Poset]:
    """One representative per isomorphism class of posets with ``n`` elements."""
    return [Poset([f"e{k}" for k in range(n)], np.frombuffer(raw, dtype=bool).reshape(n, n).copy())
            for raw in _catalog(n)]


def pointed(P: Poset, zero: str = "z") -> Poset:
    """``P`` with a new bottom element ``zero``."""
    n = len(P)
    m = np.zeros((n + 1, n + 1), dtype=bool)
    m[0, :] = True
    m[1:, 1:] = P.matrix
    return Poset([zero, *P.elements], m)


def random_family(rng: np.random.Generator, max_index: int = 5, max_component: int = 4,
                  linear: bool = False) -> DsFamily:
    """Random index poset (a chain when ``linear``) with random pointed components."""
    k = int(rng.integers(1, max_index + 1))
    if linear:
        index = Poset([f"i{j}" for j in range(k)], chain(k).matrix)
    else:
        index = random_poset(rng, k, float(rng.uniform(0.2, 0.7)), prefix="i")
    components, zeros = {}, {}
    for i in index:
        size = int(rng.integers(1, max_component))
        components[i] = pointed(random_poset(rng, size, float(rng.uniform(0.0, 0.8)), prefix="x"))
        zeros[i] = "z"
    return DsFamily(index, components, zeros)


def random_vass(rng: np.random.Generator, max_dimension: int = 3, max_transitions: int = 4,
                max_entry: int = 3) -> Vass:
    dimension = int(rng.integers(1, max_dimension + 1))
    transitions = []
    for _ in range(int(rng.integers(1, max_transitions + 1))):
        guard = rng.integers(0, max_entry + 1, dimension)
        delta = [int(rng.integers(-g, max_entry + 1)) for g in guard]
        transitions.append(Transition(tuple(int(g) for g in guard), tuple(delta)))
    return Vass(dimension, tuple(transitions))


def random_vector(rng: np.random.Generator, dimension: int, max_entry: int = 3) -> tuple[int, ...]:
    return tuple(int(x) for x in rng.integers(0, max_entry + 1, dimension))


def random_seq(rng: np.random.Generator, base: Poset, max_length: int) -> Seq:
    length = int(rng.integers(0, max_length + 1))
    return Seq(base, tuple(base.key(int(i)) for i in rng.integers(0, len(base), length)))
