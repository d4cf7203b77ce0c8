"""Property suites run by ``ordercraft suite`` and by the acceptance tests.

Every randomized instance draws from its own generator, seeded by a 32-bit
instance seed derived from the run seed and the property name, so a reported
failure can be replayed with :func:`replay` alone.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Any, Callable

import numpy as np

from . import barriers as bar
from .constructions import (
    antichain_masks,
    dominates,
    domination_class,
    embeds,
    f_map,
    seq_downset,
    seq_embed_order,
)
from .coverability import Transition, Vass, Verdict, backward_cover, forward_oracle
from .dress_schiffels import antilex_oracle, antilex_relation, ds_fragment, ds_leq, singleton_sum_iso
from .errors import BaseExhausted, BaseTooSmall, OrdercraftError
from .formats import barrier_to_json, family_to_json, poset_from_json, poset_to_json, vass_to_json
from .generators import poset_catalog, random_family, random_poset, random_seq, random_vass, random_vector
from .poset import ElementSequence, Poset, find_good_pair, law_violations, width
from .structure import antichain_rank, check_decomposition, cone_sum_holds, decompose

Comparator = Callable[[Poset, int, int], bool]


def exact_comparator(P: Poset, i: int, j: int) -> bool:
    return bool(P.matrix[i, j])


MUTANTS: dict[str, Comparator] = {
    "strict": lambda P, i, j: bool(P.matrix[i, j]) and i != j,
    "converse": lambda P, i, j: bool(P.matrix[j, i]) or i < j,
}


@dataclass
class Context:
    seed: int = 0
    budget: int | None = None
    comparator: Comparator = exact_comparator

    def count(self, default: int) -> int:
        return default if self.budget is None else min(default, self.budget)


@dataclass
class Outcome:
    instances: int
    counterexample: dict | None = None
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


@dataclass
class Property:
    name: str
    suite: str
    check: Callable[[Context], Outcome]
    default_count: int | None = None
    one: Callable[[np.random.Generator, Context], dict | None] | None = field(default=None, repr=False)


REGISTRY: dict[str, Property] = {}


def instance_seed(seed: int, name: str, k: int) -> int:
    return int(np.random.SeedSequence([seed, zlib.crc32(name.encode()), k]).generate_state(1)[0])


def randomized(suite: str, default: int):
    """Register a per-instance check; it returns a counterexample payload or ``None``."""

    def wrap(one: Callable[[np.random.Generator, Context], dict | None]) -> Callable:
        name = f"{suite}.{one.__name__}"

        def check(ctx: Context) -> Outcome:
            n = ctx.count(default)
            for k in range(n):
                s = instance_seed(ctx.seed, name, k)
                bad = one(np.random.default_rng(s), ctx)
                if bad is not None:
                    return Outcome(k + 1, bad, s)
            return Outcome(n)

        REGISTRY[name] = Property(name, suite, check, default, one)
        return one

    return wrap


def exhaustive(suite: str):
    def wrap(fn: Callable[[Context], Outcome]) -> Callable:
        name = f"{suite}.{fn.__name__}"
        REGISTRY[name] = Property(name, suite, fn)
        return fn

    return wrap


def replay(name: str, seed: int, ctx: Context | None = None) -> dict | None:
    """Re-run one randomized instance from its reported seed."""
    prop = REGISTRY[name]
    if prop.one is None:
        raise KeyError(f"{name} is not randomized")
    return prop.one(np.random.default_rng(seed), ctx or Context())


def _size(rng: np.random.Generator, lo: int, hi: int) -> int:
    return int(rng.integers(lo, hi + 1))


# core


@randomized("core", 200)
def comparator_laws(rng, ctx):
    P = random_poset(rng, _size(rng, 1, 12), float(rng.uniform(0.1, 0.6)))
    n = len(P)
    m = np.array([[ctx.comparator(P, i, j) for j in range(n)] for i in range(n)], dtype=bool)
    bad = law_violations(m)
    if bad:
        law, ids = bad[0]
        return {"poset": poset_to_json(P), "law": law, "elements": [P.labels[i] for i in ids]}
    return None


def _brute_width(P: Poset) -> int:
    return max(m.bit_count() for m in antichain_masks(P))


@randomized("core", 200)
def width_brute_force(rng, ctx):
    P = random_poset(rng, _size(rng, 1, 12), float(rng.uniform(0.05, 0.6)))
    if width(P) != _brute_width(P):
        return {"poset": poset_to_json(P), "width": width(P), "brute": _brute_width(P)}
    return None


@randomized("core", 200)
def pigeonhole_good_pair(rng, ctx):
    P = random_poset(rng, _size(rng, 1, 10), float(rng.uniform(0.0, 0.6)))
    items = [P.key(int(i)) for i in rng.integers(0, len(P), len(P) + 1)]
    pair = find_good_pair(ElementSequence(P, items))
    if pair is None or not P.leq(items[pair[0]], items[pair[1]]):
        return {"poset": poset_to_json(P), "sequence": list(items), "pair": pair}
    return None


@randomized("core", 100)
def json_round_trip(rng, ctx):
    P = random_poset(rng, _size(rng, 0, 12), float(rng.uniform(0.0, 0.6)))
    Q = poset_from_json(poset_to_json(P))
    if Q != P:
        return {"poset": poset_to_json(P)}
    return None


def _brute_embeds(P: Poset, s: tuple, t: tuple) -> bool:
    return any(all(P.leq(x, t[j]) for x, j in zip(s, rho)) for rho in combinations(range(len(t)), len(s)))


@randomized("core", 200)
def embeds_transitive(rng, ctx):
    P = random_poset(rng, _size(rng, 1, 4), float(rng.uniform(0.0, 0.7)))
    s, t, u = (random_seq(rng, P, 5) for _ in range(3))
    for a, b in ((s, t), (t, u), (s, u)):
        if (embeds(a, b) is not None) != _brute_embeds(P, a.entries, b.entries):
            return {"poset": poset_to_json(P), "s": list(a.entries), "t": list(b.entries), "clause": "oracle"}
    st, tu = embeds(s, t), embeds(t, u)
    if st is not None and tu is not None and embeds(s, u) is None:
        return {"poset": poset_to_json(P), "s": list(s.entries), "t": list(t.entries), "u": list(u.entries)}
    return None


@exhaustive("core")
def mins_surjection(ctx):
    """Every catalogued poset with at most 5 elements, tuple lengths 0 to 3."""
    count = 0
    for size in range(6):
        for P in poset_catalog(size):
            bad = _mins_check(P)
            count += 1
            if bad:
                return Outcome(count, bad, None)
    return Outcome(count)


def _mins_check(P: Poset) -> dict | None:
    downsets = {P.down_closure(a) for a in antichain_masks(P)}
    for n in range(4):
        tuples = [t for c in combinations(P.elements, n) if P.is_antichain_mask(P.mask(c)) for t in permutations(c)]
        images = {t: P.mask(f_map(t, P).members) for t in tuples}
        q_n = {d for d in downsets if _complement_minimal_count(P, d) == n}
        if set(images.values()) != q_n:
            return {"poset": poset_to_json(P), "n": n, "clause": "surjective onto Q_n"}
        for t in tuples:
            for u in tuples:
                if all(P.leq(x, y) for x, y in zip(t, u)) and images[t] & ~images[u]:
                    return {"poset": poset_to_json(P), "n": n, "x": list(t), "y": list(u), "clause": "monotone"}
    return None


def _complement_minimal_count(P: Poset, down: int) -> int:
    rest = P.full_mask & ~down
    return sum(1 for i in range(len(P)) if rest >> i & 1 and P.down_masks[i] & rest == 1 << i)


@randomized("core", 40)
def seq_downset_generating(rng, ctx):
    """Each instance checks 300 pairs over one random base, so the default run covers 12000 pairs."""
    P = random_poset(rng, _size(rng, 1, 4), float(rng.uniform(0.0, 0.7)), prefix="b")
    ambient = seq_embed_order(P, 4)
    for _ in range(300):
        f, g = random_seq(rng, P, 4), random_seq(rng, P, 4)
        inside = seq_downset(f, ambient).members <= seq_downset(g, ambient).members
        if inside and not _brute_embeds(P, f.entries, g.entries):
            return {"poset": poset_to_json(P), "f": list(f.entries), "g": list(g.entries)}
    return None


@exhaustive("core")
def domination_representatives(ctx):
    count = 0
    for size in range(6):
        for P in poset_catalog(size):
            subsets = [P.keys_of(m) for m in range(1 << size)]
            reps = {A: domination_class(P, A) for A in subsets}
            for A in subsets:
                for B in subsets:
                    count += 1
                    if dominates(P, A, B) != dominates(P, reps[A], reps[B]):
                        return Outcome(count, {"poset": poset_to_json(P), "A": sorted(A), "B": sorted(B)})
    return Outcome(count)


# Dress-Schiffels


@randomized("ds", 200)
def partial_order_laws(rng, ctx):
    fam = random_family(rng)
    F = ds_fragment(fam, check=False)
    bad = law_violations(F.matrix)
    if bad:
        law, ids = bad[0]
        return {"family": family_to_json(fam), "law": law, "vectors": [F.labels[i] for i in ids]}
    return None


@randomized("ds", 50)
def vectorized_matches_scalar(rng, ctx):
    fam = random_family(rng, max_index=4)
    F = ds_fragment(fam, check=False)
    for i, f in enumerate(F.elements):
        for j, g in enumerate(F.elements):
            if bool(F.matrix[i, j]) != ds_leq(f, g):
                return {"family": family_to_json(fam), "f": f.label(), "g": g.label()}
    return None


@randomized("ds", 100)
def antilex_agreement(rng, ctx):
    """All pairs through both array forms; up to 2000 pairs through both scalar forms."""
    fam = random_family(rng, linear=True)
    F = ds_fragment(fam, check=False)
    A = antilex_relation(fam, list(F.elements))
    if not np.array_equal(F.matrix, A):
        i, j = np.argwhere(F.matrix != A)[0]
        return {"family": family_to_json(fam), "f": F.labels[i], "g": F.labels[j], "route": "array"}
    n = len(F)
    pairs = rng.integers(0, n, (min(2000, n * n), 2))
    for i, j in pairs:
        f, g = F.key(int(i)), F.key(int(j))
        if ds_leq(f, g) != antilex_oracle(fam, f, g):
            return {"family": family_to_json(fam), "f": f.label(), "g": g.label(), "route": "scalar"}
    return None


@randomized("ds", 100)
def singleton_sum(rng, ctx):
    fam = random_family(rng)
    try:
        singleton_sum_iso(fam)
    except OrdercraftError as exc:
        return {"family": family_to_json(fam), "error": str(exc)}
    return None


# barriers


SHIFT_GOLDENS = [((4,), (7, 34, 45), True), ((4, 7, 34), (7, 34, 45), True), ((4, 7), (7,), False)]
SUCCESSIVE_GOLDEN = [(3, 7), (7, 16), (16, 20)]


@exhaustive("barriers")
def shift_goldens(ctx):
    for r, s, want in SHIFT_GOLDENS:
        if bar.shift_extends(r, s) != want:
            return Outcome(3, {"r": list(r), "s": list(s), "expected": want})
    return Outcome(3)


@exhaustive("barriers")
def square_identities(ctx):
    count = 0
    for N in range(1, 11):
        for k in (1, 2, 3):
            if k > N + 1:
                continue
            U = bar.make_uniform_barrier(N, k)
            sq = bar.barrier_square(U)
            count += 1
            if set(sq.blocks) != set(combinations(range(N + 1), k + 1)):
                return Outcome(count, {"N": N, "k": k, "clause": "square of uniform"})
            if bar.barrier_square(sq).blocks != bar.barrier_cube(U).blocks:
                return Outcome(count, {"N": N, "k": k, "clause": "square of square"})
            for u in sq.blocks:
                splits = [(s, t) for s, t in bar.shift_pairs(U) if bar.block(s + t) == u]
                if splits != [bar.split_square_block(u, U)]:
                    return Outcome(count, {"N": N, "k": k, "block": list(u), "clause": "unique split"})
    return Outcome(count)


@exhaustive("barriers")
def successive_golden(ctx):
    got = bar.successive_sequence(bar.make_uniform_barrier(20, 2), (3, 7), (16, 20))
    if got != SUCCESSIVE_GOLDEN:
        return Outcome(1, {"got": [list(b) for b in got]})
    return Outcome(1)


@exhaustive("barriers")
def rado_bad(ctx):
    for N in range(3, 13):
        c = bar.classify_sequence(bar.rado_bad_array(N))
        if c.good:
            return Outcome(N - 2, {"N": N, "witness": [list(b) for b in c.witness]})
    return Outcome(10)


def pentagon_colouring() -> dict:
    """Edges of the 5-cycle on ``{0..4}`` get colour 0, the other pairs colour 1."""
    return {(a, b): 0 if (b - a) % 5 in (1, 4) else 1 for a, b in combinations(range(5), 2)}


@exhaustive("barriers")
def ramsey_exhaustive(ctx):
    B = bar.make_uniform_barrier(5, 1)
    pairs = list(combinations(range(6), 2))
    for code in range(1 << len(pairs)):
        colouring = {p: code >> k & 1 for k, p in enumerate(pairs)}
        try:
            H = bar.homogeneous_subbarrier(B, colouring, 3)
        except BaseTooSmall:
            return Outcome(code + 1, {"colouring": code, "clause": "no homogeneous set"})
        colours = {colouring[u] for u in bar.barrier_square(H).blocks}
        if len(H.effective_base) < 3 or len(colours) != 1:
            return Outcome(code + 1, {"colouring": code, "base": list(H.effective_base)})
    try:
        bar.homogeneous_subbarrier(bar.make_uniform_barrier(4, 1), pentagon_colouring(), 3)
    except BaseTooSmall:
        return Outcome(1 << len(pairs) | 1)
    return Outcome(1 << len(pairs) | 1, {"clause": "pentagon colouring produced a homogeneous set"})


@randomized("barriers", 60)
def dichotomy_sound(rng, ctx):
    N, k = _size(rng, 3, 7), _size(rng, 1, 2)
    B = bar.make_uniform_barrier(N, k)
    P = random_poset(rng, _size(rng, 1, 4), float(rng.uniform(0.0, 0.8)))
    f = bar.BarrierSeq(B, P, {b: P.key(int(rng.integers(len(P)))) for b in B.blocks})
    try:
        H, verdict = bar.dichotomy(f, 3)
    except BaseTooSmall:
        return None
    c = bar.classify_sequence(f.restrict(H))
    if (verdict == "BAD" and c.good) or (verdict == "PERFECT" and not c.perfect):
        return {"barrier": barrier_to_json(B), "verdict": verdict, "base": list(H.base)}
    return None


@randomized("barriers", 60)
def choice_refine_sound(rng, ctx):
    N = _size(rng, 4, 9)
    B = bar.make_uniform_barrier(N, 1)
    g = {u: int(rng.integers(0, 2)) for u in bar.barrier_square(B).blocks}
    try:
        C, i = bar.choice_refine(B, g, lambda s: (0, 1))
    except BaseExhausted:
        return None
    for s, t in bar.shift_pairs(C):
        if g[bar.block(s + t)] != i[s]:
            return {"barrier": barrier_to_json(B), "block": list(s)}
    return None


@exhaustive("barriers")
def constancy_exhaustive(ctx):
    """All 2-valued functions on the pairs over ``{0..5}`` against a direct classification."""
    B = bar.make_uniform_barrier(5, 2)
    pairs = list(bar.shift_pairs(B))
    for code in range(1 << len(B.blocks)):
        f = {b: code >> k & 1 for k, b in enumerate(B.blocks)}
        hypothesis = all(f[s] == f[t] for s, t in pairs)
        constant = len(set(f.values())) == 1
        try:
            got = bar.constant_on_barrier(f, B)
        except BaseExhausted:
            got = "unlinked"
        want = bar.Constancy.HYPOTHESIS_FAILS if not hypothesis else (bar.Constancy.CONSTANT if constant else "unlinked")
        if got != want:
            return Outcome(code + 1, {"function": code, "got": str(got), "expected": str(want)})
    return Outcome(1 << len(B.blocks))


# structure


def _structure_poset(rng) -> Poset:
    return random_poset(rng, _size(rng, 1, 64), float(rng.choice([0.02, 0.05, 0.1, 0.3])))


@randomized("structure", 500)
def decomposition_sound(rng, ctx):
    P = _structure_poset(rng)
    for coalesce in (False, True):
        D = decompose(P, coalesce)
        report = check_decomposition(P, D)
        if not report.ok:
            return {"poset": poset_to_json(P), "coalesce": coalesce, "report": report.to_json()}
        if coalesce and len(D.blocks) > len(P):
            return {"poset": poset_to_json(P), "clause": "coalescing added blocks"}
    return None


@exhaustive("structure")
def rank_equals_width(ctx):
    """Runs on the posets of structure.decomposition_sound, regenerated from its instance seeds."""
    n = ctx.count(500)
    for k in range(n):
        s = instance_seed(ctx.seed, "structure.decomposition_sound", k)
        P = _structure_poset(np.random.default_rng(s))
        if antichain_rank(P) != width(P):
            return Outcome(k + 1, {"poset": poset_to_json(P), "rank": antichain_rank(P), "width": width(P)}, s)
    return Outcome(n)


@randomized("structure", 200)
def cone_sum_augmentation(rng, ctx):
    P = random_poset(rng, _size(rng, 1, 16), float(rng.uniform(0.0, 0.5)))
    if not cone_sum_holds(P):
        return {"poset": poset_to_json(P)}
    return None


# coverability


def worked_nets() -> list[tuple[str, Vass, tuple, tuple, Verdict]]:
    return [
        ("increment", Vass(1, (Transition((0,), (1,)),)), (0,), (5,), Verdict.COVERABLE),
        ("decrement", Vass(1, (Transition((1,), (-1,)),)), (0,), (5,), Verdict.NOT_COVERABLE),
        ("token passing", Vass(2, (Transition((1, 0), (-1, 1)), Transition((0, 1), (1, -1)))),
         (1, 0), (0, 1), Verdict.COVERABLE),
    ]


@exhaustive("cover")
def worked_examples(ctx):
    for name, v, init, target, want in worked_nets():
        got = backward_cover(v, init, target).verdict
        if got != want:
            return Outcome(3, {"net": name, "got": got.value, "expected": want.value})
    return Outcome(3)


def _agreement(v: Vass, init: tuple, target: tuple) -> dict | None:
    back = backward_cover(v, init, target)
    if back.verdict is Verdict.COVERABLE:
        fwd = forward_oracle(v, init, target, depth_cap=max(1, len(back.firing_sequence)))
        if fwd.verdict is not Verdict.COVERABLE:
            return {"clause": "oracle misses a replayed run", "backward": back.to_json()}
        return None
    fwd = forward_oracle(v, init, target, depth_cap=12, value_cap=12)
    if fwd.verdict is Verdict.COVERABLE:
        return {"clause": "oracle covers a target judged not coverable", "depth": fwd.depth}
    return None


@randomized("cover", 200)
def agreement(rng, ctx):
    v = random_vass(rng)
    init, target = random_vector(rng, v.dimension), random_vector(rng, v.dimension)
    bad = _agreement(v, init, target)
    if bad is not None:
        return {"net": vass_to_json(v), "init": list(init), "target": list(target), **bad}
    return None


@randomized("cover", 100)
def monotone_in_init(rng, ctx):
    v = random_vass(rng)
    init, target = random_vector(rng, v.dimension), random_vector(rng, v.dimension)
    bigger = tuple(x + int(d) for x, d in zip(init, rng.integers(0, 3, v.dimension)))
    if (backward_cover(v, init, target).verdict is Verdict.COVERABLE
            and backward_cover(v, bigger, target).verdict is not Verdict.COVERABLE):
        return {"net": vass_to_json(v), "init": list(init), "bigger": list(bigger), "target": list(target)}
    return None


@randomized("cover", 100)
def order_independent(rng, ctx):
    v = random_vass(rng)
    init, target = random_vector(rng, v.dimension), random_vector(rng, v.dimension)
    shuffled = Vass(v.dimension, tuple(v.transitions[int(k)] for k in rng.permutation(len(v.transitions))))
    if backward_cover(v, init, target).basis != backward_cover(shuffled, init, target).basis:
        return {"net": vass_to_json(v), "init": list(init), "target": list(target)}
    return None


SUITES = ("core", "ds", "barriers", "structure", "cover")


def run_suite(name: str, seed: int = 0, budget: int | None = None, comparator: Comparator | None = None) -> dict:
    """JSON-ready report, properties sorted by name; no timing, so reports are byte-stable."""
    if name != "all" and name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    ctx = Context(seed, budget, comparator or exact_comparator)
    results = {}
    for prop in sorted(REGISTRY.values(), key=lambda p: p.name):
        if name != "all" and prop.suite != name:
            continue
        try:
            out = prop.check(ctx)
        except OrdercraftError as exc:
            out = Outcome(0, {"error": type(exc).__name__, "message": str(exc)})
        entry: dict[str, Any] = {"passed": out.passed, "instances": out.instances}
        if not out.passed:
            entry["counterexample"] = out.counterexample
            entry["seed"] = out.seed
        results[prop.name] = entry
    return {
        "suite": name,
        "seed": seed,
        "budget": budget,
        "passed": all(r["passed"] for r in results.values()),
        "properties": results,
    }
