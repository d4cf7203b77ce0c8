from itertools import combinations

from hypothesis import given, strategies as st

from ordercraft.constructions import lex_sum
from ordercraft.poset import antichain, build_poset, chain, is_augmentation, reverse, width
from ordercraft.structure import (
    Decomposition,
    antichain_rank,
    check_decomposition,
    cone_sum,
    cone_sum_holds,
    decompose,
    singleton_decomposition,
    spine_of,
)

from conftest import posets


def brute_rank(P):
    """Longest strict inclusion chain of antichains above the empty one, by dynamic programming."""
    antichains = [frozenset(S) for r in range(len(P) + 1) for S in combinations(P.elements, r)
                  if all(not P.comparable(x, y) for x, y in combinations(S, 2))]
    best = {}
    for A in antichains:
        best[A] = max((best[B] + 1 for B in antichains if B < A), default=0)
    return max(best.values())


class TestRank:
    def test_examples(self, c3, a3, diamond):
        assert antichain_rank(c3) == 1
        assert antichain_rank(a3) == 3
        assert antichain_rank(diamond) == 2
        assert antichain_rank(antichain(0)) == 0

    @given(posets(max_size=7))
    def test_matches_width(self, P):
        assert antichain_rank(P) == width(P) == antichain_rank(reverse(P))

    def test_large_sparse(self):
        assert antichain_rank(antichain(64)) == 64
        assert antichain_rank(lex_sum(chain(8), {q: antichain(8) for q in range(8)})) == 8


class TestDecompose:
    def test_singletons(self, diamond):
        D = decompose(diamond)
        assert len(D.blocks) == 4 and D.spine == list(diamond.elements)
        assert check_decomposition(diamond, D).ok

    def test_chain_coalesces(self, chain3):
        D = decompose(chain3, coalesce=True)
        assert D.spine == ["c"] and D.blocks == [frozenset(chain3.elements)]
        assert check_decomposition(chain3, D).ok

    def test_diamond_coalesces(self, diamond):
        D = decompose(diamond, coalesce=True)
        assert D.spine == ["a", "b", "top"]
        assert D.blocks == [frozenset({"bot", "a"}), frozenset({"b"}), frozenset({"top"})]
        assert check_decomposition(diamond, D).ok

    def test_antichain_stays_discrete(self, a3):
        assert len(decompose(a3, coalesce=True).blocks) == 3

    @given(posets(max_size=12), st.booleans())
    def test_output_verifies(self, P, coalesce):
        D = decompose(P, coalesce)
        report = check_decomposition(P, D)
        assert report.ok, report.to_json()
        assert all(D.blocks) and sum(map(len, D.blocks)) == len(P)
        assert len(D.blocks) <= len(P) if coalesce else len(D.blocks) == len(P)


class TestVerifier:
    def test_non_maximum_designated(self, diamond):
        D = Decomposition(diamond, ["bot", "top"], [frozenset({"bot", "a"}), frozenset({"b", "top"})])
        report = check_decomposition(diamond, D)
        assert report.failed() == ["maximum"]
        assert report.clauses["maximum"][0][:2] == ("bot", "a")

    def test_non_convex_block(self, chain3):
        D = Decomposition(chain3, ["c", "b"], [frozenset({"a", "c"}), frozenset({"b"})])
        report = check_decomposition(chain3, D)
        assert ("a", "b", "c") in report.clauses["convex"]

    def test_interleaving_blocks(self):
        P = build_poset(["x", "p", "y", "q"], [("x", "p"), ("p", "q"), ("y", "q")])
        D = Decomposition(P, ["p", "q"], [frozenset({"x", "p"}), frozenset({"y", "q"})])
        report = check_decomposition(P, D)
        assert report.failed() == ["lex_sum"]
        assert ("p", "x", "y") in report.clauses["lex_sum"]
        assert report.to_json()["clauses"]["lex_sum"]["witnesses"][0] == ["p", "x", "y"]

    def test_partition(self, c3):
        D = Decomposition(c3, [2], [frozenset({1, 2})])
        assert check_decomposition(c3, D).failed() == ["partition"]


class TestSpine:
    def test_singleton_spine_is_copy(self, diamond):
        S = spine_of(singleton_decomposition(diamond))
        assert S == diamond

    def test_chain_spine(self, c3):
        assert len(spine_of(decompose(c3, coalesce=True))) == 1

    def test_diamond_spine(self, diamond):
        S = spine_of(decompose(diamond, coalesce=True))
        assert S.elements == ("a", "b", "top")
        assert all(S.leq(x, y) == diamond.leq(x, y) for x in S for y in S)


class TestCones:
    def test_cone_sum(self, diamond, c3):
        assert len(cone_sum(diamond, "a")) == 4
        assert is_augmentation(diamond, cone_sum(diamond, "a"))
        assert cone_sum_holds(c3)

    @given(posets(max_size=10))
    def test_every_point(self, P):
        assert cone_sum_holds(P)


def test_brute_rank_oracle_on_small_catalog():
    from ordercraft.generators import poset_catalog
    for n in range(5):
        for P in poset_catalog(n):
            assert antichain_rank(P) == brute_rank(P) == width(P)
