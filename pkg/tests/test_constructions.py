from itertools import combinations, permutations, product as tuples

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ordercraft.constructions import (
    DownSet,
    Seq,
    antichain_masks,
    disjoint_union,
    dominates,
    domination_class,
    domination_order,
    downset_lattice,
    embeds,
    f_map,
    gamma_index,
    lex_sum,
    pad_phi,
    power,
    product,
    rado_leq,
    rado_truncation,
    seq_downset,
    seq_embed_order,
)
from ordercraft.errors import (
    BaseMismatch,
    LengthExceeded,
    MissingPart,
    NotAntichain,
    NotMinimal,
    PreconditionError,
    SizeLimitExceeded,
)
from ordercraft.poset import antichain, build_poset, chain, law_violations, restrict, width
from ordercraft.suites import _brute_embeds

from conftest import posets


def isomorphic(P, Q):
    if len(P) != len(Q):
        return False
    return any(np.array_equal(P.matrix, Q.matrix[np.ix_(p, p)]) for p in map(list, permutations(range(len(Q)))))


class TestProductsAndSums:
    def test_product_of_chains_is_diamond(self, diamond):
        D = product(chain(2), chain(2))
        assert len(D) == 4 and width(D) == 2
        assert isomorphic(D, diamond)
        assert not D.comparable((0, 1), (1, 0))

    def test_product_with_singleton(self, diamond):
        assert isomorphic(product(diamond, chain(1)), diamond)

    def test_power_matches_iterated_product(self):
        P = build_poset(["x", "y", "z"], [("x", "y")])
        assert isomorphic(power(P, 2), product(P, P))

    def test_lex_sum_examples(self):
        parts = {0: antichain(2), 1: antichain(2)}
        U = lex_sum(antichain(2), parts)
        assert width(U) == 4
        L = lex_sum(chain(3), {q: chain(1) for q in range(3)})
        assert isomorphic(L, chain(3))
        S = lex_sum(chain(2), parts)
        assert all(S.lt((0, x), (1, y)) for x in range(2) for y in range(2))
        assert not S.comparable((0, 0), (0, 1))

    def test_disjoint_union(self):
        U = disjoint_union([chain(2), chain(3)])
        assert len(U) == 5 and width(U) == 2

    def test_missing_part(self):
        with pytest.raises(MissingPart):
            lex_sum(chain(2), {0: chain(1)})

    def test_caps(self):
        with pytest.raises(SizeLimitExceeded):
            product(chain(10), chain(10), cap=50)
        with pytest.raises(SizeLimitExceeded):
            rado_truncation(10, cap=20)

    @given(posets(max_size=5), posets(max_size=5))
    def test_counts_and_laws(self, P, Q):
        R = product(P, Q)
        assert len(R) == len(P) * len(Q) and not law_violations(R.matrix)
        S = lex_sum(P, {p: Q for p in P})
        assert len(S) == len(P) * len(Q) and not law_violations(S.matrix)


class TestEmbeddings:
    def test_examples(self):
        N = chain(6)
        assert embeds(Seq(N, (1, 3)), Seq(N, (1, 3))) == (0, 1)
        assert embeds(Seq(N, (1, 3)), Seq(N, (0, 1, 5))) == (1, 2)
        assert embeds(Seq(N, (2,)), Seq(N, (1,))) is None

    def test_base_mismatch(self):
        with pytest.raises(BaseMismatch):
            embeds(Seq(chain(2), (0,)), Seq(chain(3), (0,)))

    def test_witness_is_least(self):
        N = chain(6)
        s, t = (1, 3), (0, 1, 5, 4, 5)
        expected = min(rho for rho in combinations(range(len(t)), len(s))
                       if all(N.leq(x, t[j]) for x, j in zip(s, rho)))
        assert embeds(Seq(N, s), Seq(N, t)) == expected

    @given(posets(min_size=1, max_size=4), st.data())
    def test_greedy_matches_brute_force(self, P, data):
        seqs = st.lists(st.sampled_from(P.elements), max_size=5).map(tuple)
        s, t = data.draw(seqs), data.draw(seqs)
        assert (embeds(Seq(P, s), Seq(P, t)) is not None) == _brute_embeds(P, s, t)

    @given(posets(min_size=1, max_size=4), st.data())
    def test_prefixes_embed(self, P, data):
        t = data.draw(st.lists(st.sampled_from(P.elements), max_size=6).map(tuple))
        k = data.draw(st.integers(0, len(t)))
        assert embeds(Seq(P, t[:k]), Seq(P, t)) == tuple(range(k))

    def test_seq_order_examples(self):
        S = seq_embed_order(chain(1), 2)
        assert S.elements == ((), (0,), (0, 0))
        assert width(S) == 1
        A = seq_embed_order(antichain(2), 1)
        assert A.lt((), (0,)) and A.lt((), (1,)) and not A.comparable((0,), (1,))
        T = seq_embed_order(build_poset(["p", "q"], [("p", "q")]), 3)
        assert all(T.leq((), s) for s in T)

    def test_seq_order_cap(self):
        with pytest.raises(SizeLimitExceeded):
            seq_embed_order(chain(3), 6, cap=100)


class TestPadding:
    def test_gamma_examples(self, c3):
        assert gamma_index(Seq(c3, (2, 0, 0)), 0) == 1
        assert gamma_index(Seq(c3, (0, 0, 0)), 0) == 0
        assert gamma_index(Seq(c3, (0, 2)), 0) == 2

    def test_gamma_requires_minimal(self, c3):
        with pytest.raises(NotMinimal):
            gamma_index(Seq(c3, (1,)), 1)

    def test_pad_examples(self, c3):
        assert pad_phi(Seq(c3, (2, 0, 0)), 5, 0).entries == (2, 0, 0, 0, 0)
        assert pad_phi(Seq(c3, (0, 0)), 4, 0).entries == (0,) * 4
        assert pad_phi(Seq(c3, (1, 2)), 2, 0).entries == (1, 2)
        with pytest.raises(LengthExceeded):
            pad_phi(Seq(c3, (1, 2, 1)), 2, 0)

    def test_pad_generating_on_strata(self, c3):
        """Within one (gamma, length) stratum, padded comparison implies embedding."""
        seqs = [Seq(c3, t) for k in range(4) for t in tuples(range(3), repeat=k)]
        n = 4
        for f in seqs:
            for g in seqs:
                if len(f) != len(g) or gamma_index(f, 0) != gamma_index(g, 0):
                    continue
                if embeds(pad_phi(f, n, 0), pad_phi(g, n, 0)) is not None:
                    assert embeds(f, g) is not None


class TestDownSets:
    def test_lattice_examples(self):
        L = downset_lattice(chain(2))
        assert L.elements == (frozenset(), frozenset({0}), frozenset({0, 1}))
        assert width(L) == 1
        B = downset_lattice(antichain(2))
        assert len(B) == 4 and width(B) == 2
        assert all(B.leq(frozenset(), D) for D in B)

    @given(posets(max_size=7))
    def test_lattice_size_is_antichain_count(self, P):
        L = downset_lattice(P)
        assert len(L) == len(antichain_masks(P))
        assert frozenset() in L and frozenset(P.elements) in L

    def test_downset_validation(self, c3):
        with pytest.raises(PreconditionError):
            DownSet(c3, {1})

    def test_cap(self):
        with pytest.raises(SizeLimitExceeded):
            downset_lattice(antichain(12), cap=1000)


class TestDomination:
    def test_examples(self, c3):
        D = domination_order(chain(2))
        assert len(D) == 3
        assert dominates(chain(2), {0, 1}, {1}) and dominates(chain(2), {1}, {0, 1})
        assert domination_class(chain(2), {0, 1}) == {1}
        assert all(dominates(c3, set(), B) for B in ({0}, {2}))

    @given(posets(min_size=1, max_size=6))
    def test_singletons_embed_order(self, P):
        D = domination_order(P)
        for x in P:
            for y in P:
                assert D.leq(frozenset([x]), frozenset([y])) == P.leq(x, y)

    @given(posets(max_size=5), st.data())
    def test_representatives_respect_domination(self, P, data):
        A = data.draw(st.sets(st.sampled_from(P.elements))) if len(P) else set()
        B = data.draw(st.sets(st.sampled_from(P.elements))) if len(P) else set()
        D = domination_order(P)
        assert dominates(P, A, B) == D.leq(domination_class(P, A), domination_class(P, B))


class TestRado:
    def test_examples(self):
        assert rado_leq((0, 1), (0, 2))
        assert rado_leq((1, 3), (4, 7))
        assert not rado_leq((0, 5), (1, 3)) and not rado_leq((1, 3), (0, 5))
        assert len(rado_truncation(4)) == 10

    def test_rows_are_chains(self):
        for N in range(2, 9):
            R = rado_truncation(N)
            for a in range(N):
                assert width(restrict(R, [(a, b) for b in range(a + 1, N + 1)])) == 1

    def test_crossing_pairs_form_antichains(self):
        for N in range(2, 9):
            R = rado_truncation(N)
            for (a, b), (c, d) in combinations(R.elements, 2):
                if a < c < b:
                    assert not R.comparable((a, b), (c, d))


class TestSequenceMaps:
    def test_seq_downset_examples(self, c3):
        S = seq_embed_order(c3, 2)
        D = seq_downset(Seq(c3, (1, 2)), S)
        assert (0, 1) in D.members
        assert seq_downset(Seq(c3, ()), S).members == {()}
        assert seq_downset(Seq(c3, (2, 1)), S) == seq_downset(Seq(c3, (2, 1)), S)

    def test_seq_downset_errors(self, c3):
        S = seq_embed_order(c3, 2)
        with pytest.raises(BaseMismatch):
            seq_downset(Seq(chain(2), (1,)), S)
        with pytest.raises(LengthExceeded):
            seq_downset(Seq(c3, (1, 1, 1)), S)

    def test_f_map_examples(self, c3, diamond):
        D = f_map([1], c3)
        assert D.members == {0}
        assert f_map(["bot"], diamond).members == frozenset()
        assert f_map(["a", "b"], diamond).members == {"bot"}
        with pytest.raises(NotAntichain):
            f_map(["bot", "a"], diamond)
