from itertools import combinations, product as tuples

import pytest
from hypothesis import given, strategies as st

from ordercraft.barriers import (
    BarrierSeq,
    Constancy,
    FiniteBarrier,
    barrier_cube,
    barrier_square,
    choice_refine,
    classify_sequence,
    connect,
    constant_on_barrier,
    decode_block,
    dichotomy,
    encode_block,
    homogeneous_subbarrier,
    make_uniform_barrier,
    rado_bad_array,
    shift_extends,
    shift_pairs,
    split_square_block,
    successive_sequence,
)
from ordercraft.errors import (
    BaseExhausted,
    BaseTooSmall,
    BlocksMissing,
    EmptyLeftOperand,
    InvalidBarrier,
    NotASquareBlock,
    NotSeparated,
    PreconditionError,
    RankTooLarge,
)
from ordercraft.poset import antichain, chain
from ordercraft.suites import pentagon_colouring


def brute_shift_pairs(B):
    return {(s, t) for s in B.blocks for t in B.blocks if shift_extends(s, t)}


class TestShiftExtension:
    @pytest.mark.parametrize("r, s, expected", [
        ((4,), (7, 34, 45), True),
        ((4, 7, 34), (7, 34, 45), True),
        ((4, 7), (7,), False),
        ((4,), (3, 5), False),
        ((1, 2), (2,), False),
        ((1, 2), (2, 3), True),
    ])
    def test_examples(self, r, s, expected):
        assert shift_extends(r, s) is expected

    def test_empty_left_operand(self):
        with pytest.raises(EmptyLeftOperand):
            shift_extends((), (1,))

    @given(st.integers(1, 7), st.integers(1, 3))
    def test_indexed_pairs_match_definition(self, N, k):
        if k > N + 1:
            return
        B = make_uniform_barrier(N, k)
        assert set(shift_pairs(B)) == brute_shift_pairs(B)


class TestUniformBarriers:
    def test_examples(self):
        assert make_uniform_barrier(4, 1).blocks == tuple((x,) for x in range(5))
        assert len(make_uniform_barrier(4, 2)) == 10
        with pytest.raises(RankTooLarge):
            make_uniform_barrier(2, 4)

    def test_validation(self):
        FiniteBarrier((0, 1, 2), ((0,), (1, 2)))
        with pytest.raises(InvalidBarrier):
            FiniteBarrier((0, 1, 2), ((0,), (0, 1)))
        with pytest.raises(InvalidBarrier):
            FiniteBarrier((0, 1, 2), ((0, 1), (1, 2)))
        with pytest.raises(InvalidBarrier):
            FiniteBarrier((0, 1), ((0, 5),))

    def test_block_encoding(self):
        assert encode_block((7, 3)) == "3,7"
        assert decode_block(" 7,3 ") == (3, 7)
        assert decode_block("") == ()


class TestSquares:
    def test_square_of_singletons_is_pairs(self):
        assert barrier_square(make_uniform_barrier(4, 1)).blocks == make_uniform_barrier(4, 2).blocks

    def test_square_of_pairs_is_triples(self):
        assert barrier_square(make_uniform_barrier(5, 2)).blocks == make_uniform_barrier(5, 3).blocks

    def test_square_keeps_base(self):
        assert barrier_square(make_uniform_barrier(4, 1)).base == tuple(range(5))

    @pytest.mark.parametrize("N, k", [(n, k) for n in range(1, 9) for k in (1, 2)])
    def test_iterated_square_is_cube(self, N, k):
        B = make_uniform_barrier(N, k)
        assert barrier_square(barrier_square(B)).blocks == barrier_cube(B).blocks

    @pytest.mark.parametrize("N", range(2, 9))
    def test_restricted_square_is_square_of_restriction(self, N):
        B = make_uniform_barrier(N, 1)
        for r in range(1, N + 2):
            for Y in combinations(range(N + 1), r):
                restricted = tuple(u for u in barrier_square(B).blocks if set(u) <= set(Y))
                assert restricted == barrier_square(B.restrict(Y)).blocks

    def test_split_examples(self):
        pairs = make_uniform_barrier(20, 2)
        assert split_square_block((3, 7, 16), pairs) == ((3, 7), (7, 16))
        singles = make_uniform_barrier(9, 1)
        assert split_square_block((2, 8), singles) == ((2,), (8,))
        with pytest.raises(NotASquareBlock):
            split_square_block((1, 2, 4), singles)

    @pytest.mark.parametrize("N, k", [(6, 1), (6, 2), (7, 3)])
    def test_split_inverts_union_uniquely(self, N, k):
        B = make_uniform_barrier(N, k)
        for s, t in shift_pairs(B):
            u = tuple(sorted(set(s) | set(t)))
            candidates = [(a, b) for a, b in brute_shift_pairs(B) if tuple(sorted(set(a) | set(b))) == u]
            assert candidates == [(s, t)]
            assert split_square_block(u, B) == (s, t)


class TestSuccessive:
    def test_golden(self):
        assert successive_sequence(make_uniform_barrier(20, 2), (3, 7), (16, 20)) == [(3, 7), (7, 16), (16, 20)]

    def test_direct_shift(self):
        assert successive_sequence(make_uniform_barrier(5, 1), (1,), (4,)) == [(1,), (4,)]

    def test_not_separated(self):
        with pytest.raises(NotSeparated):
            successive_sequence(make_uniform_barrier(9, 2), (3, 7), (5, 9))

    def test_non_block(self):
        with pytest.raises(PreconditionError):
            successive_sequence(make_uniform_barrier(9, 2), (3,), (5, 9))

    def test_mixed_rank_barriers(self):
        N = 6
        checked = 0
        for lengths in tuples((1, 2, 3), repeat=N + 1):
            blocks = [c for k in (1, 2, 3) for c in combinations(range(N + 1), k) if len(c) == lengths[c[0]]]
            try:
                B = FiniteBarrier(tuple(range(N + 1)), tuple(blocks))
            except InvalidBarrier:
                continue
            checked += 1
            for r in B.blocks:
                for s in B.blocks:
                    if s[0] > r[-1]:
                        try:
                            seq = successive_sequence(B, r, s)
                        except BlocksMissing:
                            continue
                        assert seq[0] == r and seq[-1] == s
        assert checked > 0

    @given(st.integers(1, 3), st.data())
    def test_statement(self, k, data):
        B = make_uniform_barrier(12, k)
        r = data.draw(st.sampled_from(B.blocks))
        later = [t for t in B.blocks if t[0] > r[-1]]
        if not later:
            return
        s = data.draw(st.sampled_from(later))
        seq = successive_sequence(B, r, s)
        assert len(seq) == len(r) + 1
        assert [b[0] for b in seq[:-1]] == list(r)
        assert all(set(b) <= set(r) | set(s) for b in seq)
        assert all(shift_extends(a, b) for a, b in zip(seq, seq[1:]))


class TestConnect:
    def test_examples(self):
        B = make_uniform_barrier(5, 1)
        assert connect(B, (2,), (2,)) == ([(2,)], [(2,)])
        assert connect(B, (1,), (2,)) == ([(1,), (3,)], [(2,), (3,)])
        left, right = connect(make_uniform_barrier(9, 2), (0, 1), (1, 2))
        assert left[-1] == right[-1] == (3, 4)

    def test_exhausted(self):
        with pytest.raises(BaseExhausted):
            connect(make_uniform_barrier(5, 1), (4,), (5,))


class TestClassification:
    def test_constant_is_perfect(self):
        B = make_uniform_barrier(5, 1)
        c = classify_sequence(BarrierSeq(B, chain(1), {b: 0 for b in B.blocks}))
        assert c.good and c.perfect and c.verdict == "GOOD"
        assert c.witness == ((0,), (1,))

    def test_decreasing_is_bad(self):
        B = make_uniform_barrier(5, 1)
        c = classify_sequence(BarrierSeq(B, chain(6), {b: 5 - b[0] for b in B.blocks}))
        assert not c.good and c.verdict == "BAD" and c.witness is None

    def test_rado(self):
        f = rado_bad_array(6)
        assert f((0, 1)) == (0, 1)
        for N in range(3, 13):
            assert classify_sequence(rado_bad_array(N)).verdict == "BAD"
        with pytest.raises(PreconditionError):
            rado_bad_array(1)

    @given(st.integers(2, 8), st.integers(1, 2), st.data())
    def test_pigeonhole_on_chains(self, N, k, data):
        B = make_uniform_barrier(N, k)
        pairs = list(shift_pairs(B))
        if not pairs:
            return
        size = data.draw(st.integers(1, max(1, min(len(pairs) - 1, N))))
        values = {b: data.draw(st.integers(0, size - 1)) for b in B.blocks}
        if len(set(values.values())) >= len(pairs):
            return
        assert classify_sequence(BarrierSeq(B, chain(size), values)).good

    def test_partial_values_rejected(self):
        with pytest.raises(PreconditionError):
            BarrierSeq(make_uniform_barrier(2, 1), chain(1), {(0,): 0})


class TestRamsey:
    def test_monochromatic_returns_input(self):
        B = make_uniform_barrier(4, 1)
        assert homogeneous_subbarrier(B, lambda u: "x", 3) is B

    def test_pentagon(self):
        with pytest.raises(BaseTooSmall):
            homogeneous_subbarrier(make_uniform_barrier(4, 1), pentagon_colouring(), 3)

    def test_six_points_always_suffice_sample(self):
        B = make_uniform_barrier(5, 1)
        H = homogeneous_subbarrier(B, lambda u: (u[0] + u[1]) % 2, 3)
        colours = {(u[0] + u[1]) % 2 for u in barrier_square(H).blocks}
        assert len(H.base) >= 3 and len(colours) == 1

    def test_string_keyed_colouring(self):
        B = make_uniform_barrier(3, 1)
        colouring = {encode_block(u): 1 for u in barrier_square(B).blocks}
        assert homogeneous_subbarrier(B, colouring, 3) is B


class TestDichotomy:
    def test_constant_is_perfect(self):
        B = make_uniform_barrier(5, 1)
        H, tag = dichotomy(BarrierSeq(B, chain(1), {b: 0 for b in B.blocks}), 3)
        assert H is B and tag == "PERFECT"

    def test_rado_is_bad(self):
        H, tag = dichotomy(rado_bad_array(8), 3)
        assert tag == "BAD" and len(H.base) >= 3

    def test_small_mixed_base(self):
        B = make_uniform_barrier(3, 1)
        f = BarrierSeq(B, antichain(2), {(0,): 0, (1,): 0, (2,): 1, (3,): 1})
        with pytest.raises(BaseTooSmall):
            dichotomy(f, 3)

    @given(st.integers(5, 7), st.integers(1, 4), st.lists(st.integers(0, 3), min_size=8, max_size=8))
    def test_verdict_is_reproducible(self, N, size, raw):
        B = make_uniform_barrier(N, 1)
        f = BarrierSeq(B, chain(size), {(a,): raw[a] % size for a in range(N + 1)})
        H, tag = dichotomy(f, 3)
        c = classify_sequence(f.restrict(H))
        assert (tag == "PERFECT") == c.perfect
        assert (tag == "BAD") == (not c.good)


class TestChoiceRefine:
    def test_singleton_options(self):
        B = make_uniform_barrier(6, 1)
        C, i = choice_refine(B, lambda u: 7, lambda a: [7])
        assert C == B and set(i.values()) == {7}

    def test_value_of_left_block(self):
        B = make_uniform_barrier(6, 2)
        C, i = choice_refine(B, lambda u: u[0], lambda a: [a[0]])
        assert C == B and all(i[a] == a[0] for a in B.blocks)

    def test_parity_of_right_block(self):
        B = make_uniform_barrier(20, 1)
        C, i = choice_refine(B, lambda u: u[1] % 2, lambda a: [0, 1])
        assert len({x % 2 for x in C.base}) == 1
        assert len(set(i.values())) == 1

    def test_hypothesis_checked(self):
        with pytest.raises(PreconditionError):
            choice_refine(make_uniform_barrier(3, 1), lambda u: 2, lambda a: [0, 1])

    def test_requested_size(self):
        with pytest.raises(BaseExhausted):
            choice_refine(make_uniform_barrier(20, 1), lambda u: u[1] % 2, lambda a: [0, 1], m=15)

    @given(st.integers(3, 10), st.integers(1, 2), st.integers(2, 3), st.integers(0, 10**6))
    def test_postcondition(self, N, k, values, salt):
        B = make_uniform_barrier(N, k)
        g = lambda u: hash((salt, u)) % values
        C, i = choice_refine(B, g, lambda a: range(values))
        for s, t in shift_pairs(C):
            assert g(tuple(sorted(set(s) | set(t)))) == i[s]


class TestConstancy:
    def test_constant(self):
        B = make_uniform_barrier(9, 2)
        assert constant_on_barrier(lambda b: 1, B) is Constancy.CONSTANT

    def test_hypothesis_fails(self):
        result = constant_on_barrier(lambda b: b[0], make_uniform_barrier(5, 1))
        assert result is Constancy.HYPOTHESIS_FAILS and not result

    def test_unlinkable_block(self):
        with pytest.raises(BaseExhausted):
            constant_on_barrier(lambda b: b == (0, 9), make_uniform_barrier(9, 2))

    def test_exhaustive_small_base(self):
        B = make_uniform_barrier(5, 2)
        verdicts = set()
        for code in range(1 << len(B.blocks)):
            f = {b: code >> k & 1 for k, b in enumerate(B.blocks)}
            try:
                verdicts.add(constant_on_barrier(f, B))
            except BaseExhausted:
                verdicts.add("exhausted")
        assert Constancy.CONSTANT in verdicts and Constancy.HYPOTHESIS_FAILS in verdicts
