import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyckfp.combinatorics import catalan
from dyckfp.dyck import DyckPath, decompose, enumerate_paths, sample_uniform
from dyckfp.permutations import (
    PatternViolation,
    Permutation,
    bjs,
    complement,
    contains,
    enumerate_avoiders,
    find_pattern,
    invert_231,
    reverse_complement,
    to_231,
)

from oracles import brute_avoiders, brute_contains

P = Permutation
FIG2_PATH = "UDUUUUDDUUUUDDUDDDDD"  # run sums A=(1,5,9,10), D=(1,3,5,10)


def sawtooth(n):
    return DyckPath.from_text("UD" * n)


def mountain(n):
    return DyckPath.from_text("U" * n + "D" * n)


class TestPermutation:
    def test_validation(self):
        with pytest.raises(ValueError):
            P([1, 1])
        with pytest.raises(ValueError):
            P([0, 1])
        with pytest.raises(ValueError):
            P([2, 3])

    def test_call_is_one_indexed(self):
        p = P([3, 1, 2])
        assert p(1) == 3 and p(3) == 2
        with pytest.raises(IndexError):
            p(0)

    def test_text_round_trip(self):
        p = P([2, 1, 6, 3, 10, 4, 5, 7, 8, 9])
        assert P.from_text(p.to_text()) == p
        assert p.to_text() == "2 1 6 3 10 4 5 7 8 9"


class TestContains:
    def test_self(self):
        assert contains(P([1, 2, 3]), P([1, 2, 3]))

    def test_single_triple_wrong_type(self):
        assert not contains(P([3, 1, 2]), P([2, 3, 1]))

    def test_bjs_image_avoids_321(self):
        assert not contains(P([2, 1, 6, 3, 10, 4, 5, 7, 8, 9]), P([3, 2, 1]))

    def test_empty_pattern_contained(self):
        assert contains(P([2, 1]), P([]))

    def test_matches_brute_force(self, rng):
        pats = [
            list(q)
            for k in (1, 2, 3, 4)
            for q in itertools.permutations(range(1, k + 1))
        ]
        for _ in range(150):
            n = int(rng.integers(1, 9))
            vals = list(rng.permutation(n) + 1)
            for pat in pats:
                if len(pat) > n:
                    continue
                assert contains(P(vals), P(pat)) == brute_contains(vals, pat), (
                    vals,
                    pat,
                )

    def test_witness_realizes_pattern(self, rng):
        pats = [list(q) for q in itertools.permutations(range(1, 4))]
        for _ in range(200):
            vals = list(rng.permutation(7) + 1)
            for pat in pats:
                hit = find_pattern(P(vals), P(pat))
                if hit is None:
                    continue
                assert list(hit) == sorted(hit)
                sub = [vals[i - 1] for i in hit]
                assert all(
                    (pat[a] < pat[b]) == (sub[a] < sub[b])
                    for a in range(3)
                    for b in range(a + 1, 3)
                )


class TestEnumerateAvoiders:
    def test_small_231(self):
        got = [q.as_tuple() for q in enumerate_avoiders(3, P([2, 3, 1]))]
        assert len(got) == 5 and (2, 3, 1) not in got

    def test_small_123(self):
        assert sum(1 for _ in enumerate_avoiders(4, P([1, 2, 3]))) == 14

    def test_n1(self):
        assert [q.as_tuple() for q in enumerate_avoiders(1, P([2, 3, 1]))] == [(1,)]

    def test_matches_brute_filter_in_lex_order(self):
        for pat in ([2, 3, 1], [1, 2, 3], [3, 2, 1], [1, 3, 2]):
            got = [q.as_tuple() for q in enumerate_avoiders(6, P(pat))]
            assert got == brute_avoiders(6, pat)

    def test_catalan_counts(self):
        for n in range(1, 9):
            for pat in ([2, 3, 1], [1, 2, 3], [3, 2, 1]):
                assert sum(1 for _ in enumerate_avoiders(n, P(pat))) == catalan(n)

    def test_generic_pattern_falls_back(self):
        got = [q.as_tuple() for q in enumerate_avoiders(5, P([1, 2, 3, 4]))]
        assert got == brute_avoiders(5, [1, 2, 3, 4])

    def test_cap(self):
        with pytest.raises(ValueError):
            next(iter(enumerate_avoiders(12, P([2, 3, 1]))))


class TestBJS:
    def test_reference_table(self):
        assert bjs(DyckPath.from_text(FIG2_PATH)).as_tuple() == (
            2, 1, 6, 3, 10, 4, 5, 7, 8, 9,
        )

    def test_mountain_is_identity(self):
        n = 7
        assert bjs(mountain(n)).as_tuple() == tuple(range(1, n + 1))

    def test_sawtooth_is_cycle(self):
        n = 7
        assert bjs(sawtooth(n)).as_tuple() == tuple(list(range(2, n + 1)) + [1])

    def test_excess_exactly_on_run_boundaries(self):
        # tau(j) > j iff j is an interior down-run boundary D_i
        for n in range(1, 11):
            for path in enumerate_paths(n):
                tau = bjs(path)
                d = decompose(path)
                interior = set(int(x) for x in d.D[:-1])
                for j in range(1, n + 1):
                    assert (tau(j) > j) == (j in interior)


class TestTo231:
    def test_sawtooth_is_identity(self):
        assert to_231(sawtooth(6)).as_tuple() == (1, 2, 3, 4, 5, 6)

    def test_mountain_is_reverse(self):
        assert to_231(mountain(6)).as_tuple() == (6, 5, 4, 3, 2, 1)

    def test_reference_fixed_point(self):
        sigma = to_231(DyckPath.from_text("UUUDUUDUUUDDUDDDDUDD"))
        assert sigma(6) == 6

    def test_nesting_monotonicity(self):
        # nested excursions reverse order, disjoint ones preserve it
        for n in range(1, 10):
            for path in enumerate_paths(n):
                d = decompose(path)
                sigma = to_231(path).values
                reach = np.arange(1, n + 1) + d.l // 2 - 1
                for i in range(n):
                    for j in range(i + 1, n):
                        if j + 1 <= reach[i]:
                            assert sigma[j] < sigma[i]
                        else:
                            assert sigma[i] < sigma[j]


class TestBijectionGlobal:
    def test_images_avoid_and_are_distinct(self):
        pat231, pat321 = P([2, 3, 1]), P([3, 2, 1])
        for n in range(0, 11):
            seen231, seen321 = set(), set()
            for path in enumerate_paths(n):
                s, t = to_231(path), bjs(path)
                assert find_pattern(s, pat231) is None
                assert find_pattern(t, pat321) is None
                seen231.add(s)
                seen321.add(t)
            assert len(seen231) == catalan(n)
            assert len(seen321) == catalan(n)


class TestInvert231:
    def test_identity(self):
        assert invert_231(P([1, 2, 3])) == sawtooth(3)

    def test_reverse(self):
        assert invert_231(P([3, 2, 1])) == mountain(3)

    def test_round_trip_exhaustive(self):
        for n in range(0, 10):
            for path in enumerate_paths(n):
                assert invert_231(to_231(path)) == path

    def test_round_trip_large_sample(self, rng):
        p = sample_uniform(5000, rng)
        assert invert_231(to_231(p)) == p

    def test_rejection_carries_triple(self):
        with pytest.raises(PatternViolation) as err:
            invert_231(P([2, 3, 1]))
        assert err.value.positions == (1, 2, 3)
        with pytest.raises(PatternViolation):
            invert_231(P([4, 1, 5, 3, 2]))


class TestSymmetries:
    def test_complement_identity(self):
        assert complement(P([1, 2, 3])).as_tuple() == (3, 2, 1)

    def test_complement_involution(self, rng):
        for _ in range(30):
            v = rng.permutation(int(rng.integers(1, 12))) + 1
            assert complement(complement(P(v))) == P(v)

    def test_complement_exchanges_123_and_321(self):
        pat321 = P([3, 2, 1])
        for n in range(1, 9):
            for q in enumerate_avoiders(n, P([1, 2, 3])):
                assert find_pattern(complement(q), pat321) is None

    def test_reverse_complement_fixed_points(self):
        assert reverse_complement(P([1])).as_tuple() == (1,)
        assert reverse_complement(P([2, 1])).as_tuple() == (2, 1)
        for n in range(1, 9):
            for q in enumerate_avoiders(n, P([1, 2, 3])):
                rq = reverse_complement(q)
                assert find_pattern(rq, P([1, 2, 3])) is None
                fp = {i for i in range(1, n + 1) if q(i) == i}
                fp_r = {i for i in range(1, n + 1) if rq(i) == i}
                assert fp_r == {n + 1 - f for f in fp}


@given(st.integers(min_value=0, max_value=2 ** 48 - 1), st.integers(min_value=1, max_value=120))
def test_round_trip_and_avoidance_random(seed, n):
    path = sample_uniform(n, np.random.default_rng(seed))
    sigma = to_231(path)
    assert invert_231(sigma) == path
    assert find_pattern(sigma, P([2, 3, 1])) is None


@given(st.integers(min_value=0, max_value=2 ** 48 - 1))
def test_bjs_boundary_identity_random(seed):
    # tau(D_i) - D_i = 1 + gamma(A_i + D_i) exactly, for every interior boundary
    rng = np.random.default_rng(seed)
    path = sample_uniform(200, rng)
    tau = bjs(path).values
    d = decompose(path)
    for A_i, D_i in zip(d.A[:-1], d.D[:-1]):
        assert tau[D_i - 1] - D_i == 1 + path.gamma[A_i + D_i]
