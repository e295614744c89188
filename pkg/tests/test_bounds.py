from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from perronbounds.bounds import (
    BoundKind,
    Monotonicity,
    a_seq,
    b_seq,
    c_seq,
    classify_monotonicity,
    collatz_wielandt,
    mediant,
    perron_onset,
    ratio_bounds,
)
from perronbounds.errors import HypothesisError
from perronbounds.linalg import perron, symmetric_eig
from perronbounds.tree import bottleneck_of_rooted_tree, random_rooted_tree

REMARK_MATRIX = [[2, 2, 2], [3, 3, 0], [1, 1, 1]]
ONSET_A = [[2, 1, 1], [1, 1, 1], [1, 1, 1]]
ONSET_X = [np.sqrt(2) - 1, 1.5 - np.sqrt(2), 0.5]

positive_4x4 = arrays(np.float64, (4, 4), elements=st.floats(0.01, 1))
positive_4 = arrays(np.float64, (4,), elements=st.floats(0.01, 1))


class TestCollatzWielandt:
    def test_examples(self):
        assert collatz_wielandt([[0, 1], [1, 0]], [1, 1]) == (1, 1)
        assert collatz_wielandt([[1, 1], [1, 2]], [1, 1]) == (2, 3)
        assert collatz_wielandt(REMARK_MATRIX, [1, 1, 1]) == (3, 6)

    def test_rejections(self):
        with pytest.raises(HypothesisError):
            collatz_wielandt([[1, 1], [1, 1]], [1, 0])
        with pytest.raises(HypothesisError):
            collatz_wielandt([[1, 1], [0, 1]], [1, 1])


class TestRatioSequences:
    def test_non_strict_example(self):
        a = a_seq(REMARK_MATRIX, K=2, exact=True)
        assert a.values == (6, 6)

    def test_golden_exact(self):
        a, b = ratio_bounds([[1, 1], [1, 2]], K=3, exact=True)
        assert a.values == (3, Fraction(8, 3), Fraction(21, 8))
        assert b.values == (2, Fraction(5, 2), Fraction(13, 5))
        assert a[1] == 3 and a.kind is BoundKind.A_MAX_RATIO

    def test_float_matches_exact(self):
        a = a_seq([[1, 1], [1, 2]], K=3)
        assert a.values == pytest.approx((3, 8 / 3, 21 / 8), rel=1e-15)

    def test_eigenvector_start(self):
        a, b = ratio_bounds([[0, 1], [1, 0]], K=5)
        assert a.values == b.values == (1.0,) * 5

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            a_seq([[1, 1], [1, 2]], K=0)
        with pytest.raises(HypothesisError):
            b_seq([[1, 1], [1, 2]], [1, -1])
        with pytest.raises(IndexError):
            a_seq([[1, 1], [1, 2]], K=2)[0]

    def test_large_k_does_not_overflow(self):
        a, b = ratio_bounds(np.full((3, 3), 1e3), K=400)
        assert np.isfinite(a[400]) and a[400] == pytest.approx(3e3)

    @given(positive_4x4, positive_4)
    def test_sandwich(self, A, x):
        rho = perron(A).value
        a, b = ratio_bounds(A, x, K=15)
        slack = 1e-12 * rho
        for k in range(1, 15):
            assert b[k] <= b[k + 1] + slack
            assert b[k + 1] <= rho + slack
            assert rho <= a[k + 1] + slack
            assert a[k + 1] <= a[k] + slack

    @given(arrays(np.int64, (3, 3), elements=st.integers(0, 4)), arrays(np.int64, (3,), elements=st.integers(1, 5)))
    def test_strict_step_when_argmax_row_positive(self, A, x):
        if not np.all(A.sum(axis=1) > 0) or np.linalg.matrix_rank(A) == 0:
            return
        try:
            a, _ = ratio_bounds(A, x, K=6, exact=True)
        except HypothesisError:
            return
        rows = [[int(v) for v in r] for r in A]
        y = [int(v) for v in x]
        step = lambda u: [sum(r[j] * u[j] for j in range(3)) for r in rows]
        for k in range(1, 6):
            z = step(y)
            w = step(z)
            now = [Fraction(z[i], y[i]) for i in range(3)]
            nxt = [Fraction(w[i], z[i]) for i in range(3)]
            top = [i for i in range(3) if nxt[i] == max(nxt)]
            # strictness is claimed only when some argmax of the next ratio has a positive row
            if len(set(now)) > 1 and any(all(v > 0 for v in rows[i]) for i in top):
                assert a[k + 1] < a[k]
            y = z


class TestCSeq:
    def test_golden_exact(self):
        c = c_seq([[1, 1], [1, 2]], K=3, exact=True)
        assert c.values == (Fraction(5, 2), Fraction(13, 5), Fraction(34, 13))

    def test_float_path(self):
        c = c_seq([[1, 1], [1, 2]], K=6)
        exact = c_seq([[1, 1], [1, 2]], K=6, exact=True)
        assert c.values == pytest.approx([float(v) for v in exact.values], rel=1e-14)

    def test_identity(self):
        assert c_seq(np.eye(3), K=4).values == (1.0,) * 4

    def test_neckbottle_of_small_broom(self):
        assert c_seq([[2, 1], [1, 1]], K=3, exact=True)[3] == Fraction(34, 13)

    def test_rejects_non_psd_and_zero_vector(self):
        with pytest.raises(HypothesisError):
            c_seq([[0, 1], [1, 0]])
        with pytest.raises(HypothesisError):
            c_seq(np.eye(2), [0, 0])

    @given(arrays(np.float64, (4, 4), elements=st.floats(0.05, 1)), positive_4)
    def test_monotone_for_pd(self, B, x):
        A = B.T @ B + 0.1 * np.eye(4)
        c = c_seq(A, x, K=12)
        rho = symmetric_eig(A).eigenvalues[0]
        for k in range(1, 12):
            assert c[k] <= c[k + 1] * (1 + 1e-12)
        assert c[12] <= rho * (1 + 1e-12)

    @given(arrays(np.int64, (2, 4), elements=st.integers(0, 3)), arrays(np.int64, (4,), elements=st.integers(0, 3)))
    def test_non_strict_for_psd_only(self, B, x):
        A = B.T @ B  # rank at most 2, so only semidefinite
        if not np.any(x) or int(x @ A @ x) == 0:
            return
        c = c_seq(A, x, K=8, exact=True)
        assert all(c[k] <= c[k + 1] for k in range(1, 8))

    @given(st.integers(2, 25), st.integers(0, 10 ** 6))
    def test_b_below_c_for_bottleneck_matrices(self, n, seed):
        M = bottleneck_of_rooted_tree(random_rooted_tree(n, np.random.default_rng(seed)))
        _, b = ratio_bounds(M, K=6, exact=True)
        c = c_seq(M, K=6, exact=True)
        assert all(b[k] <= c[k] for k in range(1, 7))


class TestClassify:
    def test_constant_tail(self):
        a = a_seq(ONSET_A, ONSET_X, K=6)
        b = b_seq(ONSET_A, ONSET_X, K=6)
        for seq in (a, b):
            rep = classify_monotonicity(seq)
            assert rep.classification is Monotonicity.CONSTANT_FROM
            assert rep.onset_index == 2

    def test_strict_c(self):
        c = c_seq([[1, 1], [1, 2]], K=10, exact=True)
        assert classify_monotonicity(c, 0, 0).classification is Monotonicity.STRICTLY_INCREASING

    def test_constant(self):
        rep = classify_monotonicity([1, 1, 1])
        assert rep.classification is Monotonicity.CONSTANT_FROM and rep.onset_index == 1

    def test_non_strict(self):
        a = a_seq(REMARK_MATRIX, K=6, exact=True)
        assert classify_monotonicity(a, 0, 0).classification is Monotonicity.NON_STRICT

    def test_decreasing(self):
        assert classify_monotonicity([3, 2, 1]).classification is Monotonicity.STRICTLY_DECREASING

    def test_needs_two_values(self):
        with pytest.raises(ValueError):
            classify_monotonicity([1])


class TestPerronOnset:
    def test_iterate_is_perron(self):
        assert perron_onset(ONSET_A, ONSET_X, K=10) == 1

    def test_starting_at_perron_vector(self):
        A = np.array([[1.0, 1], [1, 2]])
        assert perron_onset(A, perron(A).vector, K=5) == 0

    def test_never_for_invertible_exact(self):
        assert perron_onset([[1, 1], [1, 2]], K=60, exact=True) is None

    def test_exact_eigenvector(self):
        assert perron_onset([[0, 1], [1, 0]], K=3, exact=True) == 0


class TestMediant:
    def test_value(self):
        assert mediant([1, 2], [3, 4]) == pytest.approx(3 / 7)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            mediant([1], [1, 2])
        with pytest.raises(ValueError):
            mediant([0, 1], [1, 1])

    @given(st.lists(st.tuples(st.floats(0.01, 100), st.floats(0.01, 100)), min_size=1, max_size=8))
    def test_between_extremes(self, pairs):
        nums, dens = zip(*pairs)
        ratios = [a / b for a, b in pairs]
        m = mediant(nums, dens)
        assert min(ratios) * (1 - 1e-12) <= m <= max(ratios) * (1 + 1e-12)
