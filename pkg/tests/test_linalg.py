import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from perronbounds.errors import ConvergenceError, HypothesisError
from perronbounds.linalg import (
    as_matrix,
    is_irreducible,
    is_perron_vector,
    is_positive_semidefinite,
    is_symmetric,
    mat_vec,
    perron,
    symmetric_eig,
)

FOUR_VERTEX_M = [[1, 1, 1, 1], [1, 2, 2, 1], [1, 2, 3, 1], [1, 1, 1, 2]]


def path_adjacency(n):
    P = np.zeros((n, n))
    for i in range(n - 1):
        P[i, i + 1] = P[i + 1, i] = 1
    return P


class TestMatVec:
    def test_identity(self):
        x = np.array([1.5, -2.0, 3.0])
        assert np.array_equal(mat_vec(np.eye(3), x), x)

    def test_small_products(self):
        assert mat_vec([[1, 1], [1, 2]], [1, 1]).tolist() == [2, 3]
        assert mat_vec([[2, 1, 1], [1, 1, 1], [1, 1, 1]], [1, 1, 1]).tolist() == [4, 3, 3]

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            mat_vec(np.eye(2), [1, 2, 3])

    def test_rejects_non_square_and_non_finite(self):
        with pytest.raises(ValueError):
            as_matrix([[1, 2, 3], [4, 5, 6]])
        with pytest.raises(ValueError):
            as_matrix([[1, np.nan], [0, 1]])


class TestIrreducible:
    def test_examples(self):
        assert is_irreducible([[0, 1], [1, 0]])
        assert not is_irreducible([[1, 1], [0, 1]])
        assert is_irreducible(FOUR_VERTEX_M)
        assert is_irreducible([[0]])

    def test_negative_entries_rejected(self):
        with pytest.raises(HypothesisError):
            is_irreducible([[1, -1], [1, 1]])

    @given(st.integers(1, 8).flatmap(lambda n: arrays(np.int8, (n, n), elements=st.integers(0, 1))))
    def test_matches_power_positivity(self, A):
        n = A.shape[0]
        B = np.linalg.matrix_power(np.eye(n, dtype=np.int64) + A.astype(np.int64), max(n - 1, 0))
        assert is_irreducible(A) == bool(np.all(B > 0))


class TestSymmetricEig:
    def test_diagonal(self):
        dec = symmetric_eig(np.diag([1.0, 3.0]))
        assert dec.eigenvalues == pytest.approx((3, 1))
        assert np.allclose(dec.projectors[0], [[0, 0], [0, 1]])
        assert np.allclose(dec.projectors[1], [[1, 0], [0, 0]])

    @pytest.mark.parametrize("n", [2, 5, 8])
    def test_tridiagonal_spectrum(self, n):
        a, b = 2.0, 1.0
        dec = symmetric_eig(a * np.eye(n) + b * path_adjacency(n))
        expected = sorted((a + 2 * b * np.cos(l * np.pi / (n + 1)) for l in range(1, n + 1)), reverse=True)
        assert dec.eigenvalues == pytest.approx(expected, abs=1e-12)

    def test_three_by_three_example(self):
        dec = symmetric_eig([[2, 1, 1], [1, 2, 0], [1, 0, 2]])
        assert dec.eigenvalues == pytest.approx((2 + np.sqrt(2), 2, 2 - np.sqrt(2)))

    def test_multiplicity_grouping(self):
        dec = symmetric_eig(np.ones((4, 4)))
        assert dec.eigenvalues == pytest.approx((4, 0), abs=1e-12)
        assert dec.multiplicities == (1, 3)

    def test_non_symmetric_rejected(self):
        with pytest.raises(HypothesisError):
            symmetric_eig([[1, 2], [0, 1]])

    @given(arrays(np.float64, (5, 5), elements=st.floats(-3, 3)))
    def test_projector_invariants(self, B):
        A = B + B.T
        dec = symmetric_eig(A)
        n = A.shape[0]
        tol = 1e-9
        assert np.allclose(sum(dec.projectors), np.eye(n), atol=1e-9)
        for i, E in enumerate(dec.projectors):
            assert np.allclose(E @ E, E, atol=1e-9)
            assert np.allclose(E, E.T)
            for F in dec.projectors[i + 1:]:
                assert np.allclose(E @ F, 0, atol=1e-9)
        scale = max(np.abs(A).sum(axis=1).max(), 1.0)
        assert np.abs(dec.power(1) - A).max() <= 10 * tol * scale
        assert np.abs(dec.power(2) - A @ A).max() <= 10 * tol * scale ** 2


class TestPositiveSemidefinite:
    def test_examples(self):
        assert is_positive_semidefinite([[1, 1], [1, 2]])
        assert not is_positive_semidefinite([[0, 1], [1, 0]])
        assert is_positive_semidefinite(np.linalg.inv(np.array([[2.0, -1], [-1, 1]])))

    def test_symmetry_required(self):
        with pytest.raises(HypothesisError):
            is_positive_semidefinite([[1, 1], [0, 1]])


class TestIsPerronVector:
    def test_examples(self):
        assert is_perron_vector([[0, 1], [1, 0]], [1, 1])
        assert not is_perron_vector([[1, 1], [1, 2]], [1, 1])

    def test_iterate_becomes_perron(self):
        A = np.array([[2, 1, 1], [1, 1, 1], [1, 1, 1]], dtype=float)
        x = np.array([np.sqrt(2) - 1, 1.5 - np.sqrt(2), 0.5])
        assert not is_perron_vector(A, x)
        assert is_perron_vector(A, A @ x)

    def test_positive_vector_required(self):
        with pytest.raises(HypothesisError):
            is_perron_vector(np.eye(2), [1, 0])


class TestPerron:
    def test_swap(self):
        res = perron([[0, 1], [1, 0]])
        assert res.value == 1
        assert res.iterations == 1

    def test_golden(self):
        res = perron([[1, 1], [1, 2]])
        assert res.value == pytest.approx((3 + np.sqrt(5)) / 2, rel=1e-12)
        assert res.vector.max() == 1 and np.all(res.vector > 0)
        assert res.upper - res.lower <= 1e-12 * res.upper

    def test_four_vertex_matrix_against_characteristic_polynomial(self):
        # largest real root of det(M - lambda I) from the polynomial coefficients
        roots = np.roots(np.poly(np.array(FOUR_VERTEX_M, dtype=float)))
        expected = max(r.real for r in roots if abs(r.imag) < 1e-9)
        assert perron(FOUR_VERTEX_M).value == pytest.approx(expected, rel=1e-10)

    def test_residual_reported(self):
        res = perron([[2, 1, 0], [1, 3, 1], [0, 1, 1]])
        A = np.array([[2, 1, 0], [1, 3, 1], [0, 1, 1]], dtype=float)
        assert np.max(np.abs(A @ res.vector - res.value * res.vector)) <= res.residual + 1e-15
        assert res.residual < 1e-10

    def test_reducible_rejected(self):
        with pytest.raises(HypothesisError) as exc:
            perron([[1, 1], [0, 1]])
        assert exc.value.hypothesis == "irreducible"

    def test_imprimitive_reports_bracket(self):
        with pytest.raises(ConvergenceError) as exc:
            perron([[0, 1, 0], [1, 0, 1], [0, 1, 0]], max_iter=50, x0=[1, 2, 3])
        assert exc.value.lower < exc.value.upper

    @given(arrays(np.float64, (4, 4), elements=st.floats(0.01, 1)))
    def test_within_row_sum_bounds(self, A):
        rho = perron(A).value
        rows = A.sum(axis=1)
        assert rows.min() * (1 - 1e-12) <= rho <= rows.max() * (1 + 1e-12)

    @given(arrays(np.float64, (5, 5), elements=st.floats(0.01, 1)))
    def test_matches_top_eigenvalue_for_psd(self, B):
        A = B.T @ B
        assert perron(A).value == pytest.approx(symmetric_eig(A).eigenvalues[0], rel=1e-9)

    def test_symmetry_tolerance(self):
        assert is_symmetric([[1, 2 + 1e-13], [2, 1]])
        assert not is_symmetric([[1, 2 + 1e-9], [2, 1]])
