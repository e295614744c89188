"""Dense small-scale linear algebra: structural predicates, symmetric
eigendecomposition with eigenvalue grouping, and Perron value extraction.

Matrices are plain ``numpy.ndarray`` objects; :func:`as_matrix` and
:func:`as_vector` are the validation entry points used by every other module.
"""
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import ConvergenceError, HypothesisError

SYMMETRY_TOL = 1e-12
EIG_GROUPING_TOL = 1e-9
DEFAULT_MAX_ITER = 100_000


def as_matrix(A):
    """Validate ``A`` as a finite square real matrix and return it as float64."""
    try:
        M = np.array(A, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"matrix entries must be real numbers: {exc}") from None
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def as_vector(x, n=None):
    """Validate ``x`` as a finite real vector (of length ``n`` if given)."""
    try:
        v = np.array(x, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"vector entries must be real numbers: {exc}") from None
    if v.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise ValueError(f"dimension mismatch: vector has length {v.shape[0]}, expected {n}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def mat_vec(A, x):
    """Dense matrix-vector product with a dimension check."""
    A = as_matrix(A)
    x = as_vector(x, A.shape[0])
    return A @ x


def is_nonnegative(A):
    return bool(np.all(np.asarray(A, dtype=float) >= 0))


def is_positive(A):
    return bool(np.all(np.asarray(A, dtype=float) > 0))


def is_symmetric(A, tol=SYMMETRY_TOL):
    A = as_matrix(A)
    return bool(np.all(np.abs(A - A.T) <= tol))


def is_irreducible(A):
    """True iff the digraph with an arc ``i -> j`` whenever ``A[i, j] > 0`` is
    strongly connected.

    Raises
    ------
    HypothesisError
        If ``A`` has a negative entry.
    """
    A = as_matrix(A)
    if not is_nonnegative(A):
        raise HypothesisError("nonnegative", "irreducibility is defined here for nonnegative matrices")
    if A.shape[0] == 1:
        return True
    ncomp, _ = connected_components(A > 0, directed=True, connection="strong")
    return ncomp == 1


def require_symmetric(A, tol=SYMMETRY_TOL):
    """Return the symmetrized float copy of ``A`` or raise :class:`HypothesisError`."""
    A = as_matrix(A)
    if not is_symmetric(A, tol):
        raise HypothesisError("symmetric")
    return (A + A.T) / 2


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues (descending) of a symmetric matrix and the
    orthogonal projectors onto their eigenspaces."""

    eigenvalues: tuple
    projectors: tuple
    grouping_tolerance: float

    @property
    def multiplicities(self):
        return tuple(int(round(np.trace(E))) for E in self.projectors)

    def power(self, k):
        """Return ``sum_i mu_i**k E_i``."""
        return sum(mu ** k * E for mu, E in zip(self.eigenvalues, self.projectors))

    def components(self, x):
        """Return the ``n x l`` array whose column ``t`` is ``E_t x``."""
        x = np.asarray(x, dtype=float)
        return np.column_stack([E @ x for E in self.projectors])


def symmetric_eig(A, tol=EIG_GROUPING_TOL):
    """Spectral decomposition of a symmetric matrix with clustered eigenvalues.

    Two eigenvalues belong to the same cluster when their gap is at most
    ``tol * max(1, |mu_1|)``; clusters are reported as one distinct eigenvalue
    (the cluster mean) with the projector built from its eigenvectors.
    """
    S = require_symmetric(A)
    w, V = np.linalg.eigh(S)
    order = np.argsort(w)[::-1]
    w, V = w[order], V[:, order]
    band = tol * max(1.0, abs(w[0]))
    groups = [[0]]
    for i in range(1, len(w)):
        if w[groups[-1][-1]] - w[i] <= band:
            groups[-1].append(i)
        else:
            groups.append([i])
    eigenvalues = tuple(float(np.mean(w[g])) for g in groups)
    projectors = tuple(V[:, g] @ V[:, g].T for g in groups)
    return SpectralDecomposition(eigenvalues, projectors, tol)


def is_positive_semidefinite(A, tol=EIG_GROUPING_TOL):
    """True iff the smallest eigenvalue is at least ``-tol * max(1, largest)``."""
    S = require_symmetric(A)
    w = np.linalg.eigvalsh(S)
    return bool(w[0] >= -tol * max(1.0, w[-1]))


def is_perron_vector(A, x, tol=EIG_GROUPING_TOL):
    """True iff the ratios ``(Ax)_i / x_i`` agree to within ``tol`` times the largest ratio."""
    A = as_matrix(A)
    x = as_vector(x, A.shape[0])
    if not np.all(x > 0):
        raise HypothesisError("positive", "x must be a positive vector")
    ratios = (A @ x) / x
    hi, lo = ratios.max(), ratios.min()
    return bool(hi - lo <= tol * abs(hi))


@dataclass(frozen=True)
class PerronPair:
    """Perron value with a positive Perron vector normalized to max entry 1.

    ``lower``/``upper`` are the final Collatz-Wielandt bracket and
    ``residual`` is ``||A v - value v||_inf``.
    """

    value: float
    vector: np.ndarray
    residual: float
    lower: float
    upper: float
    iterations: int


def perron(A, tol=1e-12, max_iter=DEFAULT_MAX_ITER, x0=None):
    """Perron value and vector of an irreducible nonnegative matrix by power
    iteration, stopping once the Collatz-Wielandt bracket satisfies
    ``upper - lower <= tol * upper``.

    Raises
    ------
    HypothesisError
        If ``A`` is negative somewhere or reducible.
    ConvergenceError
        If the bracket has not closed after ``max_iter`` steps (typical of
        imprimitive matrices); the exception carries the final bracket.
    """
    A = as_matrix(A)
    if not is_irreducible(A):
        raise HypothesisError("irreducible")
    n = A.shape[0]
    if n == 1:
        v = float(A[0, 0])
        return PerronPair(v, np.ones(1), 0.0, v, v, 0)
    y = np.ones(n) if x0 is None else as_vector(x0, n)
    if not np.all(y > 0):
        raise HypothesisError("positive", "starting vector must be positive")
    y = y / y.max()
    lo = hi = None
    for it in range(1, max_iter + 1):
        z = A @ y
        ratios = z / y
        lo, hi = ratios.min(), ratios.max()
        y = z / z.max()
        if hi - lo <= tol * hi:
            value = 0.5 * (lo + hi)
            residual = float(np.max(np.abs(A @ y - value * y)))
            return PerronPair(float(value), y, residual, float(lo), float(hi), it)
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} steps "
        f"(bracket [{lo}, {hi}]); the matrix may be imprimitive",
        lower=float(lo), upper=float(hi), iterations=max_iter,
    )
