"""Monotone sequences of lower and upper bounds on the Perron value.

For an irreducible nonnegative ``A`` and positive ``x``::

    a_k(A, x) = max_i (A^k x)_i / (A^{k-1} x)_i      (upper bounds, non-increasing)
    b_k(A, x) = min_i (A^k x)_i / (A^{k-1} x)_i      (lower bounds, non-decreasing)

and for a nonnegative positive semidefinite ``A`` and nonnegative ``x``::

    c_k(A, x) = x^T A^k x / x^T A^{k-1} x            (lower bounds, non-decreasing)

Every sequence function has a floating-point path (iterates renormalized by
their largest entry) and an exact path (``exact=True``) that runs the same
recurrence in big integers and returns ``Fraction`` values; the exact path is
how strictness can be decided after the float values have converged.
"""
import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact as ex
from .errors import HypothesisError
from .linalg import as_matrix, as_vector, is_irreducible, is_nonnegative, is_positive_semidefinite

STRICT_TOL = 1e-10
EQUAL_TOL = 1e-9


class BoundKind(enum.Enum):
    A_MAX_RATIO = "A_MAX_RATIO"
    B_MIN_RATIO = "B_MIN_RATIO"
    C_RAYLEIGH = "C_RAYLEIGH"


class Monotonicity(enum.Enum):
    STRICTLY_DECREASING = "STRICTLY_DECREASING"
    STRICTLY_INCREASING = "STRICTLY_INCREASING"
    CONSTANT_FROM = "CONSTANT_FROM"
    NON_STRICT = "NON_STRICT"


@dataclass(frozen=True)
class BoundSequence:
    """Values ``values[k-1]`` of one bound sequence for ``k = 1..K``."""

    kind: BoundKind
    values: tuple
    matrix_dim: int
    perron_reference: float = None

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        """1-based access: ``seq[k]`` is the k-th bound."""
        if k < 1:
            raise IndexError("bound sequences are indexed from k = 1")
        return self.values[k - 1]


@dataclass(frozen=True)
class MonotonicityReport:
    classification: Monotonicity
    onset_index: int = None
    strictness_tolerance: float = STRICT_TOL
    equality_tolerance: float = EQUAL_TOL


def _check_ratio_inputs(A, x, K):
    M = as_matrix(A)
    n = M.shape[0]
    v = np.ones(n) if x is None else as_vector(x, n)
    if K < 1:
        raise ValueError("K must be at least 1")
    if not is_nonnegative(M):
        raise HypothesisError("nonnegative")
    if not is_irreducible(M):
        raise HypothesisError("irreducible")
    if not np.all(v > 0):
        raise HypothesisError("positive", "x must be a positive vector")
    return M, v


def _exact_operands(A, x, n):
    rows, den = ex.integerize(A)
    xs, _ = ex.integerize(np.ones(n, dtype=int) if x is None else x)
    return rows, den, xs


def _float_ratio_extremes(M, v, K):
    y = v / v.max()
    highs, lows = [], []
    for _ in range(K):
        z = M @ y
        r = z / y
        highs.append(float(r.max()))
        lows.append(float(r.min()))
        y = z / z.max()
    return highs, lows


def _exact_ratio_extremes(rows, den, xs, K):
    highs, lows = [], []
    prev = None
    for y in ex.iterates(rows, xs, K):
        if prev is not None:
            hi = lo = 0
            for i in range(1, len(y)):
                # compare y[i]/prev[i] against the current extreme by cross-multiplication
                if y[i] * prev[hi] > y[hi] * prev[i]:
                    hi = i
                if y[i] * prev[lo] < y[lo] * prev[i]:
                    lo = i
            highs.append(Fraction(y[hi], prev[hi] * den))
            lows.append(Fraction(y[lo], prev[lo] * den))
        prev = y
    return highs, lows


def ratio_bounds(A, x=None, K=50, exact=False, perron_reference=None):
    """Return ``(a_seq, b_seq)`` for ``k = 1..K`` from one pass over the iterates."""
    M, v = _check_ratio_inputs(A, x, K)
    n = M.shape[0]
    if exact:
        rows, den, xs = _exact_operands(A, x, n)
        highs, lows = _exact_ratio_extremes(rows, den, xs, K)
    else:
        highs, lows = _float_ratio_extremes(M, v, K)
    return (
        BoundSequence(BoundKind.A_MAX_RATIO, tuple(highs), n, perron_reference),
        BoundSequence(BoundKind.B_MIN_RATIO, tuple(lows), n, perron_reference),
    )


def a_seq(A, x=None, K=50, exact=False, perron_reference=None):
    """Upper bounds ``a_k(A, x)``, ``k = 1..K``. ``x`` defaults to the all-ones vector."""
    return ratio_bounds(A, x, K, exact, perron_reference)[0]


def b_seq(A, x=None, K=50, exact=False, perron_reference=None):
    """Lower bounds ``b_k(A, x)``, ``k = 1..K``."""
    return ratio_bounds(A, x, K, exact, perron_reference)[1]


def collatz_wielandt(A, x=None):
    """``(min_i (Ax)_i/x_i, max_i (Ax)_i/x_i)``, which brackets ``rho(A)``."""
    M, v = _check_ratio_inputs(A, x, 1)
    r = (M @ v) / v
    return float(r.min()), float(r.max())


def c_seq(A, x=None, K=50, exact=False, perron_reference=None):
    """Rayleigh-type lower bounds ``c_k(A, x) = s_k / s_{k-1}`` with ``s_k = x^T A^k x``.

    Moments are formed as ``s_k = (A^ceil(k/2) x)^T (A^floor(k/2) x)`` so only
    ``ceil(K/2)`` matrix-vector products are needed; in the float path the
    iterates are renormalized and the scale factors enter the quotients
    directly, which keeps large ``K`` free of overflow.
    """
    M = as_matrix(A)
    n = M.shape[0]
    v = np.ones(n) if x is None else as_vector(x, n)
    if K < 1:
        raise ValueError("K must be at least 1")
    if not is_nonnegative(M):
        raise HypothesisError("nonnegative")
    if not is_positive_semidefinite(M):
        raise HypothesisError("positive semidefinite")
    if np.any(v < 0) or not np.any(v > 0):
        raise HypothesisError("nonnegative and nonzero", "x must be nonnegative and nonzero")
    half = (K + 1) // 2
    values = []
    if exact:
        rows, den, xs = _exact_operands(A, x, n)
        ys = list(ex.iterates(rows, xs, half))
        moments = [ex.dot(ys[(k + 1) // 2], ys[k // 2]) for k in range(K + 1)]
        for k in range(1, K + 1):
            if moments[k - 1] == 0:
                raise ValueError(f"c_{k} is undefined: x^T A^{k - 1} x = 0")
            values.append(Fraction(moments[k], moments[k - 1] * den))
    else:
        M = (M + M.T) / 2
        ys = [v / v.max()]
        scales = [1.0]
        for _ in range(half):
            z = M @ ys[-1]
            zmax = z.max()
            if zmax <= 0:
                raise ValueError("A^k x vanished; c_k is undefined")
            scales.append(float(zmax))
            ys.append(z / zmax)
        for k in range(1, K + 1):
            m = k // 2
            if k % 2 == 0:
                num = scales[m] * float(ys[m] @ ys[m])
                den_ = float(ys[m] @ ys[m - 1])
            else:
                num = scales[m + 1] * float(ys[m + 1] @ ys[m])
                den_ = float(ys[m] @ ys[m])
            if den_ == 0:
                raise ValueError(f"c_{k} is undefined: x^T A^{k - 1} x = 0")
            values.append(num / den_)
    return BoundSequence(BoundKind.C_RAYLEIGH, tuple(values), n, perron_reference)


def classify_monotonicity(seq, tol=STRICT_TOL, eq_tol=EQUAL_TOL):
    """Classify a sequence as strictly monotone, constant from some index, or neither.

    Steps count as strict when ``|v_{k+1} - v_k| > tol * max(1, |v_k|)``. A
    tail is constant from ``r0`` when every value from ``r0`` on lies within
    ``eq_tol * max(1, |v_last|)`` of the last value; ``CONSTANT_FROM`` also
    requires the steps before ``r0`` to be strict in one direction. With
    ``tol = eq_tol = 0`` and ``Fraction`` values every comparison is exact.
    ``onset_index`` is 1-based, like ``k``.
    """
    values = list(seq.values if isinstance(seq, BoundSequence) else seq)
    if len(values) < 2:
        raise ValueError("need at least two values to classify monotonicity")

    def direction(a, b):
        band = tol * max(1, abs(a))
        d = b - a
        if d > band:
            return 1
        if d < -band:
            return -1
        return 0

    dirs = [direction(a, b) for a, b in zip(values, values[1:])]
    if all(d == -1 for d in dirs):
        return MonotonicityReport(Monotonicity.STRICTLY_DECREASING, None, tol, eq_tol)
    if all(d == 1 for d in dirs):
        return MonotonicityReport(Monotonicity.STRICTLY_INCREASING, None, tol, eq_tol)

    last = values[-1]
    band = eq_tol * max(1, abs(last))
    r0 = len(values) - 1
    while r0 > 0 and abs(values[r0 - 1] - last) <= band:
        r0 -= 1
    prefix = dirs[:r0]
    if len(values) - r0 >= 2 and (not prefix or len(set(prefix)) == 1 and prefix[0] != 0):
        return MonotonicityReport(Monotonicity.CONSTANT_FROM, r0 + 1, tol, eq_tol)
    return MonotonicityReport(Monotonicity.NON_STRICT, None, tol, eq_tol)


def perron_onset(A, x=None, K=50, tol=EQUAL_TOL, exact=False):
    """Smallest ``r <= K`` such that ``A^r x`` is a Perron vector, or ``None``.

    In the float path "Perron vector" means the ratios ``(A y)_i / y_i`` agree
    within ``tol`` relative; since power iteration converges, a float onset
    always appears eventually for primitive ``A``. The exact path tests exact
    equality of the ratios and so reports ``None`` whenever no iterate is an
    eigenvector.
    """
    M, v = _check_ratio_inputs(A, x, 1)
    if K < 0:
        raise ValueError("K must be nonnegative")
    if exact:
        rows, _, xs = _exact_operands(A, x, M.shape[0])
        prev = None
        for r, y in enumerate(ex.iterates(rows, xs, K + 1)):
            if prev is not None and all(y[i] * prev[0] == y[0] * prev[i] for i in range(len(y))):
                return r - 1
            prev = y
        return None
    y = v / v.max()
    for r in range(K + 1):
        z = M @ y
        ratios = z / y
        if ratios.max() - ratios.min() <= tol * ratios.max():
            return r
        y = z / z.max()
    return None


def mediant(numerators, denominators):
    """``sum(numerators) / sum(denominators)``.

    For positive terms this lies between the smallest and the largest of the
    individual ratios ``numerators[i] / denominators[i]``.
    """
    a = list(numerators)
    b = list(denominators)
    if len(a) != len(b) or not a:
        raise ValueError("need equally many, and at least one, numerators and denominators")
    if any(t <= 0 for t in a) or any(t <= 0 for t in b):
        raise ValueError("terms must be positive")
    return sum(a) / sum(b)
