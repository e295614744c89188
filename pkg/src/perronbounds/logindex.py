"""Log-concavity and log-convexity indices and the sequences they generate.

An index ``i`` is a log-concavity (log-convexity) index of ``A`` associated
with ``x`` if, for all large ``k``, the ratio ``(A^k x)_i / (A^{k-1} x)_i``
is the largest (smallest) of the ratio vector. For symmetric positive
semidefinite irreducible nonnegative ``A`` such indices exist and can be
found from the spectral components ``y_t = E_t x``: writing
``F(p, q; k) = (A^k x)_p (A^{k-1} x)_q - (A^k x)_q (A^{k-1} x)_p``,

    F(p, q; k) = sum_{i<j} (mu_i mu_j)^(k-1) (mu_i - mu_j) det[[y_p,i, y_p,j], [y_q,i, y_q,j]]

and its sign for large ``k`` is the sign of the first non-vanishing
determinant against the Perron column. :func:`find_log_indices` eliminates
candidates column by column on that basis and then certifies the survivors
against direct iteration.

Indices are 1-based throughout this module, matching vertex labels.
"""
import enum
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from . import exact as ex
from .bounds import EQUAL_TOL
from .errors import HypothesisError, LogIndexInconsistency
from .linalg import (
    as_matrix,
    as_vector,
    is_irreducible,
    is_nonnegative,
    is_positive_semidefinite,
    is_symmetric,
    symmetric_eig,
)

DET_ZERO_TOL = 1e-12
DEFAULT_WINDOW = 32
MAX_ONSET = 2000


class Shape(enum.Enum):
    LOG_CONCAVE = "LOG_CONCAVE"
    LOG_CONVEX = "LOG_CONVEX"


class Origin(enum.Enum):
    CONCAVITY_INDEX = "CONCAVITY_INDEX"
    CONVEXITY_INDEX = "CONVEXITY_INDEX"
    MOMENT = "MOMENT"


@dataclass(frozen=True)
class EliminationRound:
    """One elimination step: column ``column`` (1-based, eigenvalues
    descending), chosen dominating index ``pivot`` and surviving set."""

    role: str
    column: int
    pivot: int
    survivors: tuple


@dataclass(frozen=True)
class LogIndexResult:
    concavity_indices: frozenset
    convexity_indices: frozenset
    onset_k: int
    trace: tuple = ()
    method: str = "ELIMINATION"
    perron_iterate: bool = False


@dataclass(frozen=True)
class GeneratedSequence:
    """``values[k]`` for ``k = 0..K``; log-concave/convex from ``start_k`` on."""

    values: tuple
    origin: Origin
    start_k: int = 0
    index: int = None

    def shape(self):
        return Shape.LOG_CONCAVE if self.origin is Origin.CONCAVITY_INDEX else Shape.LOG_CONVEX


def select_dominating_index(x, y, zero_tol=0.0):
    """Indices ``(i1, i2)`` (1-based) such that for every ``j``

        det[[x_i1, y_i1], [x_j, y_j]] >= 0   and   det[[x_i2, y_i2], [x_j, y_j]] <= 0.

    Entries with ``|y_i| <= zero_tol`` count as zero. Ties go to the smallest index.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise ValueError("x and y must be vectors of the same positive length")
    if not np.all(x > 0):
        raise HypothesisError("positive", "x must be a positive vector")
    neg = [i for i in range(len(y)) if y[i] < -zero_tol]
    zero = [i for i in range(len(y)) if abs(y[i]) <= zero_tol]
    pos = [i for i in range(len(y)) if y[i] > zero_tol]

    def arg(candidates, better):
        best = candidates[0]
        for i in candidates[1:]:
            if better(x[i] / y[i], x[best] / y[best]):
                best = i
        return best

    if neg:
        hi = arg(neg, lambda a, b: a > b)
    elif zero:
        hi = zero[0]
    else:
        hi = arg(pos, lambda a, b: a > b)
    if pos:
        lo = arg(pos, lambda a, b: a < b)
    elif zero:
        lo = zero[0]
    else:
        lo = arg(neg, lambda a, b: a < b)
    return hi + 1, lo + 1


def _check_psd_inputs(A, x):
    M = as_matrix(A)
    n = M.shape[0]
    v = np.ones(n) if x is None else as_vector(x, n)
    if not is_nonnegative(M):
        raise HypothesisError("nonnegative")
    if not is_symmetric(M):
        raise HypothesisError("symmetric")
    if not is_irreducible(M) or not M.any():
        # a 1x1 zero matrix passes the pattern test but has no Perron value
        raise HypothesisError("irreducible")
    if not is_positive_semidefinite(M):
        raise HypothesisError("positive semidefinite")
    if not np.all(v > 0):
        raise HypothesisError("positive", "x must be a positive vector")
    return M, v


def _eliminate(Y, role, band):
    """Run the column-by-column elimination for one role ("max" or "min")."""
    n, ell = Y.shape
    survivors = list(range(n))
    trace = []
    for j in range(1, ell):
        if len(survivors) == 1:
            break
        c1, cj = Y[survivors, 0], Y[survivors, j]
        dets = np.outer(c1, cj) - np.outer(cj, c1)
        if np.all(np.abs(dets) <= band):
            continue
        hi, lo = select_dominating_index(c1, cj)
        pivot = (hi if role == "max" else lo) - 1
        keep = [survivors[q] for q in range(len(survivors)) if abs(dets[pivot, q]) <= band]
        trace.append(EliminationRound(role, j + 1, survivors[pivot] + 1, tuple(s + 1 for s in keep)))
        survivors = keep
    return survivors, trace


def _float_ratio_vectors(M, v, count):
    y = v / v.max()
    for _ in range(count):
        z = M @ y
        yield z / y
        y = z / z.max()


def _exact_extreme_sets(rows, xs, count):
    """Yield ``(argmax set, argmin set)`` (0-based) of the exact ratio vector for k = 1..count."""
    prev = None
    for y in ex.iterates(rows, xs, count):
        if prev is not None:
            hi = lo = 0
            for i in range(1, len(y)):
                if y[i] * prev[hi] > y[hi] * prev[i]:
                    hi = i
                if y[i] * prev[lo] < y[lo] * prev[i]:
                    lo = i
            hs = {i for i in range(len(y)) if y[i] * prev[hi] == y[hi] * prev[i]}
            ls = {i for i in range(len(y)) if y[i] * prev[lo] == y[lo] * prev[i]}
            yield hs, ls
        prev = y


def _certify(M, v, exact_ops, conc, conv, window, tol):
    """Smallest onset K with the reported indices extremal for k in [K, K + window],
    or ``None`` if no such K appears before ``MAX_ONSET``."""
    streak_start = 1
    if exact_ops is not None:
        rows, xs = exact_ops
        stream = _exact_extreme_sets(rows, xs, MAX_ONSET + window)
        for k, (hs, ls) in enumerate(stream, start=1):
            if not (conc <= hs and conv <= ls):
                streak_start = k + 1
            elif k - streak_start >= window:
                return streak_start
            if streak_start > MAX_ONSET:
                return None
        return None
    conc_i, conv_i = sorted(conc), sorted(conv)
    for k, r in enumerate(_float_ratio_vectors(M, v, MAX_ONSET + window), start=1):
        hi, lo = r.max(), r.min()
        band = tol * abs(hi)
        if np.any(r[conc_i] < hi - band) or np.any(r[conv_i] > lo + band):
            streak_start = k + 1
        elif k - streak_start >= window:
            return streak_start
        if streak_start > MAX_ONSET:
            return None
    return None


def _empirical_indices(rows, xs, window):
    """Index sets read off exact iteration: argmax/argmin sets that stay fixed for ``window`` steps."""
    sets = list(_exact_extreme_sets(rows, xs, MAX_ONSET + window))
    for start in range(len(sets) - window):
        hs, ls = sets[start]
        if all(sets[k] == (hs, ls) for k in range(start, start + window + 1)):
            return hs, ls, start + 1
    return None


def find_log_indices(A, x=None, window=DEFAULT_WINDOW, tol=EQUAL_TOL, det_tol=DET_ZERO_TOL):
    """Find the log-concavity and log-convexity indices of ``A`` associated with ``x``.

    ``A`` must be symmetric, nonnegative, irreducible and positive
    semidefinite and ``x`` positive (default all ones). Returns a
    :class:`LogIndexResult` whose index sets are certified: each index
    realizes the extreme ratio for ``k`` in ``[onset_k, onset_k + window]``.
    When ``A`` and ``x`` are integral the certificate uses exact integer
    iteration, and if the floating-point elimination fails it the index sets
    are read off exact iteration instead (``method == "EMPIRICAL"``).

    Raises
    ------
    HypothesisError
        If a hypothesis on ``A`` or ``x`` fails.
    LogIndexInconsistency
        If no reported index set can be certified.
    """
    M, v = _check_psd_inputs(A, x)
    n = M.shape[0]
    integral = ex.is_integral(A) and (x is None or ex.is_integral(x))
    exact_ops = None
    if integral:
        rows, _ = ex.integerize(A)
        xs, _ = ex.integerize(v if x is None else x)
        exact_ops = (rows, xs)

    dec = symmetric_eig(M)
    mu = np.array(dec.eigenvalues)
    Y = dec.components(v)
    # columns with a zero eigenvalue drop out of F(p, q; k) for k >= 2
    keep_cols = [0] + [t for t in range(1, len(mu)) if mu[t] > dec.grouping_tolerance * max(1.0, mu[0])]
    Y = Y[:, keep_cols]
    scale = float(np.max(np.abs(v)))
    col_zero = 1e-10 * scale
    live = [0] + [t for t in range(1, Y.shape[1]) if np.max(np.abs(Y[:, t])) > col_zero]
    Y = Y[:, live]
    everything = frozenset(range(1, n + 1))

    if Y.shape[1] == 1:
        onset = _certify(M, v, exact_ops, set(range(n)), set(range(n)), window, tol)
        if onset is None:
            raise LogIndexInconsistency("x has no component off the Perron direction, "
                                        "but iteration does not confirm a Perron iterate")
        return LogIndexResult(everything, everything, onset, (), "ELIMINATION", True)

    band = det_tol * float(np.max(np.abs(Y[:, 0]))) * scale
    conc, trace_hi = _eliminate(Y, "max", band)
    conv, trace_lo = _eliminate(Y, "min", band)
    conc_set, conv_set = set(conc), set(conv)
    onset = _certify(M, v, exact_ops, conc_set, conv_set, window, tol)
    if onset is not None:
        return LogIndexResult(
            frozenset(i + 1 for i in conc_set),
            frozenset(i + 1 for i in conv_set),
            onset,
            tuple(trace_hi + trace_lo),
        )
    if exact_ops is not None:
        found = _empirical_indices(*exact_ops, window)
        if found is not None:
            hs, ls, start = found
            return LogIndexResult(
                frozenset(i + 1 for i in hs),
                frozenset(i + 1 for i in ls),
                start,
                tuple(trace_hi + trace_lo),
                "EMPIRICAL",
            )
    raise LogIndexInconsistency(
        f"indices {sorted(i + 1 for i in conc_set)} / {sorted(i + 1 for i in conv_set)} "
        "could not be certified against direct iteration"
    )


def _iterate_entries(A, x, K, pick):
    """``pick(A^k x)`` for k = 0..K, exactly for integral input."""
    M = as_matrix(A)
    n = M.shape[0]
    v = np.ones(n) if x is None else as_vector(x, n)
    if ex.is_integral(A) and (x is None or ex.is_integral(x)):
        rows, _ = ex.integerize(A)
        xs, _ = ex.integerize(v if x is None else x)
        return [pick(y) for y in ex.iterates(rows, xs, K)], True
    # renormalize and keep the binary exponent separately
    out = []
    y, e = v.copy(), 0
    for k in range(K + 1):
        if k:
            y = M @ y
        m, de = np.frexp(np.max(np.abs(y)))
        if m == 0:
            out.append(0.0 * pick(y))
            continue
        y = np.ldexp(y, -int(de))
        e += int(de)
        out.append(math.ldexp(float(pick(y)), e))
    return out, False


def generate(A, x=None, index=1, K=12, origin=Origin.CONCAVITY_INDEX, start_k=0):
    """The sequence ``g_k = (A^k x)_index`` for ``k = 0..K``.

    Integral ``A`` and ``x`` give exact Python ints. ``origin`` and
    ``start_k`` record which index role produced the sequence and from where
    it is log-concave/convex (``onset_k - 1`` of a :class:`LogIndexResult`).
    """
    n = as_matrix(A).shape[0]
    if not 1 <= index <= n:
        raise ValueError(f"index must be in 1..{n}")
    if K < 2:
        raise ValueError("K must be at least 2")
    values, _ = _iterate_entries(A, x, K, lambda y: y[index - 1])
    return GeneratedSequence(tuple(values), origin, start_k, index)


def moments(A, x=None, K=12):
    """Moment sequence ``s_k = x^T A^k x`` for ``k = 0..K`` (log-convex for PSD ``A``)."""
    M = as_matrix(A)
    n = M.shape[0]
    v = np.ones(n) if x is None else as_vector(x, n)
    if K < 2:
        raise ValueError("K must be at least 2")
    if ex.is_integral(A) and (x is None or ex.is_integral(x)):
        rows, _ = ex.integerize(A)
        xs, _ = ex.integerize(v if x is None else x)
        ys = list(ex.iterates(rows, xs, (K + 1) // 2))
        values = [ex.dot(ys[(k + 1) // 2], ys[k // 2]) for k in range(K + 1)]
    else:
        ys = [v.copy()]
        for _ in range((K + 1) // 2):
            ys.append(M @ ys[-1])
        values = [float(ys[(k + 1) // 2] @ ys[k // 2]) for k in range(K + 1)]
    return GeneratedSequence(tuple(values), Origin.MOMENT, 0)


def verify_log_shape(seq, shape, strict=False, tol=1e-12):
    """Check ``z_{k-1} z_{k+1} <= z_k^2`` (log-concave) or ``>=`` (log-convex) for every k.

    Sequences of ints/Fractions are compared exactly; floats are compared on
    the log scale, with ``tol`` as the band (strict mode requires the
    inequality to hold by more than ``tol``).
    """
    z = list(seq.values if isinstance(seq, GeneratedSequence) else seq)
    if len(z) < 3:
        raise ValueError("need at least three terms")
    if any(t <= 0 for t in z):
        raise ValueError("log-shape is checked for positive sequences only")
    sign = 1 if shape is Shape.LOG_CONCAVE else -1
    if all(isinstance(t, (int, Fraction, np.integer)) for t in z):
        for a, b, c in zip(z, z[1:], z[2:]):
            gap = sign * (b * b - a * c)  # >= 0 when the shape holds
            if gap < 0 or (strict and gap == 0):
                return False
        return True
    lz = [math.log(float(t)) for t in z]
    for a, b, c in zip(lz, lz[1:], lz[2:]):
        gap = sign * (2 * b - a - c)
        if gap < -tol or (strict and gap <= tol):
            return False
    return True


def two_by_two_D(A, x, k):
    """``D(k) = (A^k x)_2 (A^{k-1} x)_1 - (A^k x)_1 (A^{k-1} x)_2`` by direct iteration."""
    _check_2x2(A, x, k)
    vals, _ = _iterate_entries(A, x, k, lambda y: (y[0], y[1]))
    (p1, p2), (c1, c2) = vals[k - 1], vals[k]
    return c2 * p1 - c1 * p2


def two_by_two_D_closed_form(A, x, k):
    """``(x1 x2 (d - a) - b x2^2 + c x1^2) (ad - bc)^(k-1)`` for ``A = [[a, b], [c, d]]``."""
    _check_2x2(A, x, k)
    vals = _entries(A) + _entries(x)
    a, b, c, d, x1, x2 = vals
    return (x1 * x2 * (d - a) - b * x2 ** 2 + c * x1 ** 2) * (a * d - b * c) ** (k - 1)


def two_by_two_log_indices(A, x):
    """Log indices of a (possibly non-symmetric) 2x2 irreducible nonnegative matrix.

    Returns ``(concavity, convexity)`` as frozensets of 1-based indices, or
    ``None`` when ``det(A) < 0`` and the sign of ``D(k)`` alternates (no
    index exists).
    """
    _check_2x2(A, x, 1)
    a, b, c, d = _entries(A)
    lead = two_by_two_D_closed_form(A, x, 1)
    det = a * d - b * c
    if lead == 0 or det == 0:
        both = frozenset({1, 2})
        return both, both
    if det < 0:
        return None
    return (frozenset({2}), frozenset({1})) if lead > 0 else (frozenset({1}), frozenset({2}))


def _entries(a):
    arr = np.asarray(a, dtype=object).ravel()
    if ex.is_integral(arr):
        return [int(t) for t in arr]
    return [t if isinstance(t, Fraction) else float(t) for t in arr]


def _check_2x2(A, x, k):
    M = as_matrix(A)
    if M.shape != (2, 2):
        raise ValueError("two_by_two_D needs a 2x2 matrix")
    v = as_vector(x, 2)
    if not is_nonnegative(M):
        raise HypothesisError("nonnegative")
    if not is_irreducible(M):
        raise HypothesisError("irreducible")
    if not np.all(v > 0):
        raise HypothesisError("positive", "x must be a positive vector")
    if k < 1:
        raise ValueError("k must be at least 1")
