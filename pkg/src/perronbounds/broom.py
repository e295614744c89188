"""Exact bounds for brooms.

The broom ``B(d, r)`` is a path on ``d`` vertices with ``r`` pendant vertices
attached at one end ``v``. ``B1(d, r)`` is rooted at ``v`` and ``B2(d, r)`` at
the other end of the path. Labellings follow the conventions under which the
closed forms below were derived:

* ``B2_BOTTLENECK``: path ``1..d`` with root 1, pendants ``d+1..d+r`` at ``d``;
* ``B1_BOTTLENECK``: path ``1..d`` with root 1, pendants ``d+1..d+r`` at ``1``;
* ``B1_NECKBOTTLE``: path ``1..d`` with root ``d``, pendants ``d+1..d+r`` at ``d``.

Powers ``M^k 1`` and ``Q^k 1`` are computed by recurrences in ``O(n)`` integer
operations per step, and every closed form is evaluated in ``Fraction``
arithmetic.
"""
import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantError
from .linalg import perron
from .tree import RootedTree, bottleneck_of_rooted_tree, neckbottle

ROOT_TOL = 1e-6


class BroomVariant(enum.Enum):
    B1_BOTTLENECK = "B1_BOTTLENECK"
    B2_BOTTLENECK = "B2_BOTTLENECK"
    B1_NECKBOTTLE = "B1_NECKBOTTLE"


@dataclass(frozen=True)
class BroomParams:
    d: int
    r: int

    def __post_init__(self):
        for name in ("d", "r"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    @property
    def n(self):
        return self.d + self.r


def _params(p, r=None):
    """Accept ``BroomParams``, a ``(d, r)`` pair, or ``d`` with ``r`` separately."""
    if isinstance(p, BroomParams):
        return p
    if isinstance(p, tuple):
        return BroomParams(*p)
    return BroomParams(p, r)


def build_broom(variant, p, r=None):
    """Rooted broom with the labelling described in the module docstring.

    ``variant`` is a :class:`BroomVariant` or one of ``"B1"``/``"B2"``
    (the bottleneck labellings).
    """
    p = _params(p, r)
    variant = {"B1": BroomVariant.B1_BOTTLENECK, "B2": BroomVariant.B2_BOTTLENECK}.get(variant, variant)
    d, n = p.d, p.n
    if variant is BroomVariant.B1_NECKBOTTLE:
        parent = {l: l + 1 for l in range(1, d)}
        root, hub = d, d
    else:
        parent = {l: l - 1 for l in range(2, d + 1)}
        root = 1
        hub = d if variant is BroomVariant.B2_BOTTLENECK else 1
    parent.update({l: hub for l in range(d + 1, n + 1)})
    return RootedTree(n, parent, root)


def broom_matrix(variant, p, r=None):
    """Dense integer matrix whose powers the recurrences track."""
    T = build_broom(variant, p, r)
    if variant is BroomVariant.B1_NECKBOTTLE:
        return neckbottle(T)
    return bottleneck_of_rooted_tree(T)


@dataclass(frozen=True)
class BroomIterates:
    """``values[l - 1]`` is the ``l``-th entry of ``X^k 1``."""

    variant: BroomVariant
    params: BroomParams
    k: int
    values: tuple

    def total(self):
        return sum(self.values)


def _path_part(m, d):
    """``sum_j min(l, j) m_j`` for ``l = 1..d`` via suffix sums."""
    out = []
    suffix = sum(m[:d])
    acc = 0
    for l in range(d):
        acc += suffix
        out.append(acc)
        suffix -= m[l]
    return out


def _step(variant, m, d, r):
    path = _path_part(m, d)
    pend = m[d]
    if variant is BroomVariant.B2_BOTTLENECK:
        top = [path[l] + (l + 1) * r * pend for l in range(d)]
        leaf = top[d - 1] + pend
    elif variant is BroomVariant.B1_BOTTLENECK:
        top = [path[l] + r * pend for l in range(d)]
        leaf = top[0] + pend
    else:
        top = list(path)
        top[d - 1] += r * (m[d - 1] + pend)
        leaf = m[d - 1] + pend
    return top + [leaf] * r


def broom_iterate(variant, p, k):
    """``X^k 1`` for the broom matrix ``X`` of ``variant``, exactly.

    Pendant entries always coincide, so one of them carries the state.
    """
    p = _params(p)
    if k < 0:
        raise ValueError("k must be nonnegative")
    m = [1] * p.n
    for _ in range(k):
        m = _step(variant, m, p.d, p.r)
    return BroomIterates(variant, p, k, tuple(m))


def broom_moment(variant, p, k):
    """``1^T X^k 1``."""
    return broom_iterate(variant, p, k).total()


def _poly_S(d, r):
    d, r = Fraction(d), Fraction(r)
    S1 = (d**3 * r**3
          + d**2 * (7*d**2 + 9*d + 20) * r**2 / 6
          + d * (61*d**4 + 140*d**3 + 315*d**2 + 280*d + 404) * r / 120
          + (61*d**6 + 183*d**5 + 385*d**4 + 465*d**3 + 634*d**2 + 432*d + 720) / 720)
    S2 = (d**2 * r**2
          + d * (5*d**2 + 6*d + 13) * r / 6
          + (5*d**4 + 10*d**3 + 19*d**2 + 14*d + 24) / 24)
    return S1, S2


def _poly_U(d, r):
    d, r = Fraction(d), Fraction(r)
    U1 = (4 * r**3
          + 2 * (d**2 + 3*d + 4) * r**2
          + (13*d**4 + 26*d**3 + 41*d**2 + 28*d + 48) * r / 12
          + d * (d + 1) * (2*d + 1) * (68*d**4 + 136*d**3 + 133*d**2 + 65*d + 18) / 2520)
    U2 = (4 * r**2
          + 2 * (d**2 + d + 2) * r
          + d * (d + 1) * (2*d + 1) * (2*d**2 + 2*d + 1) / 30)
    return U1, U2


def _poly_V(d, r):
    d, r = Fraction(d), Fraction(r)
    V1 = (r**4 + (4*d + 3) * r**3
          + (2*d + 3) * (d + 2) * (d + 1) * r**2 / 2
          + (d + 1) * (4*d**4 + 16*d**3 + 19*d**2 + 21*d + 15) * r / 15
          + d * (2*d + 1) * (d + 1) * (68*d**4 + 136*d**3 + 133*d**2 + 65*d + 18) / 2520)
    V2 = (r**3 + (3*d + 2) * r**2
          + (d + 1) * (2*d**2 + 4*d + 3) * r / 3
          + d * (2*d + 1) * (d + 1) * (2*d**2 + 2*d + 1) / 30)
    return V1, V2


def S_polys(p):
    """``(S1, S2) = ((M2^3 1)_n, (M2^2 1)_n)`` as polynomials in ``d, r``."""
    p = _params(p)
    return _poly_S(p.d, p.r)


def U_polys(p):
    """``(U1, U2) = (1^T Q1^3 1, 1^T Q1^2 1)``."""
    p = _params(p)
    return _poly_U(p.d, p.r)


def V_polys(p):
    """``(V1, V2) = (1^T M1^3 1, 1^T M1^2 1)``."""
    p = _params(p)
    return _poly_V(p.d, p.r)


def a3_upper_B2(p, r=None):
    """``a_3(M2, 1) = S1 / S2``, an upper bound on ``rho(M2)``."""
    S1, S2 = S_polys(_params(p, r))
    return S1 / S2


def c3_lower_B1(p, r=None):
    """``(c_3(Q1, 1), c_3(M1, 1)) = (U1 / U2, V1 / V2)``, two lower bounds on ``rho(M1)``."""
    p = _params(p, r)
    U1, U2 = U_polys(p)
    V1, V2 = V_polys(p)
    return U1 / U2, V1 / V2


def prior_upper_bound(p, r=None):
    """An earlier upper bound on ``rho(M2)``,
    ``f(d, r) = dr + (4d^4 + 20d^3 + 25d^2 + 40d + 1) / (10d^2 + 45d + 5)``.
    """
    p = _params(p, r)
    d, r = p.d, p.r
    return d * r + Fraction(4*d**4 + 20*d**3 + 25*d**2 + 40*d + 1, 10*d**2 + 45*d + 5)


def _poly_ND(d, r):
    d, r = Fraction(d), Fraction(r)
    common = (2*d + 1) * (d + 1) * (2*d**2 - 3*d - 29)
    N = (24 * d**2 * common * r**2
         + 12 * d * common * (d**2 - d + 4) * r
         - (d + 3) * (d + 1) * (2*d**6 + 67*d**5 - 202*d**4 - 131*d**3 - 568*d**2 + 100*d + 192))
    D = 30 * (2*d**2 + 9*d + 1) * (5*d**4 + 20*d**3*r + 10*d**3 + 24*d**2*r**2
                                   + 24*d**2*r + 19*d**2 + 52*d*r + 14*d + 24)
    return N, D


def upper_gap(p, r=None):
    """``f(d, r) - a_3(M2, 1)`` in the factored form ``N(d, r) / D(d, r)``.

    Positive values mean ``a_3`` is the sharper upper bound.
    """
    p = _params(p, r)
    N, D = _poly_ND(p.d, p.r)
    return N / D


def F_crossing(d, r):
    """The cubic ``F(d, r) = (1/dr) (V1 U2 - U1 V2)``, whose sign is that of
    ``c_3(M1, 1) - c_3(Q1, 1)``.

    ``r`` may be any rational, which is what root refinement needs.
    """
    d, r = Fraction(d), Fraction(r)
    c3 = (d - 1) * (d - 2) * (8*d**2 - 21*d + 11) / 60
    c2 = (136*d**6 - 868*d**5 + 1540*d**4 - 1015*d**3 + 2674*d**2 - 4417*d - 570) / 2520
    c1 = (d - 1) * (d + 1) * (24*d**5 - 16*d**4 - 242*d**3 + 355*d**2 - 116*d - 184) / 840
    c0 = (d + 1) * (2*d + 1) * (8*d**7 + 58*d**6 + 284*d**5 - 575*d**4 - 3763*d**3
                                + 2677*d**2 + 4641*d + 2970) / 37800
    return c3 * r**3 - c2 * r**2 - c1 * r - c0


def crossing_interval(d):
    """``(0.4 d^2 - 1, 0.42 d^2 + 2)`` as exact rationals."""
    return Fraction(2, 5) * d * d - 1, Fraction(21, 50) * d * d + 2


def find_r0(d, tol=ROOT_TOL):
    """Positive root of ``F(d, .)`` for ``d >= 3``.

    Integers ``r = 1, 2, ...`` are scanned with exact signs until ``F`` turns
    positive, then the bracketing unit interval is bisected in exact
    arithmetic to width ``tol``.

    Raises
    ------
    InvariantError
        If no sign change appears by ``r = 2 (0.42 d^2 + 2)``.
    """
    if not isinstance(d, int) or d < 3:
        raise ValueError("find_r0 needs an integer d >= 3")
    limit = math.ceil(2 * crossing_interval(d)[1])
    prev = F_crossing(d, 0)
    if prev >= 0:
        raise InvariantError(f"F({d}, 0) is not negative")
    for r in range(1, limit + 1):
        val = F_crossing(d, r)
        if val == 0:
            return float(r)
        if val > 0:
            lo, hi = Fraction(r - 1), Fraction(r)
            while hi - lo > tol:
                mid = (lo + hi) / 2
                if F_crossing(d, mid) > 0:
                    hi = mid
                else:
                    lo = mid
            return float((lo + hi) / 2)
    raise InvariantError(f"F({d}, r) has no sign change for r <= {limit}")


@dataclass(frozen=True)
class SweepRow:
    r: int
    c3_M: Fraction
    c3_Q: Fraction
    rho_M: float


def crossing_sweep(d, r_max):
    """``(r, c_3(M1, 1), c_3(Q1, 1), rho(M1))`` for ``B1(d, r)``, ``r = 1..r_max``.

    The two bounds are exact; ``rho`` comes from power iteration on the dense
    bottleneck matrix.
    """
    if d < 1 or r_max < 1:
        raise ValueError("d and r_max must be positive")
    rows = []
    for r in range(1, r_max + 1):
        p = BroomParams(d, r)
        via_Q, via_M = c3_lower_B1(p)
        rho = perron(broom_matrix(BroomVariant.B1_BOTTLENECK, p)).value
        rows.append(SweepRow(r, via_M, via_Q, rho))
    return rows
