"""Small randomized property suites, run by ``perronbounds selfcheck``.

Each suite returns ``(checked, failures)``; the instance generators are also
used by the test suite.
"""
from fractions import Fraction

import numpy as np

from . import bounds, broom, logindex, tree
from .linalg import is_irreducible


def random_positive_matrix(rng, n):
    """Entries uniform in (0, 1]."""
    return 1.0 - rng.random((n, n))


def random_positive_vector(rng, n):
    return 1.0 - rng.random(n)


def random_psd_integer_matrix(rng, n, high=3):
    """``B^T B`` with ``B`` uniform in ``0..high``, redrawn until irreducible and nonzero."""
    while True:
        B = rng.integers(0, high + 1, size=(n + 1, n))
        A = B.T @ B
        if A.any() and is_irreducible(A):
            return A


def suite_ratio_monotonicity(rng, count=20, K=12):
    """Exact strict monotonicity of ``a_k`` and ``b_k`` on positive matrices."""
    failures = []
    for t in range(count):
        n = int(rng.integers(2, 6))
        A = random_positive_matrix(rng, n)
        x = random_positive_vector(rng, n)
        a, b = bounds.ratio_bounds(A, x, K, exact=True)
        if bounds.classify_monotonicity(a, 0, 0).classification is not bounds.Monotonicity.STRICTLY_DECREASING:
            failures.append(f"a_seq not strictly decreasing (instance {t})")
        if bounds.classify_monotonicity(b, 0, 0).classification is not bounds.Monotonicity.STRICTLY_INCREASING:
            failures.append(f"b_seq not strictly increasing (instance {t})")
    return count, failures


def suite_log_indices(rng, count=15):
    """Reported index sets contain the extreme ratios of exact iterates at large k."""
    failures = []
    for t in range(count):
        n = int(rng.integers(2, 6))
        A = random_psd_integer_matrix(rng, n)
        res = logindex.find_log_indices(A)
        rows = [[int(v) for v in row] for row in A]
        ys = list(logindex.ex.iterates(rows, [1] * n, 60))
        for k in range(40, 61):
            r = [Fraction(ys[k][i], ys[k - 1][i]) for i in range(n)]
            hi, lo = max(r), min(r)
            if not {i + 1 for i in range(n) if r[i] == hi} <= res.concavity_indices:
                failures.append(f"argmax outside concavity set (instance {t}, k={k})")
                break
            if not {i + 1 for i in range(n) if r[i] == lo} <= res.convexity_indices:
                failures.append(f"argmin outside convexity set (instance {t}, k={k})")
                break
    return count, failures


def suite_characteristic_sets(rng, count=20):
    """Perron-branch and Fiedler-sign methods agree."""
    failures = []
    for t in range(count):
        G = tree.random_tree(int(rng.integers(4, 25)), rng)
        a = tree.characteristic_set_perron(G)
        b = tree.characteristic_set_fiedler(G)
        if (a.tree_type, a.vertices) != (b.tree_type, b.vertices):
            failures.append(f"methods disagree on {G!r}")
    return count, failures


def suite_bottleneck_duality(rng, count=20):
    """Combinatorial bottleneck matrix, Laplacian inverse and ``N^T N`` coincide."""
    failures = []
    for t in range(count):
        T = tree.random_rooted_tree(int(rng.integers(1, 20)), rng)
        M = tree.bottleneck_of_rooted_tree(T)
        N = tree.path_matrix(T)
        if not np.array_equal(M, N.T @ N):
            failures.append(f"M != N^T N (instance {t})")
        if T.n > 0 and not np.allclose(M, tree.bottleneck_at(T.with_pendant_at_root(), T.n + 1), atol=1e-9):
            failures.append(f"M != inverse Laplacian block (instance {t})")
    return count, failures


def suite_broom_closed_forms(grid=6):
    """Closed forms against the recurrences on ``1..grid`` squared."""
    failures = []
    V = broom.BroomVariant
    for d in range(1, grid + 1):
        for r in range(1, grid + 1):
            p = broom.BroomParams(d, r)
            m2 = broom.broom_iterate(V.B2_BOTTLENECK, p, 2).values
            m3 = broom.broom_iterate(V.B2_BOTTLENECK, p, 3).values
            if broom.a3_upper_B2(p) != Fraction(m3[-1], m2[-1]):
                failures.append(f"S1/S2 mismatch at {p}")
            via_Q, via_M = broom.c3_lower_B1(p)
            q = Fraction(broom.broom_moment(V.B1_NECKBOTTLE, p, 3), broom.broom_moment(V.B1_NECKBOTTLE, p, 2))
            m = Fraction(broom.broom_moment(V.B1_BOTTLENECK, p, 3), broom.broom_moment(V.B1_BOTTLENECK, p, 2))
            if via_Q != q or via_M != m:
                failures.append(f"U/V mismatch at {p}")
    return grid * grid, failures


def run_all(seed=0):
    """Run every suite with one seeded generator; returns a dict of results."""
    rng = np.random.default_rng(seed)
    suites = {
        "ratio_monotonicity": lambda: suite_ratio_monotonicity(rng),
        "log_indices": lambda: suite_log_indices(rng),
        "characteristic_sets": lambda: suite_characteristic_sets(rng),
        "bottleneck_duality": lambda: suite_bottleneck_duality(rng),
        "broom_closed_forms": suite_broom_closed_forms,
    }
    out = {}
    for name, run in suites.items():
        checked, failures = run()
        out[name] = {"checked": checked, "passed": not failures, "failures": failures}
    return out
