"""Trees, their bottleneck, path and neckbottle matrices, Perron branches and
characteristic sets.

Vertices are labelled ``1..n`` throughout; row and column ``i - 1`` of every
matrix built here belongs to vertex ``i`` (for :func:`bottleneck_at` the
deleted vertex is skipped, the remaining labels keep their order).

For an unweighted rooted tree the bottleneck matrix has integer entries,
``M[i, j]`` being the number of vertices shared by the paths from ``i`` and
from ``j`` to the root. It factors as ``M = N^T N`` with the 0/1 path matrix
``N``; the neckbottle matrix ``Q = N N^T`` has the same spectrum.
"""
import enum
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from . import bounds
from .errors import AmbiguousFiedlerError, InvariantError
from .linalg import perron

FIEDLER_ZERO_TOL = 1e-7
PERRON_TIE_TOL = 1e-9
GAMMA_TOL = 1e-10


class TreeType(enum.Enum):
    TYPE_I = "TYPE_I"
    TYPE_II = "TYPE_II"


class Method(enum.Enum):
    PERRON_BRANCH = "PERRON_BRANCH"
    FIEDLER_SIGN = "FIEDLER_SIGN"


def _check_label(v, n):
    if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or not 1 <= v <= n:
        raise ValueError(f"vertex labels must be integers in 1..{n}, got {v!r}")
    return int(v)


class WeightedGraph:
    """Simple undirected connected graph on ``1..n`` with positive edge weights.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : iterable
        ``(u, v)`` or ``(u, v, w)`` triples; a missing weight means 1.
    """

    def __init__(self, n, edges):
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"vertex count must be a positive integer, got {n!r}")
        self.n = int(n)
        self._adj = {v: {} for v in range(1, self.n + 1)}
        normalized = []
        for e in edges:
            if len(e) == 2:
                u, v, w = e[0], e[1], 1
            elif len(e) == 3:
                u, v, w = e
            else:
                raise ValueError(f"edge must be (u, v) or (u, v, w), got {e!r}")
            u, v = _check_label(u, self.n), _check_label(v, self.n)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if v in self._adj[u]:
                raise ValueError(f"duplicate edge {u}-{v}")
            if not (isinstance(w, (int, float, Fraction, np.integer, np.floating)) and math.isfinite(w) and w > 0):
                raise ValueError(f"edge weight must be a positive finite number, got {w!r}")
            self._adj[u][v] = w
            self._adj[v][u] = w
            normalized.append((u, v, w))
        self.edges = tuple(normalized)
        self.connected = len(self._component(1, None)) == self.n

    @property
    def weighted(self):
        return any(w != 1 for _, _, w in self.edges)

    def neighbors(self, v):
        return sorted(self._adj[v])

    def weight(self, u, v):
        return self._adj[u][v]

    def is_tree(self):
        return self.connected and len(self.edges) == self.n - 1

    def _component(self, start, removed):
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if w != removed and w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def components_without(self, v):
        """Vertex sets of the components of ``G - v``, ordered by smallest label."""
        left = set(range(1, self.n + 1)) - {v}
        comps = []
        while left:
            c = self._component(min(left), v)
            comps.append(frozenset(c))
            left -= c
        return comps

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, edges={list(self.edges)})"


class RootedTree:
    """Unweighted tree on ``1..n`` given by a child-to-parent map and a root."""

    def __init__(self, n, parent, root):
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"vertex count must be a positive integer, got {n!r}")
        self.n = int(n)
        self.root = _check_label(root, self.n)
        parent = {_check_label(c, self.n): _check_label(p, self.n) for c, p in dict(parent).items()}
        if self.root in parent:
            raise ValueError("the root cannot have a parent")
        if set(parent) != set(range(1, self.n + 1)) - {self.root}:
            raise ValueError("every non-root vertex needs exactly one parent")
        self.parent = parent
        self._children = {v: [] for v in range(1, self.n + 1)}
        for c, p in sorted(parent.items()):
            self._children[p].append(c)
        depth = {self.root: 0}
        queue = deque([self.root])
        while queue:
            u = queue.popleft()
            for c in self._children[u]:
                depth[c] = depth[u] + 1
                queue.append(c)
        if len(depth) != self.n:
            raise ValueError("parent map contains a cycle or is disconnected from the root")
        self._depth = depth

    @classmethod
    def from_edges(cls, n, edges, root):
        """Orient an undirected edge list away from ``root``."""
        G = WeightedGraph(n, [(u, v) for u, v, *_ in edges])
        if not G.is_tree():
            raise ValueError("edges do not form a tree")
        parent = {}
        queue = deque([root])
        seen = {root}
        while queue:
            u = queue.popleft()
            for w in G.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    parent[w] = u
                    queue.append(w)
        return cls(n, parent, root)

    def children(self, v):
        return list(self._children[v])

    def depth(self, v):
        """Number of edges between ``v`` and the root."""
        return self._depth[v]

    @property
    def eccentricity(self):
        """Eccentricity of the root, in edges."""
        return max(self._depth.values())

    def path_to_root(self, v):
        """Vertices on the path from ``v`` to the root, ``v`` first."""
        out = [v]
        while out[-1] != self.root:
            out.append(self.parent[out[-1]])
        return out

    def edges(self):
        return [(p, c) for c, p in sorted(self.parent.items())]

    def to_graph(self):
        return WeightedGraph(self.n, self.edges())

    def depth_first_order(self):
        """Vertices in preorder from the root, children visited by label."""
        order, stack = [], [self.root]
        while stack:
            u = stack.pop()
            order.append(u)
            stack.extend(reversed(self._children[u]))
        return order

    def relabel_depth_first(self):
        """Return ``(tree, mapping)`` with vertices renumbered in preorder.

        ``mapping[old] = new``; the root becomes 1 and every parent gets a
        smaller label than its children, which makes the path matrix upper
        triangular.
        """
        mapping = {old: new for new, old in enumerate(self.depth_first_order(), start=1)}
        parent = {mapping[c]: mapping[p] for c, p in self.parent.items()}
        return RootedTree(self.n, parent, 1), mapping

    def with_pendant_at_root(self):
        """The graph on ``1..n+1`` obtained by hanging vertex ``n + 1`` off the root."""
        return WeightedGraph(self.n + 1, self.edges() + [(self.root, self.n + 1)])

    def __repr__(self):
        return f"RootedTree(n={self.n}, root={self.root}, parent={self.parent})"


def random_rooted_tree(n, rng):
    """Rooted tree with uniformly random labelled shape (via a Pruefer code), root 1."""
    return RootedTree.from_edges(n, random_tree(n, rng).edges, 1)


def random_tree(n, rng):
    """Uniformly random labelled tree on ``1..n`` from a random Pruefer sequence.

    ``rng`` is a ``numpy.random.Generator``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return WeightedGraph(1, [])
    if n == 2:
        return WeightedGraph(2, [(1, 2)])
    code = [int(c) + 1 for c in rng.integers(0, n, size=n - 2)]
    degree = [1] * (n + 1)
    for c in code:
        degree[c] += 1
    edges = []
    for c in code:
        leaf = next(v for v in range(1, n + 1) if degree[v] == 1)
        edges.append((leaf, c))
        degree[leaf] -= 1
        degree[c] -= 1
    u, w = (v for v in range(1, n + 1) if degree[v] == 1)
    edges.append((u, w))
    return WeightedGraph(n, edges)


def laplacian(G):
    """Weighted Laplacian: weighted degrees on the diagonal, ``-w`` for each edge."""
    if not G.connected:
        raise ValueError("the Laplacian is only built for connected graphs")
    L = np.zeros((G.n, G.n))
    for u, v, w in G.edges:
        w = float(w)
        L[u - 1, v - 1] -= w
        L[v - 1, u - 1] -= w
        L[u - 1, u - 1] += w
        L[v - 1, v - 1] += w
    return L


def bottleneck_at(G, v):
    """Inverse of the Laplacian with row and column ``v`` deleted.

    The principal submatrix is positive definite for connected ``G``; the
    inverse is obtained from its Cholesky factorization.
    """
    v = _check_label(v, G.n)
    if G.n < 2:
        raise ValueError("need at least two vertices")
    keep = [i for i in range(G.n) if i != v - 1]
    L = laplacian(G)[np.ix_(keep, keep)]
    try:
        factor = cho_factor(L, lower=True)
    except LinAlgError:
        raise InvariantError("Laplacian principal submatrix is not positive definite") from None
    M = cho_solve(factor, np.eye(len(keep)))
    return (M + M.T) / 2


def bottleneck_of_rooted_tree(T):
    """Integer bottleneck matrix: ``M[i, j]`` counts common vertices of the root paths."""
    paths = [set(T.path_to_root(v)) for v in range(1, T.n + 1)]
    M = np.empty((T.n, T.n), dtype=np.int64)
    for i in range(T.n):
        for j in range(i, T.n):
            M[i, j] = M[j, i] = len(paths[i] & paths[j])
    return M


def path_matrix(T):
    """0/1 matrix with ``N[i, j] = 1`` iff vertex ``i`` is on the path from ``j`` to the root."""
    N = np.zeros((T.n, T.n), dtype=np.int64)
    for j in range(1, T.n + 1):
        for i in T.path_to_root(j):
            N[i - 1, j - 1] = 1
    return N


def neckbottle(T):
    """``Q = N N^T``."""
    N = path_matrix(T)
    return N @ N.T


def _rho_symmetric(S):
    return float(np.linalg.eigvalsh(S)[-1])


@dataclass(frozen=True)
class Branch:
    vertices: frozenset
    perron_value: float
    is_perron: bool


def perron_branches(G, v):
    """Components of ``G - v`` with the Perron values of their bottleneck blocks.

    Branches whose value ties the maximum within ``PERRON_TIE_TOL`` (relative)
    are flagged as Perron branches.
    """
    v = _check_label(v, G.n)
    M = bottleneck_at(G, v)
    pos = {u: k for k, u in enumerate(i for i in range(1, G.n + 1) if i != v)}
    out = []
    for comp in G.components_without(v):
        idx = [pos[u] for u in sorted(comp)]
        out.append((comp, _rho_symmetric(M[np.ix_(idx, idx)])))
    top = max(val for _, val in out)
    return [Branch(c, val, val >= top * (1 - PERRON_TIE_TOL)) for c, val in out]


@dataclass(frozen=True)
class CharacteristicSetResult:
    """Characteristic set of a tree.

    For ``TYPE_II`` the two vertices ``(i, j)`` satisfy ``i < j`` and
    ``gamma`` solves ``rho(M1 - gamma J) = rho(M2 - (1 / w - gamma) J)`` where
    ``M1`` is the bottleneck matrix of the branch at ``j`` containing ``i``,
    ``M2`` that of the branch at ``i`` containing ``j`` and ``w`` the weight
    of the edge ``ij`` (1 for unweighted trees), so ``0 < gamma < 1 / w``.
    """

    tree_type: TreeType
    vertices: tuple
    algebraic_connectivity: float
    gamma: float = None
    method: Method = None
    edge_weight: float = 1.0

    def __post_init__(self):
        if self.tree_type is TreeType.TYPE_I:
            if len(self.vertices) != 1 or self.gamma is not None:
                raise InvariantError("a Type I set has one vertex and no gamma")
        elif len(self.vertices) != 2 or self.gamma is None or not 0 < self.gamma * self.edge_weight < 1:
            raise InvariantError("a Type II set has two vertices and gamma in (0, 1 / w)")


def algebraic_connectivity(G):
    """Second smallest Laplacian eigenvalue."""
    if G.n < 2:
        raise ValueError("algebraic connectivity needs at least two vertices")
    return float(np.linalg.eigvalsh(laplacian(G))[1])


def _require_tree(G):
    if not isinstance(G, WeightedGraph):
        G = G.to_graph()
    if not G.is_tree():
        raise ValueError("input is not a tree")
    if G.n < 2:
        raise ValueError("characteristic sets need at least two vertices")
    return G


def _branch_block(G, at, containing):
    """Bottleneck matrix of the branch at ``at`` that contains ``containing``."""
    M = bottleneck_at(G, at)
    pos = {u: k for k, u in enumerate(i for i in range(1, G.n + 1) if i != at)}
    comp = next(c for c in G.components_without(at) if containing in c)
    idx = [pos[u] for u in sorted(comp)]
    return M[np.ix_(idx, idx)]


def solve_gamma(G, i, j, tol=GAMMA_TOL):
    """Bisect for ``gamma`` in ``[0, 1 / w]`` balancing the two branch Perron values.

    Returns ``(gamma, rho)`` with ``rho = rho(M1 - gamma J)``, so that
    ``1 / rho`` is the algebraic connectivity when ``{i, j}`` is the
    characteristic edge. Both shifted matrices are symmetric, and their
    Perron value is taken as the top eigenvalue from a symmetric solver.
    """
    M1 = _branch_block(G, j, i)
    M2 = _branch_block(G, i, j)
    J1 = np.ones_like(M1)
    J2 = np.ones_like(M2)
    rho = _rho_symmetric
    span = 1.0 / float(G.weight(i, j))

    def gap(g):
        return rho(M1 - g * J1) - rho(M2 - (span - g) * J2)

    lo, hi = 0.0, span
    if gap(lo) < 0 or gap(hi) > 0:
        raise InvariantError(f"no balancing gamma on the edge {i}-{j}")
    while hi - lo > tol * span:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    g = 0.5 * (lo + hi)
    return g, rho(M1 - g * J1)


def _type_two_result(G, i, j, a, method):
    i, j = min(i, j), max(i, j)
    gamma, _ = solve_gamma(G, i, j)
    return CharacteristicSetResult(TreeType.TYPE_II, (i, j), a, gamma, method, float(G.weight(i, j)))


def characteristic_set_perron(T):
    """Characteristic set from Perron branches.

    The tree is Type I at the unique vertex with two or more Perron branches;
    otherwise it is Type II at the adjacent pair ``i, j`` where the branch at
    each one containing the other is its unique Perron branch.
    """
    G = _require_tree(T)
    a = algebraic_connectivity(G)
    branches = {v: perron_branches(G, v) for v in range(1, G.n + 1)}
    multi = [v for v, bs in branches.items() if sum(b.is_perron for b in bs) >= 2]
    if len(multi) > 1:
        raise InvariantError(f"several vertices have two or more Perron branches: {multi}")
    if multi:
        return CharacteristicSetResult(TreeType.TYPE_I, (multi[0],), a, None, Method.PERRON_BRANCH)

    def unique_perron_contains(at, other):
        return other in next(b for b in branches[at] if b.is_perron).vertices

    pairs = [(u, v) for u, v, _ in G.edges if unique_perron_contains(u, v) and unique_perron_contains(v, u)]
    if len(pairs) != 1:
        raise InvariantError(f"expected one characteristic edge, found {pairs}")
    return _type_two_result(G, *pairs[0], a, Method.PERRON_BRANCH)


def fiedler_vector(G):
    """``(a(G), y)`` with ``y`` a unit eigenvector for the algebraic connectivity."""
    w, V = np.linalg.eigh(laplacian(G))
    return float(w[1]), V[:, 1]


def characteristic_set_fiedler(T, zero_tol=FIEDLER_ZERO_TOL):
    """Characteristic set from the sign pattern of a Fiedler vector.

    An entry counts as zero when its magnitude is at most ``zero_tol`` times
    the largest magnitude. Type I is a zero vertex with a nonzero neighbour;
    Type II is an edge whose ends carry strictly opposite signs.

    Raises
    ------
    AmbiguousFiedlerError
        If the pattern does not single out one vertex or one edge.
    """
    G = _require_tree(T)
    a, y = fiedler_vector(G)
    band = zero_tol * float(np.max(np.abs(y)))
    sign = {v: 0 if abs(y[v - 1]) <= band else (1 if y[v - 1] > 0 else -1) for v in range(1, G.n + 1)}
    zeros = [v for v in sign if sign[v] == 0 and any(sign[u] != 0 for u in G.neighbors(v))]
    edges = [(u, v) for u, v, _ in G.edges if sign[u] * sign[v] == -1]
    if len(zeros) == 1 and not edges:
        return CharacteristicSetResult(TreeType.TYPE_I, (zeros[0],), a, None, Method.FIEDLER_SIGN)
    if len(edges) == 1 and not zeros:
        return _type_two_result(G, *edges[0], a, Method.FIEDLER_SIGN)
    raise AmbiguousFiedlerError(
        f"Fiedler sign pattern is ambiguous: zero vertices {zeros}, sign-change edges {edges}"
    )


@dataclass(frozen=True)
class TreeBoundReport:
    """Bounds on the Perron value of a rooted tree.

    Sequences hold exact ``Fraction`` values for ``k = 1..K``.
    ``pi`` is a float because it is a square root.
    """

    n: int
    K: int
    norm1: int
    rho_c: Fraction
    pi: float
    a_M: tuple
    b_M: tuple
    c_M: tuple
    c_Q: tuple
    rho: float


def bound_report(T, K=10):
    """Bounds ``||M||_1``, ``rho_c(N)``, ``pi(N)``, ``a_k, b_k, c_k`` of ``M`` and
    ``c_k`` of ``Q`` for ``k <= K``, together with ``rho(M)``.

    The orderings ``rho_c < pi < c_k(Q)`` for ``k >= 3`` and
    ``a_k(M) < ||M||_1`` for ``k >= 2`` are checked exactly (the squares of
    ``pi`` are compared, not the roots); for a single vertex every bound is 1
    and the strict orderings do not apply.

    Raises
    ------
    InvariantError
        If an ordering fails.
    """
    if K < 3:
        raise ValueError("bound_report needs K >= 3")
    M = bottleneck_of_rooted_tree(T)
    Q = neckbottle(T)
    a_M, b_M = bounds.ratio_bounds(M, K=K, exact=True)
    c_M = bounds.c_seq(M, K=K, exact=True)
    c_Q = bounds.c_seq(Q, K=K, exact=True)
    norm1 = int(np.abs(M).sum(axis=0).max())
    rho_c = c_Q[2]
    pi_sq = c_Q[2] * c_Q[3]
    rho = perron(M).value
    if T.n > 1:
        if a_M[1] != norm1:
            raise InvariantError("a_1(M, 1) differs from ||M||_1")
        if not rho_c * rho_c < pi_sq:
            raise InvariantError("rho_c(N) < pi(N) fails")
        for k in range(3, K + 1):
            if not pi_sq < c_Q[k] * c_Q[k]:
                raise InvariantError(f"pi(N) < c_{k}(Q, 1) fails")
        for k in range(2, K + 1):
            if not a_M[k] < norm1:
                raise InvariantError(f"a_{k}(M, 1) < ||M||_1 fails")
    return TreeBoundReport(
        n=T.n, K=K, norm1=norm1, rho_c=rho_c, pi=math.sqrt(pi_sq),
        a_M=a_M.values, b_M=b_M.values, c_M=c_M.values, c_Q=c_Q.values, rho=rho,
    )
