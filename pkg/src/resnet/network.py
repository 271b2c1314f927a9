"""Electrical calculus on finite weighted graphs.

A network is a finite connected graph with strictly positive symmetric edge
conductances c(x,y). It carries the energy form

    E(f,g) = (1/2) sum_{x,y} c(x,y) (f(x)-f(y)) (g(x)-g(y)),

the generator (Delta f)(x) = (1/mu({x})) sum_y c(x,y) (f(y)-f(x)) for a
full-support vertex measure mu, and the effective resistance

    R(x,y)^{-1} = inf { E(f,f) : f(x)=1, f(y)=0 }.

The map network -> resistance matrix is invertible; `network_from_resistance`
realizes the inverse via the Green matrix of a grounded base vertex and doubles
as the membership test for resistance metrics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from ._linalg import LD, solve_spd, symmetric_inverse
from .errors import NotAResistanceMetric, ValidationError

Vertex = object  # opaque hashable label; strings and ints in practice

#: default absolute threshold for conductance sign/drop decisions in reconstruction
RECONSTRUCTION_TOL = 1e-9


class Network:
    """Immutable finite connected graph with positive edge conductances.

    Vertices are opaque hashable labels; their canonical order is fixed at
    construction (order of first appearance, or the explicit `vertices`
    sequence) so that matrices and files derived from the network are
    reproducible bit-for-bit.
    """

    def __init__(self, edges, vertices: Sequence[Vertex] | None = None):
        """edges: mapping {(u, v): c} or iterable of (u, v, c) triples."""
        if isinstance(edges, Mapping):
            triples = [(u, v, c) for (u, v), c in edges.items()]
        else:
            triples = [(u, v, c) for u, v, c in edges]

        order: dict[Vertex, int] = {}
        if vertices is not None:
            for v in vertices:
                if v in order:
                    raise ValidationError(f"duplicate vertex {v!r}")
                order[v] = len(order)
        for u, v, _ in triples:
            if u not in order:
                order[u] = len(order)
            if v not in order:
                order[v] = len(order)
        if not order:
            raise ValidationError("network needs at least one vertex")

        conductances: dict[tuple[Vertex, Vertex], float] = {}
        for u, v, c in triples:
            if u == v:
                raise ValidationError(f"self-loop at {u!r}")
            c = float(c)
            if not np.isfinite(c) or c <= 0:
                raise ValidationError(f"conductance c({u!r},{v!r}) = {c} must be > 0")
            key = (u, v) if order[u] < order[v] else (v, u)
            if key in conductances:
                raise ValidationError(f"duplicate edge {key!r}")
            conductances[key] = c

        self._index = order
        self.vertices: tuple[Vertex, ...] = tuple(order)
        n = len(self.vertices)
        self.conductances = dict(
            sorted(conductances.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]]))
        )

        # adjacency in index space, neighbor lists sorted by index
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for (u, v), c in self.conductances.items():
            iu, iv = order[u], order[v]
            adj[iu].append((iv, c))
            adj[iv].append((iu, c))
        self._nbr = []
        self._nbr_cond = []
        for lst in adj:
            lst.sort()
            self._nbr.append(np.array([i for i, _ in lst], dtype=np.intp))
            self._nbr_cond.append(np.array([c for _, c in lst], dtype=np.float64))
        self._cx = np.array([row.sum() for row in self._nbr_cond], dtype=np.float64)

        if n > 1:
            self._check_connected()

    def _check_connected(self):
        n = len(self.vertices)
        seen = np.zeros(n, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            i = stack.pop()
            for j in self._nbr[i]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        if not seen.all():
            missing = [self.vertices[i] for i in np.flatnonzero(~seen)[:5]]
            raise ValidationError(f"graph is disconnected (e.g. {missing} unreachable)")

    # -- basic queries ------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.conductances)

    def index(self, v: Vertex) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise ValidationError(f"unknown vertex {v!r}") from None

    def __contains__(self, v: Vertex) -> bool:
        return v in self._index

    def conductance(self, u: Vertex, v: Vertex) -> float:
        """c(u,v), or 0.0 for a non-edge."""
        iu, iv = self.index(u), self.index(v)
        key = (u, v) if iu < iv else (v, u)
        return self.conductances.get(key, 0.0)

    def vertex_conductance(self, v: Vertex) -> float:
        """c(v) = sum_y c(v,y)."""
        return float(self._cx[self.index(v)])

    def degree(self, v: Vertex) -> int:
        return len(self._nbr[self.index(v)])

    def neighbors(self, v: Vertex) -> tuple[Vertex, ...]:
        return tuple(self.vertices[i] for i in self._nbr[self.index(v)])

    def laplacian(self, dtype=np.float64) -> np.ndarray:
        """Dense weighted graph Laplacian L = D - C (row sums zero)."""
        n = self.n_vertices
        L = np.zeros((n, n), dtype=dtype)
        for (u, v), c in self.conductances.items():
            iu, iv = self._index[u], self._index[v]
            c = dtype(c) if dtype is not np.float64 else c
            L[iu, iv] -= c
            L[iv, iu] -= c
            L[iu, iu] += c
            L[iv, iv] += c
        return L

    def laplacian_sparse(self) -> sp.csc_matrix:
        n = self.n_vertices
        rows, cols, vals = [], [], []
        for (u, v), c in self.conductances.items():
            iu, iv = self._index[u], self._index[v]
            rows += [iu, iv, iu, iv]
            cols += [iv, iu, iu, iv]
            vals += [-c, -c, c, c]
        return sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsc()

    def __repr__(self):
        return f"Network({self.n_vertices} vertices, {self.n_edges} edges)"

    def __eq__(self, other):
        return (
            isinstance(other, Network)
            and self.vertices == other.vertices
            and self.conductances == other.conductances
        )

    def __hash__(self):
        return hash((self.vertices, tuple(self.conductances.items())))


class VertexMeasure:
    """Strictly positive weight per vertex (a full-support measure)."""

    def __init__(self, weights: Mapping[Vertex, float]):
        w = {}
        for v, m in weights.items():
            m = float(m)
            if not np.isfinite(m) or m <= 0:
                raise ValidationError(f"measure weight mu({v!r}) = {m} must be > 0")
            w[v] = m
        if not w:
            raise ValidationError("measure needs at least one atom")
        self.weights = w

    def __getitem__(self, v: Vertex) -> float:
        try:
            return self.weights[v]
        except KeyError:
            raise ValidationError(f"measure has no weight for vertex {v!r}") from None

    def total(self) -> float:
        return float(sum(self.weights.values()))

    def as_array(self, net: Network) -> np.ndarray:
        """Weights in the network's canonical vertex order; checks full support."""
        try:
            return np.array([self.weights[v] for v in net.vertices], dtype=np.float64)
        except KeyError as e:
            raise ValidationError(f"measure misses vertex {e.args[0]!r}") from None

    def __repr__(self):
        return f"VertexMeasure({len(self.weights)} atoms, total={self.total():g})"


@dataclass(frozen=True)
class ResistanceMatrix:
    """All-pairs effective resistances in canonical vertex order.

    `values` is kept in extended precision: reconstruction of conductances is
    sensitive enough that float64 rounding of the entries alone moves recovered
    conductances by more than the round-trip tolerance on ill-conditioned nets.
    """

    labels: tuple[Vertex, ...]
    values: np.ndarray  # (n, n) longdouble

    def __post_init__(self):
        v = np.asarray(self.values)
        n = len(self.labels)
        if v.shape != (n, n):
            raise ValidationError(f"matrix shape {v.shape} does not match {n} labels")
        if n and (np.abs(np.diag(v.astype(np.float64))) > 0).any():
            raise ValidationError("resistance matrix must have zero diagonal")
        if n and not np.array_equal(v, v.T):
            raise ValidationError("resistance matrix must be symmetric")

    @classmethod
    def from_values(cls, labels, values) -> "ResistanceMatrix":
        """Build from any square array; symmetrizes exactly by averaging."""
        v = np.asarray(values, dtype=LD).copy()
        v = (v + v.T) / 2
        np.fill_diagonal(v, 0)
        v.flags.writeable = False
        return cls(tuple(labels), v)

    def index(self, v: Vertex) -> int:
        try:
            return self.labels.index(v)
        except ValueError:
            raise ValidationError(f"unknown vertex {v!r}") from None

    def __getitem__(self, pair) -> float:
        u, v = pair
        return float(self.values[self.index(u), self.index(v)])

    def as_float(self) -> np.ndarray:
        """float64 copy of the values, for consumers that do bulk numerics."""
        return self.values.astype(np.float64)

    @property
    def n(self) -> int:
        return len(self.labels)

    def submatrix(self, labels: Sequence[Vertex]) -> "ResistanceMatrix":
        idx = [self.index(v) for v in labels]
        return ResistanceMatrix.from_values(tuple(labels), self.values[np.ix_(idx, idx)])

    def __repr__(self):
        return f"ResistanceMatrix({self.n} vertices)"


# -- energy form and generator ----------------------------------------------


def _as_vector(net: Network, f: Mapping[Vertex, float]) -> np.ndarray:
    try:
        return np.array([f[v] for v in net.vertices], dtype=np.float64)
    except KeyError as e:
        raise ValidationError(f"potential undefined at vertex {e.args[0]!r}") from None


def energy(net: Network, f: Mapping[Vertex, float], g: Mapping[Vertex, float] | None = None) -> float:
    """Bilinear energy form E(f,g); E(f,f) with g omitted.

    E(f,g) = (1/2) sum_{x,y} c(x,y)(f(x)-f(y))(g(x)-g(y)), i.e. one term per
    undirected edge.
    """
    fv = _as_vector(net, f)
    gv = fv if g is None else _as_vector(net, g)
    total = 0.0
    for (u, v), c in net.conductances.items():
        iu, iv = net._index[u], net._index[v]
        total += c * (fv[iu] - fv[iv]) * (gv[iu] - gv[iv])
    return float(total)


def laplacian_apply(
    net: Network, mu: VertexMeasure, f: Mapping[Vertex, float]
) -> dict[Vertex, float]:
    """Generator action (Delta f)(x) = (1/mu({x})) sum_y c(x,y)(f(y)-f(x)).

    Satisfies energy(net, f, g) = -sum_x (Delta f)(x) g(x) mu({x}).
    """
    fv = _as_vector(net, f)
    mv = mu.as_array(net)
    out = {}
    for i, v in enumerate(net.vertices):
        acc = float(np.dot(net._nbr_cond[i], fv[net._nbr[i]] - fv[i]))
        out[v] = acc / mv[i]
    return out


# -- effective resistance ----------------------------------------------------


def harmonic_potential(net: Network, x: Vertex, y: Vertex) -> dict[Vertex, float]:
    """The energy minimizer with f(x)=1, f(y)=0, harmonic elsewhere."""
    ix, iy = net.index(x), net.index(y)
    if ix == iy:
        raise ValidationError("harmonic potential needs two distinct vertices")
    n = net.n_vertices
    interior = [i for i in range(n) if i not in (ix, iy)]
    fv = np.zeros(n)
    fv[ix] = 1.0
    if interior:
        L = net.laplacian()
        rhs = -L[np.ix_(interior, [ix])].ravel()  # boundary value 1 at x, 0 at y
        fv[interior] = solve_spd(L[np.ix_(interior, interior)], rhs)
    return {v: float(fv[i]) for i, v in enumerate(net.vertices)}


def effective_resistance(net: Network, x: Vertex, y: Vertex) -> float:
    """R(x,y), via the variational form: 1 / E(h,h) for the harmonic minimizer h.

    For large sparse networks the Dirichlet solve uses a sparse factorization.
    """
    ix, iy = net.index(x), net.index(y)
    if ix == iy:
        return 0.0
    n = net.n_vertices
    if n > 600:
        # sparse Dirichlet solve; unit potential at x, ground at y
        from scipy.sparse.linalg import splu

        interior = np.array([i for i in range(n) if i != iy], dtype=np.intp)
        L = net.laplacian_sparse()
        Lg = L[np.ix_(interior, interior)].tocsc()
        e = np.zeros(n - 1)
        pos_x = int(np.searchsorted(interior, ix))
        e[pos_x] = 1.0
        lu = splu(Lg)
        u = lu.solve(e)
        u = u + lu.solve(e - Lg @ u)
        return float(u[pos_x])
    h = harmonic_potential(net, x, y)
    e = energy(net, h)
    return 1.0 / e


def resistance_matrix(net: Network) -> ResistanceMatrix:
    """All-pairs resistances from one grounded-Laplacian inversion.

    Ground the first canonical vertex, invert the reduced Laplacian to get the
    Green matrix H, and read R(x,y) = H(x,x) + H(y,y) - 2 H(x,y) (entries
    involving the ground use H terms that are zero there).
    """
    n = net.n_vertices
    if n == 1:
        return ResistanceMatrix.from_values(net.vertices, np.zeros((1, 1)))
    L = net.laplacian(dtype=LD)
    H = symmetric_inverse(L[1:, 1:])
    M = np.zeros((n, n), dtype=LD)
    M[1:, 1:] = H
    d = np.diag(M).copy()
    R = d[:, None] + d[None, :] - 2 * M
    return ResistanceMatrix.from_values(net.vertices, R)


# -- shorting -----------------------------------------------------------------


class _ShortedNode:
    """Fresh label for a contracted vertex set; never equal to user labels."""

    __slots__ = ("members",)

    def __init__(self, members):
        self.members = frozenset(members)

    def __repr__(self):
        return f"<shorted {sorted(map(repr, self.members))}>"


def contract_vertices(net: Network, A: Iterable[Vertex]) -> tuple[Network, object]:
    """Quotient network with the set A contracted to a single fresh vertex.

    Parallel edges created by the contraction are merged by adding
    conductances; edges internal to A disappear. Returns (network, node).
    """
    A = set(A)
    if not A:
        raise ValidationError("cannot contract an empty vertex set")
    for a in A:
        net.index(a)
    node = _ShortedNode(A)
    merged: dict[tuple, float] = {}
    order = [node] + [v for v in net.vertices if v not in A]
    for (u, v), c in net.conductances.items():
        uu = node if u in A else u
        vv = node if v in A else v
        if uu is vv:
            continue
        iu, iv = order.index(uu), order.index(vv)  # small maps; fine
        key = (uu, vv) if iu < iv else (vv, uu)
        merged[key] = merged.get(key, 0.0) + c
    if len(order) == 1:
        return Network({}, vertices=[node]), node
    return Network(merged, vertices=order), node


def shorted_resistance(net: Network, A: Iterable[Vertex], y: Vertex, z: Vertex) -> float:
    """R_A(y,z): effective resistance after contracting A to one vertex.

    Vertices inside A are mapped to the contracted node, so R(y, A) is
    shorted_resistance(net, A, y, a) for any a in A.
    """
    A = set(A)
    q, node = contract_vertices(net, A)
    yy = node if y in A else y
    zz = node if z in A else z
    if yy is zz:
        return 0.0
    return effective_resistance(q, yy, zz)


def resistance_to_set(net: Network, y: Vertex, A: Iterable[Vertex]) -> float:
    """R(y, A): resistance between y and the set A shorted to a point."""
    A = set(A)
    if y in A:
        return 0.0
    a = next(iter(A))
    return shorted_resistance(net, A, y, a)


# -- reconstruction -----------------------------------------------------------


def network_from_resistance(
    R: ResistanceMatrix,
    base: Vertex | None = None,
    tol: float = RECONSTRUCTION_TOL,
    verify: bool = True,
) -> Network:
    """Invert the resistance correspondence: recover the unique network with
    resistance matrix R.

    Fixing a base vertex x0, the Green matrix G(y,z) = (R(x0,y) + R(x0,z)
    - R(y,z)) / 2 on V \\ {x0} is the inverse of the grounded Laplacian;
    conductances are read off its inverse: c(y,z) = -L(y,z) and
    c(y,x0) = row sum of L. Recovered values in (-tol, tol) are dropped as
    absent edges; anything below -tol raises NotAResistanceMetric. With
    `verify`, the witness network's own resistance matrix is compared against
    R, so the operation is a sound membership test.
    """
    labels = R.labels
    n = len(labels)
    values = np.asarray(R.values, dtype=LD)
    if n == 1:
        return Network({}, vertices=labels)
    off = values[~np.eye(n, dtype=bool)].astype(np.float64)
    if (off <= 0).any():
        raise NotAResistanceMetric("off-diagonal resistances must be strictly positive")

    b = 0 if base is None else R.index(base)
    idx = [i for i in range(n) if i != b]
    Rb = values[b]
    G = (Rb[idx][:, None] + Rb[idx][None, :] - values[np.ix_(idx, idx)]) / 2
    try:
        Lg = symmetric_inverse(G)
    except np.linalg.LinAlgError:
        raise NotAResistanceMetric("Green matrix is singular") from None
    if not np.isfinite(Lg.astype(np.float64)).all():
        raise NotAResistanceMetric("Green matrix is numerically singular")

    edges: dict[tuple[Vertex, Vertex], float] = {}

    def record(u, v, c):
        if c < -tol:
            raise NotAResistanceMetric(
                f"recovered negative conductance c({u!r},{v!r}) = {c:.6g}",
                witness_conductance=c,
            )
        if abs(c) > tol:
            edges[(u, v)] = c

    m = n - 1
    for a in range(m):
        for bb in range(a + 1, m):
            record(labels[idx[a]], labels[idx[bb]], float(-Lg[a, bb]))
        record(labels[b], labels[idx[a]], float(Lg[a].sum()))

    try:
        net = Network(edges, vertices=labels)
    except ValidationError as e:
        raise NotAResistanceMetric(f"recovered graph invalid: {e}") from None

    if verify:
        back = resistance_matrix(net).values.astype(np.float64)
        want = values.astype(np.float64)
        scale = float(np.max(want)) or 1.0
        err = float(np.max(np.abs(back - want)))
        if err > 1e-6 * scale:
            raise NotAResistanceMetric(
                f"matrix is not realized by any network (round-trip error {err:.3g})"
            )
    return net


def is_resistance_metric(R: ResistanceMatrix) -> tuple[bool, Network | None]:
    """Decision form of network_from_resistance: (True, witness) or (False, None)."""
    try:
        return True, network_from_resistance(R)
    except NotAResistanceMetric:
        return False, None
