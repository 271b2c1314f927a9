"""Example spaces: gasket hierarchies, paths, alpha-interval metrics,
conditioned Galton-Watson trees, critical Erdos-Renyi components, heavy-tailed
conductance decorations, and the finite metric-measure-space wrapper.

All generators are pure functions of their seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import RejectionBudgetError, ValidationError
from .network import (
    Network,
    ResistanceMatrix,
    VertexMeasure,
    network_from_resistance,
    resistance_matrix,
)
from .rng import check_seed, stream

#: attempts allowed when rejection-sampling a conditioned tree
GW_REJECTION_BUDGET = 10**7

#: triangle-inequality validation is O(n^3); larger spaces skip it
_METRIC_VALIDATE_MAX_N = 300


# -- Sierpinski gasket ---------------------------------------------------------


@dataclass(frozen=True)
class GasketGraph:
    """Level-n gasket approximation with unit conductances.

    Vertices are integer lattice labels "a,b"; the three distinguished
    corners are "0,0", "2^n,0", "0,2^n". `coords` maps labels to planar
    positions for plotting.
    """

    level: int
    net: Network
    corners: tuple
    coords: dict

    @property
    def corner_pair(self):
        return self.corners[0], self.corners[1]


def _gasket_lattice_edges(level: int) -> set:
    edges = {((0, 0), (1, 0)), ((0, 0), (0, 1)), ((0, 1), (1, 0))}
    for k in range(level):
        s = 2**k
        shifted = set()
        for (a1, b1), (a2, b2) in edges:
            for da, db in ((s, 0), (0, s)):
                p, q = (a1 + da, b1 + db), (a2 + da, b2 + db)
                shifted.add((p, q) if p <= q else (q, p))
        edges |= shifted
    return edges


def gasket_graph(level: int) -> GasketGraph:
    """Level-n graph: three level-(n-1) copies glued at shared corners.

    Copies are realized as lattice translates, so the identification is the
    coordinate overlap; vertex count 3(3^n+1)/2 and edge count 3^(n+1).
    """
    if level < 0:
        raise ValidationError("gasket level must be >= 0")
    raw = _gasket_lattice_edges(level)
    points = sorted({p for e in raw for p in e})
    label = {p: f"{p[0]},{p[1]}" for p in points}
    edges = {(label[p], label[q]): 1.0 for p, q in sorted(raw)}
    net = Network(edges, vertices=[label[p] for p in points])
    s = 2**level
    corners = (label[(0, 0)], label[(s, 0)], label[(0, s)])
    coords = {label[p]: (p[0] + p[1] / 2.0, p[1] * math.sqrt(3) / 2.0) for p in points}
    return GasketGraph(level=level, net=net, corners=corners, coords=coords)


# -- interval approximations ---------------------------------------------------


def path_graph(k: int, total_resistance: float = 1.0) -> Network:
    """k+1 vertices in a line; each edge conductance k/total_resistance."""
    if k < 1:
        raise ValidationError("path needs at least one edge")
    if not total_resistance > 0:
        raise ValidationError("total resistance must be > 0")
    c = k / total_resistance
    return Network({(i, i + 1): c for i in range(k)}, vertices=range(k + 1))


def alpha_interval_space(k: int, alpha: float) -> Network:
    """Realize R(x_i,x_j) = |x_i-x_j|^(alpha-1) on the uniform k-grid of [0,1].

    For alpha in (1,2] this is a resistance metric; the witness network from
    the reconstruction is returned (alpha=2 recovers the path, smaller alpha
    adds long-range conductances).
    """
    if k < 2:
        raise ValidationError("need at least two grid points")
    if not 1.0 < alpha <= 2.0:
        raise ValidationError(f"alpha must be in (1, 2], got {alpha}")
    x = np.linspace(0.0, 1.0, k)
    R = np.abs(x[:, None] - x[None, :]) ** (alpha - 1.0)
    return network_from_resistance(ResistanceMatrix.from_values(range(k), R))


# -- conditioned Galton-Watson trees -------------------------------------------


@dataclass(frozen=True)
class TreeGraph:
    """Rooted tree with unit conductances; vertices 0..size-1 in DFS preorder."""

    net: Network
    root: int
    size: int
    parents: tuple  # parents[0] = -1

    def depths(self) -> np.ndarray:
        """Graph distance from the root; equals effective resistance on a tree."""
        d = np.zeros(self.size, dtype=np.int64)
        for v in range(1, self.size):
            d[v] = d[self.parents[v]] + 1  # preorder: parent precedes child
        return d

    def height(self) -> int:
        return int(self.depths().max()) if self.size > 1 else 0


class OffspringDistribution:
    """Critical offspring law: built-in geometric(1/2) or poisson(1), or an
    explicit finite pmf over {0,1,...} with mean 1 (tolerance 1e-9)."""

    def __init__(self, spec):
        if isinstance(spec, str):
            name = spec.lower()
            if name not in ("geometric", "poisson"):
                raise ValidationError(f"unknown offspring law {spec!r}")
            self.name = name
            self.pmf = None
        else:
            pmf = np.asarray(list(spec), dtype=np.float64)
            if pmf.ndim != 1 or len(pmf) < 2 or (pmf < 0).any():
                raise ValidationError("pmf must be a nonnegative vector over 0..K")
            if abs(pmf.sum() - 1.0) > 1e-9:
                raise ValidationError(f"pmf sums to {pmf.sum()!r}, not 1")
            mean = float(np.dot(pmf, np.arange(len(pmf))))
            if abs(mean - 1.0) > 1e-9:
                raise ValidationError(f"offspring mean {mean!r} is not 1 (critical)")
            self.name = "pmf"
            self.pmf = pmf
            self._cum = np.cumsum(pmf)

    def sample(self, gen: np.random.Generator, n: int) -> np.ndarray:
        if self.name == "geometric":
            return gen.geometric(0.5, size=n) - 1  # support {0,1,...}, mean 1
        if self.name == "poisson":
            return gen.poisson(1.0, size=n)
        u = gen.random(n)
        return np.searchsorted(self._cum, u, side="right").astype(np.int64)


def sample_progeny_sequence(
    dist: OffspringDistribution, n: int, gen: np.random.Generator,
    budget: int = GW_REJECTION_BUDGET,
) -> tuple[np.ndarray, int]:
    """Offspring counts of the size-n conditioned tree, in DFS order.

    Rejection on the total (draw n i.i.d. counts until they sum to n-1), then
    the cycle-lemma rotation at the first minimum of the partial sums, which
    maps the exchangeable conditioned sample to the unique valid depth-first
    traversal. Returns (sequence, attempts used).
    """
    attempts = 0
    while attempts < budget:
        attempts += 1
        xi = dist.sample(gen, n)
        if int(xi.sum()) == n - 1:
            walk = np.cumsum(xi - 1)
            m = int(np.argmin(walk))  # first minimum
            rotated = np.concatenate([xi[m + 1 :], xi[: m + 1]])
            return rotated, attempts
    raise RejectionBudgetError(
        f"no size-{n} tree within {budget} attempts", attempts=attempts
    )


def tree_from_progeny(seq: np.ndarray) -> TreeGraph:
    """Build the rooted tree whose DFS preorder offspring counts are seq."""
    n = len(seq)
    parents = [-1] * n
    stack = [(0, int(seq[0]))]
    nxt = 1
    while stack:
        node, remaining = stack[-1]
        if remaining == 0:
            stack.pop()
            continue
        stack[-1] = (node, remaining - 1)
        parents[nxt] = node
        stack.append((nxt, int(seq[nxt])))
        nxt += 1
    if nxt != n:
        raise ValidationError("progeny sequence does not encode a tree")
    if n == 1:
        net = Network({}, vertices=[0])
    else:
        net = Network({(parents[v], v): 1.0 for v in range(1, n)}, vertices=range(n))
    return TreeGraph(net=net, root=0, size=n, parents=tuple(parents))


def gw_tree(offspring, size: int, seed: int, budget: int = GW_REJECTION_BUDGET) -> TreeGraph:
    """Galton-Watson tree conditioned to have exactly `size` vertices."""
    if size < 1:
        raise ValidationError("tree size must be >= 1")
    dist = offspring if isinstance(offspring, OffspringDistribution) else OffspringDistribution(offspring)
    gen = stream(check_seed(seed))
    seq, _ = sample_progeny_sequence(dist, size, gen, budget=budget)
    return tree_from_progeny(seq)


# -- critical Erdos-Renyi ------------------------------------------------------


class _UnionFind:
    def __init__(self, n):
        self.parent = np.arange(n, dtype=np.int64)

    def find(self, a):
        p = self.parent
        root = a
        while p[root] != root:
            root = p[root]
        while p[a] != root:
            p[a], a = root, p[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _pair_from_linear(i: int, n: int) -> tuple[int, int]:
    # row u holds pairs (u, u+1..n-1); C(u) = u*(2n-u-1)/2 pairs precede row u
    u = int((2 * n - 1 - math.sqrt((2 * n - 1) ** 2 - 8 * i)) / 2)
    while u * (2 * n - u - 1) // 2 > i:
        u -= 1
    while (u + 1) * (2 * n - u - 2) // 2 <= i:
        u += 1
    v = u + 1 + (i - u * (2 * n - u - 1) // 2)
    return u, v


def er_giant_component(n: int, p: float, seed: int) -> Network:
    """Largest component of G(n, p) with unit conductances.

    Edges are drawn by geometric skips over the n(n-1)/2 linear edge indices,
    so the cost scales with the number of present edges. Size ties go to the
    component containing the smallest vertex label.
    """
    if n < 2:
        raise ValidationError("need n >= 2")
    if not 0.0 < p <= 1.0:
        raise ValidationError(f"p must be in (0, 1], got {p}")
    gen = stream(check_seed(seed))
    total = n * (n - 1) // 2
    edges = []
    if p == 1.0:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    else:
        log_q = math.log1p(-p)
        i = -1
        while True:
            r = gen.random()
            while r == 0.0:
                r = gen.random()
            i += 1 + int(math.log(r) / log_q)
            if i >= total:
                break
            edges.append(_pair_from_linear(i, n))
    uf = _UnionFind(n)
    for u, v in edges:
        uf.union(u, v)
    roots = np.array([uf.find(v) for v in range(n)], dtype=np.int64)
    sizes = np.bincount(roots, minlength=n)
    best = int(np.flatnonzero(sizes == sizes.max()).min())  # root IS the min label
    members = np.flatnonzero(roots == best)
    if len(members) == 1:
        return Network({}, vertices=[int(members[0])])
    keep = {(u, v): 1.0 for u, v in edges if roots[u] == best and roots[v] == best}
    return Network(keep, vertices=[int(m) for m in members])


# -- heavy-tailed decorations --------------------------------------------------


def heavy_tailed_conductances(net: Network, alpha: float, seed: int) -> Network:
    """Replace each conductance by an i.i.d. Pareto draw c = U^(-1/alpha),
    P(c >= u) = u^(-alpha) for u >= 1; same topology and vertex order."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must be in (0, 1), got {alpha}")
    gen = stream(check_seed(seed))
    m = net.n_edges
    u = gen.random(m)
    while (u == 0.0).any():  # open-interval uniforms
        z = u == 0.0
        u[z] = gen.random(int(z.sum()))
    c = u ** (-1.0 / alpha)
    edges = {key: float(ci) for key, ci in zip(net.conductances, c)}
    return Network(edges, vertices=net.vertices)


# -- finite metric measure spaces ----------------------------------------------


@dataclass(frozen=True)
class FiniteMMSpace:
    """Rooted finite metric space with a full-support measure."""

    points: tuple
    metric: np.ndarray  # (n, n) float64
    measure: np.ndarray  # (n,) positive weights
    root: object

    def __post_init__(self):
        n = len(self.points)
        d = np.asarray(self.metric, dtype=np.float64)
        w = np.asarray(self.measure, dtype=np.float64)
        if d.shape != (n, n):
            raise ValidationError(f"metric shape {d.shape} does not fit {n} points")
        if w.shape != (n,):
            raise ValidationError("measure must have one weight per point")
        if (w <= 0).any() or not np.isfinite(w).all():
            raise ValidationError("measure weights must be positive and finite")
        if not np.array_equal(d, d.T) or (np.diag(d) != 0).any():
            raise ValidationError("metric must be symmetric with zero diagonal")
        off = d[~np.eye(n, dtype=bool)]
        if len(off) and (off <= 0).any():
            raise ValidationError("distinct points must have positive distance")
        if n <= _METRIC_VALIDATE_MAX_N:
            scale = float(d.max()) if n > 1 else 1.0
            for i in range(n):
                if (d > d[:, [i]] + d[[i], :] + 1e-9 * max(scale, 1.0)).any():
                    raise ValidationError("triangle inequality violated")
        if self.root not in self.points:
            raise ValidationError(f"root {self.root!r} is not a point")
        object.__setattr__(self, "metric", d)
        object.__setattr__(self, "measure", w)

    @property
    def n(self) -> int:
        return len(self.points)

    def index(self, p) -> int:
        try:
            return self.points.index(p)
        except ValueError:
            raise ValidationError(f"unknown point {p!r}") from None

    @property
    def root_index(self) -> int:
        return self.index(self.root)

    def diameter(self) -> float:
        return float(self.metric.max())

    def total_mass(self) -> float:
        return float(self.measure.sum())

    def relabel(self, mapping) -> "FiniteMMSpace":
        pts = tuple(mapping[p] for p in self.points)
        return FiniteMMSpace(pts, self.metric.copy(), self.measure.copy(), mapping[self.root])

    def subspace(self, points: Sequence, root=None) -> "FiniteMMSpace":
        """Restriction to `points`, keeping their masses; root defaults to the
        original root (which must then be among the points)."""
        idx = [self.index(p) for p in points]
        r = self.root if root is None else root
        return FiniteMMSpace(
            tuple(points), self.metric[np.ix_(idx, idx)].copy(),
            self.measure[idx].copy(), r,
        )


def as_mm_space(
    net: Network,
    mu: VertexMeasure,
    root,
    metric_scale: float = 1.0,
    measure_scale: float = 1.0,
) -> FiniteMMSpace:
    """Package a network as (V, scale*R, scale*mu, root)."""
    if not metric_scale > 0 or not measure_scale > 0:
        raise ValidationError("scales must be > 0")
    R = resistance_matrix(net).as_float() * metric_scale
    w = mu.as_array(net) * measure_scale
    return FiniteMMSpace(net.vertices, R, w, root)
