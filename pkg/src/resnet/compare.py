"""Comparison of finite metric measure spaces: Hausdorff, Prohorov, a
Gromov-Hausdorff-Prohorov distance over enumerated correspondences, covering
numbers, and the exit-time bound they feed.

These are verification oracles, so each is exact brute force under a hard
size cap (CapacityError beyond it) rather than a scalable approximation. The
GHP value minimizes, over correspondences containing the root pair and total
on both sides, the larger of half the metric distortion and the mass that
cannot be transported along the correspondence; this is the standard
correspondence surrogate for the embedding definition, exact for the
zero-distance and isometry-invariance cases.
"""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass

import numpy as np

from .engine import WalkDynamics, batch_walk
from .errors import CapacityError, ValidationError
from .kernels import MCEstimate, estimate_from_samples
from .network import Network, ResistanceMatrix, VertexMeasure
from .rng import check_seed
from .spaces import FiniteMMSpace

_PROHOROV_MAX_N = 20
_COVER_EXACT_MAX_N = 20
_GHP_MAX_PAIRS = 64
_GHP_STEP_BUDGET = 500_000


# -- Hausdorff -----------------------------------------------------------------


def hausdorff_distance(space: FiniteMMSpace, A, B) -> float:
    """max of the two directed sup-inf distances between subsets A and B."""
    ia = [space.index(p) for p in A]
    ib = [space.index(p) for p in B]
    if not ia or not ib:
        raise ValidationError("Hausdorff distance needs nonempty subsets")
    d = space.metric[np.ix_(ia, ib)]
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


# -- Prohorov ------------------------------------------------------------------


def _as_weight_array(space: FiniteMMSpace, w) -> np.ndarray:
    if w is None:
        return space.measure.astype(np.float64)
    if isinstance(w, dict):
        arr = np.array([float(w.get(p, 0.0)) for p in space.points])
    else:
        arr = np.asarray(w, dtype=np.float64)
    if arr.shape != (space.n,):
        raise ValidationError("weights must give one mass per point")
    if (arr < 0).any():
        raise ValidationError("masses must be nonnegative")
    return arr


def _subset_sums(values: np.ndarray) -> np.ndarray:
    """out[mask] = sum of values[i] over bits i of mask (binary-counter order)."""
    out = np.zeros(1, dtype=np.float64)
    for v in values:
        out = np.concatenate([out, out + v])
    return out


def _subset_unions(masks: np.ndarray) -> np.ndarray:
    """out[mask] = bitwise OR of masks[i] over bits i of mask."""
    out = np.zeros(1, dtype=np.int64)
    for m in masks:
        out = np.concatenate([out, out | m])
    return out


def prohorov_distance(space: FiniteMMSpace, mu=None, nu=None) -> float:
    """inf{eps: mu(A) <= nu(A^eps) + eps and symmetrically, for all A}.

    Enlargements A^eps = {d(., A) <= eps} only change at pairwise distances,
    so the infimum is min over candidate radii r of max(r, v(r)), where v(r)
    is the worst mass deficit at enlargement radius r. Exponential subset
    enumeration, capped at 20 points. mu/nu default to the space's measure.
    """
    n = space.n
    if n > _PROHOROV_MAX_N:
        raise CapacityError(f"prohorov_distance enumerates subsets; {n} > {_PROHOROV_MAX_N} points")
    wm = _as_weight_array(space, mu)
    wn = _as_weight_array(space, nu)
    d = space.metric
    mu_of = _subset_sums(wm)
    nu_of = _subset_sums(wn)
    candidates = np.unique(np.concatenate([[0.0], d[np.triu_indices(n, k=1)]]))
    best = math.inf
    for r in candidates:
        if r >= best:
            break
        balls = np.array(
            [int(sum(1 << j for j in range(n) if d[i, j] <= r)) for i in range(n)],
            dtype=np.int64,
        )
        enlarged = _subset_unions(balls)
        v = max(
            float((mu_of - nu_of[enlarged]).max()),
            float((nu_of - mu_of[enlarged]).max()),
        )
        best = min(best, max(float(r), v))
    return best


# -- GHP -----------------------------------------------------------------------


def _max_flow(cap: np.ndarray, source: int, sink: int) -> np.ndarray:
    """Edmonds-Karp on a dense capacity matrix; returns the residual matrix."""
    res = cap.copy()
    n = len(cap)
    while True:
        parent = np.full(n, -1, dtype=np.intp)
        parent[source] = source
        q = deque([source])
        while q and parent[sink] < 0:
            u = q.popleft()
            for v in np.flatnonzero(res[u] > 0):
                if parent[v] < 0:
                    parent[v] = u
                    q.append(int(v))
        if parent[sink] < 0:
            return res
        path = []
        v = sink
        while v != source:
            path.append((int(parent[v]), v))
            v = int(parent[v])
        push = min(res[u][v] for u, v in path)
        for u, v in path:
            res[u][v] -= push
            res[v][u] += push


def _transport_gap(pairs, n1, n2, w1, w2) -> float:
    """Mass that cannot be moved along the correspondence: max total minus
    the max flow, read off the residuals so saturation gives an exact 0."""
    n = n1 + n2 + 2
    src, snk = n1 + n2, n1 + n2 + 1
    cap = np.zeros((n, n), dtype=np.float64)
    cap[src, :n1] = w1
    for i, j in pairs:
        cap[i, n1 + j] = math.inf
    cap[n1 : n1 + n2, snk] = w2
    res = _max_flow(cap, src, snk)
    return float(max(res[src, :n1].sum(), res[n1 : n1 + n2, snk].sum()))


class _CliqueSearch:
    """Maximal cliques containing a fixed vertex, with a step budget."""

    def __init__(self, adj: np.ndarray, budget: int):
        self.adj = adj
        self.budget = budget
        self.out: list[np.ndarray] = []

    def run(self, start: int):
        n = len(self.adj)
        p = self.adj[start].copy()
        self._extend(np.array([start]), np.flatnonzero(p), np.array([], dtype=np.intp))
        return self.out

    def _extend(self, r, p, x):
        self.budget -= 1
        if self.budget <= 0:
            raise CapacityError("correspondence enumeration budget exceeded")
        if len(p) == 0 and len(x) == 0:
            self.out.append(r)
            return
        if len(p) == 0:
            return
        # pivot on the candidate with most neighbors in P
        union = np.concatenate([p, x])
        pivot = union[np.argmax(self.adj[np.ix_(union, p)].sum(axis=1))]
        for v in p[~self.adj[pivot, p]]:
            nv = self.adj[v]
            self._extend(np.append(r, v), p[nv[p]], x[nv[x]])
            p = p[p != v]
            x = np.append(x, v)


def ghp_distance(s1: FiniteMMSpace, s2: FiniteMMSpace, budget: int = _GHP_STEP_BUDGET) -> float:
    """Rooted GHP distance by exhausting correspondences.

    Value: min over correspondences C (containing the root pair, total on
    both sides) of max(distortion(C)/2, transport_gap(C)). Candidate
    half-distortions are scanned in increasing order; at each threshold the
    compatible-pair graph's maximal cliques through the root pair are
    enumerated, so the scan is exact. Exact-arithmetic zeros: identical or
    relabeled isometric inputs return 0.0.
    """
    n1, n2 = s1.n, s2.n
    if n1 * n2 > _GHP_MAX_PAIRS:
        raise CapacityError(f"{n1}x{n2} pairs exceed the {_GHP_MAX_PAIRS}-pair GHP cap")
    d1, d2 = s1.metric, s2.metric
    w1, w2 = s1.measure, s2.measure
    r1, r2 = s1.root_index, s2.root_index

    pairs = [(i, j) for i in range(n1) for j in range(n2)]
    np_pairs = len(pairs)
    root_pair = pairs.index((r1, r2))
    # gap[p, q]: distortion contributed by using pairs p and q together
    gap = np.empty((np_pairs, np_pairs), dtype=np.float64)
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            gap[a, b] = abs(d1[i, k] - d2[j, l])
    thresholds = np.unique(gap) / 2.0
    best = math.inf
    for e in thresholds:
        if e >= best:
            break
        adj = (gap <= 2.0 * e)
        np.fill_diagonal(adj, False)
        if not adj[root_pair].any() and np_pairs > 1:
            continue
        cliques = _CliqueSearch(adj, budget).run(root_pair)
        m_e = math.inf
        for cl in cliques:
            chosen = [pairs[c] for c in cl]
            if len({i for i, _ in chosen}) < n1 or len({j for _, j in chosen}) < n2:
                continue
            m_e = min(m_e, _transport_gap(chosen, n1, n2, w1, w2))
            if m_e == 0.0:
                break
        if m_e < math.inf:
            best = min(best, max(float(e), m_e))
    if best == math.inf:
        raise ValidationError("no total correspondence exists")  # unreachable
    return best


# -- covering numbers and ball measures ------------------------------------------


def _ball_masks(space: FiniteMMSpace, eps: float) -> list[int]:
    open_ball = space.metric < eps
    return [int(sum(1 << j for j in np.flatnonzero(open_ball[i]))) for i in range(space.n)]


def _greedy_cover(masks: list[int], full: int) -> int:
    covered = 0
    k = 0
    while covered != full:
        gains = [bin(m | covered).count("1") for m in masks]
        covered |= masks[int(np.argmax(gains))]
        k += 1
    return k


def covering_number(space: FiniteMMSpace, eps: float) -> int:
    """Minimal number of open balls B(x, eps) = {d(x, .) < eps} covering the
    space; exact for <= 20 points, greedy (with a warning) above."""
    if not eps > 0:
        raise ValidationError("eps must be > 0")
    n = space.n
    masks = _ball_masks(space, eps)
    full = (1 << n) - 1
    greedy = _greedy_cover(masks, full)
    if n > _COVER_EXACT_MAX_N:
        warnings.warn(
            f"covering_number is greedy-only above {_COVER_EXACT_MAX_N} points "
            "(upper bound; safe for the exit-time bound)",
            stacklevel=2,
        )
        return greedy
    if greedy == 1:
        return 1
    from itertools import combinations

    for k in range(1, greedy):
        # centers sorted by reach to find covers sooner
        order = sorted(range(n), key=lambda i: -bin(masks[i]).count("1"))
        for combo in combinations(order, k):
            acc = 0
            for i in combo:
                acc |= masks[i]
            if acc == full:
                return k
    return greedy


def min_ball_measure(space: FiniteMMSpace, delta: float) -> float:
    """inf over points of the measure of the open ball of radius delta."""
    if not delta > 0:
        raise ValidationError("delta must be > 0")
    return float(((space.metric < delta) @ space.measure).min())


# -- exit-time bound -------------------------------------------------------------


def exit_time_bound(space: FiniteMMSpace, eps: float, delta: float, t: float) -> float:
    """(32 N(F, eps/4) / eps) * (delta + t / inf_x mu(B(x, delta)))."""
    if not (eps > 0 and delta > 0 and t >= 0):
        raise ValidationError("eps, delta must be > 0 and t >= 0")
    n_cover = covering_number(space, eps / 4.0)
    return (32.0 * n_cover / eps) * (delta + t / min_ball_measure(space, delta))


def min_exit_time_bound(
    space: FiniteMMSpace, eps: float, t: float, deltas=None, grid_size: int = 20
) -> tuple[float, float]:
    """Minimize the bound over a delta grid; returns (bound, best delta)."""
    if deltas is None:
        d = space.metric[space.metric > 0]
        lo = float(d.min()) / 2.0 if len(d) else 1.0
        hi = space.diameter() * 1.05 if space.diameter() > 0 else 1.0
        deltas = np.geomspace(lo, hi, grid_size)
    vals = [(exit_time_bound(space, eps, float(dl), t), float(dl)) for dl in deltas]
    return min(vals)


@dataclass(frozen=True)
class ExitProbReport:
    """sup-over-starts Monte Carlo exceedance estimate with per-start detail."""

    estimate: MCEstimate
    start: object
    per_start: tuple


def mc_exit_prob_by_start(
    net: Network,
    mu: VertexMeasure,
    R: ResistanceMatrix,
    eps: float,
    t: float,
    n: int,
    seed: int,
) -> list[tuple[object, MCEstimate]]:
    """P_x(sup_{s<=t} R(x, X_s) >= eps) estimated per start vertex x.

    Start x's replicate i consumes stream(seed, x_index, i), so the report is
    independent of evaluation order.
    """
    if n < 1:
        raise ValidationError("need n >= 1 replicates")
    if not (eps > 0 and t >= 0):
        raise ValidationError("eps must be > 0 and t >= 0")
    check_seed(seed)
    dyn = WalkDynamics.from_network(net, mu)
    Rf = R.as_float()
    out = []
    for xi, x in enumerate(net.vertices):
        far = Rf[R.index(x)] >= eps
        if not far.any():
            out.append((x, MCEstimate(mean=0.0, std_error=0.0, n_samples=n)))
            continue
        stop_idx = np.array([net.index(v) for v in R.labels])[far]
        stop = np.zeros(net.n_vertices, dtype=bool)
        stop[stop_idx] = True
        starts = np.full(n, net.index(x), dtype=np.intp)
        res = batch_walk(dyn, starts, t, seed, key=(xi,), stop_mask=stop)
        ok = ~res.aborted
        out.append((x, estimate_from_samples(res.stopped[ok].astype(np.float64), int(res.aborted.sum()))))
    return out


def mc_exit_prob(
    net: Network,
    mu: VertexMeasure,
    R: ResistanceMatrix,
    eps: float,
    t: float,
    n: int,
    seed: int,
) -> ExitProbReport:
    """The per-start estimates maximized over starts (first argmax wins)."""
    per_start = mc_exit_prob_by_start(net, mu, R, eps, t, n, seed)
    best = max(range(len(per_start)), key=lambda k: per_start[k][1].mean)
    return ExitProbReport(
        estimate=per_start[best][1], start=per_start[best][0], per_start=tuple(per_start)
    )
