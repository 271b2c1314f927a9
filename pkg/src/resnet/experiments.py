"""Named experiments over the library: gasket homogenisation, walk clocks,
heavy-tailed trapping, tree and critical-graph scaling, and GHP coarse-graining
checks. Each returns an ExperimentResult whose CSV/JSON renderings embed
{seed, parameters, library version} and are byte-identical across reruns.

Threshold bands live in criteria.toml next to this module (load_criteria), so
tightening a band is a data change, not a code change.

Stream-key namespaces (spawn keys under the user seed, all ints): gasket heavy
environments 11; vsrw clock walks (1, level); fin 21-26; trees 31-32; critical
random graphs 41-42. Replicate i of a batch always reads stream(seed, *key, i).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import __version__
from .compare import mc_exit_prob, ghp_distance, min_exit_time_bound
from .engine import WalkDynamics, batch_walk
from .errors import ValidationError
from .kernels import estimate_from_samples, resolvent_apply
from .network import Network, VertexMeasure, effective_resistance, resistance_matrix
from .rng import check_seed, stream
from .spaces import (
    FiniteMMSpace,
    OffspringDistribution,
    er_giant_component,
    gasket_graph,
    gw_tree,
    heavy_tailed_conductances,
    path_graph,
)
from .walk import csrw_measure, vsrw_measure

_SEED_DRAW_MAX = 2**63 - 1


def load_criteria() -> dict:
    """Thresholds for the desk-scale experiment bands, parsed from
    criteria.toml shipped with the package."""
    data = resources.files("resnet").joinpath("criteria.toml").read_bytes()
    return tomllib.loads(data.decode("utf-8"))


@dataclass(frozen=True)
class ExperimentResult:
    """A deterministic table plus nested detail, ready for CSV or JSON."""

    name: str
    seed: int | None
    parameters: dict
    columns: tuple
    rows: tuple
    extra: dict = field(default_factory=dict)


def _py(x):
    if isinstance(x, np.generic):
        return x.item()
    return x


def _row(*cells):
    return tuple(_py(c) for c in cells)


def result_to_csv(res: ExperimentResult) -> str:
    buf = io.StringIO()
    buf.write(f"# experiment: {res.name}\n")
    buf.write(f"# version: {__version__}\n")
    buf.write(f"# seed: {res.seed}\n")
    buf.write(f"# parameters: {json.dumps(res.parameters, sort_keys=True)}\n")
    if res.extra:
        buf.write(f"# extra: {json.dumps(res.extra, sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(res.columns)
    for row in res.rows:
        w.writerow(["" if c is None else c for c in row])
    return buf.getvalue()


def result_to_json(res: ExperimentResult) -> str:
    payload = {
        "experiment": res.name,
        "version": __version__,
        "seed": res.seed,
        "parameters": res.parameters,
        "columns": list(res.columns),
        "rows": [list(r) for r in res.rows],
        "extra": res.extra,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def result_to_gnuplot(res: ExperimentResult, x: str, y: str) -> str:
    """Two-column data file for `plot "..." using 1:2`."""
    for col in (x, y):
        if col not in res.columns:
            raise ValidationError(f"no column {col!r} in {res.name}")
    xi, yi = res.columns.index(x), res.columns.index(y)
    lines = [f"# {res.name}: {x} {y}"]
    for row in res.rows:
        if row[xi] is None or row[yi] is None:
            continue
        lines.append(f"{row[xi]} {row[yi]}")
    return "\n".join(lines) + "\n"


def _child_seeds(seed: int, key: tuple, size: int) -> list[int]:
    # deterministic sub-seeds for APIs that take a bare seed
    gen = stream(seed, *key)
    return [int(v) for v in gen.integers(0, _SEED_DRAW_MAX, size=size)]


# -- gasket homogenisation -------------------------------------------------------


def run_gasket_scaling(
    max_level: int = 5,
    mode: str = "unit",
    alpha: float = 0.5,
    n_seeds: int = 20,
    seed: int = 0,
) -> ExperimentResult:
    """Corner-pair resistance under the (3/5)^n renormalization.

    Unit conductances give an exactly constant rescaled value; heavy-tailed
    conductances (Pareto, alpha) give a per-seed spread whose relative width
    shrinks with the level as the random metric homogenises.
    """
    if not 0 <= max_level <= 7:
        raise ValidationError(f"max_level must be in 0..7, got {max_level}")
    if mode not in ("unit", "heavy"):
        raise ValidationError(f"mode must be unit or heavy, got {mode!r}")
    check_seed(seed)
    params = {"max_level": max_level, "mode": mode, "n_seeds": n_seeds}
    if mode == "heavy":
        params["alpha"] = alpha
    rows = []
    extra: dict = {}
    if mode == "unit":
        vals = []
        for n in range(max_level + 1):
            g = gasket_graph(n)
            x, y = g.corner_pair
            rn = float(effective_resistance(g.net, x, y))
            rescaled = (3.0 / 5.0) ** n * rn
            vals.append(rescaled)
            rows.append(_row(n, rn, rescaled))
        columns = ("level", "corner_resistance", "rescaled")
        extra["max_deviation"] = float(max(vals) - min(vals))
    else:
        if n_seeds < 2:
            raise ValidationError("heavy mode needs n_seeds >= 2")
        per_seed: dict[int, list[float]] = {}
        for n in range(max_level + 1):
            g = gasket_graph(n)
            x, y = g.corner_pair
            env_seeds = _child_seeds(seed, (11, n), n_seeds)
            vals = []
            for es in env_seeds:
                hnet = heavy_tailed_conductances(g.net, alpha, es)
                vals.append((3.0 / 5.0) ** n * float(effective_resistance(hnet, x, y)))
            arr = np.array(vals)
            mean = float(arr.mean())
            spread = float(arr.std(ddof=1) / abs(mean))
            rows.append(_row(n, mean, spread, n_seeds))
            per_seed[n] = [float(v) for v in vals]
        columns = ("level", "mean_rescaled", "rel_spread", "n_seeds")
        extra["per_seed"] = {str(k): v for k, v in per_seed.items()}
    return ExperimentResult(
        name="gasket-scaling", seed=seed, parameters=params,
        columns=columns, rows=tuple(rows), extra=extra,
    )


# -- VSRW clock ------------------------------------------------------------------


def run_vsrw_clock(levels=(0, 1, 2, 3), samples: int = 2000, seed: int = 0) -> ExperimentResult:
    """Corner-to-corner hitting times of the VSRW under the 5^n clock.

    Per level: quartiles of 5^{-n} * (hitting time of the opposite corner),
    the ratio of consecutive medians, and the exact mean from the kernel sum
    sum_z g_A(y,z) mu(z) next to the Monte Carlo mean. The level-0 exact mean
    is 1 from the three-state closed form.
    """
    levels = tuple(int(n) for n in levels)
    if not levels or min(levels) < 0 or max(levels) > 5:
        raise ValidationError("levels must be within 0..5")
    if samples < 2:
        raise ValidationError("need samples >= 2")
    check_seed(seed)
    rows = []
    medians: dict[int, float] = {}
    total_aborts = 0
    for n in levels:
        g = gasket_graph(n)
        net = g.net
        mu = vsrw_measure(net)
        start, target = g.corner_pair
        dyn = WalkDynamics.from_network(net, mu)
        stop = np.zeros(net.n_vertices, dtype=bool)
        stop[net.index(target)] = True
        starts = np.full(samples, net.index(start), dtype=np.intp)
        res = batch_walk(dyn, starts, np.inf, seed, key=(1, n), stop_mask=stop)
        aborts = int(res.aborted.sum())
        total_aborts += aborts
        sigma = res.end_time[~res.aborted] * 5.0 ** (-n)
        q25, med, q75 = (float(q) for q in np.percentile(sigma, [25.0, 50.0, 75.0]))
        est = estimate_from_samples(sigma, aborts)
        R = resistance_matrix(net)
        ones = {v: 1.0 for v in net.vertices}
        exact = float(resolvent_apply(R, mu, target, ones, start)) * 5.0 ** (-n)
        ratio = med / medians[n - 1] if (n - 1) in medians else None
        medians[n] = med
        rows.append(_row(n, med, q25, q75, ratio, exact, est.mean, est.std_error, aborts))
    return ExperimentResult(
        name="vsrw-clock",
        seed=seed,
        parameters={"levels": list(levels), "samples": samples},
        columns=(
            "level", "median", "q25", "q75", "ratio_to_prev",
            "exact_mean", "mc_mean", "mc_se", "aborts",
        ),
        rows=tuple(rows),
        extra={"closed_form_level0": 1.0, "total_aborts": total_aborts},
    )


# -- FIN trapping ----------------------------------------------------------------


def run_fin(
    level: int = 4,
    alpha: float = 0.5,
    samples: int = 1000,
    seed: int = 0,
    t_factor: float = 0.5,
    top_k: int = 5,
    trend_levels=(2, 3, 4, 5),
    trend_seeds: int = 20,
    control_fraction: int = 5,
) -> ExperimentResult:
    """Trapping of the CSRW at the top atom of nu_n = 3^{-n/alpha} sum c(x)dx.

    One heavy-tailed environment is drawn on the level-n gasket; the table
    lists its top-k atoms. The CSRW runs over the rescaled horizon
    t_factor*(5/3)^n*3^{n/alpha} from a stationary start (start ~ mu isolates
    the holding-time reweighting; from a fixed corner, the desk-scale walk
    often cannot even reach the global trap within an affordable jump budget).
    The VSRW control starts from its own stationary law (uniform) and runs
    until its expected jump count matches the CSRW's, capped by its 5^n clock,
    so both walks traverse comparable jump-chain lengths. Occupation fractions
    at the top-atom vertex are compared against the uniform share 1/N.
    """
    if not 1 <= level <= 5:
        raise ValidationError(f"level must be in 1..5, got {level}")
    if samples < 2:
        raise ValidationError("need samples >= 2")
    if not t_factor > 0:
        raise ValidationError("t_factor must be > 0")
    check_seed(seed)
    g = gasket_graph(level)
    env_seed = _child_seeds(seed, (21,), 1)[0]
    hnet = heavy_tailed_conductances(g.net, alpha, env_seed)
    n = hnet.n_vertices
    cx = np.array([hnet.vertex_conductance(v) for v in hnet.vertices])
    atom_w = 3.0 ** (-level / alpha) * cx
    total_w = float(atom_w.sum())
    order = np.argsort(-atom_w, kind="stable")
    rows = []
    for rank, idx in enumerate(order[: min(top_k, n)], start=1):
        rows.append(_row(rank, str(hnet.vertices[idx]), float(atom_w[idx]),
                         float(atom_w[idx] / total_w)))
    top_idx = int(order[0])
    weights = np.zeros(n)
    weights[top_idx] = 1.0
    baseline = 1.0 / n

    horizon_c = t_factor * (5.0 / 3.0) ** level * 3.0 ** (level / alpha)
    mu_c = csrw_measure(hnet)
    dyn_c = WalkDynamics.from_network(hnet, mu_c)
    start_gen = stream(seed, 22)
    starts_c = start_gen.choice(n, size=samples, p=cx / cx.sum())
    res_c = batch_walk(dyn_c, starts_c, horizon_c, seed, key=(23,), weights=weights)
    est_c = estimate_from_samples(
        res_c.acc[~res_c.aborted] / horizon_c, int(res_c.aborted.sum())
    )

    samples_v = max(32, samples // max(control_fraction, 1))
    horizon_v = min(t_factor * 5.0 ** level, horizon_c * n / float(cx.sum()))
    mu_v = vsrw_measure(hnet)
    dyn_v = WalkDynamics.from_network(hnet, mu_v)
    starts_v = stream(seed, 24).integers(0, n, size=samples_v)
    res_v = batch_walk(dyn_v, starts_v, horizon_v, seed, key=(25,), weights=weights)
    est_v = estimate_from_samples(
        res_v.acc[~res_v.aborted] / horizon_v, int(res_v.aborted.sum())
    )

    trend = []
    for lev in trend_levels:
        lev = int(lev)
        net_l = g.net if lev == level else gasket_graph(lev).net
        ratios = []
        for es in _child_seeds(seed, (26, lev), trend_seeds):
            env = heavy_tailed_conductances(net_l, alpha, es)
            cl = np.array([env.vertex_conductance(v) for v in env.vertices])
            ratios.append(float(cl.max() / cl.sum()))
        q25, med, q75 = (float(q) for q in np.percentile(ratios, [25.0, 50.0, 75.0]))
        trend.append([lev, med, q25, q75])

    extra = {
        "level": level,
        "alpha": alpha,
        "top_vertex": str(hnet.vertices[top_idx]),
        "baseline": baseline,
        "horizon_csrw": horizon_c,
        "horizon_vsrw": float(horizon_v),
        "csrw": {
            "fraction_mean": est_c.mean, "fraction_se": est_c.std_error,
            "n_samples": est_c.n_samples, "aborts": est_c.aborts,
            "factor": est_c.mean / baseline,
        },
        "vsrw": {
            "fraction_mean": est_v.mean, "fraction_se": est_v.std_error,
            "n_samples": est_v.n_samples, "aborts": est_v.aborts,
            "factor": est_v.mean / baseline,
        },
        "atom_ratio_trend": trend,
    }
    return ExperimentResult(
        name="fin",
        seed=seed,
        parameters={
            "level": level, "alpha": alpha, "samples": samples,
            "t_factor": t_factor, "top_k": top_k,
            "trend_levels": [int(x) for x in trend_levels],
            "trend_seeds": trend_seeds, "control_fraction": control_fraction,
        },
        columns=("rank", "vertex", "atom_weight", "atom_share"),
        rows=tuple(rows),
        extra=extra,
    )


# -- conditioned tree scaling ----------------------------------------------------


def run_tree_scaling(
    sizes=(400, 1600),
    offspring="geometric",
    samples: int = 1000,
    seed: int = 0,
    t_grid=(0.0, 0.25, 0.5),
    trees_per_chunk: int | None = None,
) -> ExperimentResult:
    """Root displacement of the VSRW on size-conditioned trees.

    Per size n and grid time t: mean of n^{-1/2} * R(root, X_{t n^{3/2}}) over
    fresh trees (one tree per replicate, walked on a disjoint union so batches
    stay bit-identical to sequential runs). On a unit-conductance tree the
    R-distance from the root is the depth.
    """
    sizes = tuple(int(n) for n in sizes)
    if not sizes or min(sizes) < 1 or max(sizes) > 10**4:
        raise ValidationError("sizes must be within 1..10^4")
    if samples < 2:
        raise ValidationError("need samples >= 2")
    t_grid = tuple(float(t) for t in t_grid)
    if not t_grid or min(t_grid) < 0 or any(b < a for a, b in zip(t_grid, t_grid[1:])):
        raise ValidationError("t_grid must be nondecreasing and >= 0")
    check_seed(seed)
    dist = OffspringDistribution(offspring)
    rows = []
    means: dict[tuple[int, float], float] = {}
    total_aborts = 0
    for n in sizes:
        clock = float(n) ** 1.5
        grid = np.array([t * clock for t in t_grid])
        horizon = float(grid[-1])
        chunk = trees_per_chunk or max(1, 200_000 // n)
        disp = np.empty((samples, len(t_grid)))
        tree_seeds = _child_seeds(seed, (31, n), samples)
        for c0 in range(0, samples, chunk):
            trees = [gw_tree(dist, n, ts) for ts in tree_seeds[c0 : c0 + chunk]]
            pairs = [(tg.net, vsrw_measure(tg.net)) for tg in trees]
            dyn, offsets = WalkDynamics.from_networks(pairs)
            starts = np.asarray(offsets, dtype=np.intp)
            res = batch_walk(dyn, starts, horizon, seed, key=(32, n), grid=grid, index_base=c0)
            total_aborts += int(res.aborted.sum())
            depth = np.concatenate([tg.depths() for tg in trees])
            disp[c0 : c0 + len(trees)] = depth[res.snapshots] / math.sqrt(n)
        for k, t in enumerate(t_grid):
            est = estimate_from_samples(disp[:, k])
            means[(n, t)] = est.mean
            rows.append(_row(n, t, est.mean, est.std_error))
    ratios = []
    for prev, n in zip(sizes, sizes[1:]):
        for t in t_grid:
            m_prev, m_n = means[(prev, t)], means[(n, t)]
            r = m_n / m_prev if m_prev > 0 else None
            ratios.append([prev, n, t, r])
    return ExperimentResult(
        name="tree-scaling",
        seed=seed,
        parameters={
            "sizes": list(sizes),
            "offspring": offspring if isinstance(offspring, str) else [float(q) for q in offspring],
            "samples": samples,
            "t_grid": list(t_grid), "trees_per_chunk": trees_per_chunk,
        },
        columns=("size", "t", "mean_rescaled_displacement", "se"),
        rows=tuple(rows),
        extra={"ratios": ratios, "total_aborts": total_aborts},
    )


# -- critical random graph -------------------------------------------------------


def run_crg(
    n_values=(1000, 10000),
    samples: int = 50,
    seed: int = 0,
    n_seeds: int = 30,
    solve_seeds: int = 5,
    t: float = 0.25,
    p: float | None = None,
) -> ExperimentResult:
    """Critical Erdos-Renyi giant component under the n^{2/3} / n^{1/3} scaling.

    Per n and seed: rescaled component size; for the first solve_seeds seeds
    also the exact resistance diameter (rescaled by n^{-1/3}), the max of
    R minus the graph distance (Rayleigh says it is <= 0), and the VSRW
    R-displacement from the minimal-label root at time t*n.
    """
    n_values = tuple(int(n) for n in n_values)
    if not n_values or min(n_values) < 2 or max(n_values) > 10**5:
        raise ValidationError("n values must be within 2..10^5")
    if n_seeds < 1 or solve_seeds < 0:
        raise ValidationError("need n_seeds >= 1 and solve_seeds >= 0")
    if samples < 2:
        raise ValidationError("need samples >= 2")
    if not t >= 0:
        raise ValidationError("t must be >= 0")
    check_seed(seed)
    rows = []
    medians = {}
    max_r_violation = -math.inf
    total_aborts = 0
    for n in n_values:
        pn = 1.0 / n if p is None else p
        comp_seeds = _child_seeds(seed, (41, n), n_seeds)
        sizes = []
        for k in range(n_seeds):
            net = er_giant_component(n, pn, comp_seeds[k])
            size = net.n_vertices
            sizes.append(size)
            resc_size = size * float(n) ** (-2.0 / 3.0)
            r_diam = resc_r = disp_mean = disp_se = None
            if k < solve_seeds and size >= 2:
                R = resistance_matrix(net)
                Rf = R.as_float()
                r_diam = float(Rf.max())
                resc_r = r_diam * float(n) ** (-1.0 / 3.0)
                idx = {v: i for i, v in enumerate(net.vertices)}
                ii, jj = [], []
                for (u, v) in net.conductances:
                    ii.append(idx[u])
                    jj.append(idx[v])
                adj = sp.coo_matrix(
                    (np.ones(len(ii)), (ii, jj)), shape=(size, size)
                )
                dgraph = shortest_path(adj, method="D", directed=False, unweighted=True)
                max_r_violation = max(max_r_violation, float((Rf - dgraph).max()))
                root = min(net.vertices)
                ridx = net.index(root)
                dyn = WalkDynamics.from_network(net, vsrw_measure(net))
                starts = np.full(samples, ridx, dtype=np.intp)
                res = batch_walk(dyn, starts, t * n, seed, key=(42, n, k))
                total_aborts += int(res.aborted.sum())
                est = estimate_from_samples(
                    Rf[ridx, res.end_state[~res.aborted]] * float(n) ** (-1.0 / 3.0),
                    int(res.aborted.sum()),
                )
                disp_mean, disp_se = est.mean, est.std_error
            rows.append(_row(n, k, size, resc_size, r_diam, resc_r, disp_mean, disp_se))
        medians[str(n)] = float(np.median(sizes) * float(n) ** (-2.0 / 3.0))
    med_vals = list(medians.values())
    extra = {
        "rescaled_size_medians": medians,
        "size_median_factor": (max(med_vals) / min(med_vals)) if min(med_vals) > 0 else None,
        "max_r_minus_graph_distance": None if max_r_violation == -math.inf else max_r_violation,
        "total_aborts": total_aborts,
    }
    return ExperimentResult(
        name="crg",
        seed=seed,
        parameters={
            "n_values": list(n_values), "samples": samples, "n_seeds": n_seeds,
            "solve_seeds": solve_seeds, "t": t, "p": p,
        },
        columns=(
            "n", "seed_index", "size", "rescaled_size",
            "r_diameter", "rescaled_r_diameter", "displacement_mean", "displacement_se",
        ),
        rows=tuple(rows),
        extra=extra,
    )


# -- GHP coarse-graining ---------------------------------------------------------


def _gasket_corner_space(n: int) -> FiniteMMSpace:
    """The three corners at level n with the (3/5)^n-rescaled resistance metric
    and mass 1/3 per corner (measure held fixed so the check isolates the
    metric renormalization)."""
    g = gasket_graph(n)
    R = resistance_matrix(g.net).as_float()
    idx = [g.net.index(c) for c in g.corners]
    metric = R[np.ix_(idx, idx)] * (3.0 / 5.0) ** n
    return FiniteMMSpace(g.corners, metric, np.full(3, 1.0 / 3.0), g.corners[0])


def _path_3pt_space(k: int) -> FiniteMMSpace:
    """Endpoints and midpoint of the k-edge path rescaled to total resistance
    1, keeping each sampled vertex's share 1/(k+1) of the uniform probability
    measure on the full path (so the transport term sees the coarse-graining)."""
    if k < 2 or k % 2:
        raise ValidationError("path subsample needs even k >= 2")
    net = path_graph(k, total_resistance=1.0)
    R = resistance_matrix(net).as_float()
    pts = (0, k // 2, k)
    idx = [net.index(p) for p in pts]
    metric = R[np.ix_(idx, idx)]
    return FiniteMMSpace(pts, metric, np.full(3, 1.0 / (k + 1)), 0)


def run_ghp_check(levels=(0, 1, 2), path_ks=(2, 4, 8)) -> ExperimentResult:
    """GHP distances across coarse-grainings; deterministic (no Monte Carlo).

    Gasket rows compare the rescaled corner spaces at consecutive levels
    (exact renormalization: the reference is 0). Path rows compare the 3-point
    subsamples of the k- and 2k-edge paths; the metrics coincide, so the value
    is the uniform-measure mass defect 3k/((k+1)(2k+1)), a strictly decreasing
    sequence in k.
    """
    levels = tuple(int(n) for n in levels)
    path_ks = tuple(int(k) for k in path_ks)
    if levels and (min(levels) < 0 or max(levels) > 4):
        raise ValidationError("gasket levels must be within 0..4")
    rows = []
    s1 = _gasket_corner_space(levels[0] if levels else 1)
    rows.append(_row("identical", f"gasket level {levels[0] if levels else 1}",
                     float(ghp_distance(s1, s1)), 0.0))
    for n in levels:
        a, b = _gasket_corner_space(n), _gasket_corner_space(n + 1)
        rows.append(_row("gasket", f"levels {n} vs {n + 1}", float(ghp_distance(a, b)), 0.0))
    for k in path_ks:
        a, b = _path_3pt_space(k), _path_3pt_space(2 * k)
        ref = 3.0 * k / ((k + 1) * (2 * k + 1))
        rows.append(_row("path", f"k={k} vs {2 * k}", float(ghp_distance(a, b)), ref))
    path_vals = [r[2] for r in rows if r[0] == "path"]
    extra = {
        "max_gasket_value": max((r[2] for r in rows if r[0] == "gasket"), default=None),
        "path_decreasing": all(a > b for a, b in zip(path_vals, path_vals[1:])),
    }
    return ExperimentResult(
        name="ghp-check",
        seed=None,
        parameters={"levels": list(levels), "path_ks": list(path_ks)},
        columns=("case", "detail", "value", "reference"),
        rows=tuple(rows),
        extra=extra,
    )


# -- exit-time bound report ------------------------------------------------------


def exit_bound_report(
    net: Network,
    mu: VertexMeasure,
    eps: float,
    t: float,
    samples: int,
    seed: int,
    grid_size: int = 20,
) -> dict:
    """One cell of the exit-time comparison: the analytic bound minimized over
    a delta grid next to the sup-over-starts Monte Carlo exceedance."""
    R = resistance_matrix(net)
    root = net.vertices[0]
    space = FiniteMMSpace(net.vertices, R.as_float(), mu.as_array(net), root)
    bound, delta = min_exit_time_bound(space, eps, t, grid_size=grid_size)
    rep = mc_exit_prob(net, mu, R, eps, t, samples, seed)
    aborts = sum(e.aborts for _, e in rep.per_start)
    return {
        "eps": eps,
        "delta": delta,
        "t": t,
        "bound": bound,
        "mc_sup": rep.estimate.mean,
        "mc_se": rep.estimate.std_error,
        "n_samples": samples,
        "aborts": aborts,
        "start": str(rep.start),
        "per_start": [
            {"start": str(x), "mean": e.mean, "se": e.std_error}
            for x, e in rep.per_start
        ],
    }
