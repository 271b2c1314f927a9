"""Command line front end: `resnet <subcommand> [flags]`.

Exit codes: 0 success, 2 validation error, 3 capacity error, 4 Monte Carlo
budget abort (rejection budgets, or any walk replicate hitting the jump
safety cap; reports are still written, with aborts counted).
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import experiments as ex
from .engine import WalkDynamics, batch_walk
from .errors import CapacityError, NotAResistanceMetric, RejectionBudgetError, ValidationError
from .kernels import estimate_from_samples, mc_resolvent, resolvent_apply
from .netio import (
    _parse_label,
    load_measure,
    load_network,
    network_to_text,
    read_resistance_csv,
    write_coords_csv,
    write_resistance_csv,
    write_trajectory_csv,
)
from .network import network_from_resistance, resistance_matrix
from .rng import stream
from .spaces import (
    OffspringDistribution,
    alpha_interval_space,
    er_giant_component,
    gasket_graph,
    gw_tree,
    path_graph,
)
from .walk import csrw_measure, simulate, vsrw_measure

# default gnuplot columns per experiment table
_GNUPLOT_XY = {
    "gasket-scaling": ("level", "rescaled"),
    "gasket-scaling/heavy": ("level", "rel_spread"),
    "vsrw-clock": ("level", "median"),
    "fin": ("rank", "atom_share"),
    "tree-scaling": ("size", "mean_rescaled_displacement"),
    "crg": ("n", "rescaled_size"),
}


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _ints(s: str) -> list[int]:
    return [int(tok) for tok in s.split(",") if tok]


def _floats(s: str) -> list[float]:
    return [float(tok) for tok in s.split(",") if tok]


def _samples(args, default: int) -> int:
    return default if args.samples is None else args.samples


def _measure(args, net):
    if args.measure_file is not None:
        return load_measure(args.measure_file)
    if args.walk == "vsrw":
        return vsrw_measure(net)
    return csrw_measure(net)


def _pick_format(args, supported: tuple, default: str) -> str:
    fmt = args.format
    if fmt is None:
        return default
    if fmt not in supported:
        have = ", ".join(supported) or "none (fixed output format)"
        raise ValidationError(f"--format {fmt} not supported here; supported: {have}")
    return fmt


def _emit_result(res: ex.ExperimentResult, args, default_fmt: str = "csv") -> int:
    fmt = _pick_format(args, ("csv", "json", "gnuplot"), default_fmt)
    if fmt == "csv":
        text = ex.result_to_csv(res)
    elif fmt == "json":
        text = ex.result_to_json(res)
    else:
        key = res.name
        if key == "gasket-scaling" and res.parameters.get("mode") == "heavy":
            key = "gasket-scaling/heavy"
        if args.columns is not None:
            x, y = args.columns
        elif key in _GNUPLOT_XY:
            x, y = _GNUPLOT_XY[key]
        else:
            raise ValidationError(
                f"no default gnuplot columns for {res.name}; pass --columns X,Y "
                f"(columns: {', '.join(res.columns)})"
            )
        text = ex.result_to_gnuplot(res, x, y)
    _emit(text, args.out)
    return 0


def _aborts_exit(n_aborts: int) -> int:
    return 4 if n_aborts else 0


# -- core subcommands -------------------------------------------------------------


def _cmd_resistance(args) -> int:
    net = load_network(args.network)
    _pick_format(args, ("csv",), "csv")
    R = resistance_matrix(net)
    buf = io.StringIO()
    write_resistance_csv(R, buf)
    _emit(buf.getvalue(), args.out)
    return 0


def _cmd_reconstruct(args) -> int:
    with open(args.matrix, encoding="utf-8", newline="") as fh:
        R = read_resistance_csv(fh)
    _pick_format(args, (), "edge list")
    net = network_from_resistance(R)
    _emit(network_to_text(net), args.out)
    return 0


def _cmd_simulate(args) -> int:
    net = load_network(args.network)
    mu = _measure(args, net)
    n = _samples(args, 1)
    if n == 1:
        _pick_format(args, ("csv",), "csv")
        traj = simulate(net, mu, args.start, args.horizon, stop=args.stop, seed=args.seed)
        buf = io.StringIO()
        write_trajectory_csv(traj, buf)
        _emit(buf.getvalue(), args.out)
        return _aborts_exit(int(traj.aborted))
    _pick_format(args, ("json",), "json")
    dyn = WalkDynamics.from_network(net, mu)
    stop_mask = None
    if args.stop:
        stop_mask = np.zeros(net.n_vertices, dtype=bool)
        for v in args.stop:
            stop_mask[net.index(v)] = True
    starts = np.full(n, net.index(args.start), dtype=np.intp)
    res = batch_walk(dyn, starts, args.horizon, args.seed, stop_mask=stop_mask)
    aborts = int(res.aborted.sum())
    est = estimate_from_samples(res.end_time[~res.aborted], aborts)
    payload = {
        "n": n,
        "seed": args.seed,
        "start": str(args.start),
        "horizon": args.horizon,
        "end_time_mean": est.mean,
        "end_time_se": est.std_error,
        "stopped_fraction": float(res.stopped.mean()),
        "aborts": aborts,
        "version": __version__,
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return _aborts_exit(aborts)


def _cmd_resolvent_check(args) -> int:
    net = load_network(args.network)
    mu = _measure(args, net)
    _pick_format(args, ("json",), "json")
    if args.f_file is not None:
        fmu = load_measure(args.f_file)
        f = {v: fmu[v] for v in net.vertices}
    else:
        f = {v: 1.0 for v in net.vertices}
    n = _samples(args, 10000)
    R = resistance_matrix(net)
    exact = resolvent_apply(R, mu, args.x, f, args.y)
    est = mc_resolvent(net, mu, args.x, f, args.y, n, args.seed)
    payload = {
        "exact": exact,
        "mc_mean": est.mean,
        "mc_se": est.std_error,
        "n": est.n_samples,
        "z_score": est.z_score(exact),
        "aborts": est.aborts,
        "seed": args.seed,
        "version": __version__,
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return _aborts_exit(est.aborts)


def _cmd_exit_bound(args) -> int:
    net = load_network(args.network)
    mu = _measure(args, net)
    _pick_format(args, ("json",), "json")
    rep = ex.exit_bound_report(
        net, mu, args.eps, args.t, _samples(args, 400), args.seed, grid_size=args.grid_size
    )
    rep["seed"] = args.seed
    rep["version"] = __version__
    _emit(json.dumps(rep, sort_keys=True, indent=2) + "\n", args.out)
    return _aborts_exit(rep["aborts"])


# -- experiment subcommands --------------------------------------------------------


def _cmd_gasket_scaling(args) -> int:
    res = ex.run_gasket_scaling(
        max_level=args.max_level, mode=args.mode, alpha=args.alpha,
        n_seeds=args.n_seeds, seed=args.seed,
    )
    return _emit_result(res, args)


def _cmd_vsrw_clock(args) -> int:
    res = ex.run_vsrw_clock(levels=args.levels, samples=_samples(args, 10000), seed=args.seed)
    rc = _emit_result(res, args)
    return rc or _aborts_exit(res.extra["total_aborts"])


def _cmd_fin(args) -> int:
    res = ex.run_fin(
        level=args.level, alpha=args.alpha, samples=_samples(args, 1000),
        seed=args.seed, t_factor=args.t_factor, top_k=args.top_k,
        trend_levels=args.trend_levels, trend_seeds=args.trend_seeds,
    )
    rc = _emit_result(res, args, default_fmt="json")
    aborts = res.extra["csrw"]["aborts"] + res.extra["vsrw"]["aborts"]
    return rc or _aborts_exit(aborts)


def _cmd_tree_scaling(args) -> int:
    res = ex.run_tree_scaling(
        sizes=args.sizes, offspring=args.offspring, samples=_samples(args, 1000),
        seed=args.seed, t_grid=args.t_grid,
    )
    rc = _emit_result(res, args)
    return rc or _aborts_exit(res.extra["total_aborts"])


def _cmd_crg(args) -> int:
    res = ex.run_crg(
        n_values=args.n_values, samples=_samples(args, 50), seed=args.seed,
        n_seeds=args.n_seeds, solve_seeds=args.solve_seeds, t=args.t, p=args.p,
    )
    rc = _emit_result(res, args)
    return rc or _aborts_exit(res.extra["total_aborts"])


def _cmd_ghp(args) -> int:
    res = ex.run_ghp_check(levels=args.levels, path_ks=args.path_ks)
    return _emit_result(res, args)


# -- generators --------------------------------------------------------------------


def _cmd_generate(args) -> int:
    _pick_format(args, (), "edge list")
    coords = None
    if args.kind == "gasket":
        g = gasket_graph(args.level)
        net, coords = g.net, g.coords
    elif args.kind == "path":
        net = path_graph(args.k, total_resistance=args.total_resistance)
    elif args.kind == "interval":
        net = alpha_interval_space(args.k, args.alpha)
    elif args.kind == "tree":
        net = gw_tree(OffspringDistribution(args.offspring), args.size, args.seed).net
    else:
        net = er_giant_component(args.n, 1.0 / args.n if args.p is None else args.p, args.seed)
    _emit(network_to_text(net), args.out)
    if args.kind == "gasket" and args.coords_out is not None:
        with open(args.coords_out, "w", encoding="utf-8") as fh:
            write_coords_csv(net.vertices, [coords[v] for v in net.vertices], fh)
    return 0


# -- parser ------------------------------------------------------------------------


def _columns_pair(s: str):
    parts = s.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected X,Y column names")
    return parts[0], parts[1]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG stream seed")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json", "gnuplot"), default=None,
                        help="output format where the subcommand supports a choice")
    common.add_argument("--samples", type=int, default=None, help="Monte Carlo replicates")
    common.add_argument("--columns", type=_columns_pair, default=None, metavar="X,Y",
                        help="gnuplot column pair")

    p = argparse.ArgumentParser(prog="resnet", description=__doc__)
    p.add_argument("--version", action="version", version=f"resnet {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("resistance", parents=[common],
                       help="effective resistance matrix of a network file, as CSV")
    q.add_argument("network")
    q.set_defaults(func=_cmd_resistance)

    q = sub.add_parser("reconstruct", parents=[common],
                       help="recover the unique network from a resistance CSV")
    q.add_argument("matrix")
    q.set_defaults(func=_cmd_reconstruct)

    q = sub.add_parser("simulate", parents=[common],
                       help="sample the walk: trajectory CSV, or batch statistics JSON")
    q.add_argument("network")
    q.add_argument("--start", type=_parse_label, required=True)
    q.add_argument("--horizon", type=float, required=True)
    q.add_argument("--stop", type=_parse_label, action="append", default=None,
                   help="stop vertex (repeatable)")
    q.add_argument("--walk", choices=("csrw", "vsrw"), default="csrw")
    q.add_argument("--measure-file", default=None, help="explicit measure file (v m lines)")
    q.set_defaults(func=_cmd_simulate)

    q = sub.add_parser("resolvent-check", parents=[common],
                       help="exact resolvent G_x f(y) vs Monte Carlo, as JSON")
    q.add_argument("network")
    q.add_argument("--x", type=_parse_label, required=True, help="absorbing vertex")
    q.add_argument("--y", type=_parse_label, required=True, help="start vertex")
    q.add_argument("--f-file", default=None, help="f as a measure file (default f = 1)")
    q.add_argument("--walk", choices=("csrw", "vsrw"), default="csrw")
    q.add_argument("--measure-file", default=None)
    q.set_defaults(func=_cmd_resolvent_check)

    q = sub.add_parser("gasket-scaling", parents=[common],
                       help="(3/5)^n corner resistance renormalization table")
    q.add_argument("--max-level", type=int, default=5)
    q.add_argument("--mode", choices=("unit", "heavy"), default="unit")
    q.add_argument("--alpha", type=float, default=0.5)
    q.add_argument("--n-seeds", type=int, default=20)
    q.set_defaults(func=_cmd_gasket_scaling)

    q = sub.add_parser("vsrw-clock", parents=[common],
                       help="VSRW corner hitting times under the 5^n clock")
    q.add_argument("--levels", type=_ints, default=[0, 1, 2, 3])
    q.set_defaults(func=_cmd_vsrw_clock)

    q = sub.add_parser("fin", parents=[common],
                       help="heavy-tailed atoms and CSRW trapping report")
    q.add_argument("--level", type=int, default=4)
    q.add_argument("--alpha", type=float, default=0.5)
    q.add_argument("--t-factor", type=float, default=0.5)
    q.add_argument("--top-k", type=int, default=5)
    q.add_argument("--trend-levels", type=_ints, default=[2, 3, 4, 5])
    q.add_argument("--trend-seeds", type=int, default=20)
    q.set_defaults(func=_cmd_fin)

    q = sub.add_parser("tree-scaling", parents=[common],
                       help="VSRW displacement on size-conditioned trees")
    q.add_argument("--sizes", type=_ints, default=[400, 1600])
    q.add_argument("--offspring", default="geometric")
    q.add_argument("--t-grid", type=_floats, default=[0.0, 0.25, 0.5])
    q.set_defaults(func=_cmd_tree_scaling)

    q = sub.add_parser("crg", parents=[common],
                       help="critical random graph giant component scaling")
    q.add_argument("--n-values", type=_ints, default=[1000, 10000])
    q.add_argument("--n-seeds", type=int, default=30)
    q.add_argument("--solve-seeds", type=int, default=5)
    q.add_argument("--t", type=float, default=0.25)
    q.add_argument("--p", type=float, default=None)
    q.set_defaults(func=_cmd_crg)

    q = sub.add_parser("ghp", parents=[common],
                       help="GHP distances across rescaled coarse-grainings")
    q.add_argument("--levels", type=_ints, default=[0, 1, 2])
    q.add_argument("--path-ks", type=_ints, default=[2, 4, 8])
    q.set_defaults(func=_cmd_ghp)

    q = sub.add_parser("exit-bound", parents=[common],
                       help="exit-time tail bound vs Monte Carlo, as JSON")
    q.add_argument("network")
    q.add_argument("--eps", type=float, required=True)
    q.add_argument("--t", type=float, required=True)
    q.add_argument("--grid-size", type=int, default=20)
    q.add_argument("--walk", choices=("csrw", "vsrw"), default="vsrw")
    q.add_argument("--measure-file", default=None)
    q.set_defaults(func=_cmd_exit_bound)

    q = sub.add_parser("generate", help="write a generated network as an edge list")
    gsub = q.add_subparsers(dest="kind", required=True)
    g = gsub.add_parser("gasket", parents=[common])
    g.add_argument("--level", type=int, required=True)
    g.add_argument("--coords-out", default=None, help="also write vertex,x,y CSV")
    g = gsub.add_parser("path", parents=[common])
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--total-resistance", type=float, default=1.0)
    g = gsub.add_parser("interval", parents=[common])
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--alpha", type=float, required=True)
    g = gsub.add_parser("tree", parents=[common])
    g.add_argument("--size", type=int, required=True)
    g.add_argument("--offspring", default="geometric")
    g = gsub.add_parser("er", parents=[common])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, default=None)
    for name in ("gasket", "path", "interval", "tree", "er"):
        gsub.choices[name].set_defaults(func=_cmd_generate, kind=name)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RejectionBudgetError as e:
        print(f"resnet: mc budget: {e}", file=sys.stderr)
        return 4
    except (ValidationError, NotAResistanceMetric) as e:
        print(f"resnet: {e}", file=sys.stderr)
        return 2
    except CapacityError as e:
        print(f"resnet: capacity: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"resnet: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
