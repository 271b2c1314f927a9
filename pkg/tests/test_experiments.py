import json
import math

import numpy as np
import pytest

from resnet import (
    ValidationError,
    exit_bound_report,
    gasket_graph,
    load_criteria,
    result_to_csv,
    result_to_gnuplot,
    result_to_json,
    run_crg,
    run_fin,
    run_gasket_scaling,
    run_ghp_check,
    run_tree_scaling,
    run_vsrw_clock,
    vsrw_measure,
)


def test_criteria_sections_present():
    crit = load_criteria()
    for section in (
        "reconstruction", "metric_decision", "gasket", "resolvent", "exit_bound",
        "dirichlet", "vsrw_clock", "fin", "tree", "crg", "prohorov", "ghp",
    ):
        assert section in crit
    assert crit["gasket"]["constancy_tol"] == 1e-9


class TestGasketScaling:
    def test_unit_mode_rescaled_constant(self):
        res = run_gasket_scaling(max_level=3, mode="unit")
        rescaled = [row[2] for row in res.rows]
        assert abs(rescaled[0] - 2.0 / 3.0) < 1e-14
        assert max(rescaled) - min(rescaled) < 1e-12
        assert res.extra["max_deviation"] < 1e-12

    def test_unit_mode_seed_independent(self):
        a = run_gasket_scaling(max_level=2, mode="unit", seed=1)
        b = run_gasket_scaling(max_level=2, mode="unit", seed=2)
        assert a.rows == b.rows

    def test_heavy_mode_shape_and_determinism(self):
        res = run_gasket_scaling(max_level=2, mode="heavy", alpha=0.5, n_seeds=4, seed=9)
        assert res.columns == ("level", "mean_rescaled", "rel_spread", "n_seeds")
        assert len(res.rows) == 3
        for row in res.rows:
            assert row[1] > 0 and row[2] > 0 and row[3] == 4
        assert len(res.extra["per_seed"]["0"]) == 4
        again = run_gasket_scaling(max_level=2, mode="heavy", alpha=0.5, n_seeds=4, seed=9)
        assert result_to_csv(res) == result_to_csv(again)

    def test_heavy_mode_seed_matters(self):
        a = run_gasket_scaling(max_level=1, mode="heavy", n_seeds=3, seed=1)
        b = run_gasket_scaling(max_level=1, mode="heavy", n_seeds=3, seed=2)
        assert a.rows != b.rows

    def test_validation(self):
        with pytest.raises(ValidationError):
            run_gasket_scaling(max_level=8)
        with pytest.raises(ValidationError):
            run_gasket_scaling(mode="fancy")
        with pytest.raises(ValidationError):
            run_gasket_scaling(mode="heavy", n_seeds=1)


class TestVsrwClock:
    def test_exact_and_mc_agree(self):
        res = run_vsrw_clock(levels=(0, 1, 2), samples=400, seed=3)
        cols = res.columns
        for row in res.rows:
            r = dict(zip(cols, row))
            assert r["q25"] <= r["median"] <= r["q75"]
            # 4-SE band around the linear-solve mean
            assert abs(r["mc_mean"] - r["exact_mean"]) <= 4.0 * r["mc_se"]
            assert r["aborts"] == 0
        assert res.rows[0][cols.index("exact_mean")] == pytest.approx(1.0, abs=1e-9)
        assert res.extra["closed_form_level0"] == 1.0

    def test_ratio_to_prev_only_for_consecutive(self):
        res = run_vsrw_clock(levels=(0, 2), samples=50, seed=1)
        ratios = [row[res.columns.index("ratio_to_prev")] for row in res.rows]
        assert ratios == [None, None]

    def test_exact_column_seed_independent(self):
        a = run_vsrw_clock(levels=(1,), samples=40, seed=5)
        b = run_vsrw_clock(levels=(1,), samples=40, seed=6)
        k = a.columns.index("exact_mean")
        assert a.rows[0][k] == b.rows[0][k]
        assert a.rows[0][a.columns.index("mc_mean")] != b.rows[0][k]

    def test_validation(self):
        with pytest.raises(ValidationError):
            run_vsrw_clock(levels=(6,))
        with pytest.raises(ValidationError):
            run_vsrw_clock(levels=())
        with pytest.raises(ValidationError):
            run_vsrw_clock(levels=(1,), samples=1)


class TestFin:
    def test_atoms_sorted_and_shares(self):
        res = run_fin(level=2, samples=60, seed=5, trend_levels=(2,), trend_seeds=3)
        weights = [row[2] for row in res.rows]
        assert weights == sorted(weights, reverse=True)
        assert all(w > 0 for w in weights)
        shares = [row[3] for row in res.rows]
        assert 0 < sum(shares) <= 1.0 + 1e-12
        assert res.extra["baseline"] == pytest.approx(1.0 / 15.0)

    def test_occupation_estimates_present(self):
        res = run_fin(level=2, samples=80, seed=5, trend_levels=(2,), trend_seeds=3)
        for kind in ("csrw", "vsrw"):
            block = res.extra[kind]
            assert block["fraction_se"] >= 0
            assert block["factor"] == pytest.approx(
                block["fraction_mean"] / res.extra["baseline"]
            )
        assert res.extra["horizon_vsrw"] <= res.extra["horizon_csrw"]

    def test_trend_rows(self):
        res = run_fin(level=2, samples=60, seed=5, trend_levels=(2, 3), trend_seeds=4)
        trend = res.extra["atom_ratio_trend"]
        assert [t[0] for t in trend] == [2, 3]
        for _, med, q25, q75 in trend:
            assert 0 < q25 <= med <= q75 <= 1.0

    def test_deterministic(self):
        a = run_fin(level=2, samples=50, seed=7, trend_levels=(2,), trend_seeds=2)
        b = run_fin(level=2, samples=50, seed=7, trend_levels=(2,), trend_seeds=2)
        assert result_to_json(a) == result_to_json(b)

    def test_validation(self):
        with pytest.raises(ValidationError):
            run_fin(level=0)
        with pytest.raises(ValidationError):
            run_fin(level=2, alpha=1.5, samples=10)
        with pytest.raises(ValidationError):
            run_fin(level=2, t_factor=0.0)


class TestTreeScaling:
    def test_zero_time_and_degenerate_size(self):
        res = run_tree_scaling(sizes=(1, 30), samples=40, seed=2, t_grid=(0.0, 0.5))
        r = {(row[0], row[1]): row[2] for row in res.rows}
        assert r[(1, 0.0)] == 0.0 and r[(1, 0.5)] == 0.0
        assert r[(30, 0.0)] == 0.0
        assert r[(30, 0.5)] > 0.0

    def test_chunking_invariance(self):
        a = run_tree_scaling(sizes=(25,), samples=30, seed=4, trees_per_chunk=30)
        b = run_tree_scaling(sizes=(25,), samples=30, seed=4, trees_per_chunk=7)
        ka = [row for row in a.rows]
        kb = [row for row in b.rows]
        assert ka == kb

    def test_ratio_rows(self):
        res = run_tree_scaling(sizes=(20, 40), samples=30, seed=1, t_grid=(0.0, 0.5))
        ratios = {(p, n, t): r for p, n, t, r in res.extra["ratios"]}
        assert ratios[(20, 40, 0.0)] is None
        assert ratios[(20, 40, 0.5)] > 0

    def test_validation(self):
        with pytest.raises(ValidationError):
            run_tree_scaling(sizes=())
        with pytest.raises(ValidationError):
            run_tree_scaling(sizes=(20000,))
        with pytest.raises(ValidationError):
            run_tree_scaling(sizes=(10,), t_grid=(0.5, 0.25))


class TestCrg:
    def test_complete_graph_degenerate(self):
        res = run_crg(n_values=(40,), samples=10, seed=1, n_seeds=2, solve_seeds=1, p=1.0)
        cols = res.columns
        first = dict(zip(cols, res.rows[0]))
        assert first["size"] == 40
        # complete-graph resistance diameter is 2/n
        assert first["r_diameter"] == pytest.approx(2.0 / 40.0, rel=1e-9)
        assert first["rescaled_r_diameter"] < 0.05
        assert res.extra["max_r_minus_graph_distance"] <= 1e-9

    def test_rayleigh_bound_and_determinism(self):
        res = run_crg(n_values=(150,), samples=10, seed=3, n_seeds=4, solve_seeds=2)
        assert res.extra["max_r_minus_graph_distance"] <= 1e-9
        again = run_crg(n_values=(150,), samples=10, seed=3, n_seeds=4, solve_seeds=2)
        assert result_to_csv(res) == result_to_csv(again)

    def test_unsolved_rows_have_none(self):
        res = run_crg(n_values=(100,), samples=10, seed=2, n_seeds=3, solve_seeds=1)
        k = res.columns.index("r_diameter")
        assert res.rows[1][k] is None and res.rows[2][k] is None

    def test_validation(self):
        with pytest.raises(ValidationError):
            run_crg(n_values=(10**5 + 1,))
        with pytest.raises(ValidationError):
            run_crg(n_values=(100,), samples=1)


class TestGhpCheck:
    def test_references(self):
        res = run_ghp_check(levels=(0, 1), path_ks=(2, 4))
        rows = {(row[0], row[1]): row for row in res.rows}
        assert rows[("identical", "gasket level 0")][2] == 0.0
        for n in (0, 1):
            assert rows[("gasket", f"levels {n} vs {n + 1}")][2] <= 1e-9
        # closed form 3k/((k+1)(2k+1)) for the path coarse-grainings
        assert rows[("path", "k=2 vs 4")][2] == pytest.approx(0.4, abs=1e-12)
        assert rows[("path", "k=4 vs 8")][2] == pytest.approx(12.0 / 45.0, abs=1e-12)
        assert res.extra["path_decreasing"] is True

    def test_deterministic(self):
        a = run_ghp_check(levels=(0,), path_ks=(2,))
        b = run_ghp_check(levels=(0,), path_ks=(2,))
        assert result_to_json(a) == result_to_json(b)
        assert a.seed is None

    def test_validation(self):
        with pytest.raises(ValidationError):
            run_ghp_check(levels=(5,))
        with pytest.raises(ValidationError):
            run_ghp_check(levels=(), path_ks=(3,))


class TestWriters:
    def test_csv_embeds_metadata(self):
        res = run_gasket_scaling(max_level=1, mode="unit", seed=4)
        text = result_to_csv(res)
        lines = text.splitlines()
        assert lines[0] == "# experiment: gasket-scaling"
        assert lines[1].startswith("# version: ")
        assert lines[2] == "# seed: 4"
        assert lines[3].startswith("# parameters: ")
        assert json.loads(lines[3].split(": ", 1)[1]) == res.parameters
        assert "level,corner_resistance,rescaled" in lines

    def test_json_embeds_metadata(self):
        res = run_gasket_scaling(max_level=1, mode="unit", seed=4)
        payload = json.loads(result_to_json(res))
        assert payload["experiment"] == "gasket-scaling"
        assert payload["seed"] == 4
        assert payload["parameters"]["max_level"] == 1
        assert payload["rows"][0][1] == pytest.approx(2.0 / 3.0)
        assert "version" in payload

    def test_gnuplot_two_columns(self):
        res = run_gasket_scaling(max_level=2, mode="unit")
        text = result_to_gnuplot(res, "level", "rescaled")
        lines = text.splitlines()
        assert lines[0].startswith("#")
        assert len(lines) == 1 + len(res.rows)
        for line in lines[1:]:
            assert len(line.split()) == 2

    def test_gnuplot_unknown_column(self):
        res = run_gasket_scaling(max_level=1, mode="unit")
        with pytest.raises(ValidationError):
            result_to_gnuplot(res, "level", "nope")

    def test_gnuplot_skips_none_cells(self):
        res = run_crg(n_values=(80,), samples=10, seed=1, n_seeds=2, solve_seeds=1)
        text = result_to_gnuplot(res, "n", "r_diameter")
        assert len(text.splitlines()) == 2  # header + the one solved row


class TestExitBoundReport:
    def test_report_shape_and_bound(self):
        g = gasket_graph(1)
        rep = exit_bound_report(g.net, vsrw_measure(g.net), eps=0.4, t=0.3,
                                samples=60, seed=2)
        for key in ("eps", "delta", "t", "bound", "mc_sup", "mc_se", "per_start"):
            assert key in rep
        assert len(rep["per_start"]) == g.net.n_vertices
        assert rep["mc_sup"] <= max(e["mean"] for e in rep["per_start"]) + 1e-12
        assert rep["mc_sup"] <= rep["bound"]
        assert rep["aborts"] == 0

    def test_deterministic(self):
        g = gasket_graph(1)
        a = exit_bound_report(g.net, vsrw_measure(g.net), 0.4, 0.3, 40, 7)
        b = exit_bound_report(g.net, vsrw_measure(g.net), 0.4, 0.3, 40, 7)
        assert a == b
