"""Walk simulation: jump chain, trajectories, local times, batch engine.

Statistical checks use 3 or 4 standard-error bands around exactly known
targets (exponential means, jump-chain rows, reversible occupation measure).
The batch engine must reproduce the sequential walker draw for draw, so those
comparisons are exact equality, not tolerance.
"""

import numpy as np
import pytest

from resnet.engine import BatchWalk, WalkDynamics, batch_walk, walk_single
from resnet.errors import ValidationError
from resnet.network import Network, VertexMeasure, resistance_matrix
from resnet.rng import stream
from resnet.walk import (
    Trajectory,
    csrw_measure,
    hitting_time,
    jump_chain_matrix,
    local_times,
    simulate,
    vsrw_measure,
)

from conftest import random_connected_net, random_measure


def star_net():
    return Network({("o", 1): 1.0, ("o", 2): 2.0, ("o", 3): 3.0})


class TestJumpChain:
    def test_single_edge(self):
        P = jump_chain_matrix(Network({(0, 1): 3.0}))
        assert np.array_equal(P, [[0, 1], [1, 0]])

    def test_star_center_row(self):
        net = star_net()
        P = jump_chain_matrix(net)
        i = net.index("o")
        np.testing.assert_allclose(np.delete(P[i], i), [1 / 6, 2 / 6, 3 / 6])

    def test_rows_stochastic(self, rng):
        for _ in range(10):
            net = random_connected_net(rng)
            P = jump_chain_matrix(net)
            np.testing.assert_allclose(P.sum(axis=1), 1.0, atol=1e-12)
            assert ((P > 0) == (net.laplacian() < 0)).all()


class TestMeasures:
    def test_csrw_triangle(self):
        net = Network({(0, 1): 1.0, (1, 2): 1.0, (0, 2): 1.0})
        mu = csrw_measure(net)
        assert all(mu[v] == 2.0 for v in net.vertices)

    def test_csrw_star_center(self):
        assert csrw_measure(star_net())["o"] == 6.0

    def test_vsrw_all_ones(self, rng):
        net = random_connected_net(rng)
        mu = vsrw_measure(net)
        assert all(mu[v] == 1.0 for v in net.vertices)


class TestSimulate:
    def test_deterministic(self, rng):
        net = random_connected_net(rng, n_max=8)
        mu = random_measure(rng, net)
        a = simulate(net, mu, net.vertices[0], horizon=50.0, seed=99)
        b = simulate(net, mu, net.vertices[0], horizon=50.0, seed=99)
        assert a.states == b.states
        assert np.array_equal(a.jump_times, b.jump_times)

    def test_stop_at_start(self):
        net = Network({(0, 1): 1.0})
        traj = simulate(net, vsrw_measure(net), 0, horizon=10.0, stop={0}, seed=1)
        assert len(traj) == 1 and traj.duration == 0.0 and traj.stopped

    def test_unknown_start(self):
        net = Network({(0, 1): 1.0})
        with pytest.raises(ValidationError):
            simulate(net, vsrw_measure(net), 7, horizon=1.0, seed=1)

    def test_mean_holding_time(self):
        # two-vertex unit net, mu = 1: the first hold is Exp(1)
        net = Network({(0, 1): 1.0})
        dyn = WalkDynamics.from_network(net, vsrw_measure(net))
        stop = np.array([False, True])
        res = batch_walk(dyn, np.zeros(100_000, dtype=np.intp), np.inf, seed=7, stop_mask=stop)
        times = res.end_time
        se = times.std(ddof=1) / np.sqrt(len(times))
        assert abs(times.mean() - 1.0) <= 3 * se

    def test_csrw_unit_rate_holds(self, rng):
        # CSRW holding rate c(x)/mu(x) = 1 at every state
        net = random_connected_net(rng, n_max=6)
        traj = simulate(net, csrw_measure(net), net.vertices[0], horizon=3000.0, seed=5)
        holds = np.diff(traj.jump_times)
        se = holds.std(ddof=1) / np.sqrt(len(holds))
        assert abs(holds.mean() - 1.0) <= 3 * se

    def test_horizon_freeze(self):
        net = Network({(0, 1): 1.0})
        traj = simulate(net, vsrw_measure(net), 0, horizon=0.5, seed=3)
        assert traj.jump_times[-1] <= 0.5
        assert not traj.stopped
        assert traj.duration == 0.5

    def test_jump_chain_frequencies(self):
        net = star_net()
        mu = vsrw_measure(net)
        traj = simulate(net, mu, "o", horizon=2e5, seed=42)
        P = jump_chain_matrix(net)
        counts = {}
        for a, b in zip(traj.states, traj.states[1:]):
            counts[(a, b)] = counts.get((a, b), 0) + 1
        from_o = sum(c for (a, _), c in counts.items() if a == "o")
        assert from_o > 10_000
        for y in (1, 2, 3):
            p = P[net.index("o"), net.index(y)]
            freq = counts.get(("o", y), 0) / from_o
            se = np.sqrt(p * (1 - p) / from_o)
            assert abs(freq - p) <= 4 * se


class TestHittingTime:
    def test_start_in_set(self):
        net = Network({(0, 1): 1.0})
        traj = simulate(net, vsrw_measure(net), 0, horizon=5.0, seed=1)
        assert hitting_time(traj, {0}) == 0.0

    def test_never_hit(self):
        traj = Trajectory(states=(0,), jump_times=np.array([0.0]), horizon=2.0)
        assert hitting_time(traj, {"absent"}) is None

    def test_empty_set(self):
        traj = Trajectory(states=(0,), jump_times=np.array([0.0]), horizon=2.0)
        with pytest.raises(ValidationError):
            hitting_time(traj, set())

    def test_mean_two_vertex(self):
        net = Network({(0, 1): 1.0})
        dyn = WalkDynamics.from_network(net, vsrw_measure(net))
        res = batch_walk(
            dyn, np.zeros(100_000, dtype=np.intp), np.inf, seed=11,
            stop_mask=np.array([False, True]),
        )
        se = res.end_time.std(ddof=1) / np.sqrt(len(res.end_time))
        assert abs(res.end_time.mean() - 1.0) <= 3 * se


class TestLocalTimes:
    def test_zero_time(self, rng):
        net = random_connected_net(rng, n_max=6)
        mu = random_measure(rng, net)
        traj = simulate(net, mu, net.vertices[0], horizon=5.0, seed=2)
        ltf = local_times(traj, mu, 0.0)
        assert all(ltf[v] == 0.0 for v in net.vertices)

    def test_normalization(self, rng):
        for k in range(15):
            net = random_connected_net(rng, n_max=10)
            mu = random_measure(rng, net)
            horizon = float(rng.uniform(1, 40))
            traj = simulate(net, mu, net.vertices[0], horizon=horizon, seed=k)
            t = float(rng.uniform(0, horizon))
            ltf = local_times(traj, mu, t)
            assert ltf.weighted_total(mu) == pytest.approx(t, abs=1e-12 * max(1.0, t))

    def test_normalization_stopped(self, rng):
        net = random_connected_net(rng, n_max=8)
        mu = random_measure(rng, net)
        target = net.vertices[-1]
        traj = simulate(net, mu, net.vertices[0], horizon=1e4, stop={target}, seed=9)
        assert traj.stopped
        ltf = local_times(traj, mu, traj.horizon)
        assert ltf.weighted_total(mu) == pytest.approx(traj.duration, abs=1e-10)
        assert ltf[target] == 0.0  # killed on arrival, no occupation there

    def test_t_beyond_horizon(self):
        traj = Trajectory(states=(0,), jump_times=np.array([0.0]), horizon=1.0)
        with pytest.raises(ValidationError):
            local_times(traj, VertexMeasure({0: 1.0}), 2.0)

    def test_reversibility_occupation(self, rng):
        # CSRW is reversible w.r.t. mu = c(.): occupation fractions -> c(x)/sum c
        net = random_connected_net(rng, n_max=10, n_min=4)
        mu = csrw_measure(net)
        total_c = sum(mu[v] for v in net.vertices)
        reps = 30
        fractions = {v: [] for v in net.vertices}
        for r in range(reps):
            traj = simulate(net, mu, net.vertices[0], horizon=1e4, seed=1000 + r)
            ltf = local_times(traj, mu, traj.horizon)
            for v in net.vertices:
                fractions[v].append(ltf[v] * mu[v] / traj.horizon)
        for v in net.vertices:
            arr = np.array(fractions[v])
            target = mu[v] / total_c
            se = arr.std(ddof=1) / np.sqrt(reps)
            assert abs(arr.mean() - target) <= 3 * se + 1e-12


class TestBatchEngine:
    def _summaries(self, dyn, start, horizon, stop_mask, gen, weights):
        times, states, stopped, aborted = walk_single(dyn, start, horizon, stop_mask, gen)
        acc = np.float64(0.0)
        for i in range(len(states) - 1):
            acc = acc + weights[states[i]] * (np.float64(times[i + 1]) - np.float64(times[i]))
        if not stopped and not aborted:
            acc = acc + weights[states[-1]] * (np.float64(horizon) - np.float64(times[-1]))
            end_t = np.float64(horizon)
        else:
            end_t = np.float64(times[-1])
        return states[-1], end_t, stopped, aborted, len(states) - 1, acc

    def test_batch_matches_sequential(self, rng):
        for trial in range(6):
            net = random_connected_net(rng, n_max=9, n_min=3)
            mu = random_measure(rng, net)
            dyn = WalkDynamics.from_network(net, mu)
            n = net.n_vertices
            stop_mask = None
            if trial % 2:
                stop_mask = np.zeros(n, dtype=bool)
                stop_mask[n - 1] = True
            w = rng.uniform(0, 2, size=n)
            horizon = float(rng.uniform(5, 30))
            m = 40
            starts = rng.integers(0, n - 1, size=m).astype(np.intp)
            seed = 500 + trial
            res = batch_walk(dyn, starts, horizon, seed, stop_mask=stop_mask, weights=w)
            for i in range(m):
                s, t, stopped, aborted, jumps, acc = self._summaries(
                    dyn, int(starts[i]), np.float64(horizon), stop_mask, stream(seed, i), w
                )
                assert res.end_state[i] == s
                assert res.end_time[i] == t
                assert res.stopped[i] == stopped
                assert res.aborted[i] == aborted
                assert res.n_jumps[i] == jumps
                assert res.acc[i] == acc

    def test_chunk_size_irrelevant(self, rng):
        net = random_connected_net(rng, n_max=7)
        mu = random_measure(rng, net)
        dyn = WalkDynamics.from_network(net, mu)
        starts = np.zeros(25, dtype=np.intp)
        a = batch_walk(dyn, starts, 20.0, seed=3, chunk=5)
        b = batch_walk(dyn, starts, 20.0, seed=3, chunk=256)
        assert np.array_equal(a.end_state, b.end_state)
        assert np.array_equal(a.end_time, b.end_time)
        assert np.array_equal(a.n_jumps, b.n_jumps)

    def test_index_base_splits_batch(self, rng):
        net = random_connected_net(rng, n_max=7)
        mu = random_measure(rng, net)
        dyn = WalkDynamics.from_network(net, mu)
        starts = rng.integers(0, net.n_vertices, size=30).astype(np.intp)
        whole = batch_walk(dyn, starts, 15.0, seed=9, key=(2,))
        parts = [
            batch_walk(dyn, starts[c : c + 7], 15.0, seed=9, key=(2,), index_base=c)
            for c in range(0, 30, 7)
        ]
        assert np.array_equal(whole.end_state, np.concatenate([p.end_state for p in parts]))
        assert np.array_equal(whole.end_time, np.concatenate([p.end_time for p in parts]))
        assert np.array_equal(whole.n_jumps, np.concatenate([p.n_jumps for p in parts]))

    def test_grid_snapshots_match_trajectory(self, rng):
        net = random_connected_net(rng, n_max=8, n_min=3)
        mu = random_measure(rng, net)
        dyn = WalkDynamics.from_network(net, mu)
        horizon = 25.0
        grid = np.array([0.0, 1.0, 5.0, 12.5, 25.0])
        m = 30
        seed = 77
        res = batch_walk(dyn, np.zeros(m, dtype=np.intp), horizon, seed, grid=grid)
        for i in range(m):
            times, states, stopped, aborted = walk_single(
                dyn, 0, np.float64(horizon), None, stream(seed, i)
            )
            traj = Trajectory(
                states=tuple(states), jump_times=np.array(times),
                horizon=horizon, stopped=stopped, aborted=aborted,
            )
            for k, g in enumerate(grid):
                assert res.snapshots[i, k] == traj.state_at(float(g))

    def test_abort_flag(self):
        net = Network({(0, 1): 1.0})
        traj = simulate(net, vsrw_measure(net), 0, horizon=1e9, seed=1, max_jumps=10)
        assert traj.aborted and len(traj) == 11

    def test_infinite_horizon_needs_stop(self):
        net = Network({(0, 1): 1.0})
        dyn = WalkDynamics.from_network(net, vsrw_measure(net))
        with pytest.raises(ValidationError):
            batch_walk(dyn, np.zeros(3, dtype=np.intp), np.inf, seed=1)

    def test_disjoint_union_stays_in_component(self, rng):
        nets = []
        for _ in range(4):
            net = random_connected_net(rng, n_max=5, n_min=2)
            nets.append((net, vsrw_measure(net)))
        dyn, offsets = WalkDynamics.from_networks(nets)
        sizes = [p[0].n_vertices for p in nets]
        starts = np.array(offsets, dtype=np.intp)
        res = batch_walk(dyn, starts, 50.0, seed=8)
        for k in range(4):
            assert offsets[k] <= res.end_state[k] < offsets[k] + sizes[k]
            assert dyn.labels[res.end_state[k]][0] == k
