"""Walk dynamics and the replicated simulation engine.

The continuous-time chain jumps from x with exponential holding time of rate
c(x)/mu({x}) and picks the next vertex from the jump chain c(x,y)/c(x). Both
the single-trajectory walker and the vectorized batch engine consume random
draws in the same per-replicate order (holding uniform, then jump uniform,
skipped when the hold crosses the horizon), and replicate i of a batch reads
the dedicated stream(seed, ..., i). Batch results are therefore bit-identical
to running the replicates one at a time, independent of chunking or
scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .network import Network, VertexMeasure
from .rng import stream

#: safety cap on jumps per replicate; exceeding it aborts the replicate
MAX_JUMPS = 10**6

_CHUNK = 128


class WalkDynamics:
    """Precomputed jump-chain arrays for one network (or a disjoint union).

    Index space is the canonical vertex order; `cum` rows are cumulative
    jump-chain probabilities padded with +inf so a single comparison count
    selects the jump target.
    """

    def __init__(self, labels, nbr_lists, cond_lists, mu_arr):
        n = len(labels)
        self.labels = tuple(labels)
        self.n_states = n
        self.deg = np.array([len(a) for a in nbr_lists], dtype=np.intp)
        max_deg = int(self.deg.max()) if n else 0
        self.nbr = np.zeros((n, max(max_deg, 1)), dtype=np.intp)
        self.cum = np.full((n, max(max_deg, 1)), np.inf, dtype=np.float64)
        cx = np.zeros(n, dtype=np.float64)
        for i, (ns, cs) in enumerate(zip(nbr_lists, cond_lists)):
            d = len(ns)
            if d:
                self.nbr[i, :d] = ns
                cx[i] = cs.sum()
                self.cum[i, :d] = np.cumsum(cs) / cx[i]
        self.cx = cx
        self.mu = np.asarray(mu_arr, dtype=np.float64)
        with np.errstate(divide="ignore"):
            self.inv_rate = np.where(self.deg > 0, self.mu / np.where(cx > 0, cx, 1.0), np.inf)

    @classmethod
    def from_network(cls, net: Network, mu: VertexMeasure) -> "WalkDynamics":
        return cls(net.vertices, net._nbr, net._nbr_cond, mu.as_array(net))

    @classmethod
    def from_networks(cls, pairs: Sequence[tuple[Network, VertexMeasure]]):
        """Disjoint union of several (net, mu) pairs; walks cannot cross
        components. Returns (dynamics, offsets) with offsets[k] the index of
        component k's first vertex. Labels are (k, original_label)."""
        labels, nbrs, conds, mus = [], [], [], []
        offsets = []
        for k, (net, mu) in enumerate(pairs):
            off = len(labels)
            offsets.append(off)
            labels.extend((k, v) for v in net.vertices)
            nbrs.extend(a + off for a in net._nbr)
            conds.extend(net._nbr_cond)
            mus.extend(mu.as_array(net))
        return cls(labels, nbrs, conds, np.array(mus)), offsets


def _draw(gen) -> float:
    # open-interval uniform; measure-zero 0.0 is redrawn so log never sees it
    u = gen.random()
    while u == 0.0:
        u = gen.random()
    return u


def walk_single(
    dyn: WalkDynamics,
    start: int,
    horizon: float,
    stop_mask: np.ndarray | None,
    gen: np.random.Generator,
    max_jumps: int = MAX_JUMPS,
):
    """Reference walker: one replicate, full jump record.

    Returns (times, states, stopped, aborted); times[0] = 0.0 at the start
    index. The trajectory is frozen at the horizon (last state held); entry
    into the stop set ends the walk at the entry time.
    """
    if not horizon >= 0:
        raise ValidationError(f"horizon must be >= 0, got {horizon}")
    times = [0.0]
    states = [start]
    s = start
    t = np.float64(0.0)
    stopped = aborted = False
    jumps = 0
    while True:
        if stop_mask is not None and stop_mask[s]:
            stopped = True
            break
        if jumps >= max_jumps:
            aborted = True
            break
        u1 = _draw(gen)
        dt = -np.log(u1) * dyn.inv_rate[s]
        if t + dt > horizon:
            break
        u2 = _draw(gen)
        j = int(np.searchsorted(dyn.cum[s], u2, side="right"))
        if j >= dyn.deg[s]:
            j = int(dyn.deg[s]) - 1
        s = int(dyn.nbr[s, j])
        t = t + dt
        jumps += 1
        times.append(float(t))
        states.append(s)
    return times, states, stopped, aborted


@dataclass
class BatchResult:
    """Per-replicate summaries of a finished batch."""

    end_time: np.ndarray  # time the walk ended: stop entry, abort point, or horizon
    end_state: np.ndarray
    stopped: np.ndarray  # bool: ended by entering the stop set
    aborted: np.ndarray  # bool: hit the jump cap
    n_jumps: np.ndarray
    acc: np.ndarray | None  # integral of weights[X_s] ds, valid for non-aborted rows
    snapshots: np.ndarray | None  # (m, len(grid)) state indices at grid times


class _Buffers:
    """Per-replicate chunked uniforms; block draws equal repeated single draws."""

    def __init__(self, gens, chunk=_CHUNK):
        self.gens = gens
        self.chunk = chunk
        m = len(gens)
        self.u = np.empty((m, chunk), dtype=np.float64)
        self.ptr = np.full(m, chunk, dtype=np.intp)

    def take(self, rows: np.ndarray) -> np.ndarray:
        need = rows[self.ptr[rows] >= self.chunk]
        for i in need:
            self.u[i] = self.gens[i].random(self.chunk)
            self.ptr[i] = 0
        vals = self.u[rows, self.ptr[rows]]
        self.ptr[rows] += 1
        zero = np.flatnonzero(vals == 0.0)
        for k in zero:  # measure-zero redraw, mirrors the scalar walker
            i = rows[k]
            v = 0.0
            while v == 0.0:
                if self.ptr[i] >= self.chunk:
                    self.u[i] = self.gens[i].random(self.chunk)
                    self.ptr[i] = 0
                v = self.u[i, self.ptr[i]]
                self.ptr[i] += 1
            vals[k] = v
        return vals


class BatchWalk:
    """Vectorized replicated walk with pending-jump (event-driven) state.

    Each row's next jump is pre-drawn on state entry: holding uniform first,
    then the jump uniform unless the hold crosses the horizon (then the row
    freezes there). `advance(until)` applies all jumps with time <= until, so
    grid snapshots can be taken between calls without disturbing the draw
    order.
    """

    def __init__(
        self,
        dyn: WalkDynamics,
        starts,
        horizon: float,
        seed: int,
        key: tuple = (),
        stop_mask: np.ndarray | None = None,
        weights: np.ndarray | None = None,
        max_jumps: int = MAX_JUMPS,
        chunk: int = _CHUNK,
        index_base: int = 0,
    ):
        starts = np.asarray(starts, dtype=np.intp)
        m = len(starts)
        if not (horizon >= 0):
            raise ValidationError(f"horizon must be >= 0, got {horizon}")
        if not np.isfinite(horizon):
            if stop_mask is None or not stop_mask.any():
                raise ValidationError("infinite horizon requires a stop set")
            if (dyn.deg[starts] == 0).any() and not stop_mask[starts].all():
                raise ValidationError("isolated start with infinite horizon")
        self.dyn = dyn
        self.horizon = np.float64(horizon)
        self.stop_mask = stop_mask
        self.weights = None if weights is None else np.asarray(weights, dtype=np.float64)
        self.max_jumps = max_jumps

        self.state = starts.copy()
        self.t = np.zeros(m, dtype=np.float64)  # entry time of current state
        self.pending_t = np.empty(m, dtype=np.float64)
        self.pending_next = np.full(m, -1, dtype=np.intp)  # -1: freeze at horizon
        self.done = np.zeros(m, dtype=bool)
        self.stopped = np.zeros(m, dtype=bool)
        self.aborted = np.zeros(m, dtype=bool)
        self.n_jumps = np.zeros(m, dtype=np.int64)
        self.end_time = np.full(m, np.nan)
        self.acc = None if weights is None else np.zeros(m, dtype=np.float64)
        self.finalized = np.zeros(m, dtype=bool)

        self.buf = _Buffers([stream(seed, *key, index_base + i) for i in range(m)], chunk=chunk)
        rows = np.arange(m, dtype=np.intp)
        self._settle(rows)

    def _settle(self, rows: np.ndarray):
        """Handle stop/abort on state entry, then pre-draw the pending jump."""
        if len(rows) == 0:
            return
        if self.stop_mask is not None:
            hit = rows[self.stop_mask[self.state[rows]]]
            if len(hit):
                self.done[hit] = True
                self.stopped[hit] = True
                self.end_time[hit] = self.t[hit]
                self.finalized[hit] = True
                rows = rows[~self.stop_mask[self.state[rows]]]
        if len(rows) == 0:
            return
        capped = rows[self.n_jumps[rows] >= self.max_jumps]
        if len(capped):
            self.done[capped] = True
            self.aborted[capped] = True
            self.end_time[capped] = self.t[capped]
            self.finalized[capped] = True
            rows = rows[self.n_jumps[rows] < self.max_jumps]
        if len(rows) == 0:
            return
        u1 = self.buf.take(rows)
        dt = -np.log(u1) * self.dyn.inv_rate[self.state[rows]]
        t_next = self.t[rows] + dt
        crosses = t_next > self.horizon
        freeze = rows[crosses]
        self.pending_t[freeze] = self.horizon
        self.pending_next[freeze] = -1
        jump = rows[~crosses]
        if len(jump):
            u2 = self.buf.take(jump)
            st = self.state[jump]
            sel = (self.dyn.cum[st] <= u2[:, None]).sum(axis=1)
            sel = np.minimum(sel, self.dyn.deg[st] - 1)
            self.pending_t[jump] = t_next[~crosses]
            self.pending_next[jump] = self.dyn.nbr[st, sel]

    def advance(self, until: float):
        """Apply all pending jumps with time <= until (must be <= horizon)."""
        until = np.float64(until)
        while True:
            rows = np.flatnonzero(~self.done & (self.pending_t <= until))
            if len(rows) == 0:
                return
            jumping = rows[self.pending_next[rows] >= 0]
            frozen = rows[self.pending_next[rows] < 0]
            if len(frozen):
                # horizon reached: charge the residual hold and finish
                if self.acc is not None:
                    self.acc[frozen] += self.weights[self.state[frozen]] * (
                        self.horizon - self.t[frozen]
                    )
                self.done[frozen] = True
                self.end_time[frozen] = self.horizon
                self.finalized[frozen] = True
            if len(jumping):
                if self.acc is not None:
                    self.acc[jumping] += self.weights[self.state[jumping]] * (
                        self.pending_t[jumping] - self.t[jumping]
                    )
                self.state[jumping] = self.pending_next[jumping]
                self.t[jumping] = self.pending_t[jumping]
                self.n_jumps[jumping] += 1
                self._settle(jumping)

    def run(self, grid=None) -> BatchResult:
        """Drive every replicate to completion, snapshotting at grid times."""
        snaps = None
        if grid is not None:
            grid = np.asarray(grid, dtype=np.float64)
            if len(grid) and (np.diff(grid) < 0).any():
                raise ValidationError("snapshot grid must be nondecreasing")
            if len(grid) and grid[-1] > self.horizon:
                raise ValidationError("snapshot grid exceeds the horizon")
            snaps = np.empty((len(self.state), len(grid)), dtype=np.intp)
            for k, g in enumerate(grid):
                self.advance(g)
                snaps[:, k] = self.state
        self.advance(self.horizon)
        # stop-set entries never start a hold, so their end state is final;
        # rows still pending here froze at the horizon inside advance
        return BatchResult(
            end_time=self.end_time.copy(),
            end_state=self.state.copy(),
            stopped=self.stopped.copy(),
            aborted=self.aborted.copy(),
            n_jumps=self.n_jumps.copy(),
            acc=None if self.acc is None else self.acc.copy(),
            snapshots=snaps,
        )


def batch_walk(
    dyn: WalkDynamics,
    starts,
    horizon: float,
    seed: int,
    key: tuple = (),
    stop_mask: np.ndarray | None = None,
    weights: np.ndarray | None = None,
    grid=None,
    max_jumps: int = MAX_JUMPS,
    chunk: int = _CHUNK,
    index_base: int = 0,
) -> BatchResult:
    """Run len(starts) replicates; replicate i consumes stream(seed, *key,
    index_base + i), so split batches reproduce one large batch exactly."""
    bw = BatchWalk(
        dyn, starts, horizon, seed, key=key, stop_mask=stop_mask,
        weights=weights, max_jumps=max_jumps, chunk=chunk, index_base=index_base,
    )
    return bw.run(grid=grid)
