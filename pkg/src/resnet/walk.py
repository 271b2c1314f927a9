"""Continuous-time random walk: trajectories, hitting times, local times.

The generator is (Delta f)(x) = mu({x})^{-1} sum_y c(x,y)(f(y)-f(x)): holding
times at x are exponential of rate c(x)/mu({x}) and the embedded jump chain is
P(x,y) = c(x,y)/c(x). mu = c(.) gives the constant-speed walk (CSRW, unit-rate
holds); mu = 1 gives the variable-speed walk (VSRW).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import MAX_JUMPS, WalkDynamics, walk_single
from .errors import ValidationError
from .network import Network, VertexMeasure
from .rng import check_seed, stream


@dataclass(frozen=True)
class Trajectory:
    """A cadlag sample path up to a horizon.

    states[i] is the position from jump_times[i] (inclusive) until the next
    jump; jump_times[0] = 0.0 at the start vertex. If `stopped`, the walk
    ended by entering the stop set at jump_times[-1]; otherwise it holds
    states[-1] until the horizon.
    """

    states: tuple
    jump_times: np.ndarray
    horizon: float
    stopped: bool = False
    aborted: bool = False

    def __post_init__(self):
        jt = np.asarray(self.jump_times, dtype=np.float64)
        if len(jt) != len(self.states) or len(jt) == 0:
            raise ValidationError("states and jump_times must align and be nonempty")
        if jt[0] != 0.0 or (np.diff(jt) <= 0).any():
            raise ValidationError("jump times must start at 0 and strictly increase")
        object.__setattr__(self, "jump_times", jt)

    def __len__(self):
        return len(self.states)

    @property
    def duration(self) -> float:
        """Elapsed time covered: stop entry time if stopped, else the horizon."""
        if self.stopped or self.aborted:
            return float(self.jump_times[-1])
        return float(self.horizon)

    def state_at(self, t: float):
        if not 0 <= t <= self.duration:
            raise ValidationError(f"time {t} outside [0, {self.duration}]")
        i = int(np.searchsorted(self.jump_times, t, side="right")) - 1
        return self.states[i]


@dataclass(frozen=True)
class LocalTimeField:
    """Occupation densities L_t(x) = occupation time at x / mu({x})."""

    values: dict
    occupations: dict = field(repr=False, default_factory=dict)
    t: float = 0.0

    def __getitem__(self, v):
        return self.values.get(v, 0.0)

    def weighted_total(self, mu: VertexMeasure) -> float:
        return float(sum(self.values[v] * mu[v] for v in self.values))


def jump_chain_matrix(net: Network) -> np.ndarray:
    """Row-stochastic P(x,y) = c(x,y)/c(x) in canonical vertex order."""
    n = net.n_vertices
    P = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        if len(net._nbr[i]):
            P[i, net._nbr[i]] = net._nbr_cond[i] / net._cx[i]
    return P


def csrw_measure(net: Network) -> VertexMeasure:
    """mu({x}) = c(x): the constant-speed walk (all holding rates 1)."""
    return VertexMeasure({v: net.vertex_conductance(v) for v in net.vertices})


def vsrw_measure(net: Network) -> VertexMeasure:
    """mu identically 1: the variable-speed walk."""
    return VertexMeasure({v: 1.0 for v in net.vertices})


def _stop_mask(net: Network, stop) -> np.ndarray | None:
    if stop is None:
        return None
    stop = set(stop)
    if not stop:
        raise ValidationError("stop set must be nonempty when given")
    mask = np.zeros(net.n_vertices, dtype=bool)
    for v in stop:
        mask[net.index(v)] = True
    return mask


def simulate(
    net: Network,
    mu: VertexMeasure,
    start,
    horizon: float,
    stop=None,
    seed: int = 0,
    max_jumps: int = MAX_JUMPS,
) -> Trajectory:
    """Sample one trajectory of the chain started at `start`.

    Ends at the horizon (last state held) or on first entry into `stop`,
    whichever is earlier. Deterministic given the seed.
    """
    if not horizon > 0:
        raise ValidationError(f"horizon must be > 0, got {horizon}")
    dyn = WalkDynamics.from_network(net, mu)
    gen = stream(check_seed(seed))
    times, idx_states, stopped, aborted = walk_single(
        dyn, net.index(start), horizon, _stop_mask(net, stop), gen, max_jumps=max_jumps
    )
    return Trajectory(
        states=tuple(net.vertices[i] for i in idx_states),
        jump_times=np.array(times),
        horizon=float(horizon),
        stopped=stopped,
        aborted=aborted,
    )


def hitting_time(traj: Trajectory, A) -> float | None:
    """First time the path is in A, or None if not hit before the end."""
    A = set(A)
    if not A:
        raise ValidationError("hitting set must be nonempty")
    for t, s in zip(traj.jump_times, traj.states):
        if s in A:
            return float(t)
    return None


def local_times(traj: Trajectory, mu: VertexMeasure, t: float) -> LocalTimeField:
    """L_t(x) = occupation time of x on [0, t] divided by mu({x}).

    For a stopped trajectory the killed walk sits still, so occupation is
    accumulated only up to min(t, stop time); the normalization
    sum_x L_t(x) mu({x}) then recovers the elapsed (pre-kill) time.
    """
    if t < 0 or t > traj.horizon:
        raise ValidationError(f"t = {t} outside [0, horizon = {traj.horizon}]")
    t_eff = min(float(t), traj.duration)
    occ: dict = {}
    jt = traj.jump_times
    for i, s in enumerate(traj.states):
        lo = jt[i]
        if lo >= t_eff:
            break
        hi = jt[i + 1] if i + 1 < len(jt) else t_eff
        seg = min(float(hi), t_eff) - float(lo)
        occ[s] = occ.get(s, 0.0) + seg
    values = {v: occ.get(v, 0.0) / mu[v] for v in occ}
    return LocalTimeField(values=values, occupations=occ, t=t_eff)
