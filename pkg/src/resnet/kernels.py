"""Green/resolvent kernels of the killed walk, exact and Monte Carlo.

The walk killed on hitting x has occupation density g_x(y,z) =
(R(x,y) + R(x,z) - R(y,z)) / 2: expected local time at z before sigma_x,
started from y. Killing on a set A shorts A to a point, replacing R(.,x) by
R(., A) and R by the shorted resistance R_A. The Monte Carlo estimators here
exist to cross-validate the exact formulas, so they stay plain and unbiased.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .engine import MAX_JUMPS, WalkDynamics, batch_walk
from .errors import ValidationError
from .network import (
    Network,
    ResistanceMatrix,
    VertexMeasure,
    resistance_to_set,
    shorted_resistance,
)
from .rng import check_seed


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean with plain standard error; aborted replicates are excluded
    from the sample and surfaced in `aborts`."""

    mean: float
    std_error: float
    n_samples: int
    aborts: int = 0

    def z_score(self, exact: float) -> float:
        if self.std_error == 0.0:
            return 0.0 if self.mean == exact else float("inf")
        return (self.mean - exact) / self.std_error


def estimate_from_samples(values: np.ndarray, aborts: int = 0) -> MCEstimate:
    """Plain mean/SE over completed replicates."""
    n = len(values)
    if n == 0:
        raise ValidationError("all replicates aborted; nothing to estimate")
    mean = float(values.mean())
    se = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return MCEstimate(mean=mean, std_error=se, n_samples=n, aborts=aborts)


def resolvent_kernel(R: ResistanceMatrix, x, y, z) -> float:
    """g_x(y,z) = (R(x,y) + R(x,z) - R(y,z)) / 2."""
    return (R[x, y] + R[x, z] - R[y, z]) / 2.0


def shorted_kernel(net: Network, A, y, z) -> float:
    """g_A(y,z) = (R(y,A) + R(z,A) - R_A(y,z)) / 2."""
    A = set(A)
    if not A:
        raise ValidationError("killing set must be nonempty")
    if y in A or z in A:
        return 0.0
    ry = resistance_to_set(net, y, A)
    rz = resistance_to_set(net, z, A)
    ra = shorted_resistance(net, A, y, z) if y != z else 0.0
    return (ry + rz - ra) / 2.0


def resolvent_apply(
    R: ResistanceMatrix, mu: VertexMeasure, x, f: Mapping, y
) -> float:
    """G_x f(y) = sum_z g_x(y,z) f(z) mu({z})."""
    total = 0.0
    for z in R.labels:
        total += resolvent_kernel(R, x, y, z) * f[z] * mu[z]
    return total


def mc_resolvent(
    net: Network,
    mu: VertexMeasure,
    x,
    f: Mapping,
    y,
    n: int,
    seed: int,
    max_jumps: int = MAX_JUMPS,
) -> MCEstimate:
    """Estimate G_x f(y) = E_y int_0^{sigma_x} f(X_s) ds over n replicates."""
    if n < 1:
        raise ValidationError("need n >= 1 replicates")
    check_seed(seed)
    dyn = WalkDynamics.from_network(net, mu)
    w = np.array([f[v] for v in net.vertices], dtype=np.float64)
    stop = np.zeros(net.n_vertices, dtype=bool)
    stop[net.index(x)] = True
    starts = np.full(n, net.index(y), dtype=np.intp)
    res = batch_walk(dyn, starts, np.inf, seed, stop_mask=stop, weights=w, max_jumps=max_jumps)
    ok = ~res.aborted
    return estimate_from_samples(res.acc[ok], aborts=int(res.aborted.sum()))


def mc_local_time(
    net: Network,
    mu: VertexMeasure,
    A,
    y,
    z,
    n: int,
    seed: int,
    max_jumps: int = MAX_JUMPS,
) -> MCEstimate:
    """Estimate E_y L_{sigma_A}(z) over n replicates of the killed walk."""
    A = set(A)
    if not A:
        raise ValidationError("killing set must be nonempty")
    if n < 1:
        raise ValidationError("need n >= 1 replicates")
    check_seed(seed)
    dyn = WalkDynamics.from_network(net, mu)
    w = np.zeros(net.n_vertices, dtype=np.float64)
    w[net.index(z)] = 1.0 / mu[z]  # occupation density, not raw occupation
    stop = np.zeros(net.n_vertices, dtype=bool)
    for a in A:
        stop[net.index(a)] = True
    starts = np.full(n, net.index(y), dtype=np.intp)
    res = batch_walk(dyn, starts, np.inf, seed, stop_mask=stop, weights=w, max_jumps=max_jumps)
    ok = ~res.aborted
    return estimate_from_samples(res.acc[ok], aborts=int(res.aborted.sum()))
