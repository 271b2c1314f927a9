"""Dense symmetric solves with a precision policy sized to the contracts.

Reconstructing a network from its resistance matrix is sensitive enough that
float64 arithmetic cannot meet the 1e-8 round-trip tolerance on conductances
spanning six decades. Small systems (n <= 64) are therefore inverted by
Gauss-Jordan elimination in extended precision; larger ones use a float64
factorization with extended-precision residual refinement, which is accurate
for the well-conditioned unit-conductance spaces that reach that size.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_factor, cho_solve, lu_factor, lu_solve

LD = np.longdouble

# Gauss-Jordan above this size costs more than refinement buys.
_EXACT_INV_MAX_N = 64
_REFINE_MAX_ITERS = 30


def _gauss_jordan_inverse(a: np.ndarray) -> np.ndarray:
    """Extended-precision inverse with partial pivoting. a: (n, n) longdouble."""
    a = a.astype(LD).copy()
    n = a.shape[0]
    x = np.eye(n, dtype=LD)
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0:
            raise np.linalg.LinAlgError("singular matrix")
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        piv = a[k, k]
        a[k] /= piv
        x[k] /= piv
        col = a[:, k].copy()
        col[k] = 0
        a -= np.outer(col, a[k])
        x -= np.outer(col, x[k])
    return x


def _refined_inverse(a: np.ndarray) -> np.ndarray:
    """float64 factorization + longdouble residual refinement."""
    a_ld = a.astype(LD)
    a64 = a_ld.astype(np.float64)
    n = a64.shape[0]
    eye64 = np.eye(n)
    try:
        f = cho_factor(a64, check_finite=False)

        def solve(b):
            return cho_solve(f, b, check_finite=False)
    except np.linalg.LinAlgError:
        f = lu_factor(a64, check_finite=False)

        def solve(b):
            return lu_solve(f, b, check_finite=False)

    x = solve(eye64).astype(LD)
    eye_ld = np.eye(n, dtype=LD)
    prev = np.inf
    for _ in range(_REFINE_MAX_ITERS):
        r = eye_ld - a_ld @ x
        rn = float(np.max(np.abs(r)))
        if not np.isfinite(rn) or rn >= prev * 0.9 or rn < 1e-28:
            break
        prev = rn
        x = x + solve(r.astype(np.float64)).astype(LD)
    return x


def symmetric_inverse(a: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive-definite matrix, longdouble result."""
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=LD)
    x = _gauss_jordan_inverse(a) if n <= _EXACT_INV_MAX_N else _refined_inverse(a)
    return (x + x.T) / 2


def solve_spd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a x = b for symmetric positive-definite a, refined, float64 result.

    b may be a vector or matrix.
    """
    a64 = np.asarray(a, dtype=np.float64)
    b64 = np.asarray(b, dtype=np.float64)
    try:
        f = cho_factor(a64, check_finite=False)

        def solve(rhs):
            return cho_solve(f, rhs, check_finite=False)
    except np.linalg.LinAlgError:
        f = lu_factor(a64, check_finite=False)

        def solve(rhs):
            return lu_solve(f, rhs, check_finite=False)

    x = solve(b64)
    # One residual correction covers the conductance ranges in scope.
    x = x + solve(b64 - a64 @ x)
    return x
