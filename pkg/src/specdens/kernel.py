"""Orthonormal functions phi_j = p_j sqrt(w), the Christoffel-Darboux kernel and level densities."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TableRangeError
from .weights import RecurrenceTable, ScalingModel, WeightSpec

_BIG = 1e150
_LOG_BIG = math.log(_BIG)


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("SPECDENS_THREADS", "1")))
    except ValueError:
        return 1


def _scaled_phi(table: RecurrenceTable, weight: WeightSpec, N: int, x: np.ndarray):
    """Mantissas and log-exponents of phi_0..phi_{N-1} at the points ``x``.

    Returns ``(m, e)`` with ``phi_j(x) = m[j] * exp(e[j])``; both have shape (N, len(x)).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > table.n_max + 1:
        raise TableRangeError(f"phi_0..phi_{N - 1} need a_{N - 1}; table holds n <= {table.n_max}")
    w = np.asarray(weight(x), dtype=float)
    if np.any(w < 0):
        raise DomainError(f"weight is negative at x = {x[np.argmax(w < 0)]!r}")
    lo, hi = weight.support
    outside = (x < lo) | (x > hi)
    logw = np.where(outside, -np.inf, np.asarray(weight.log_weight(x), dtype=float))
    zero = logw == -np.inf
    logscale = np.where(zero, 0.0, 0.5 * (logw - math.log(weight.mass)))
    m = np.empty((N, x.size))
    e = np.empty((N, x.size))
    a, b = table.a, table.b
    prev = np.zeros_like(x)
    cur = np.where(zero, 0.0, 1.0)
    m[0], e[0] = cur, logscale
    for j in range(N - 1):
        nxt = ((x - b[j]) * cur - a[j] * prev) / a[j + 1]
        prev, cur = cur, nxt
        hit = np.abs(cur) > _BIG
        if np.any(hit):
            cur = np.where(hit, cur / _BIG, cur)
            prev = np.where(hit, prev / _BIG, prev)
            logscale = np.where(hit, logscale + _LOG_BIG, logscale)
        m[j + 1], e[j + 1] = cur, logscale
    return m, e


def eval_phi(table: RecurrenceTable, weight: WeightSpec, N: int, x):
    """phi_0(x) .. phi_{N-1}(x); shape (N,) for scalar x, (N, len(x)) otherwise."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    m, e = _scaled_phi(table, weight, N, xa)
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        phi = np.sign(m) * np.exp(np.log(np.abs(m)) + e)
    return phi[:, 0] if np.ndim(x) == 0 else phi


def christoffel_diagonal(table, weight, N, x):
    """``K_N(x, x) = sum phi_j(x)**2``, evaluated with the scaled mantissas."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    m, e = _scaled_phi(table, weight, N, xa)
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        out = np.sum(np.exp(2 * (np.log(np.abs(m)) + e)), axis=0)
    return out[0] if np.ndim(x) == 0 else out


def kernel_KN(table, weight, N, x, y):
    """Christoffel-Darboux kernel ``sum_{j<N} phi_j(x) phi_j(y)``."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    px = eval_phi(table, weight, N, xs)
    py = eval_phi(table, weight, N, ys)
    out = px.T @ py
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(out[0, 0])
    return out


def sigma_N(table, weight, scaling: ScalingModel, N, x):
    """Scaled level density ``(c_N / N) K_N(c_N x, c_N x)``."""
    cN = scaling.c(N)
    if not cN > 0:
        raise DomainError(f"c_N must be positive, got {cN}")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    threads = thread_cap()
    if threads > 1 and xa.size >= 256:
        chunks = np.array_split(xa, threads)
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda c: christoffel_diagonal(table, weight, N, cN * c), chunks))
        vals = np.concatenate(parts)
    else:
        vals = christoffel_diagonal(table, weight, N, cN * xa)
    out = (cN / N) * vals
    return float(out[0]) if np.ndim(x) == 0 else out


def correlation_n(table, weight, N, points):
    """n-point correlation ``det[K_N(x_j, x_k)]``."""
    pts = np.asarray(points, dtype=float).ravel()
    if pts.size > N:
        raise ValueError(f"{pts.size}-point correlation vanishes identically for N = {N}")
    K = kernel_KN(table, weight, N, pts, pts)
    return float(np.linalg.det(np.atleast_2d(K)))


def default_grid(lo, hi, lam, points=512, pad=0.1, window=1e-3):
    """Uniform grid over [lo - pad, hi + pad].

    For ``lam < 1`` the grid is anchored so that 0 is a grid point whenever it
    lies inside; for ``lam >= 1`` points with ``|x| < window`` are dropped.
    """
    a, b = lo - pad, hi + pad
    h = (b - a) / (points - 1)
    if a < 0 < b:
        shift = round(-a / h)
        grid = h * (np.arange(points) - shift)
        if lam >= 1:
            grid = grid[np.abs(grid) >= window]
    else:
        grid = np.linspace(a, b, points)
    return grid


@dataclass(frozen=True, eq=False)
class DensityTable:
    grid: np.ndarray
    values: np.ndarray
    N: int
    scaling: ScalingModel

    def __post_init__(self):
        if np.any(self.values < 0):
            raise DomainError("density values must be non-negative")

    def trapezoid_mass(self) -> float:
        trap = getattr(np, "trapezoid", None) or np.trapz
        return float(trap(self.values, self.grid))

    def to_csv(self) -> str:
        rows = ["x,sigma"]
        rows += [f"{fmt(x)},{fmt(v)}" for x, v in zip(self.grid, self.values)]
        return "\n".join(rows) + "\n"

    def to_json(self) -> str:
        return json.dumps({"N": self.N, "grid": [float(x) for x in self.grid],
                           "values": [float(v) for v in self.values]})


def fmt(v) -> str:
    """Round-trip-safe, locale-free float text."""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def density_table(table, weight, scaling, N, grid=None, points=512) -> DensityTable:
    from .limit_density import support

    if grid is None:
        lo, hi = support(scaling.lam, scaling.b_limit)
        grid = default_grid(lo, hi, scaling.lam, points)
    grid = np.asarray(grid, dtype=float)
    values = np.maximum(sigma_N(table, weight, scaling, N, grid), 0.0)
    return DensityTable(grid, values, N, scaling)
