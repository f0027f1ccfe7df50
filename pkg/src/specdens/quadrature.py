"""Gauss rules from Jacobi matrices and adaptive integration.

``tridiag_eigen`` is an implicit-shift QL iteration (Wilkinson shift, Givens
chasing) that tracks only the first row of the eigenvector matrix. Gauss
nodes are its eigenvalues; weights are ``mu0 * v0**2`` where the first
components are recomputed from the three-term recurrence at each node, which
keeps tiny weights accurate in the relative sense.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, ConvergenceError, DomainError
from .weights import JacobiMatrix

MAX_SWEEPS = 50
DEFLATION_TOL = 1e-15


def tridiag_eigen(J: JacobiMatrix, max_sweeps: int = MAX_SWEEPS):
    """Eigenvalues (ascending) and first eigenvector components of ``J``.

    The first components are normalized to be non-negative.
    """
    n = J.dim
    d = [float(v) for v in J.diag]
    e = [float(v) for v in J.offdiag] + [0.0]
    z = [0.0] * n
    z[0] = 1.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= DEFLATION_TOL * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_sweeps:
                raise ConvergenceError(
                    f"QL iteration did not converge for eigenvalue {l} after {max_sweeps} sweeps", l)
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                bb = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * bb
                p = s * r
                d[i + 1] = g + p
                g = c * r - bb
                zf = z[i + 1]
                z[i + 1] = s * z[i] + c * zf
                z[i] = c * z[i] - s * zf
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    order = sorted(range(n), key=d.__getitem__)
    return np.array([d[i] for i in order]), np.abs(np.array([z[i] for i in order]))


def _christoffel_first_components(J: JacobiMatrix, nodes):
    """``1 / ||(P_0(x), .., P_{n-1}(x))||`` with P the orthonormal recurrence, P_0 = 1.

    Summation is rescaled on the fly; returns the log of the squared component.
    """
    x = np.asarray(nodes, dtype=float)
    b = J.diag
    a = J.offdiag
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    total = np.ones_like(x)
    log_scale = np.zeros_like(x)
    big = 1e100
    for j in range(J.dim - 1):
        a_prev = a[j - 1] if j > 0 else 0.0
        p_next = ((x - b[j]) * p - a_prev * p_prev) / a[j]
        p_prev, p = p, p_next
        total += p * p
        hit = np.abs(p) > big
        if np.any(hit):
            p[hit] /= big
            p_prev[hit] /= big
            total[hit] /= big * big
            log_scale[hit] += 2 * math.log(big)
    return -(np.log(total) + log_scale)


@dataclass(frozen=True, eq=False)
class GaussRule:
    nodes: np.ndarray
    weights: np.ndarray
    total_mass: float
    log_weights: np.ndarray = None  # natural logs; finite where weights underflow

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def degree_exact(self) -> int:
        return 2 * self.n - 1


def gauss_rule(J: JacobiMatrix, mu0: float, symmetric: bool = None) -> GaussRule:
    """Golub-Welsch rule: nodes are eigenvalues of J, weights ``mu0 * v0**2``.

    When the diagonal vanishes identically the rule is symmetrized exactly.
    """
    if not mu0 > 0:
        raise DomainError("mu0 must be positive")
    nodes, _ = tridiag_eigen(J)
    if symmetric is None:
        symmetric = not np.any(J.diag)
    if symmetric:
        nodes = 0.5 * (nodes - nodes[::-1])
        if nodes.size % 2:
            nodes[nodes.size // 2] = 0.0
    logw = _christoffel_first_components(J, nodes) + math.log(mu0)
    if symmetric:
        logw = 0.5 * (logw + logw[::-1])
    weights = np.exp(logw)
    if symmetric:
        weights = 0.5 * (weights + weights[::-1])
    for arr in (nodes, weights, logw):
        arr.flags.writeable = False
    return GaussRule(nodes, weights, float(mu0), logw)


def integrate(f, rule: GaussRule) -> float:
    """``sum w_i f(x_i)`` with a correctly rounded sum."""
    vals = np.asarray(f(rule.nodes), dtype=float)
    if vals.shape != rule.nodes.shape:
        vals = np.array([float(f(x)) for x in rule.nodes])
    bad = ~np.isfinite(vals)
    if np.any(bad):
        raise DomainError(f"integrand is not finite at node x = {rule.nodes[np.argmax(bad)]!r}")
    return math.fsum(rule.weights * vals)


# -- adaptive Gauss-Kronrod ---------------------------------------------------

_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES15 = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_WK15 = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_WG7 = np.zeros(15)
_WG7[1:14:2] = np.concatenate([_WG[:-1], [_WG[-1]], _WG[-2::-1]])


def _call_vec(f, x):
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape == x.shape:
            return y
    except (TypeError, ValueError):
        pass
    return np.array([float(f(t)) for t in x])


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _NODES15
    y = _call_vec(f, x)
    k = half * np.dot(_WK15, y)
    g = half * np.dot(_WG7, y)
    if not (np.isfinite(k) and np.isfinite(g)):
        raise DomainError(f"integrand not finite on panel [{a!r}, {b!r}]")
    return k, abs(k - g)


def adaptive_integrate(f, lo, hi, tol=1e-10, max_panels=2 ** 16):
    """Global adaptive Gauss-Kronrod (7/15); error target ``tol * max(1, |I|)``."""
    if lo == hi:
        return 0.0
    k, err = _gk15(f, lo, hi)
    heap = [(-err, lo, hi, k)]
    total, total_err = k, err
    panels = 1
    while total_err > tol * max(1.0, abs(total)):
        if panels >= max_panels:
            raise AccuracyError(
                f"adaptive quadrature stopped at {panels} panels with error {total_err:.2e}",
                estimate=total, error=total_err)
        neg_err, a, b, kv = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not (a < m < b):
            raise AccuracyError(
                f"panel [{a!r}, {b!r}] cannot be bisected further; error {total_err:.2e}",
                estimate=total, error=total_err)
        k1, e1 = _gk15(f, a, m)
        k2, e2 = _gk15(f, m, b)
        total += k1 + k2 - kv
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, a, m, k1))
        heapq.heappush(heap, (-e2, m, b, k2))
        panels += 1
    # re-sum the accepted panels to shed the running-update rounding
    return math.fsum(item[3] for item in heap)


def adaptive_singular_integrate(f, lo, hi, singular_ends=(False, False), tol=1e-10, max_panels=2 ** 16):
    """Integrate ``f`` over [lo, hi] with inverse-square-root endpoint singularities.

    Both ends flagged: ``x = lo + (hi - lo) * sin(phi)**2``, measured from the
    end nearer the origin so that offsets there keep full relative precision.
    One end flagged: ``x = end +/- (hi - lo) * u**2``. The transformed integrand
    is integrated with adaptive Gauss-Kronrod panels.
    """
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        if lo == hi:
            return 0.0
        return -adaptive_singular_integrate(f, hi, lo, singular_ends[::-1], tol, max_panels)
    left, right = singular_ends
    width = hi - lo
    if left and right:
        if abs(lo) <= abs(hi):
            def g(t):
                return _call_vec(f, lo + width * np.sin(t) ** 2) * (width * np.sin(2 * t))
        else:
            def g(t):
                return _call_vec(f, hi - width * np.cos(t) ** 2) * (width * np.sin(2 * t))

        return adaptive_integrate(g, 0.0, 0.5 * math.pi, tol, max_panels)
    if left:
        def g(u):
            return _call_vec(f, lo + width * u * u) * (2.0 * width * u)
    elif right:
        def g(u):
            return _call_vec(f, hi - width * u * u) * (2.0 * width * u)
    else:
        return adaptive_integrate(f, lo, hi, tol, max_panels)
    return adaptive_integrate(g, 0.0, 1.0, tol, max_panels)
