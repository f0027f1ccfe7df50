"""Limiting density sigma of the scaled level density.

sigma solves the first-order equation

    sigma(x) - lam * (x sigma(x))' = f_b(x) * 1{|x - b| < 1},
    f_b(x) = 1 / (pi sqrt(1 - (x - b)^2)),

with sigma >= 0 and unit mass. For lam = 0 it is f_b itself; for lam > 0 it is
supported on [min(b-1, 0), max(b+1, 0)]. Closed forms exist for b = 0 with
lam = 1/(2m) or 1/(2m-1), and for b = 1 with lam = 1/(q+1) or 1/(q+1/2);
everything else goes through quadrature of the Cauchy-Euler solution.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import ClosedFormDefect, DomainError, SingularityError
from .quadrature import adaptive_integrate, adaptive_singular_integrate

_INT_TOL = 1e-9


def support(lam: float, b: float):
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    if lam == 0:
        return (b - 1.0, b + 1.0)
    return (min(b - 1.0, 0.0), max(b + 1.0, 0.0))


def arcsine_density(x, b=0.0):
    """f_b(x) on the open interval (b-1, b+1), zero elsewhere."""
    x = np.asarray(x, dtype=float)
    d = x - b
    inside = np.abs(d) < 1
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(inside, 1.0 / (math.pi * np.sqrt((1 - d) * (1 + d))), 0.0)
    return out if out.ndim else float(out)


def j0_series(t: float, terms: int = None) -> float:
    """Bessel J_0 from its power series sum (-1)^k (t/2)^{2k} / (k!)^2.

    Terms peak near k = t/2, so absolute accuracy degrades like e^t * 1e-16;
    fine for |t| <= 10.
    """
    q = -(0.25 * t * t)
    term = 1.0
    parts = [1.0]
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        parts.append(term)
        if terms is not None:
            if k + 1 >= terms:
                break
        elif abs(term) < 1e-18 * max(1.0, max(abs(p) for p in parts)) and k > abs(t):
            break
    return math.fsum(parts)


def arcsine_cf(t: float, b: float = 0.0, tol: float = 1e-12) -> complex:
    """Characteristic function of f_b by endpoint-singular quadrature."""
    lo, hi = b - 1.0, b + 1.0
    f = lambda x: np.cos(t * np.asarray(x)) * arcsine_density(x, b)
    g = lambda x: np.sin(t * np.asarray(x)) * arcsine_density(x, b)
    re = adaptive_singular_integrate(f, lo, hi, (True, True), tol)
    im = adaptive_singular_integrate(g, lo, hi, (True, True), tol)
    return complex(re, im)


def arcsine_cf_bessel(t: float, b: float = 0.0) -> complex:
    return cmath.exp(1j * t * b) * j0_series(t)


# -- closed forms -------------------------------------------------------------

def _as_int(v, what):
    r = round(v)
    if abs(v - r) > _INT_TOL or r < 0:
        raise DomainError(f"{what} must be a non-negative integer, got {v}")
    return int(r)


def closed_form_lambda(case: int, param: int) -> float:
    if case == 1:
        return 1.0 / (2 * param)
    if case == 2:
        return 1.0 / (2 * param - 1)
    if case == 3:
        return 1.0 / (param + 1)
    if case == 4:
        return 1.0 / (param + 0.5)
    raise DomainError(f"closed-form case must be 1..4, got {case}")


def closed_form_b(case: int) -> float:
    return 0.0 if case in (1, 2) else 1.0


def _case1(x, m):
    s = np.sqrt(1 - x * x)
    poly = sum((2 * x) ** (2 * m - 2 * j) * comb(2 * j - 2, j - 1) for j in range(1, m + 1))
    return 4 / math.pi * s * poly / comb(2 * m, m)


def _case2(x, m):
    s = np.sqrt(1 - x * x)
    ax = np.abs(x)
    # ln((1 + s)/|x|) = ln1p(s) - ln|x|
    log_term = np.log1p(s) - np.log(ax)
    tail = sum((x / 2) ** (2 * m - 2 - 2 * j) / (j * comb(2 * j, j)) for j in range(1, m))
    # for m >= 2 the log term carries x^(2m-2) and vanishes at 0
    head = np.where(ax > 0, (x / 2) ** (2 * m - 2) * log_term, 0.0)
    return m * comb(2 * m, m) / (2 * math.pi) * (head + s / 2 * tail)


def _case3(x, q):
    r = np.sqrt((2 - x) / x)
    return (q + 1) / math.pi * (x / 2) ** q * sum(comb(q, j) / (1 + 2 * j) * r ** (1 + 2 * j) for j in range(q + 1))


def _case4(x, q):
    r = np.sqrt((2 - x) / x)
    log_term = np.log(r + np.sqrt(2 / x))
    tail = sum((x / 8) ** (q - j) / (j * comb(2 * j, j)) for j in range(1, q + 1))
    return (2 * q + 1) / (4 * math.pi) * ((x / 8) ** (q - 0.5) * log_term + r * tail) * comb(2 * q, q)


_CASES = {1: _case1, 2: _case2, 3: _case3, 4: _case4}


def _raw_closed_form(case, param, x):
    x = np.asarray(x, dtype=float)
    lo, hi = (-1.0, 1.0) if case in (1, 2) else (0.0, 2.0)
    inside = (x > lo) & (x < hi)
    singular = (x == 0) & ((case in (3, 4)) or (case == 2 and param == 1))
    safe = np.where(inside & ~singular, x, 0.5)
    with np.errstate(all="ignore"):
        vals = _CASES[case](safe, param)
    return np.where(singular, np.inf, np.where(inside, vals, 0.0))


def _drop_point(f, point):
    # a single singular point carries no mass; quadrature panels may land on it
    def g(x):
        x = np.asarray(x, dtype=float)
        return np.where(x == point, 0.0, f(np.where(x == point, point + 1.0, x)))
    return g


@lru_cache(maxsize=None)
def closed_form_mass(case: int, param: int) -> float:
    lo, hi = (-1.0, 1.0) if case in (1, 2) else (0.0, 2.0)
    f = _drop_point(lambda x: _raw_closed_form(case, param, x), 0.0)
    if lo < 0 < hi:
        return adaptive_singular_integrate(f, lo, 0.0, (True, True), 1e-12) + \
            adaptive_singular_integrate(f, 0.0, hi, (True, True), 1e-12)
    return adaptive_singular_integrate(f, lo, hi, (True, True), 1e-12)


def closed_form_density(case: int, param: int, x):
    """Closed-form limiting density.

    Cases 1/2 have b = 0 with lam = 1/(2m), 1/(2m-1); cases 3/4 have b = 1 with
    lam = 1/(q+1), 1/(q+1/2) and live on (0, 2). Points outside the open support
    give 0; singular points (x = 0 in cases 3-4 and case 2 with m = 1) give +inf.
    """
    case = int(case)
    if case not in _CASES:
        raise DomainError(f"closed-form case must be 1..4, got {case}")
    param = _as_int(param, "m" if case in (1, 2) else "q")
    if case in (1, 2) and param < 1:
        raise DomainError("m must be >= 1")
    if case == 4:
        mass = closed_form_mass(4, param)
        if abs(mass - 1) > 1e-8:
            raise ClosedFormDefect(f"case 4 with q={param} integrates to {mass!r}, not 1")
    out = _raw_closed_form(case, param, x)
    return out if out.ndim else float(out)


def match_closed_form(lam: float, b: float):
    """(case, param) of a closed form for (lam, b), or None."""
    if lam <= 0:
        return None
    inv = 1.0 / lam
    if b == 0:
        if abs(inv / 2 - round(inv / 2)) < _INT_TOL and round(inv / 2) >= 1:
            return 1, int(round(inv / 2))
        if abs((inv + 1) / 2 - round((inv + 1) / 2)) < _INT_TOL:
            return 2, int(round((inv + 1) / 2))
    if b == 1:
        if abs(inv - 1 - round(inv - 1)) < _INT_TOL and round(inv - 1) >= 0:
            return 3, int(round(inv - 1))
        if abs(inv - 0.5 - round(inv - 0.5)) < _INT_TOL and round(inv - 0.5) >= 0:
            return 4, int(round(inv - 0.5))
    return None


# -- general solution by quadrature -------------------------------------------

def _positive_branch(lam, b, x, tol):
    """sigma(x) for x > 0:  (1/(lam x)) (2/pi) int_{phi0}^{pi/2} (x/s)^{1/lam} dphi,

    with s = b - 1 + 2 sin(phi)^2 (so f_b(s) ds = (2/pi) dphi) and the lower
    limit at s = max(x, b - 1).
    """
    if x >= b + 1:
        return 0.0
    p = 1.0 / lam
    start = max(x - (b - 1.0), 0.0)
    phi0 = math.asin(min(1.0, math.sqrt(0.5 * start)))

    s0 = (b - 1.0) + start

    def g(phi):
        # s - s0 = 2 (sin^2 phi - sin^2 phi0), written without cancellation
        s = s0 + 2.0 * np.sin(phi - phi0) * np.sin(phi + phi0)
        return np.power(x / s, p) / x

    val = adaptive_integrate(g, phi0, 0.5 * math.pi, tol)
    return 2.0 / (math.pi * lam) * val


def ode_density(lam: float, b: float, x: float, tol: float = 1e-13) -> float:
    """Limiting density from the Cauchy-Euler solution, by quadrature."""
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    x = float(x)
    if lam == 0:
        return arcsine_density(x, b)
    if x == 0:
        if lam >= 1:
            raise SingularityError(f"0 is a singular point of the limiting density for lambda = {lam} >= 1")
        if abs(b) < 1:
            return arcsine_density(0.0, b) / (1 - lam)
        if abs(b) > 1:
            return 0.0
        raise SingularityError("the limiting density is unbounded at 0 when |b| = 1")
    if x > 0:
        return _positive_branch(lam, b, x, tol)
    # sigma(x; lam, b) = sigma(-x; lam, -b)
    return _positive_branch(lam, -b, -x, tol)


def plus_constant(lam: float, b: float, tol: float = 1e-13) -> float:
    """C_+ = (1/lam) int_{b-1}^{b+1} s^{-1/lam} f_b(s) ds, for b > 1."""
    if not b > 1:
        raise DomainError("C_+ is defined for b > 1")
    p = 1.0 / lam
    g = lambda phi: np.power((b - 1.0) + 2.0 * np.sin(phi) ** 2, -p)
    return 2.0 / (math.pi * lam) * adaptive_integrate(g, 0.0, 0.5 * math.pi, tol)


# -- ODE residual ---------------------------------------------------------------

def ode_residual(sigma, lam, source, grid, h):
    """max |sigma - lam d/dx[x sigma] - source| over ``grid`` with central differences."""
    x = np.asarray(grid, dtype=float)
    s = lambda v: np.asarray(sigma(v), dtype=float)
    deriv = ((x + h) * s(x + h) - (x - h) * s(x - h)) / (2 * h)
    res = np.abs(s(x) - lam * deriv - np.asarray(source(x), dtype=float))
    return float(np.max(res)), res


# -- model ------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityModel:
    lam: float
    b: float
    form: str  # "arcsine" | "closed" | "quadrature"
    case: int = None
    param: int = None
    quad_tol: float = 1e-13

    @classmethod
    def for_params(cls, lam, b, prefer_closed=True, quad_tol=1e-13):
        lam, b = float(lam), float(b)
        if lam < 0:
            raise DomainError(f"lambda must be >= 0, got {lam}")
        if lam == 0:
            return cls(lam, b, "arcsine")
        hit = match_closed_form(lam, b) if prefer_closed else None
        if hit is not None:
            case, param = hit
            if case != 4 or abs(closed_form_mass(case, param) - 1) <= 1e-8:
                return cls(lam, b, "closed", case, param, quad_tol)
        return cls(lam, b, "quadrature", quad_tol=quad_tol)

    @property
    def support(self):
        return support(self.lam, self.b)

    def source(self, x):
        return arcsine_density(x, self.b)

    def __call__(self, x):
        if self.form == "arcsine":
            return arcsine_density(x, self.b)
        if self.form == "closed":
            return closed_form_density(self.case, self.param, x)
        if np.ndim(x) == 0:
            return ode_density(self.lam, self.b, x, self.quad_tol)
        return np.array([ode_density(self.lam, self.b, v, self.quad_tol) for v in np.ravel(x)]).reshape(np.shape(x))

    def singular_points(self):
        pts = []
        if self.lam >= 1 or (self.lam > 0 and abs(self.b) == 1):
            pts.append(0.0)
        return pts

    def integrate(self, g=None, tol=1e-11):
        """int g(x) sigma(x) dx over the support, split at 0 and at b +- 1."""
        lo, hi = self.support
        cuts = sorted({c for c in (0.0, self.b - 1, self.b + 1) if lo < c < hi})
        edges = [lo] + cuts + [hi]
        f = (lambda x: self(x)) if g is None else (lambda x: np.asarray(g(x)) * self(x))
        for p in self.singular_points():
            f = _drop_point(f, p)
        total = []
        for a, c in zip(edges[:-1], edges[1:]):
            total.append(adaptive_singular_integrate(f, a, c, (True, True), tol))
        return math.fsum(total)

    def mass(self, tol=1e-11):
        return self.integrate(None, tol)

    def moment(self, k, tol=1e-11):
        return self.integrate(lambda x: np.asarray(x, dtype=float) ** k, tol)

    def to_json(self):
        form = self.form if self.form != "closed" else f"closed:{self.case}:{self.param}"
        return {"lambda": self.lam, "b": self.b, "support": list(self.support), "form": form}

    def table_csv(self, grid):
        from .kernel import fmt

        rows = ["x,sigma_limit"]
        for x in np.asarray(grid, dtype=float):
            if x in self.singular_points():
                continue
            v = float(self(x))
            if math.isfinite(v):
                rows.append(f"{fmt(x)},{fmt(max(v, 0.0))}")
        return "\n".join(rows) + "\n"


def verify_ode(model: DensityModel, grid, h=1e-4):
    """Largest residual of the density equation over ``grid`` (central differences)."""
    return ode_residual(model, model.lam, model.source, grid, h)[0]
