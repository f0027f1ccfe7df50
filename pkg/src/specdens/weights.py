"""Weight functions, three-term recurrence coefficients and Jacobi matrices.

Orthonormal polynomials for a weight w on an interval I satisfy

    x p_n(x) = a_{n+1} p_{n+1}(x) + b_n p_n(x) + a_n p_{n-1}(x),   a_n > 0.

Coefficients come either from closed forms (Hermite, Laguerre, Jacobi and the
alpha = 2 member of the generalized Hermite family) or from a discretized
Stieltjes procedure run on a double-exponential discretization of the weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import AccuracyError, DomainError, NoClosedFormError, PrecisionExhaustedError, TableRangeError

FAMILIES = ("hermite", "laguerre", "jacobi", "genhermite", "custom")


def _parse_bound(v):
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("-inf", "-infinity"):
            return -math.inf
        if s in ("+inf", "inf", "infinity", "+infinity"):
            return math.inf
        return float(s)
    return float(v)


def _dump_bound(v):
    if v == -math.inf:
        return "-inf"
    if v == math.inf:
        return "+inf"
    return float(v)


@dataclass(frozen=True)
class WeightSpec:
    """A non-negative weight on ``support`` with all moments finite.

    ``alpha`` and ``beta`` carry the family parameters: Laguerre uses
    ``x**alpha * exp(-x)``, Jacobi ``(1-x)**alpha * (1+x)**beta`` and the
    generalized Hermite family ``|x|**beta * exp(-|x|**alpha)``.
    """

    family: str
    support: tuple
    mass: float
    evaluator: Callable = field(compare=False, repr=False)
    alpha: Optional[float] = None
    beta: Optional[float] = None
    log_evaluator: Optional[Callable] = field(default=None, compare=False, repr=False)
    symmetric: bool = False
    breakpoints: tuple = ()
    # optional w(x) given exact distances (x - lo, hi - x) to finite support ends
    edge_evaluator: Optional[Callable] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown weight family {self.family!r}")
        lo, hi = self.support
        if not lo < hi:
            raise DomainError(f"empty support {self.support}")
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise DomainError(f"weight mass must be positive and finite, got {self.mass}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def hermite(cls):
        return cls(
            "hermite", (-math.inf, math.inf), math.sqrt(math.pi),
            evaluator=lambda x: np.exp(-np.square(x)),
            log_evaluator=lambda x: -np.square(x),
            symmetric=True,
        )

    @classmethod
    def laguerre(cls, alpha=0.0):
        alpha = float(alpha)
        if not alpha > -1:
            raise DomainError(f"Laguerre weight needs alpha > -1, got {alpha}")

        def logw(x):
            x = np.asarray(x, dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = -x + (alpha * np.log(x) if alpha else 0.0)
            return np.where(x >= 0, out, -np.inf)

        return cls("laguerre", (0.0, math.inf), math.gamma(alpha + 1),
                   evaluator=lambda x: np.exp(logw(x)),
                   alpha=alpha, log_evaluator=logw)

    @classmethod
    def jacobi(cls, alpha=0.0, beta=0.0):
        alpha, beta = float(alpha), float(beta)
        if not (alpha > -1 and beta > -1):
            raise DomainError(f"Jacobi weight needs alpha, beta > -1, got {alpha}, {beta}")

        def logw(x):
            x = np.asarray(x, dtype=float)
            inside = (x >= -1) & (x <= 1)
            with np.errstate(divide="ignore", invalid="ignore"):
                lw = np.zeros_like(x)
                if alpha:
                    lw = lw + alpha * np.log1p(-np.where(inside, x, 0.0))
                if beta:
                    lw = lw + beta * np.log1p(np.where(inside, x, 0.0))
            return np.where(inside, lw, -np.inf)

        mass = 2.0 ** (alpha + beta + 1) * math.exp(
            math.lgamma(alpha + 1) + math.lgamma(beta + 1) - math.lgamma(alpha + beta + 2))
        def edge(x, d_lo, d_hi):
            with np.errstate(divide="ignore"):
                return np.exp(alpha * np.log(d_hi) + beta * np.log(d_lo))

        return cls("jacobi", (-1.0, 1.0), mass, evaluator=lambda x: np.exp(logw(x)),
                   alpha=alpha, beta=beta, log_evaluator=logw, symmetric=(alpha == beta),
                   edge_evaluator=edge)

    @classmethod
    def genhermite(cls, alpha=2.0, beta=0.0):
        """``|x|**beta * exp(-|x|**alpha)``; ``alpha`` > 0 sets the decay, ``beta`` > -1."""
        alpha, beta = float(alpha), float(beta)
        if not (alpha > 0 and beta > -1):
            raise DomainError(f"generalized Hermite weight needs alpha > 0, beta > -1, got {alpha}, {beta}")

        def logw(x):
            ax = np.abs(np.asarray(x, dtype=float))
            with np.errstate(divide="ignore", invalid="ignore"):
                lw = -np.power(ax, alpha)
                if beta:
                    lw = lw + beta * np.log(ax)
            return lw

        mass = 2.0 * math.gamma((beta + 1) / alpha) / alpha
        return cls("genhermite", (-math.inf, math.inf), mass, evaluator=lambda x: np.exp(logw(x)),
                   alpha=alpha, beta=beta, log_evaluator=logw, symmetric=True, breakpoints=(0.0,))

    @classmethod
    def custom(cls, evaluator, support, mass=None, symmetric=False, breakpoints=(), log_evaluator=None,
               edge_evaluator=None):
        """Wrap a user weight. ``mass`` is computed by quadrature when omitted.

        ``edge_evaluator(x, x - lo, hi - x)`` may be supplied for weights with
        endpoint singularities; it receives the end distances without rounding.
        """
        support = (_parse_bound(support[0]), _parse_bound(support[1]))
        if mass is None:
            x, w = discretize(evaluator, support, breakpoints, symmetric, level=7, edge_evaluator=edge_evaluator)
            mass = math.fsum(w)
        return cls("custom", support, float(mass), evaluator=evaluator, log_evaluator=log_evaluator,
                   symmetric=symmetric, breakpoints=tuple(breakpoints), edge_evaluator=edge_evaluator)

    # -- evaluation -------------------------------------------------------

    def __call__(self, x):
        return self.evaluator(x)

    def log_weight(self, x):
        if self.log_evaluator is not None:
            return self.log_evaluator(x)
        with np.errstate(divide="ignore"):
            return np.log(self.evaluator(x))

    @property
    def is_classical(self):
        return self.family in ("hermite", "laguerre", "jacobi")

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        out = {"family": self.family}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.beta is not None:
            out["beta"] = self.beta
        out["support"] = [_dump_bound(self.support[0]), _dump_bound(self.support[1])]
        return out

    @classmethod
    def from_json(cls, obj: dict, evaluator=None) -> "WeightSpec":
        family = str(obj.get("family", "")).lower()
        if family == "hermite":
            spec = cls.hermite()
        elif family == "laguerre":
            spec = cls.laguerre(obj.get("alpha", 0.0))
        elif family == "jacobi":
            spec = cls.jacobi(obj.get("alpha", 0.0), obj.get("beta", 0.0))
        elif family == "genhermite":
            spec = cls.genhermite(obj.get("alpha", 2.0), obj.get("beta", 0.0))
        elif family == "custom":
            if evaluator is None:
                raise DomainError("a custom weight needs an evaluator; JSON carries only its support")
            if "support" not in obj:
                raise DomainError("a custom weight needs a support interval")
            return cls.custom(evaluator, obj["support"])
        else:
            raise DomainError(f"unknown weight family {obj.get('family')!r}")
        if "support" in obj:
            sup = (_parse_bound(obj["support"][0]), _parse_bound(obj["support"][1]))
            if sup != spec.support:
                raise DomainError(f"{family} weight lives on {spec.support}, not {sup}")
        return spec


def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class RecurrenceTable:
    """Orthonormal recurrence coefficients.

    ``a[n]`` for ``n = 1..n_max`` (``a[0]`` is a zero placeholder), ``b[n]``
    for ``n = 0..n_max``. ``a_sq`` keeps the squares exactly when a closed form
    provides them, so that traces of Jacobi-matrix powers stay exact.
    """

    a: np.ndarray
    b: np.ndarray
    a_sq: np.ndarray = None

    def __post_init__(self):
        a = _frozen(self.a)
        b = _frozen(self.b)
        if a.shape != b.shape or a.ndim != 1 or a.size < 2:
            raise ValueError("a and b must be 1-d with equal length n_max + 1 >= 2")
        if not np.all(a[1:] > 0):
            bad = int(np.flatnonzero(~(a[1:] > 0))[0]) + 1
            raise PrecisionExhaustedError(f"recurrence coefficient a_{bad} = {a[bad]} is not positive", bad)
        a_sq = np.square(a) if self.a_sq is None else self.a_sq
        a_sq = _frozen(a_sq)
        a_sq.flags.writeable = True
        a_sq[0] = 0.0
        a_sq.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a_sq", a_sq)

    @property
    def n_max(self) -> int:
        return self.a.size - 1

    def truncate(self, n_max: int) -> "RecurrenceTable":
        if n_max > self.n_max:
            raise TableRangeError(f"table holds n <= {self.n_max}, asked for {n_max}")
        return RecurrenceTable(self.a[:n_max + 1], self.b[:n_max + 1], self.a_sq[:n_max + 1])


@dataclass(frozen=True, eq=False)
class JacobiMatrix:
    """Symmetric tridiagonal matrix with ``diag`` = b_0.. and ``offdiag`` = a_1.."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = _frozen(self.diag)
        e = _frozen(self.offdiag)
        if d.ndim != 1 or d.size < 1 or e.size != d.size - 1:
            raise ValueError("offdiag must have exactly dim - 1 entries")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def dim(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def jacobi_matrix(table: RecurrenceTable, dim: int) -> JacobiMatrix:
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if dim > table.n_max:
        raise TableRangeError(f"Jacobi matrix of dimension {dim} needs n_max >= {dim}, table has {table.n_max}")
    return JacobiMatrix(table.b[:dim], table.a[1:dim])


# -- closed forms -----------------------------------------------------------

def classical_recurrence(weight: WeightSpec, n_max: int) -> RecurrenceTable:
    """Closed-form orthonormal recurrence coefficients up to index ``n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    n = np.arange(n_max + 1, dtype=float)
    fam = weight.family
    if fam == "hermite":
        a_sq = n / 2
        b = np.zeros_like(n)
    elif fam == "laguerre":
        al = weight.alpha
        a_sq = n * (n + al)
        b = 2 * n + al + 1
    elif fam == "jacobi":
        a_sq, b = _jacobi_coefficients(weight.alpha, weight.beta, n_max)
    elif fam == "genhermite" and weight.alpha == 2.0:
        a_sq = (n + weight.beta * (n % 2)) / 2
        b = np.zeros_like(n)
    else:
        raise NoClosedFormError(
            f"no closed-form recurrence for the {fam} family"
            + (f" with alpha={weight.alpha}" if fam == "genhermite" else "")
            + "; use stieltjes_recurrence instead"
        )
    a_sq[0] = 0.0
    return RecurrenceTable(np.sqrt(a_sq), b, a_sq)


def _jacobi_coefficients(al, be, n_max):
    a_sq = np.zeros(n_max + 1)
    b = np.zeros(n_max + 1)
    s = al + be
    b[0] = (be - al) / (s + 2)
    a_sq[1] = 4 * (1 + al) * (1 + be) / ((2 + s) ** 2 * (3 + s))
    for k in range(1, n_max + 1):
        t = 2 * k + s
        b[k] = (be * be - al * al) / (t * (t + 2)) if (be != al) else 0.0
        if k >= 2:
            a_sq[k] = 4 * k * (k + al) * (k + be) * (k + s) / (t * t * (t + 1) * (t - 1))
    return a_sq, b


# -- Stieltjes procedure ----------------------------------------------------

def discrete_stieltjes(x, w, n_max: int, log_w=None) -> RecurrenceTable:
    """Recurrence coefficients of the discrete measure ``sum w_i delta(x - x_i)``.

    Works on the normalized vectors ``q_n = p_n(x) sqrt(w)`` so nothing overflows;
    one local re-orthogonalization per step keeps the vectors orthonormal.
    Passing ``log_w`` instead of ``w`` keeps weights far below the float range.
    """
    x = np.asarray(x, dtype=float)
    if log_w is not None:
        log_w = np.asarray(log_w, dtype=float)
        keep = log_w > -np.inf
        x, log_w = x[keep], log_w[keep]
        w = np.exp(log_w - np.max(log_w))
    else:
        w = np.asarray(w, dtype=float)
        keep = w > 0
        x, w = x[keep], w[keep]
    if x.size <= n_max:
        raise PrecisionExhaustedError(
            f"discrete measure has {x.size} support points, cannot produce n_max={n_max}", x.size)
    a_sq = np.zeros(n_max + 1)
    b = np.zeros(n_max + 1)
    if log_w is not None:
        half = 0.5 * (log_w - np.max(log_w))
        q = np.exp(half - 0.5 * math.log(math.fsum(w)))
    else:
        q = np.sqrt(w / math.fsum(w))
    q_prev = np.zeros_like(q)
    a_prev = 0.0
    for n in range(n_max + 1):
        b[n] = np.dot(x, q * q)
        if n == n_max:
            break
        r = (x - b[n]) * q - a_prev * q_prev
        r -= np.dot(r, q) * q
        r -= np.dot(r, q_prev) * q_prev
        s = np.dot(r, r)
        scale = max(1.0, abs(b[n]), a_prev) ** 2
        if not s > 1e-28 * scale:
            raise PrecisionExhaustedError(
                f"Stieltjes procedure lost positivity at a_{n + 1} (a^2 = {s:.3e})", n + 1)
        a_sq[n + 1] = s
        a_prev = math.sqrt(s)
        q_prev, q = q, r / a_prev
    return RecurrenceTable(np.sqrt(a_sq), b, a_sq)


def _tanh_sinh(h, t_max=6.0):
    """Tanh-sinh abscissae on (-1, 1) returned as (1 + u, 1 - u, du/dt * h)."""
    t = np.arange(-t_max, t_max + h / 2, h)
    s = 0.5 * math.pi * np.sinh(t)
    # 1 - tanh(|s|) = exp(-|s|) / cosh(s), computed without cancellation
    small = np.exp(-np.abs(s)) / np.cosh(s)
    one_plus = np.where(s < 0, small, 2.0 - small)
    one_minus = np.where(s < 0, 2.0 - small, small)
    dw = h * 0.5 * math.pi * np.cosh(t) / np.cosh(s) ** 2
    keep = (one_plus > 0) & (one_minus > 0) & (dw > 0)
    return one_plus[keep], one_minus[keep], dw[keep]


def _map_piece(lo, hi, em, ep, dw):
    with np.errstate(divide="ignore", over="ignore"):
        return _map_piece_raw(lo, hi, em, ep, dw)


def _map_piece_raw(lo, hi, em, ep, dw):
    if math.isfinite(lo) and math.isfinite(hi):
        half = 0.5 * (hi - lo)
        x = np.where(em <= 1.0, lo + half * em, hi - half * ep)
        jac = np.full_like(em, half)
    elif math.isfinite(lo):
        x = lo + em / ep
        jac = 2.0 / (ep * ep)
    elif math.isfinite(hi):
        x = hi - ep / em
        jac = 2.0 / (em * em)
    else:
        raise ValueError("pieces must have at least one finite end")
    return x, dw * jac


def discretize(evaluator, support, breakpoints=(), symmetric=False, level=4, edge_evaluator=None,
               log_evaluator=None):
    """Nodes and weights discretizing ``evaluator(x) dx`` over ``support``.

    Each piece between breakpoints is mapped onto (-1, 1) and sampled with a
    tanh-sinh rule of step ``2**-level``; 0 is always a breakpoint when it is
    interior, and symmetric weights are mirrored exactly. With ``edge_evaluator``
    the distances to finite support ends are taken from the map, not from x.
    With ``log_evaluator`` the second array holds natural-log weights, which
    keeps far tails that would underflow.
    """
    lo, hi = support
    cuts = sorted({c for c in breakpoints if lo < c < hi} | ({0.0} if lo < 0 < hi else set()))
    edges = [lo] + cuts + [hi]
    em, ep, dw = _tanh_sinh(2.0 ** -level)
    xs, ws = [], []
    if symmetric and lo == -hi:
        pieces = [(edges[i], edges[i + 1]) for i in range(len(edges) - 1) if edges[i] >= 0]
    else:
        pieces = [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]
    for p_lo, p_hi in pieces:
        if not math.isfinite(p_lo) and not math.isfinite(p_hi):
            raise ValueError("unbounded pieces must be split at a finite breakpoint")
        x, jw = _map_piece(p_lo, p_hi, em, ep, dw)
        with np.errstate(all="ignore"):
            if edge_evaluator is not None and math.isfinite(p_lo) and math.isfinite(p_hi):
                half = 0.5 * (p_hi - p_lo)
                d_lo = half * em if p_lo == lo else x - lo
                d_hi = half * ep if p_hi == hi else hi - x
                wx = np.asarray(edge_evaluator(x, d_lo, d_hi), dtype=float)
                inside = (d_lo > 0) & (d_hi > 0)
            else:
                wx = np.asarray(log_evaluator(x) if log_evaluator else evaluator(x), dtype=float)
                inside = (x > p_lo) & (x < p_hi)
            if log_evaluator is not None:
                if edge_evaluator is not None and math.isfinite(p_lo) and math.isfinite(p_hi):
                    wx = np.log(wx)
                wx = wx + np.log(jw)
                ok = np.isfinite(x) & np.isfinite(wx) & inside
            else:
                wx = wx * jw
                ok = np.isfinite(x) & np.isfinite(wx) & (wx > 0) & inside
        xs.append(x[ok])
        ws.append(wx[ok])
        if symmetric and lo == -hi:
            xs.append(-x[ok])
            ws.append(wx[ok])
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    order = np.argsort(x, kind="stable")
    return x[order], w[order]


def _truncated_support(weight, n_max, drop=750.0):
    """Finite support outside which p_n(x)^2 w(x), n <= n_max, is below exp(-drop) relative.

    Uses the crude growth bound |p_n(x)| <~ (2 + |x|)^n; needs a log-evaluator.
    """
    lo, hi = weight.support
    logw = weight.log_evaluator
    if logw is None or (math.isfinite(lo) and math.isfinite(hi)):
        return weight.support
    probe = np.linspace(-4.0, 4.0, 81)
    probe = probe[(probe > lo) & (probe < hi)]
    with np.errstate(all="ignore"):
        ref = float(np.max(np.asarray(logw(probe), dtype=float)))

    def negligible(x):
        with np.errstate(all="ignore"):
            v = float(np.asarray(logw(np.array([x])), dtype=float)[0])
        return v + 2 * n_max * math.log(2 + abs(x)) < ref - drop

    ends = []
    for end, sign in ((lo, -1.0), (hi, 1.0)):
        if math.isfinite(end):
            ends.append(end)
            continue
        base = 0.0 if (lo < 0 < hi) else (hi if sign < 0 else lo)
        step = 1.0
        while not negligible(base + sign * step):
            step *= 2.0
            if step > 1e150:
                return weight.support
        ends.append(base + sign * step)
    return tuple(ends)


def _discrete_table(weight, level, n_max):
    logw = weight.log_evaluator
    support = _truncated_support(weight, n_max)
    x, w = discretize(weight.evaluator, support, weight.breakpoints, weight.symmetric, level,
                      weight.edge_evaluator, logw)
    if logw is None:
        return x.size, (lambda: discrete_stieltjes(x, w, n_max))
    return x.size, (lambda: discrete_stieltjes(x, None, n_max, log_w=w))


def stieltjes_recurrence(weight: WeightSpec, n_max: int, quad_order: Optional[int] = None,
                         tol: float = 1e-13, max_level: int = 10) -> RecurrenceTable:
    """Recurrence coefficients by the discretized Stieltjes procedure.

    The discretization is refined (step halved) until two successive levels
    agree to ``tol`` relative per coefficient. ``quad_order`` (default
    ``4*n_max + 20``) is the minimum node count of the first level.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if quad_order is None:
        quad_order = 4 * n_max + 20
    level = 2
    size, build = _discrete_table(weight, level, n_max)
    while size < quad_order and level < max_level:
        level += 1
        size, build = _discrete_table(weight, level, n_max)
    prev = build()
    change = math.inf
    while level < max_level:
        level += 1
        cur = _discrete_table(weight, level, n_max)[1]()
        change = max(
            np.max(np.abs(cur.a - prev.a) / np.maximum(1.0, np.abs(cur.a))),
            np.max(np.abs(cur.b - prev.b) / np.maximum(1.0, np.abs(cur.b))),
        )
        prev = cur
        if change <= tol:
            break
    else:
        raise AccuracyError(
            f"Stieltjes discretization did not settle to {tol:g} (last change {change:.2e})",
            error=change)
    if weight.symmetric:
        prev = RecurrenceTable(prev.a, np.zeros_like(prev.b), prev.a_sq)
    return prev


def recurrence(weight: WeightSpec, n_max: int) -> RecurrenceTable:
    """Closed form when available, otherwise the Stieltjes procedure."""
    try:
        return classical_recurrence(weight, n_max)
    except NoClosedFormError:
        return stieltjes_recurrence(weight, n_max)


# -- scaling model ----------------------------------------------------------

@dataclass(frozen=True)
class ScalingModel:
    """Contraction sequence ``c_n = kappa * n**lam`` with limits a_n/c_n -> a, b_n/c_n -> b.

    ``kappa_sq`` may be given instead of (or with) ``kappa`` so that even powers
    of c_n stay exact, e.g. c_n**2 = 2n for Hermite.
    """

    lam: float
    b_limit: float
    kappa: float = None
    a_limit: float = 0.5
    kappa_sq: float = field(default=None, repr=False)

    def __post_init__(self):
        if self.lam < 0:
            raise DomainError(f"regular-variation index must be >= 0, got {self.lam}")
        if self.kappa is None and self.kappa_sq is None:
            object.__setattr__(self, "kappa", 1.0)
        if self.kappa is None:
            object.__setattr__(self, "kappa", math.sqrt(self.kappa_sq))
        if self.kappa_sq is None:
            object.__setattr__(self, "kappa_sq", self.kappa * self.kappa)
        if not self.kappa > 0:
            raise DomainError("kappa must be positive")
        if not self.a_limit > 0:
            raise DomainError("a_limit must be positive")

    def c(self, n):
        if np.ndim(n):
            return self.kappa * np.power(np.asarray(n, dtype=float), self.lam)
        return self.kappa * float(n) ** self.lam

    def c_pow(self, n, k: int) -> float:
        """``c_n**k`` built from ``kappa_sq * n**(2 lam)`` so integer cases stay exact."""
        base = self.kappa_sq * float(n) ** (2 * self.lam)
        half, odd = divmod(int(k), 2)
        out = base ** half
        return out * math.sqrt(base) if odd else out

    def ratio_errors(self, table: RecurrenceTable, ns: Sequence[int]):
        """``(|a_n/c_n - a|, |b_n/c_n - b|)`` for each n in ``ns``."""
        ns = np.asarray(ns, dtype=int)
        if ns.max() > table.n_max:
            raise TableRangeError(f"table holds n <= {table.n_max}")
        cn = self.c(ns.astype(float))
        return np.abs(table.a[ns] / cn - self.a_limit), np.abs(table.b[ns] / cn - self.b_limit)

    def to_json(self):
        return {"lambda": self.lam, "a": self.a_limit, "b": self.b_limit, "kappa": self.kappa}


def freud_kappa(alpha: float) -> float:
    """Constant in a_n ~ (kappa/2) n**(1/alpha) for |x|**beta exp(-|x|**alpha)."""
    return 2.0 * (math.gamma(alpha / 2) * math.gamma(1 + alpha / 2) / math.gamma(alpha + 1)) ** (1 / alpha)


def scaling_model(weight: WeightSpec) -> ScalingModel:
    fam = weight.family
    if fam == "hermite":
        return ScalingModel(0.5, 0.0, kappa_sq=2.0)
    if fam == "laguerre":
        return ScalingModel(1.0, 1.0, 2.0)
    if fam == "jacobi":
        return ScalingModel(0.0, 0.0, 1.0)
    if fam == "genhermite":
        return ScalingModel(1.0 / weight.alpha, 0.0, freud_kappa(weight.alpha))
    raise DomainError("custom weights need an explicit ScalingModel(lam, b_limit, kappa)")
