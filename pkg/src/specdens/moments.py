"""Finite-N and limiting moments of the scaled level density, and moment-problem checks.

Finite-N moments are traces of Jacobi-matrix powers,

    M_k^(N) = (1 / (N c_N^k)) sum_{j<N} (J^k)_{jj},

and the limits are M_k = (1/(1 + lam k)) sum_j C(k,j) C(k-j,j) a^{2j} b^{k-2j}.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, TableRangeError
from .weights import RecurrenceTable, ScalingModel, WeightSpec, classical_recurrence, jacobi_matrix


@dataclass(frozen=True, eq=False)
class MomentVector:
    """Moments m_0..m_{k_max} tagged ``finite`` (with N), ``limit`` or ``base``."""

    kind: str
    values: np.ndarray
    scaling: Optional[ScalingModel] = None
    N: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("finite", "limit", "base"):
            raise ValueError(f"unknown moment kind {self.kind!r}")
        vals = np.array(self.values, dtype=float)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return self.values.size


# -- finite N -----------------------------------------------------------------

def diagonal_power_sums(table: RecurrenceTable, N: int, k_max: int):
    """``[sum_{j<N} (J^k)_{jj} for k = 0..k_max]``, each sum correctly rounded.

    Every start vector e_j is pushed through k_max applications of the
    similarity-transformed Jacobi matrix (super-diagonal a_{i+1}^2, sub-diagonal 1),
    which has the same diagonal powers but only involves a^2 and b. Only a
    window of +-k_max//2 around j can contribute to a closed walk.
    """
    if N < 1 or k_max < 0:
        raise ValueError("need N >= 1 and k_max >= 0")
    h = k_max // 2
    need = N - 1 + h
    if need > table.n_max:
        raise TableRangeError(
            f"moments up to k={k_max} at N={N} need coefficients to index {need}; table holds {table.n_max}")
    width = 2 * h + 1
    idx = np.arange(N)[:, None] + np.arange(width)[None, :] - h
    valid = idx >= 0
    safe = np.where(valid, idx, 0)
    b_win = np.where(valid, table.b[safe], 0.0)
    up = np.minimum(safe + 1, table.n_max)
    a_win = np.where(valid, table.a_sq[up], 0.0)
    W = np.zeros((N, width))
    W[:, h] = 1.0
    sums = [float(N)]
    for _ in range(k_max):
        nxt = b_win * W
        nxt[:, :-1] += a_win[:, :-1] * W[:, 1:]
        nxt[:, 1:] += W[:, :-1]
        W = np.where(valid, nxt, 0.0)
        sums.append(math.fsum(W[:, h]))
    return sums


def finite_moments(table, scaling: ScalingModel, N: int, k_max: int) -> MomentVector:
    sums = diagonal_power_sums(table, N, k_max)
    vals = [s / (N * scaling.c_pow(N, k)) for k, s in enumerate(sums)]
    return MomentVector("finite", vals, scaling, N)


def finite_moment(table, scaling: ScalingModel, N: int, k: int) -> float:
    """k-th moment of the scaled density sigma_N."""
    return float(finite_moments(table, scaling, N, k).values[k])


# -- limits -------------------------------------------------------------------

def _exact(v):
    return Fraction(v) if not isinstance(v, Fraction) else v


def _trinomial_sum(a, b, k):
    a2, b = _exact(a) ** 2, _exact(b)
    return sum(math.comb(k, j) * math.comb(k - j, j) * a2 ** j * b ** (k - 2 * j) for j in range(k // 2 + 1))


def limit_moment(scaling: ScalingModel, k: int) -> float:
    """M_k = sum_j C(k,j) C(k-j,j) a^{2j} b^{k-2j} / (1 + lam k), summed exactly."""
    return float(_trinomial_sum(scaling.a_limit, scaling.b_limit, k)) / (1 + scaling.lam * k)


def limit_moments(scaling: ScalingModel, k_max: int) -> MomentVector:
    return MomentVector("limit", [limit_moment(scaling, k) for k in range(k_max + 1)], scaling)


def laurent_constant_term(a, b, k) -> Fraction:
    """Constant term of (a z + a/z + b)^k by repeated exact convolution."""
    a, b = _exact(a), _exact(b)
    coeffs = [Fraction(1)]  # index i <-> power i - deg
    for _ in range(k):
        nxt = [Fraction(0)] * (len(coeffs) + 2)
        for i, c in enumerate(coeffs):
            if c:
                nxt[i] += a * c
                nxt[i + 1] += b * c
                nxt[i + 2] += a * c
        coeffs = nxt
    return coeffs[k]


def laurent_moment(scaling: ScalingModel, k: int) -> float:
    return float(laurent_constant_term(scaling.a_limit, scaling.b_limit, k)) / (1 + scaling.lam * k)


def base_moments(scaling: ScalingModel, k_max: int) -> MomentVector:
    """Moments of the arcsine source density f_b (the lam = 0 limit)."""
    return MomentVector("base", [float(_trinomial_sum(scaling.a_limit, scaling.b_limit, k))
                                 for k in range(k_max + 1)], scaling)


# -- moment-problem validators ------------------------------------------------

def hankel_positive(m, n: int, rtol: float = 1e-12) -> bool:
    """Is [m_{j+k}]_{j,k=0..n} positive definite?

    Cholesky without pivoting; every pivot must exceed ``rtol * max|entry|``.
    """
    vals = np.asarray(m.values if isinstance(m, MomentVector) else m, dtype=float)
    if vals.size < 2 * n + 1:
        raise ValueError(f"Hankel matrix of order {n} needs moments through index {2 * n}")
    H = np.array([[vals[j + k] for k in range(n + 1)] for j in range(n + 1)])
    floor = rtol * np.max(np.abs(H))
    L = np.zeros_like(H)
    for j in range(n + 1):
        pivot = H[j, j] - np.dot(L[j, :j], L[j, :j])
        if not pivot > floor:
            return False
        L[j, j] = math.sqrt(pivot)
        for i in range(j + 1, n + 1):
            L[i, j] = (H[i, j] - np.dot(L[i, :j], L[j, :j])) / L[j, j]
    return True


def lambda_matrix(lam, n):
    return np.array([[1.0 / (1 + lam * (j + k)) for k in range(n + 1)] for j in range(n + 1)])


def lambda_det(lam: float, n: int) -> float:
    """det[1/(1 + lam (j+k))]_{j,k=0..n}; exact rational elimination for n <= 6."""
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if n > 6:
        sign, logdet = np.linalg.slogdet(lambda_matrix(lam, n))
        return float(sign * math.exp(logdet))
    lam = Fraction(lam)
    A = [[1 / (1 + lam * (j + k)) for k in range(n + 1)] for j in range(n + 1)]
    det = Fraction(1)
    size = n + 1
    for c in range(size):
        p = next((r for r in range(c, size) if A[r][c] != 0), None)
        if p is None:
            return 0.0
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, size):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return float(det)


def lambda_det_integral(lam: float, n: int) -> float:
    """The same determinant from its integral representation

        det = 1/(n+1)! * int_[0,1]^{n+1} prod_{j<k} (t_j^lam - t_k^lam)^2 dt,

    after t = u^(1/lam): a tensor Gauss rule for the weight u^(1/lam - 1) on
    [0, 1] with n + 1 points per axis integrates the Vandermonde square exactly.
    """
    from .quadrature import gauss_rule

    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    m = n + 1
    w_jac = WeightSpec.jacobi(0.0, 1.0 / lam - 1.0)
    rule = gauss_rule(jacobi_matrix(classical_recurrence(w_jac, m), m), w_jac.mass)
    u = 0.5 * (1.0 + rule.nodes)
    wt = rule.weights / rule.weights.sum()
    total = []
    for combo in itertools.product(range(m), repeat=m):
        pts = u[list(combo)]
        v = 1.0
        for j, k in itertools.combinations(range(m), 2):
            v *= (pts[j] - pts[k]) ** 2
        total.append(v * float(np.prod(wt[list(combo)])))
    return math.fsum(total) / math.factorial(m)


def carleman_partial_sum(m, K: int) -> float:
    """sum_{k=1..K} m_{2k}^(-1/(2k))."""
    vals = np.asarray(m.values if isinstance(m, MomentVector) else m, dtype=float)
    if vals.size < 2 * K + 1:
        raise ValueError(f"need even moments through index {2 * K}")
    terms = []
    for k in range(1, K + 1):
        v = vals[2 * k]
        if not v > 0:
            raise DomainError(f"even moment m_{2 * k} = {v} is not positive")
        terms.append(v ** (-1.0 / (2 * k)))
    return math.fsum(terms)


def carleman_floor(scaling: ScalingModel) -> float:
    """Lower bound 1/(3B), B = a + |b|, on every Carleman term of the limit moments."""
    return 1.0 / (3 * (scaling.a_limit + abs(scaling.b_limit)))


# -- convergence report -------------------------------------------------------

@dataclass
class ConvergenceReport:
    rows: list = field(default_factory=list)  # (N, k, finite, limit, abs_error)
    non_monotone: list = field(default_factory=list)  # (k, N) where the error grew

    def errors(self, N):
        return {k: e for n, k, _, _, e in self.rows if n == N}

    def max_error(self, N, k_max=None):
        return max(e for k, e in self.errors(N).items() if k_max is None or k <= k_max)

    def to_csv(self) -> str:
        from .kernel import fmt

        lines = ["N,k,finite,limit,abs_error"]
        lines += [",".join(fmt(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"


def moment_convergence_report(table, scaling, N_list: Sequence[int], k_max: int) -> ConvergenceReport:
    limits = limit_moments(scaling, k_max).values
    report = ConvergenceReport()
    last = {}
    for N in sorted(N_list):
        fin = finite_moments(table, scaling, N, k_max).values
        for k in range(k_max + 1):
            err = abs(fin[k] - limits[k])
            report.rows.append((int(N), k, float(fin[k]), float(limits[k]), float(err)))
            if k in last and err > last[k]:
                report.non_monotone.append((k, int(N)))
            last[k] = err
    return report
