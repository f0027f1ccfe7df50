"""Christoffel modification w -> p(x)^2 w(x) and the moment-invariance diagnostic.

The perturbed recurrence comes from a Stieltjes sweep over a Gauss rule for
the original weight with every weight multiplied by p(x_i)^2. With enough nodes
all inner products of degree <= 2 (n_max + l) + 1 are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError
from .moments import finite_moments, limit_moments
from .quadrature import gauss_rule
from .weights import RecurrenceTable, ScalingModel, WeightSpec, discrete_stieltjes, jacobi_matrix, recurrence


@dataclass(frozen=True)
class PerturbationSpec:
    """Polynomial p with ascending coefficients ``p_coeffs``."""

    p_coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.p_coeffs)
        if not coeffs:
            raise DomainError("p needs at least one coefficient")
        if not all(math.isfinite(c) for c in coeffs):
            raise DomainError("p coefficients must be finite")
        if coeffs[-1] == 0:
            raise DomainError("leading coefficient of p must be non-zero")
        object.__setattr__(self, "p_coeffs", coeffs)

    @classmethod
    def parse(cls, text: str) -> "PerturbationSpec":
        return cls(tuple(float(t) for t in text.split(",") if t.strip()))

    @property
    def degree(self) -> int:
        return len(self.p_coeffs) - 1

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), self.p_coeffs)


def _omega_rule(weight: WeightSpec, n_nodes: int):
    base = recurrence(weight, n_nodes)
    return gauss_rule(jacobi_matrix(base, n_nodes), weight.mass, symmetric=weight.symmetric or None)


def perturbed_recurrence(weight: WeightSpec, p: PerturbationSpec, n_max: int) -> RecurrenceTable:
    """Recurrence table of the measure p(x)^2 w(x) dx, normalized to unit mass."""
    l = p.degree
    if l == 0:
        # constant p: normalization removes it
        return recurrence(weight, n_max)
    n_nodes = max(n_max + l + 2, 2 * (n_max + l) + 2)
    rule = _omega_rule(weight, n_nodes)
    with np.errstate(divide="ignore"):
        log_p2 = 2.0 * np.log(np.abs(p(rule.nodes)))
    table = discrete_stieltjes(rule.nodes, None, n_max, log_w=rule.log_weights + log_p2)
    if weight.symmetric and all(c == 0 for c in p.p_coeffs[(l + 1) % 2::2]):
        # p even or odd: p^2 w is symmetric, so b vanishes identically
        table = RecurrenceTable(table.a, np.zeros_like(table.b), table.a_sq)
    return table


def perturbed_moment(weight, p, scaling: ScalingModel, N: int, k: int, table=None) -> float:
    """k-th moment of the perturbed level density with the original scaling c_N."""
    if table is None:
        table = perturbed_recurrence(weight, p, N + k)
    return float(finite_moments(table, scaling, N, k).values[k])


def _recurrence_bound(tables, upto):
    d = 0.0
    for t in tables:
        n = min(upto, t.n_max)
        d = max(d, float(np.max(t.a[: n + 1])), float(np.max(np.abs(t.b[: n + 1]))))
    return d


def theta_diagnostic(weight, p, scaling: ScalingModel, N: int, k: int, tables=None):
    """``(theta, bound_ok, C)`` with theta = perturbed minus unperturbed k-th moment.

    ``C = 2 * 3^k (D / c_N)^k`` with D the largest |recurrence entry| of either
    table up to index N + l + k; the check is ``|theta| <= C max(l, 1) / N``.
    """
    l = p.degree
    if tables is None:
        n_max = N + l + k
        tables = (recurrence(weight, n_max), perturbed_recurrence(weight, p, n_max))
    base, pert = tables
    m = float(finite_moments(base, scaling, N, k).values[k])
    m_hat = float(finite_moments(pert, scaling, N, k).values[k])
    theta = m_hat - m
    D = _recurrence_bound(tables, N + l + k)
    C = 2.0 * 3.0 ** k * (D / scaling.c(N)) ** k
    return theta, abs(theta) <= C * max(l, 1) / N, C


@dataclass
class PerturbationReport:
    rows: list = field(default_factory=list)  # (N, k, M_hat, M, theta, M_limit)
    bound_constants: dict = field(default_factory=dict)  # N -> max C over k
    bound_ok: bool = True
    non_monotone: list = field(default_factory=list)  # (k, N) where a gap grew

    def thetas(self, N):
        return {k: th for n, k, _, _, th, _ in self.rows if n == N}

    def max_theta(self, N, k_max=None):
        return max(abs(t) for k, t in self.thetas(N).items() if k_max is None or k <= k_max)

    def to_csv(self) -> str:
        from .kernel import fmt

        lines = ["N,k,M_hat,M,theta,M_limit"]
        lines += [",".join(fmt(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"


def perturbation_convergence_report(weight, p, scaling, N_list: Sequence[int], k_max: int) -> PerturbationReport:
    Ns = sorted(int(n) for n in N_list)
    l = p.degree
    n_max = Ns[-1] + l + k_max
    base = recurrence(weight, n_max)
    pert = perturbed_recurrence(weight, p, n_max)
    limits = limit_moments(scaling, k_max).values
    report = PerturbationReport()
    last = {}
    for N in Ns:
        fin = finite_moments(base, scaling, N, k_max).values
        hat = finite_moments(pert, scaling, N, k_max).values
        D = _recurrence_bound((base, pert), N + l + k_max)
        C_max = 0.0
        for k in range(k_max + 1):
            theta = float(hat[k] - fin[k])
            C = 2.0 * 3.0 ** k * (D / scaling.c(N)) ** k
            C_max = max(C_max, C)
            report.bound_ok &= abs(theta) <= C * max(l, 1) / N
            report.rows.append((N, k, float(hat[k]), float(fin[k]), theta, float(limits[k])))
            gaps = (abs(theta), abs(hat[k] - limits[k]))
            if k in last and any(g > old for g, old in zip(gaps, last[k])):
                report.non_monotone.append((k, N))
            last[k] = gaps
        report.bound_constants[N] = C_max
    return report
