"""Finite-N and limiting level densities of unitary ensembles."""

from .errors import (
    AccuracyError, ClosedFormDefect, ConvergenceError, DomainError, NoClosedFormError,
    PrecisionExhaustedError, SingularityError, SpecdensError, TableRangeError,
)
from .weights import (
    JacobiMatrix, RecurrenceTable, ScalingModel, WeightSpec, classical_recurrence, discrete_stieltjes,
    jacobi_matrix, recurrence, scaling_model, stieltjes_recurrence,
)
from .quadrature import GaussRule, adaptive_integrate, adaptive_singular_integrate, gauss_rule, integrate, tridiag_eigen
from .kernel import DensityTable, correlation_n, density_table, eval_phi, kernel_KN, sigma_N
from .moments import (
    MomentVector, carleman_partial_sum, finite_moment, finite_moments, hankel_positive, lambda_det,
    lambda_det_integral, laurent_moment, limit_moment, limit_moments, moment_convergence_report,
)
from .limit_density import (
    DensityModel, arcsine_cf, closed_form_density, j0_series, ode_density, support, verify_ode,
)
from .perturbation import PerturbationSpec, perturbation_convergence_report, perturbed_moment, perturbed_recurrence, theta_diagnostic

__version__ = "0.1.0"
