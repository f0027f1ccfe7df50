from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specdens.errors import DomainError, TableRangeError
from specdens.moments import (
    MomentVector, base_moments, carleman_floor, carleman_partial_sum, diagonal_power_sums, finite_moment,
    finite_moments, hankel_positive, lambda_det, lambda_det_integral, laurent_constant_term, laurent_moment,
    limit_moment, limit_moments, moment_convergence_report,
)
from specdens.weights import ScalingModel, WeightSpec, classical_recurrence, jacobi_matrix, scaling_model

H, L, J = WeightSpec.hermite(), WeightSpec.laguerre(0.0), WeightSpec.jacobi(0.0, 0.0)


@pytest.mark.parametrize("N", [10, 100, 1000])
def test_hermite_exact_moments(N):
    t = classical_recurrence(H, N + 3)
    sc = scaling_model(H)
    m = finite_moments(t, sc, N, 5)
    assert m[2] == 0.25
    assert m[4] == pytest.approx(0.125 + 1 / (16 * N * N), abs=1e-15)
    assert m[1] == 0.0 and m[3] == 0.0 and m[5] == 0.0


def test_laguerre_first_moment():
    for N in (10, 100, 1000):
        assert finite_moment(classical_recurrence(L, N + 1), scaling_model(L), N, 1) == 0.5


def test_power_sums_match_dense_matrix_powers():
    t = classical_recurrence(WeightSpec.jacobi(0.5, 1.5), 40)
    N, k_max = 12, 9
    A = jacobi_matrix(t, N + k_max).to_dense()
    sums = diagonal_power_sums(t, N, k_max)
    P = np.eye(A.shape[0])
    for k in range(k_max + 1):
        assert sums[k] == pytest.approx(np.trace(P[:N, :N]), rel=1e-13, abs=1e-14)
        P = P @ A


def test_power_sums_table_range():
    t = classical_recurrence(H, 10)
    with pytest.raises(TableRangeError):
        diagonal_power_sums(t, 10, 6)


def test_limit_moment_values():
    assert limit_moment(ScalingModel(0.5, 0.0), 2) == 0.25
    assert limit_moment(ScalingModel(0.5, 0.0), 4) == 0.125
    assert limit_moment(ScalingModel(0.0, 0.0), 2) == 0.5
    assert limit_moment(ScalingModel(1.0, 1.0), 1) == 0.5
    assert limit_moment(ScalingModel(1.0, 1.0), 3) == 0.625


def test_laurent_constant_term_small_cases():
    assert laurent_constant_term(Fraction(1, 2), 0, 2) == Fraction(1, 2)
    assert laurent_constant_term(1, 1, 2) == 3  # z^0 coefficient of (z + 1/z + 1)^2
    assert laurent_constant_term(2, 3, 0) == 1


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([0.0, 0.25, 0.5, 1.0, 2.0]), st.sampled_from([-2.0, -1.0, 0.0, 0.5, 1.0]),
       st.integers(min_value=0, max_value=14))
def test_laurent_equals_trinomial_sum(lam, b, k):
    sc = ScalingModel(lam, b)
    assert laurent_moment(sc, k) == limit_moment(sc, k)


def test_base_moments_are_arcsine():
    m = base_moments(ScalingModel(0.0, 0.0), 6)
    assert list(m.values) == [1.0, 0.0, 0.5, 0.0, 0.375, 0.0, 0.3125]


def test_moment_vector_kind_checked():
    with pytest.raises(ValueError):
        MomentVector("other", [1.0])
    mv = limit_moments(ScalingModel(0.5, 0.0), 4)
    assert len(mv) == 5 and mv.kind == "limit"


def test_hankel():
    for lam, b in [(0.5, 0.0), (1.0, 1.0), (1 / 3, 0.0), (0.0, 0.0)]:
        m = limit_moments(ScalingModel(lam, b), 12)
        assert all(hankel_positive(m, n) for n in range(7))
    # a two-point measure has a singular Hankel matrix of order 2
    two_point = [0.5 * (1 + (-1) ** k) for k in range(5)]
    assert hankel_positive(two_point, 1)
    assert not hankel_positive(two_point, 2)
    with pytest.raises(ValueError):
        hankel_positive([1.0, 0.0], 1)


def test_lambda_det():
    assert lambda_det(1.0, 1) == pytest.approx(1 / 12, abs=1e-17)
    assert lambda_det(1.0, 0) == 1.0
    # lam = 1 is the Hilbert matrix
    assert lambda_det(1.0, 2) == pytest.approx(1 / 2160, rel=1e-15)
    for lam in (0.3, 1.0, 2.5):
        for n in range(4):
            assert lambda_det_integral(lam, n) == pytest.approx(lambda_det(lam, n), rel=1e-9)
    assert lambda_det(0.5, 8) > 0
    with pytest.raises(DomainError):
        lambda_det(0.0, 2)


def test_carleman():
    sc = ScalingModel(0.5, 0.0)
    m = limit_moments(sc, 20)
    floor = carleman_floor(sc)
    sums = [carleman_partial_sum(m, K) for K in range(1, 11)]
    assert all(s >= K * floor for K, s in enumerate(sums, 1))
    with pytest.raises(DomainError):
        carleman_partial_sum([1.0, 0.0, 0.0], 1)


def test_convergence_report():
    Ns = [25, 50, 100, 200]
    for w in (H, L, J):
        rep = moment_convergence_report(classical_recurrence(w, 210), scaling_model(w), Ns, 8)
        errs = [rep.max_error(N) for N in Ns]
        assert all(b < a for a, b in zip(errs, errs[1:]))
        assert not rep.non_monotone
    csv = rep.to_csv().splitlines()
    assert csv[0] == "N,k,finite,limit,abs_error"
    assert csv[1] == "25,0,1.0,1.0,0.0"


def test_laguerre_gap_is_order_one_over_n_squared():
    rep = moment_convergence_report(classical_recurrence(L, 420), scaling_model(L), [100, 200, 400], 4)
    e = [rep.errors(N)[4] for N in (100, 200, 400)]
    assert e[0] / e[1] == pytest.approx(4, rel=0.05)
