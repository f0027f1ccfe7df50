import math

import numpy as np
import pytest

from specdens.errors import AccuracyError, DomainError
from specdens.quadrature import (
    adaptive_integrate, adaptive_singular_integrate, gauss_rule, integrate, tridiag_eigen,
)
from specdens.weights import WeightSpec, classical_recurrence, jacobi_matrix


def _rule(w, n):
    return gauss_rule(jacobi_matrix(classical_recurrence(w, n), n), w.mass)


def test_eigenvalues_match_dense_solver():
    t = classical_recurrence(WeightSpec.laguerre(0.5), 120)
    J = jacobi_matrix(t, 120)
    nodes, v0 = tridiag_eigen(J)
    ref = np.linalg.eigh(J.to_dense())
    assert np.allclose(nodes, ref[0], rtol=1e-13, atol=1e-13)
    assert np.allclose(v0, np.abs(ref[1][0]), atol=1e-12)


def test_weights_sum_to_mass():
    for w in (WeightSpec.hermite(), WeightSpec.laguerre(0.0), WeightSpec.jacobi(1.0, 0.5)):
        r = _rule(w, 60)
        assert math.fsum(r.weights) == pytest.approx(w.mass, rel=1e-14)
        assert r.degree_exact == 119


def test_hermite_rule_is_symmetric():
    r = _rule(WeightSpec.hermite(), 21)
    assert np.array_equal(r.nodes, -r.nodes[::-1])
    assert np.array_equal(r.weights, r.weights[::-1])
    assert r.nodes[10] == 0.0


def test_two_point_legendre():
    r = _rule(WeightSpec.jacobi(0, 0), 2)
    assert np.allclose(r.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-15)
    assert np.allclose(r.weights, [1.0, 1.0], rtol=1e-15)


def test_hermite_even_moments_exact():
    r = _rule(WeightSpec.hermite(), 50)
    for k in range(0, 100, 2):
        q = integrate(lambda x: np.array([t ** k for t in x]), r)
        assert q == pytest.approx(math.gamma((k + 1) / 2), rel=1e-13)


def test_integrate_flags_nonfinite():
    r = _rule(WeightSpec.jacobi(0, 0), 4)
    with pytest.raises(DomainError), np.errstate(divide="ignore"):
        integrate(lambda x: 1 / (x - x[1]), r)


def test_adaptive_smooth():
    assert adaptive_integrate(np.exp, 0.0, 1.0, 1e-14) == pytest.approx(math.e - 1, rel=1e-14)
    assert adaptive_integrate(np.sin, 0.0, 0.0) == 0.0


def test_adaptive_singular_both_ends():
    val = adaptive_singular_integrate(lambda x: 1 / np.sqrt(1 - np.asarray(x) ** 2), -1, 1, (True, True), 1e-13)
    assert val == pytest.approx(math.pi, rel=1e-13)


def test_adaptive_singular_one_end():
    val = adaptive_singular_integrate(lambda x: 1 / np.sqrt(x), 0.0, 4.0, (True, False), 1e-13)
    assert val == pytest.approx(4.0, rel=1e-13)
    val = adaptive_singular_integrate(lambda x: 1 / np.sqrt(2.0 - np.asarray(x)), 0.0, 2.0, (False, True), 1e-13)
    assert val == pytest.approx(2 * math.sqrt(2), rel=1e-13)


def test_adaptive_singular_reversed_limits():
    f = lambda x: 1 / np.sqrt(np.asarray(x))
    assert adaptive_singular_integrate(f, 1.0, 0.0, (False, True)) == pytest.approx(-2.0, rel=1e-10)


def test_adaptive_log_singularity_at_zero():
    val = adaptive_singular_integrate(lambda x: np.log(np.asarray(x)), 0.0, 1.0, (True, True), 1e-12)
    assert val == pytest.approx(-1.0, rel=1e-11)


def test_adaptive_accuracy_error():
    with pytest.raises(AccuracyError) as exc:
        adaptive_integrate(lambda x: np.sign(np.asarray(x) - 1 / 3) * np.sin(1 / np.abs(np.asarray(x) - 1 / 3)),
                           0.0, 1.0, 1e-14, max_panels=50)
    assert exc.value.estimate is not None
