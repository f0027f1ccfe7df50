import cmath
import math

import mpmath
import numpy as np
import pytest

from specdens.errors import DomainError, SingularityError
from specdens.limit_density import (
    DensityModel, arcsine_cf, arcsine_density, closed_form_b, closed_form_density, closed_form_lambda,
    closed_form_mass, j0_series, match_closed_form, ode_density, ode_residual, plus_constant, support,
    verify_ode,
)
from specdens.moments import limit_moment
from specdens.weights import ScalingModel


def test_support():
    assert support(0.0, 0.5) == (-0.5, 1.5)
    assert support(0.5, 0.0) == (-1.0, 1.0)
    assert support(1.0, 3.0) == (0.0, 4.0)
    assert support(1.0, -3.0) == (-4.0, 0.0)
    with pytest.raises(DomainError):
        support(-1.0, 0.0)


def test_semicircle_and_marchenko_pastur_points():
    assert closed_form_density(1, 1, 0.0) == 2 / math.pi
    assert closed_form_density(3, 0, 1.0) == pytest.approx(1 / math.pi, rel=1e-15)
    x = np.array([-0.5, 0.3, 0.99])
    assert np.allclose(closed_form_density(1, 1, x), 2 / math.pi * np.sqrt(1 - x * x), rtol=1e-15)


def test_closed_form_outside_and_singular_points():
    assert closed_form_density(1, 2, 1.0) == 0.0
    assert closed_form_density(3, 1, 2.5) == 0.0
    assert closed_form_density(3, 1, -0.1) == 0.0
    assert closed_form_density(2, 1, 0.0) == math.inf
    assert closed_form_density(2, 2, 0.0) == pytest.approx(1.5 / math.pi, rel=1e-15)
    assert closed_form_density(4, 0, 0.0) == math.inf
    with pytest.raises(DomainError):
        closed_form_density(5, 1, 0.1)
    with pytest.raises(DomainError):
        closed_form_density(1, 1.5, 0.1)


@pytest.mark.parametrize("case,param", [(c, p) for c in (1, 2) for p in (1, 2, 3)] + [(c, q) for c in (3, 4) for q in range(4)])
def test_closed_form_mass_moments_ode(case, param):
    lam, b = closed_form_lambda(case, param), closed_form_b(case)
    assert match_closed_form(lam, b) == (case, param)
    model = DensityModel.for_params(lam, b)
    assert closed_form_mass(case, param) == pytest.approx(1.0, abs=1e-10)
    sc = ScalingModel(lam, b)
    for k in range(1, 7):
        assert model.moment(k) == pytest.approx(limit_moment(sc, k), abs=1e-9)
    lo, hi = model.support
    g = np.linspace(lo, hi, 41)[1:-1]
    g = g[np.abs(g) > 0.03]
    assert verify_ode(model, g, 1e-5) < 1e-6


def test_ode_matches_closed_forms():
    for lam, b, xs in [(0.5, 0.0, [-0.9, -0.3, 0.2, 0.7]), (1.0, 1.0, [0.01, 0.4, 1.3, 1.99]),
                       (1 / 3, 0.0, [-0.5, 0.0, 0.5]), (2 / 3, 1.0, [0.2, 1.8])]:
        closed = DensityModel.for_params(lam, b)
        assert closed.form == "closed"
        for x in xs:
            assert ode_density(lam, b, x) == pytest.approx(float(closed(x)), rel=1e-11, abs=1e-13)


def test_ode_branch_constant_for_b_above_one():
    c = plus_constant(1.0, 3.0)
    assert c == pytest.approx(1 / math.sqrt(8), rel=1e-13)
    for x in (0.2, 1.0, 2.0):
        assert ode_density(1.0, 3.0, x) == pytest.approx(c, rel=1e-13)
    assert ode_density(1.0, 3.0, -0.5) == 0.0
    assert ode_density(1.0, 3.0, 4.5) == 0.0
    # lam = 1/2: sigma = C+ x on (0, b - 1)
    assert ode_density(0.5, 2.0, 0.5) == pytest.approx(plus_constant(0.5, 2.0) * 0.5, rel=1e-12)


def test_ode_mirror_symmetry():
    for x in (0.3, 1.2, 2.5):
        assert ode_density(0.7, -2.0, -x) == pytest.approx(ode_density(0.7, 2.0, x), rel=1e-14)


def test_ode_value_at_zero():
    assert ode_density(0.5, 0.0, 0.0) == pytest.approx(2 / math.pi, rel=1e-15)
    assert ode_density(0.25, 0.5, 0.0) == pytest.approx(float(arcsine_density(0.0, 0.5)) / 0.75, rel=1e-15)
    assert ode_density(0.5, 2.0, 0.0) == 0.0
    with pytest.raises(SingularityError):
        ode_density(1.0, 0.0, 0.0)
    with pytest.raises(SingularityError):
        ode_density(0.5, 1.0, 0.0)


def test_lambda_zero_is_arcsine():
    assert ode_density(0.0, 0.5, 0.7) == float(arcsine_density(0.7, 0.5))
    assert DensityModel.for_params(0.0, 0.0).form == "arcsine"


@pytest.mark.parametrize("lam,b", [(0.3, 0.5), (2.0, 0.0), (1.0, 3.0), (0.7, -2.0), (1.5, 1.0)])
def test_quadrature_models(lam, b):
    model = DensityModel.for_params(lam, b)
    assert model.form == "quadrature"
    assert model.mass() == pytest.approx(1.0, abs=1e-10)
    sc = ScalingModel(lam, b)
    for k in (1, 2, 3, 4):
        assert model.moment(k) == pytest.approx(limit_moment(sc, k), abs=1e-9)
    lo, hi = model.support
    g = np.linspace(lo, hi, 31)[1:-1]
    g = g[[min(abs(x - c) for c in (0.0, b - 1, b + 1)) > 0.05 for x in g]]
    assert verify_ode(model, g, 1e-5) < 1e-6


def test_ode_residual_detects_wrong_density():
    model = DensityModel.for_params(0.5, 0.0)
    wrong = lambda x: 1.1 * np.asarray(model(x))
    res, _ = ode_residual(wrong, 0.5, model.source, [0.2, 0.4], 1e-5)
    assert res > 1e-3


def test_arcsine_cf_against_bessel():
    for b in (0.0, 1.0, -0.3):
        for t in (0.0, 0.5, 2.0, 10.0):
            ref = cmath.exp(1j * t * b) * complex(mpmath.besselj(0, t))
            assert abs(arcsine_cf(t, b) - ref) < 1e-10


def test_j0_series():
    for t in (0.0, 0.1, 1.0, 2.404825557695773, 5.0, 10.0):
        assert j0_series(t) == pytest.approx(float(mpmath.besselj(0, t)), abs=1e-12)
    assert j0_series(1.0, terms=2) == 1 - 0.25


def test_model_json_and_table():
    m = DensityModel.for_params(1.0, 1.0)
    assert m.to_json() == {"lambda": 1.0, "b": 1.0, "support": [0.0, 2.0], "form": "closed:3:0"}
    csv = m.table_csv([0.0, 1.0, 3.0]).splitlines()
    assert csv[0] == "x,sigma_limit"
    assert csv[1:] == ["1.0," + repr(float(m(1.0))), "3.0,0.0"]
    assert DensityModel.for_params(0.5, 0.0, prefer_closed=False).form == "quadrature"
