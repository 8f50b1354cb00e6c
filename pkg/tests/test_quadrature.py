import math

import numpy as np
import pytest

from sepdeut.model import ModelParams
from sepdeut.quadrature import (
    MapRationalTail,
    QuadratureError,
    QuadratureScheme,
    differentiate,
    gauss_legendre_rule,
    integrate_panels,
    integrate_semi_infinite,
    momentum_scheme,
    radial_scheme,
)


def test_rule_low_orders():
    nodes, weights = gauss_legendre_rule(2)
    assert nodes == pytest.approx([-1.0 / math.sqrt(3.0), 1.0 / math.sqrt(3.0)], rel=1e-15)
    assert weights == pytest.approx([1.0, 1.0], rel=1e-15)
    for n in (2, 10, 40, 128):
        _, w = gauss_legendre_rule(n)
        assert math.fsum(w.tolist()) == pytest.approx(2.0, abs=1e-14)


def test_rule_order_limits():
    with pytest.raises(ValueError):
        gauss_legendre_rule(1)
    with pytest.raises(ValueError):
        gauss_legendre_rule(129)


def test_rule_polynomial_exactness():
    # n points integrate degree 2n-1 exactly
    nodes, weights = gauss_legendre_rule(3)
    assert float(weights @ nodes**4) == pytest.approx(2.0 / 5.0, abs=1e-15)
    assert float(weights @ nodes**5) == pytest.approx(0.0, abs=1e-15)


def test_integrate_panels_polynomial():
    scheme = QuadratureScheme(panel_order=5, breakpoints=(0.0, 1.0, 3.0))
    assert integrate_panels(lambda x: x * x, scheme) == pytest.approx(9.0, rel=1e-14)


def test_integrate_panels_requires_valid_scheme():
    with pytest.raises(ValueError):
        QuadratureScheme(panel_order=1, breakpoints=(0.0, 1.0))
    with pytest.raises(ValueError):
        QuadratureScheme(panel_order=4, breakpoints=(0.0,))
    with pytest.raises(ValueError):
        QuadratureScheme(panel_order=4, breakpoints=(0.0, 2.0, 1.0))


def test_semi_infinite_exponential():
    assert integrate_semi_infinite(lambda r: np.exp(-r), 0.0, 1.0) == pytest.approx(1.0, rel=1e-13)
    # Gamma(4)/2^4 = 3/8
    got = integrate_semi_infinite(lambda r: r**3 * np.exp(-2.0 * r), 0.0, 2.0)
    assert got == pytest.approx(0.375, rel=1e-12)


def test_semi_infinite_offset_start():
    got = integrate_semi_infinite(lambda r: np.exp(-r), 2.0, 1.0)
    assert got == pytest.approx(math.exp(-2.0), rel=1e-12)
    with pytest.raises(ValueError):
        integrate_semi_infinite(lambda r: np.exp(-r), 0.0, -1.0)


def test_rational_tail_gamma_integral():
    scheme = QuadratureScheme(
        panel_order=40,
        breakpoints=(0.0, 2.0, 5.0),
        tail=MapRationalTail(scale=5.0),
    )
    got = integrate_panels(lambda x: x**2.5 * np.exp(-x), scheme)
    assert got == pytest.approx(math.gamma(3.5), rel=1e-10)


def test_nonfinite_integrand_is_reported():
    scheme = QuadratureScheme(panel_order=8, breakpoints=(0.0, 2.0))
    with pytest.raises(QuadratureError, match="non-finite at x ="):
        integrate_panels(lambda x: np.where(x > 1.0, np.nan, 1.0), scheme)


def test_differentiate_known_functions():
    assert differentiate(math.sin, 0.7) == pytest.approx(math.cos(0.7), rel=1e-12)
    assert differentiate(math.exp, 1.0) == pytest.approx(math.e, rel=1e-12)
    assert differentiate(lambda x: x**4, 2.0) == pytest.approx(32.0, rel=1e-12)


def test_radial_scheme_breakpoints():
    p = ModelParams(b1=1.0, b2=2.0, alpha=0.25, A=1.0, B=1.0)
    s = radial_scheme(p)
    assert s.breakpoints[0] == 0.0
    assert p.delta in s.breakpoints
    assert p.range_sum in s.breakpoints
    assert s.breakpoints[-1] == pytest.approx(p.range_sum + 40.0 / p.alpha)
    # equal ranges drop the inner boundary
    pe = ModelParams(b1=1.5, b2=1.5, alpha=0.25, A=1.0, B=1.0)
    se = radial_scheme(pe)
    assert se.breakpoints[1] == pe.range_sum


def test_momentum_scheme_breakpoints():
    p = ModelParams(b1=1.0, b2=2.0, alpha=0.25, A=1.0, B=1.0)
    s = momentum_scheme(p)
    pts = np.array(s.breakpoints)
    assert pts[0] == 0.0
    assert pts[-1] == 80.0
    assert np.all(np.diff(pts) > 0)
    # form-factor zero spacing pi/b2 must appear among the breakpoints
    assert any(abs(x - math.pi / 2.0) < 1e-12 for x in pts)


def test_momentum_scheme_resolves_integrand():
    # doubling the panel order must not move a smooth k-space integral
    p = ModelParams(b1=1.475, b2=1.475, alpha=0.23165, A=1.0, B=1.0)

    def f(k):
        return k * k * np.exp(-0.1 * k * k)

    a = integrate_panels(f, momentum_scheme(p, panel_order=40))
    b = integrate_panels(f, momentum_scheme(p, panel_order=80))
    assert abs(a - b) < 1e-12
