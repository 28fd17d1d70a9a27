import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sumfree.distributions import (
    Params,
    ScaledDistribution,
    capacity,
    entropy,
    gamma_bracket,
    gamma_polynomial,
    gamma_root,
    mean,
    nu,
)
from sumfree.errors import ValidationError


def sympy_root(m, k):
    g = sympy.Symbol("g")
    poly = sum((k * i - (m - 1)) * g**i for i in range(m))
    roots = [r for r in sympy.Poly(poly, g).real_roots() if 0 < r < 1]
    assert len(roots) == 1
    return float(roots[0].evalf(30))


def test_gamma_linear_cases():
    assert gamma_root(Params(2, 3)) == 0.5
    assert abs(gamma_root(Params(2, 4)) - 1 / 3) < 1e-15


def test_gamma_quadratic_closed_form():
    assert abs(gamma_root(Params(3, 3)) - (-1 + math.sqrt(33)) / 8) < 1e-12
    assert abs(gamma_root(Params(3, 3)) - 0.593070) < 1e-6


@pytest.mark.parametrize("m", range(2, 11))
@pytest.mark.parametrize("k", range(3, 7))
def test_gamma_matches_sympy(m, k):
    assert abs(gamma_root(Params(m, k)) - sympy_root(m, k)) < 1e-12


@pytest.mark.parametrize("m", range(2, 11))
@pytest.mark.parametrize("k", range(3, 7))
def test_polynomial_sign_change_and_bracket(m, k):
    coeffs = gamma_polynomial(m, k)
    assert sum(coeffs) > 0 and coeffs[0] < 0
    lo, hi = gamma_bracket(Params(m, k))
    ev = lambda x: sum(c * x**i for i, c in enumerate(coeffs))
    assert ev(lo) <= 0 <= ev(hi) and hi - lo < Fraction(1, 2**50)


def test_capacity_examples():
    assert abs(capacity(Params(3, 3)).capacity - 2.7551) < 1e-3
    assert abs(capacity(Params(2, 3)).capacity - 1.5 * 2 ** (1 / 3)) < 1e-12
    assert abs(capacity(Params(2, 3)).entropy_nu - (math.log(3) - 2 / 3 * math.log(2))) < 1e-12


def test_nu_examples():
    assert nu(Params(2, 3)).to_floats() == pytest.approx([2 / 3, 1 / 3], abs=1e-15)
    assert nu(Params(2, 4)).to_floats() == pytest.approx([3 / 4, 1 / 4], abs=1e-15)
    assert nu(Params(3, 3)).to_floats() == pytest.approx([0.514191, 0.304951, 0.180858], abs=1e-5)


@pytest.mark.parametrize("m", range(2, 11))
@pytest.mark.parametrize("k", range(3, 7))
def test_grid_invariants(m, k):
    p = Params(m, k)
    c = capacity(p)
    d = nu(p)
    assert 1 < c.capacity < m
    assert abs(c.entropy_nu - math.log(c.capacity)) <= 10 * p.tol
    assert abs(mean(d) - (m - 1) / k) <= p.tol
    w = d.to_floats()
    assert all(a > b > 0 for a, b in zip(w, w[1:]))


def test_entropy_examples_and_errors():
    assert entropy([0.25] * 4) == pytest.approx(math.log(4))
    assert entropy([1, 0, 0]) == 0
    assert entropy([Fraction(2, 3), Fraction(1, 3)]) == pytest.approx(0.636514, abs=1e-6)
    with pytest.raises(ValidationError):
        entropy([1.5, -0.5])
    with pytest.raises(ValidationError):
        entropy([0.5, 0.2])


@pytest.mark.parametrize("args", [(1, 3), (2, 2), (3, 3, -1), (3, 3, 0, 0.0)])
def test_params_validation(args):
    with pytest.raises(ValidationError):
        Params(*args)


def test_scaled_distribution_mean_flag():
    d = ScaledDistribution([Fraction(4), 3, 2, 1])
    assert d.has_mean(3)
    assert not ScaledDistribution([1, 1, 1, 1]).has_mean(3)
    with pytest.raises(ValidationError):
        ScaledDistribution([1, -1])


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.integers(3, 8))
def test_root_zeroes_derivative(m, k):
    g = gamma_root(Params(m, k))
    f = lambda x: math.log(sum(x**i for i in range(m))) - (m - 1) / k * math.log(x)
    h = 1e-6
    assert f(g) <= min(f(g - h), f(g + h)) + 1e-12
