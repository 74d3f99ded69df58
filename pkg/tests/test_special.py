import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from lockkeys.analytic import GammaParams, gamma_match_random
from lockkeys.core import make_problem
from lockkeys.special import gamma_cdf, gamma_pdf, normal_cdf, regularized_gamma_p


def test_cdf_at_zero():
    assert gamma_cdf(0.0, GammaParams(3.0, 2.0)) == 0.0
    assert gamma_cdf(-1.0, GammaParams(3.0, 2.0)) == 0.0


def test_exponential_special_case():
    theta = 2.5
    assert gamma_cdf(theta, GammaParams(1.0, theta)) == pytest.approx(1 - math.exp(-1), abs=1e-14)
    for x in (0.1, 1.0, 7.0, 40.0):
        assert gamma_cdf(x, GammaParams(1.0, theta)) == pytest.approx(
            1 - math.exp(-x / theta), abs=1e-13)


def test_quadrature_oracle_8_8():
    g = gamma_match_random(make_problem(8, 8))
    value = gamma_cdf(36.0, g)
    assert 0 < value < 1
    area, _ = integrate.quad(lambda x: gamma_pdf(x, g), 0, 36, epsabs=1e-14, epsrel=1e-13)
    assert abs(area - value) <= 1e-9


@pytest.mark.parametrize("a", [0.3, 1.0, 2.5, 7.714285714285714, 30.0, 150.0, 600.0])
def test_against_scipy(a):
    xs = np.concatenate([a * np.logspace(-3, 1, 60), [a + 1.0, a + 1.0 + 1e-9]])
    for x in xs:
        assert abs(regularized_gamma_p(a, x) - special.gammainc(a, x)) <= 1e-12


def test_bad_shape():
    with pytest.raises(ValueError):
        regularized_gamma_p(0.0, 1.0)


@given(st.floats(0.05, 200), st.floats(0.05, 50),
       st.floats(0, 2000), st.floats(0, 2000))
def test_gamma_cdf_monotone_and_bounded(k, theta, x1, x2):
    x1, x2 = sorted((x1, x2))
    g = GammaParams(k, theta)
    c1, c2 = gamma_cdf(x1, g), gamma_cdf(x2, g)
    assert 0.0 <= c1 <= c2 <= 1.0


def test_normal_cdf():
    assert normal_cdf(115, 115, 3) == 0.5
    assert normal_cdf(1.96, 0, 1) == pytest.approx(0.9750021048517795, abs=1e-15)
