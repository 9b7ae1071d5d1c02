import math

import pytest

import oracles
from gainstats.distributions import norm_cdf, norm_ppf, reg_inc_beta, t_cdf, t_ppf, t_two_sided_p


@pytest.mark.parametrize("p", [1e-10, 1e-4, 0.01, 0.02425, 0.1, 0.25, 0.5, 0.75, 0.9, 0.975, 0.999999])
def test_norm_ppf_against_bisection(p):
    assert norm_ppf(p) == pytest.approx(oracles.norm_ppf_bisect(p), abs=1e-8)


def test_norm_ppf_round_trip():
    for i in range(1, 200):
        p = i / 200
        assert norm_cdf(norm_ppf(p)) == pytest.approx(p, abs=1e-14)


def test_norm_ppf_edges():
    assert norm_ppf(0.0) == -math.inf
    assert norm_ppf(1.0) == math.inf
    with pytest.raises(ValueError):
        norm_ppf(1.5)


@pytest.mark.parametrize("nu", [1, 2.5, 4, 9.7, 30, 154])
@pytest.mark.parametrize("t", [-6.0, -1.224744871391589, -0.3, 0.0, 0.8, 2.5, 12.0])
def test_t_cdf_against_quadrature(t, nu):
    assert t_cdf(t, nu) == pytest.approx(float(oracles.t_cdf_quad(t, nu)), abs=1e-10)


@pytest.mark.parametrize("nu", [2, 4, 17.3])
@pytest.mark.parametrize("t", [0.0, 0.5, 1.224744871391589, 3.0])
def test_two_sided_p_against_quadrature(t, nu):
    assert t_two_sided_p(t, nu) == pytest.approx(oracles.t_two_sided_p_quad(t, nu), abs=1e-10)
    assert t_two_sided_p(-t, nu) == t_two_sided_p(t, nu)


@pytest.mark.parametrize("p, nu", [(0.975, 4), (0.995, 4), (0.9, 1), (0.025, 10.5), (0.6, 200)])
def test_t_ppf_against_bisection(p, nu):
    assert t_ppf(p, nu) == pytest.approx(oracles.t_ppf_bisect(p, nu), abs=1e-8)


def test_incomplete_beta_special_cases():
    # I_x(1, 1) = x and I_x(a, 1) = x**a
    for x in (0.0, 0.1, 0.5, 0.9, 1.0):
        assert reg_inc_beta(1, 1, x) == pytest.approx(x, abs=1e-14)
        assert reg_inc_beta(3.5, 1, x) == pytest.approx(x**3.5, abs=1e-14)
    # symmetry I_x(a, b) = 1 - I_{1-x}(b, a)
    assert reg_inc_beta(2.3, 0.5, 0.3) == pytest.approx(1 - reg_inc_beta(0.5, 2.3, 0.7), abs=1e-14)
    with pytest.raises(ValueError):
        reg_inc_beta(0, 1, 0.5)
