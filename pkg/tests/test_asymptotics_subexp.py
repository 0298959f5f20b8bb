import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from switchsim.asymptotics_subexp import (LITTLE_O, and_integral, equivalence_ratio, g_uv, or_integral,
                                          psi_and_subexp, psi_or_subexp, psi_single_subexp, subexp_cdf,
                                          subexp_report, theta)
from switchsim.errors import ThetaZero
from switchsim.job_laws import Pareto, Weibull
from switchsim.scenarios import SWITCHES, WEIBULL_LAWS, reference_model


@pytest.fixture(scope="module")
def beta_weibull():
    return reference_model(WEIBULL_LAWS, SWITCHES["beta1"])


def test_theta_and_g(figure_models):
    assert theta(figure_models["fig4"]) == pytest.approx(0.6, rel=1e-10)
    assert g_uv(figure_models["fig5"], 10.0, 0.0) == pytest.approx(0.12715838362577497, rel=1e-8)


def test_theta_zero_for_bernoulli():
    with pytest.raises(ThetaZero):
        theta(reference_model(WEIBULL_LAWS, SWITCHES["bernoulli"]))
    with pytest.raises(ThetaZero):
        psi_or_subexp(reference_model(WEIBULL_LAWS, SWITCHES["bernoulli"]), 10.0)


def test_g_vectorized_matches_scalar(figure_models):
    model = figure_models["fig4"]
    v = np.array([0.0, 3.0, 40.0])
    np.testing.assert_allclose(g_uv(model, 50.0, v), [g_uv(model, 50.0, x) for x in v], rtol=1e-6)


def test_g_integrates_to_or_integral(figure_models):
    from scipy import integrate
    model = figure_models["fig4"]
    numeric = integrate.quad(lambda v: g_uv(model, 200.0, v), 0, np.inf, limit=200)[0]
    assert numeric == pytest.approx(or_integral(model, 200.0), rel=1e-5)


def test_frozen_fig4_values(figure_models):
    model = figure_models["fig4"]
    frozen = {200.0: (0.04472433609523022, 1.0958042941980648),
              500.0: (0.011308072658310813, 1.026066702023816),
              1000.0: (0.002774606209906294, 1.0066672468139657)}
    for u, (value, r) in frozen.items():
        assert or_integral(model, u) == pytest.approx(value, rel=1e-6)
        assert equivalence_ratio(model, u) == pytest.approx(r, rel=1e-6)


def test_single_closed_form_against_v_integral(figure_models):
    from scipy import integrate
    model = figure_models["fig4"]
    c1 = model.c_star[0]
    # deterministic switch: both sources reach server 1 with shares 0.4 and 0.7
    direct = sum(0.5 * integrate.quad(lambda v: law.survival((80.0 + v * c1) / a), 0, np.inf, limit=200)[0]
                 for law, a in zip(model.jobs, (0.4, 0.7)))
    assert psi_single_subexp(model, 1, 80.0) == pytest.approx(direct, rel=1e-6)


@pytest.mark.parametrize("name", ["fig4", "fig5"])
@settings(max_examples=8)
@given(u=st.floats(5.0, 2000.0))
def test_min_max_complementarity(figure_models, name, u):
    model = figure_models[name]
    singles = psi_single_subexp(model, 1, model.b1 * u) + psi_single_subexp(model, 2, model.b2 * u)
    assert or_integral(model, u) + and_integral(model, u) == pytest.approx(singles, rel=1e-5)


@settings(max_examples=5)
@given(u=st.floats(5.0, 500.0))
def test_min_max_complementarity_beta(beta_weibull, u):
    model = beta_weibull
    singles = psi_single_subexp(model, 1, model.b1 * u) + psi_single_subexp(model, 2, model.b2 * u)
    assert or_integral(model, u) + and_integral(model, u) == pytest.approx(singles, rel=1e-5)


def test_and_route(figure_models):
    model = figure_models["fig4"]
    assert psi_and_subexp(model, 200.0, check_u=1000.0) is LITTLE_O
    assert psi_and_subexp(model, 200.0) == pytest.approx(and_integral(model, 200.0))
    report = subexp_report(model, [10.0, 1000.0])
    assert report.psi_and is LITTLE_O
    assert report.check_u == 1000.0
    assert report.theta == pytest.approx(0.6)


def test_cdf_is_monotone(figure_models):
    cdf = subexp_cdf(figure_models["fig4"], [1.0, 10.0, 100.0, 1000.0, 1e5])
    assert np.all(np.diff(cdf) > 0)
    assert np.all(cdf < 1.0) and cdf[-1] > 0.999


def test_cdf_is_proper_only_in_the_tail(figure_models):
    # theta integrates the joint (max-form) measure, while int g(0+, .) is the min form:
    # sum_j w_j E[X_j] E[max(A_1j / c1*, A_2j / c2*)] = 0.5 * 3 * 0.8 + 0.5 * 4 * 1.4 = 4 > theta = 0.6
    model = figure_models["fig4"]
    assert or_integral(model, 1e-9) == pytest.approx(4.0, rel=1e-4)
    cdf = subexp_cdf(model, [10.0, 100.0])
    assert cdf[0] < 0.0 < cdf[1] < 1.0


def test_or_bounded_by_sum_of_singles(beta_weibull):
    u = 100.0
    singles = [psi_single_subexp(beta_weibull, i, b * u) for i, b in ((1, beta_weibull.b1), (2, beta_weibull.b2))]
    assert max(singles) <= or_integral(beta_weibull, u) <= sum(singles)


def test_pareto_general_path_reproduces_power_law():
    # the general integral with exact Pareto tails approaches the pure power-law constant
    from switchsim.asymptotics_rv import or_coefficient
    model = reference_model((Pareto(1.5, 1.0), Pareto(1.5, 1.0)), SWITCHES["deterministic"])
    u = 1e6
    assert or_integral(model, u) / or_coefficient(model)(u) == pytest.approx(1.0, rel=2e-3)
