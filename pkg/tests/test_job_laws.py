import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from switchsim.errors import ConfigError, DivergentTail, Unsupported
from switchsim.job_laws import (Custom, Exponential, LightTail, Pareto, RegVarying, SubexpOther, Weibull,
                                integrate_survival, law_from_dict)
from switchsim.numerics import integrate_semi_infinite


def finite_difference(f, s, h):
    return (f(s + h) - f(s - h)) / (2 * h)


def test_exponential_closed_forms():
    law = Exponential(0.25)
    assert law.mean == 4.0
    assert law.survival(8.0) == pytest.approx(math.exp(-2.0))
    assert law.mgf(0.1) == pytest.approx(0.25 / 0.15)
    assert law.upper_integrated_tail(4.0) == pytest.approx(4.0 * math.exp(-1.0))
    assert law.mgf(0.25) == math.inf


def test_survival_conventions():
    law = Pareto(1.5, 1.0)
    assert law.survival(-3.0) == 1.0
    assert law.survival(0.5) == 1.0
    assert law.survival(math.inf) == 0.0
    np.testing.assert_allclose(law.survival(np.array([4.0, 9.0])), [1 / 8, 1 / 27])


def test_tail_classes():
    assert Exponential(1.0).tail_class == LightTail()
    assert Pareto(2.0, 2.0).tail_class == RegVarying(2.0, 4.0)
    assert Weibull(0.5, 2.0).tail_class == SubexpOther()
    assert Weibull(2.0, 1.0).tail_class == LightTail()


def test_heavy_laws_have_no_positive_mgf():
    assert Pareto(2.0).mgf(1e-6) == math.inf
    assert Weibull(1 / 3, 0.5).mgf(1e-6) == math.inf
    assert Pareto(2.0).mgf(0.0) == 1.0
    with pytest.raises(Unsupported):
        Pareto(2.0).mgf_prime(-0.1)


def test_infinite_mean_rejected():
    with pytest.raises(DivergentTail):
        Pareto(1.0)


@pytest.mark.parametrize("law", [Pareto(1.5, 1.0), Pareto(2.0, 2.0), Weibull(1 / 3, 0.5), Weibull(0.5, 2.0),
                                 Exponential(1 / 3)])
def test_mean_matches_integrated_survival(law):
    assert law.upper_integrated_tail(0.0) == pytest.approx(law.mean, rel=1e-9)
    # finite-range quadrature plus the closed-form remainder
    assert integrate_survival(law, 50.0) + law.upper_integrated_tail(50.0) == pytest.approx(law.mean, rel=1e-8)


@pytest.mark.parametrize("law", [Pareto(1.5, 1.0), Pareto(2.0, 2.0), Weibull(1 / 3, 0.5), Weibull(0.5, 2.0)])
@pytest.mark.parametrize("x", [0.3, 2.0, 40.0])
def test_upper_integrated_tail_against_quadrature(law, x):
    power = 4 if isinstance(law, Pareto) else 1
    numeric = integrate_semi_infinite(lambda v: law.survival(x + v), rel_tol=1e-11, power=power).value
    assert law.upper_integrated_tail(x) == pytest.approx(numeric, rel=1e-7)


light_laws = st.sampled_from([Exponential(1 / 3), Exponential(0.25), Exponential(2.0), Weibull(2.0, 1.5),
                              Weibull(1.0, 3.0)])


@given(light_laws, st.floats(0.05, 0.9))
def test_mgf_prime_matches_finite_difference(law, frac):
    sup = law.mgf_domain_sup
    s = frac * (sup if math.isfinite(sup) else 1.0)
    h = 1e-5 * max(abs(s), 1e-3)
    fd = finite_difference(law.mgf, s, h)
    assert law.mgf_prime(s) == pytest.approx(fd, rel=1e-4)


@given(st.floats(0.05, 0.9))
def test_generic_mgf_matches_closed_form(frac):
    closed = Exponential(0.5)
    generic = Custom(lambda x: np.exp(-0.5 * x), 2.0, LightTail(), domain_sup=0.5)
    s = frac * 0.5
    assert generic.mgf(s) == pytest.approx(closed.mgf(s), rel=1e-8)
    assert generic.mgf_prime(s) == pytest.approx(closed.mgf_prime(s), rel=1e-8)


@given(st.sampled_from([Pareto(1.5, 1.0), Pareto(2.0, 2.0), Weibull(1 / 3, 0.5), Weibull(0.5, 2.0),
                        Exponential(0.25)]),
       st.floats(1e-9, 1.0, exclude_max=True))
def test_quantile_inverts_survival(law, w):
    x = law.quantile_from_upper(w)
    assert law.survival(x) == pytest.approx(w, rel=1e-9)


def test_sampling_uses_inverse_transform():
    rng = np.random.default_rng(5)
    x = Weibull(0.5, 2.0).sample(rng, 200_000)
    assert x.mean() == pytest.approx(4.0, rel=0.03)


def test_custom_without_quantile_cannot_sample():
    law = Custom(lambda x: np.exp(-x), 1.0, LightTail(), domain_sup=1.0)
    with pytest.raises(Unsupported):
        law.sample(np.random.default_rng(0), 3)


def test_from_dict_round_trip_and_errors():
    for law in (Pareto(1.5, 1.0), Exponential(0.25), Weibull(0.5, 2.0)):
        assert law_from_dict(law.to_dict()) == law
    with pytest.raises(ConfigError) as err:
        law_from_dict({"type": "pareto"}, "job1")
    assert err.value.path == "job1.alpha"
    with pytest.raises(ConfigError) as err:
        law_from_dict({"type": "gamma"}, "job2")
    assert err.value.path == "job2.type"
    with pytest.raises(ConfigError):
        law_from_dict({"type": "pareto", "alpha": 0.9}, "job1")
