"""Ruin asymptotics when the job sizes have pure power tails ``Fbar_j(x) ~ k_j x**-alpha_j``.

The limiting constants are integrals of the same shape as in the general
subexponential case, with each survival function replaced by ``x**-alpha``
and the barrier scaled out. ``zeta`` weights the two sources by how their
tails compare; ``zeta = inf`` (``0``) keeps only source 1 (source 2).

Every probability asymptote here is a power law ``coef * u**exponent``; the
:class:`PowerLaw` records both numbers so reports can print them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Tuple, Union

import numpy as np

from ._columns import (column_expectation, column_integral, column_kinks, map_power_for,
                       power_tail, single_column_integral)
from .asymptotics_subexp import (CONDITION_THRESHOLD, EXPECT_REL_TOL, LITTLE_O, NOT_APPLICABLE, _Marker,
                                 psi_single_subexp)
from .errors import NotRegVarying
from .job_laws import RegVarying
from .model import Model, Regime, regime
from .switch_laws import Bernoulli

CANCELLATION_FLOOR = 1e-3


@dataclass(frozen=True)
class PowerLaw:
    coef: float
    exponent: float

    def __call__(self, u):
        return self.coef * np.power(np.asarray(u, dtype=float), self.exponent)


Asymptote = Union[PowerLaw, _Marker]


def _rv_sources(model: Model):
    """(j, rate, alpha, tail constant) for the arriving sources with a power tail."""
    if regime(model) not in (Regime.REG_VARYING, Regime.MIXED):
        raise NotRegVarying(f"regime {regime(model).value} has no regularly varying source")
    out = []
    for j, (rate, law) in enumerate(zip(model.rates, model.jobs), start=1):
        tail = law.tail_class
        if rate > 0 and isinstance(tail, RegVarying):
            out.append((j, rate, tail.alpha, tail.constant))
    if not out:
        raise NotRegVarying("no arriving source has a regularly varying job law")
    return out


def zeta(model: Model) -> float:
    """Limit of ``lambda1 Fbar1(x) / (lambda2 Fbar2(x))``; may be 0 or ``inf``."""
    sources = {j: (rate, alpha, const) for j, rate, alpha, const in _rv_sources(model)}
    if 2 not in sources:
        return math.inf
    if 1 not in sources:
        return 0.0
    (r1, a1, k1), (r2, a2, k2) = sources[1], sources[2]
    if a1 < a2:
        return math.inf
    if a1 > a2:
        return 0.0
    return r1 * k1 / (r2 * k2)


def source_weights(z: float) -> Tuple[float, float]:
    """``(zeta / (1 + zeta), 1 / (1 + zeta))`` with the limits at 0 and ``inf`` taken exactly."""
    if math.isinf(z):
        return 1.0, 0.0
    return z / (1.0 + z), 1.0 / (1.0 + z)


def _limit_constant(model: Model, mode: str) -> float:
    weights = source_weights(zeta(model))
    b, c = model.b, model.c_star
    total = 0.0
    for j, _, alpha, _ in _rv_sources(model):
        w = weights[j - 1]
        if w == 0.0:
            continue
        tail = power_tail(alpha)
        power = map_power_for(alpha)
        total += w * column_expectation(
            model.switch, j, lambda a: column_integral(tail, 1.0, a, b, c, mode, power=power),
            rel_tol=EXPECT_REL_TOL, breakpoints=column_kinks(b, c))
    return total


def c_vee(model: Model) -> float:
    """Limiting constant of the at-least-one-ruin asymptote (min inside the tail)."""
    return _limit_constant(model, "min")


def c_and_sim(model: Model) -> float:
    """Limiting constant of simultaneous ruin (max inside the tail)."""
    return _limit_constant(model, "max")


def alpha_min(model: Model) -> float:
    return min(alpha for _, _, alpha, _ in _rv_sources(model))


def _dominant_mass(model: Model) -> float:
    """``sum lambda_j k_j`` over the sources carrying the heaviest tail."""
    a_min = alpha_min(model)
    return sum(rate * const for _, rate, alpha, const in _rv_sources(model) if alpha == a_min)


def single_coefficient(model: Model, i: int) -> Asymptote:
    """Leading term of Psi_i(u_i) as ``coef * u_i**(1 - alpha)``.

    Only sources that can reach server ``i`` compete; among those the smallest
    tail index wins. Evaluated by quadrature with a pure power tail.
    """
    c_i = model.c_star[i - 1]
    reach = []
    for j, rate, alpha, const in _rv_sources(model):
        if model.switch.expect_column(j, lambda a: _entry(a, i) > 0) > 0:
            reach.append((j, rate, alpha, const))
    if not reach:
        return NOT_APPLICABLE
    a_min = min(alpha for _, _, alpha, _ in reach)
    coef = 0.0
    for j, rate, alpha, const in reach:
        if alpha != a_min:
            continue
        tail = power_tail(alpha)
        power = map_power_for(alpha)
        inner = column_expectation(
            model.switch, j, lambda a: single_column_integral(tail, 1.0, _entry(a, i), c_i, power=power),
            rel_tol=EXPECT_REL_TOL)
        coef += rate * const * inner / model.lam
    return PowerLaw(coef, 1.0 - a_min)


def _entry(a_1j, i):
    return a_1j if i == 1 else 1.0 - np.asarray(a_1j)


def or_coefficient(model: Model) -> PowerLaw:
    return PowerLaw(c_vee(model) * _dominant_mass(model) / model.lam, 1.0 - alpha_min(model))


def and_sim_coefficient(model: Model) -> PowerLaw:
    return PowerLaw(c_and_sim(model) * _dominant_mass(model) / model.lam, 1.0 - alpha_min(model))


def _rescaled(term: Asymptote, scale: float) -> Asymptote:
    # Psi_i(b_i u) as a power law in u
    if not isinstance(term, PowerLaw):
        return term
    return PowerLaw(term.coef * scale ** term.exponent, term.exponent)


@dataclass(frozen=True)
class AndDecision:
    asymptote: Asymptote
    route: str  # "inclusion-exclusion", "product" or "little-o"
    ratio: float


def and_coefficient(model: Model, threshold: float = CONDITION_THRESHOLD) -> AndDecision:
    """Psi_and via inclusion-exclusion of leading terms, the Bernoulli product, or LittleO."""
    vee = or_coefficient(model)
    terms = [_rescaled(single_coefficient(model, i), b) for i, b in ((1, model.b1), (2, model.b2))]
    same_order = [t.coef for t in terms if isinstance(t, PowerLaw) and t.exponent == vee.exponent]
    r = sum(same_order) / vee.coef
    remainder = sum(same_order) - vee.coef
    cancelled = remainder < CANCELLATION_FLOOR * max(same_order, default=0.0)
    if abs(r - 1.0) >= threshold and not cancelled:
        return AndDecision(PowerLaw(remainder, vee.exponent), "inclusion-exclusion", r)
    if isinstance(model.switch, Bernoulli) and all(isinstance(t, PowerLaw) for t in terms):
        t1, t2 = terms
        return AndDecision(PowerLaw(t1.coef * t2.coef, t1.exponent + t2.exponent), "product", r)
    return AndDecision(LITTLE_O, "little-o", r)


@dataclass(frozen=True)
class RvReport:
    zeta: float
    c_vee: float
    c_and_sim: float
    alpha_min: float
    coefficients: Dict[str, Asymptote]
    and_route: str
    curves: Dict[str, Union[Callable[[float], float], _Marker]]


def psi_curves_rv(model: Model, threshold: float = CONDITION_THRESHOLD) -> RvReport:
    """All five asymptotes, as leading power laws and as curves using the exact survival functions."""
    z = zeta(model)
    cv, cs = c_vee(model), c_and_sim(model)
    weights = source_weights(z)
    heavy = {j for j, *_ in _rv_sources(model)}
    # dominated sources are dropped from every curve
    keep = [j for j in sorted(heavy) if weights[j - 1] > 0]

    def tail_mass(u):
        return sum(model.rates[j - 1] * model.jobs[j - 1].survival(u) for j in keep)

    def psi_or(u):
        return cv / model.lam * u * tail_mass(u)

    def psi_and_sim(u):
        return cs / model.lam * u * tail_mass(u)

    coeffs = {
        "psi1": single_coefficient(model, 1),
        "psi2": single_coefficient(model, 2),
        "psi_or": or_coefficient(model),
        "psi_and_sim": and_sim_coefficient(model),
    }
    decision = and_coefficient(model, threshold)
    coeffs["psi_and"] = decision.asymptote

    def single(i):
        if coeffs[f"psi{i}"] is NOT_APPLICABLE:
            return NOT_APPLICABLE
        return lambda x: psi_single_subexp(model, i, x, sources=heavy)

    curves = {"psi1": single(1), "psi2": single(2), "psi_or": psi_or, "psi_and_sim": psi_and_sim}
    if decision.route == "inclusion-exclusion":
        curves["psi_and"] = lambda u: (curves["psi1"](model.b1 * u) + curves["psi2"](model.b2 * u) - psi_or(u))
    elif decision.route == "product":
        curves["psi_and"] = lambda u: curves["psi1"](model.b1 * u) * curves["psi2"](model.b2 * u)
    else:
        curves["psi_and"] = LITTLE_O
    return RvReport(zeta=z, c_vee=cv, c_and_sim=cs, alpha_min=alpha_min(model),
                    coefficients=coeffs, and_route=decision.route, curves=curves)
