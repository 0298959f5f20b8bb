"""Light-tailed (Cramer-Lundberg) asymptotics and bounds.

Server ``i`` sees the compound Poisson input ``sum_j A_ij X_j`` and its
adjustment coefficient is the positive zero of

    h_i(kappa) = sum_j lambda_j (E[phi_j(kappa A_ij)] - 1) - c_i kappa,

with ``phi_j`` the moment generating function of ``X_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import optimize

from .errors import NoAdjustmentCoefficient, NoBracket, NumericalError, SwitchSimError, Unsupported
from .model import Model, Regime, regime
from .numerics import find_root

LIGHT_REL_TOL = 1e-10
EDGE_EPS = 1e-6
DOMINANCE_GAP = 0.10


def _require_light(model: Model):
    if regime(model) is not Regime.LIGHT:
        raise Unsupported(f"light-tail formulas need both job laws light, regime is {regime(model).value}")


def _entry(a, i):
    a = np.asarray(a, dtype=float)
    return a if i == 1 else 1.0 - a


def _arriving(model: Model):
    for j, (rate, law) in enumerate(zip(model.rates, model.jobs), start=1):
        if rate > 0:
            yield j, rate, law


def _expect_mgf(model: Model, j: int, arg: Callable[[np.ndarray], np.ndarray], derivative=False, factor=None):
    """E over column j of ``factor(a) * phi_j(arg(a))`` (or ``phi_j'``)."""
    law = model.jobs[j - 1]
    fn = law.mgf_prime if derivative else law.mgf

    def h(a):
        s = np.asarray(arg(a), dtype=float)
        vals = np.array([fn(float(x)) for x in s.ravel()]).reshape(s.shape)
        if factor is not None:
            vals = vals * factor(a)
        return vals
    return model.switch.expect_column(j, h, rel_tol=LIGHT_REL_TOL)


def lundberg_function(model: Model, i: int, kappa: float) -> float:
    """h_i(kappa); ``inf`` outside the mgf domain."""
    total = -model.speeds[i - 1] * kappa
    for j, rate, _ in _arriving(model):
        total += rate * (_expect_mgf(model, j, lambda a: kappa * _entry(a, i)) - 1.0)
    return total


def kappa_max(model: Model, i: int) -> float:
    """Largest kappa for which every phi_j(kappa A_ij) stays finite on the A-support."""
    best = math.inf
    for j, _, law in _arriving(model):
        reach = model.switch.row_sup(i, j)
        if reach > 0:
            best = min(best, law.mgf_domain_sup / reach)
    return best


def _safe(fn, x):
    try:
        value = fn(x)
    except (SwitchSimError, FloatingPointError, OverflowError):
        return math.nan
    return value


def _upper_bracket(fn, sup: float, scale: float):
    """A point below ``sup`` where ``fn`` is finite and positive, or None.

    With a finite ``sup`` the search starts just inside the domain edge and
    backs off geometrically while the value is not finite. Without one it
    grows from ``scale`` until the value turns positive.
    """
    if math.isfinite(sup):
        eps = EDGE_EPS
        while eps < 0.5:
            x = sup * (1.0 - eps)
            value = _safe(fn, x)
            if math.isfinite(value):
                return x if value > 0 else None
            eps *= 10.0
        return None
    x = scale
    for _ in range(200):
        value = _safe(fn, x)
        if math.isfinite(value) and value > 0:
            return x
        if not math.isfinite(value):
            return None
        x *= 2.0
    return None


def _lower_bracket(fn, hi: float):
    x = hi * 1e-3
    while x > hi * 1e-15:
        if fn(x) < 0:
            return x
        x *= 1e-3
    return None


def adjustment_coefficient(model: Model, i: int) -> float:
    """Unique positive zero of h_i."""
    _require_light(model)
    h = lambda k: lundberg_function(model, i, k)
    mean_scale = 1.0 / max(law.mean for _, _, law in _arriving(model))
    hi = _upper_bracket(h, kappa_max(model, i), mean_scale)
    lo = _lower_bracket(h, hi) if hi is not None else None
    if hi is None or lo is None:
        raise NoAdjustmentCoefficient(f"no adjustment coefficient for server {i}: h_{i} has no sign change "
                                      "on the admissible interval")
    return find_root(h, lo, hi)


def cramer_constant(model: Model, i: int, kappa: Optional[float] = None) -> float:
    """C_i = lambda c_i* / (sum_j lambda_j E[A_ij phi_j'(kappa_i A_ij)] - c_i)."""
    _require_light(model)
    if kappa is None:
        kappa = adjustment_coefficient(model, i)
    tilted = sum(rate * _expect_mgf(model, j, lambda a: kappa * _entry(a, i), derivative=True,
                                    factor=lambda a: _entry(a, i))
                 for j, rate, _ in _arriving(model))
    denominator = tilted - model.speeds[i - 1]
    if not denominator > 0:
        raise NumericalError(f"Cramer denominator for server {i} is not positive ({denominator:.6g})")
    return model.lam * model.c_star[i - 1] / denominator


def _kappas(model, kappas):
    if kappas is None:
        return adjustment_coefficient(model, 1), adjustment_coefficient(model, 2)
    return kappas


def lundberg_bounds(model: Model, u: float, kappas=None) -> Tuple[float, float, float]:
    """``(exp(-k1 b1 u), exp(-k2 b2 u), min(1, sum))``."""
    k1, k2 = _kappas(model, kappas)
    e1 = math.exp(-k1 * model.b1 * u)
    e2 = math.exp(-k2 * model.b2 * u)
    return e1, e2, min(1.0, e1 + e2)


def psi_or_light(model: Model, u: float, kappas=None, constants=None) -> float:
    """Both Cramer terms ``C1 exp(-k1 b1 u) + C2 exp(-k2 b2 u)``."""
    k1, k2 = _kappas(model, kappas)
    if constants is None:
        constants = cramer_constant(model, 1, k1), cramer_constant(model, 2, k2)
    c1, c2 = constants
    return c1 * math.exp(-k1 * model.b1 * u) + c2 * math.exp(-k2 * model.b2 * u)


def dominated_term(model: Model, kappas=None) -> Optional[int]:
    """Server whose Cramer term decays more than 10% faster, or None when the rates are close."""
    k1, k2 = _kappas(model, kappas)
    r1, r2 = k1 * model.b1, k2 * model.b2
    if abs(r1 - r2) <= DOMINANCE_GAP * min(r1, r2):
        return None
    return 1 if r1 > r2 else 2


def optimal_split(model: Model, kappas=None) -> float:
    """The b1 that equalizes ``k1 b1 = k2 b2``."""
    k1, k2 = _kappas(model, kappas)
    return k2 / (k1 + k2)


# -- simultaneous ruin ---------------------------------------------------------------

def joint_function(model: Model, kappa1: float, kappa2: float, form: str = "sum") -> float:
    """Left side minus right side of the joint Lundberg equation.

    ``form="sum"`` uses E[phi_j(k1 A_1j + k2 A_2j)], the exponential
    martingale of ``k1 R1 + k2 R2``. ``form="product"`` uses
    E[phi_j(k1 A_1j) phi_j(k2 A_2j)] instead.
    """
    total = -(kappa1 * model.c1 + kappa2 * model.c2)
    for j, rate, law in _arriving(model):
        if form == "sum":
            e = _expect_mgf(model, j, lambda a: kappa1 * a + kappa2 * (1.0 - np.asarray(a)))
        elif form == "product":
            e = model.switch.expect_column(
                j, lambda a: np.array([law.mgf(kappa1 * x) * law.mgf(kappa2 * (1.0 - x))
                                       for x in np.asarray(a, dtype=float)]), rel_tol=LIGHT_REL_TOL)
        else:
            raise ValueError(f"unknown joint form {form!r}")
        total += rate * (e - 1.0)
    return total


def _kappa2_sup(model: Model, kappa1: float, form: str) -> float:
    best = math.inf
    for j, _, law in _arriving(model):
        s = law.mgf_domain_sup
        for a in model.switch.column_support(j):
            if form == "sum" and a < 1.0:
                best = min(best, (s - kappa1 * a) / (1.0 - a))
            elif form == "product" and a < 1.0:
                best = min(best, s / (1.0 - a))
            if a > 0 and kappa1 * a >= s:
                return 0.0
    return best


def joint_exponent(model: Model, kappa1_query: float, form: str = "sum") -> float:
    """The kappa2 > 0 on the joint Lundberg curve at ``kappa1 = kappa1_query``."""
    _require_light(model)
    f = lambda k2: joint_function(model, kappa1_query, k2, form)
    sup = _kappa2_sup(model, kappa1_query, form)
    if not sup > 0:
        raise NoBracket(f"kappa1 = {kappa1_query} leaves no admissible kappa2")
    mean_scale = 1.0 / max(law.mean for _, _, law in _arriving(model))
    hi = _upper_bracket(f, sup, mean_scale)
    if hi is None:
        raise NoBracket(f"no kappa2 > 0 solves the joint equation at kappa1 = {kappa1_query}")
    if kappa1_query > 0:
        if not f(0.0) < 0:
            raise NoBracket(f"kappa1 = {kappa1_query} is beyond the component-1 coefficient")
        lo = 0.0
    else:
        lo = _lower_bracket(f, hi)
        if lo is None:
            raise NoBracket("joint equation has no sign change near kappa2 = 0")
    return find_root(f, lo, hi)


@dataclass(frozen=True)
class JointBound:
    kappa1: float
    kappa2: float
    exponent: float  # kappa1 b1 + kappa2 b2

    def bound(self, u):
        return np.exp(-self.exponent * np.asarray(u, dtype=float))


def best_joint_bound(model: Model, form: str = "sum", kappas=None) -> JointBound:
    """Maximize ``k1 b1 + k2(k1) b2`` along the joint curve (bounded Brent search)."""
    k1_root, _ = _kappas(model, kappas)

    def rate(k1):
        try:
            return k1 * model.b1 + joint_exponent(model, k1, form) * model.b2
        except NoBracket:
            return -math.inf

    upper = k1_root * (1.0 - 1e-9)
    res = optimize.minimize_scalar(lambda k1: -rate(k1), bounds=(0.0, upper), method="bounded",
                                   options={"xatol": 1e-10 * k1_root})
    # the bounded search never evaluates the endpoints themselves
    candidates = [(rate(k1), k1) for k1 in (0.0, float(res.x), upper)]
    best_rate, k1 = max(candidates)
    if not math.isfinite(best_rate):
        raise NoBracket("joint Lundberg curve could not be evaluated")
    return JointBound(k1, joint_exponent(model, k1, form), best_rate)


@dataclass(frozen=True)
class LightReport:
    kappa1: float
    kappa2: float
    cc1: float
    cc2: float
    psi_or: Callable[[float], float]
    bounds: Callable[[float], Tuple[float, float, float]]
    optimal_b1: float
    dominated: Optional[int]
    joint: Optional[JointBound]


def light_report(model: Model, joint_form: str = "sum") -> LightReport:
    _require_light(model)
    k = (adjustment_coefficient(model, 1), adjustment_coefficient(model, 2))
    cc = (cramer_constant(model, 1, k[0]), cramer_constant(model, 2, k[1]))
    try:
        joint = best_joint_bound(model, joint_form, kappas=k)
    except SwitchSimError:
        joint = None
    return LightReport(
        kappa1=k[0], kappa2=k[1], cc1=cc[0], cc2=cc[1],
        psi_or=lambda u: psi_or_light(model, u, k, cc),
        bounds=lambda u: lundberg_bounds(model, u, k),
        optimal_b1=optimal_split(model, k),
        dominated=dominated_term(model, k),
        joint=joint,
    )
