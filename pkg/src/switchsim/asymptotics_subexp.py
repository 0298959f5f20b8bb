"""General subexponential asymptotics of the ruin probabilities.

With ``m(u, v; a) = min{(u b1 + v c1*) / a, (u b2 + v c2*) / (1 - a)}``,

    g(u, v) = sum_j (lambda_j / lambda) E[Fbar_j(m(u, v; A_1j))]

and ``Psi_or(u) ~ int_0^inf g(u, v) dv``. The same integral with ``max`` in
place of ``min`` gives ``Psi_and`` whenever ``Psi_1(b1 u) + Psi_2(b2 u)`` is not
already equivalent to ``Psi_or(u)``; otherwise only ``Psi_and = o(Psi_or)`` is
known and :data:`LITTLE_O` is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Tuple, Union

import numpy as np

from ._columns import column_expectation, column_integral, column_kinks, law_map_power, ratio
from .errors import ThetaZero
from .model import Model

CONDITION_THRESHOLD = 0.01
THETA_FLOOR = 1e-14
EXPECT_REL_TOL = 1e-6


class _Marker:
    def __init__(self, name, doc):
        self._name = name
        self.__doc__ = doc

    def __repr__(self):
        return self._name

    def __bool__(self):
        return False


LITTLE_O = _Marker("LittleO", "Only Psi_and = o(Psi_or) is known; no rate.")
NOT_APPLICABLE = _Marker("NotApplicable", "The formula does not apply to this model.")


def _sources(model: Model):
    """(j, weight lambda_j / lambda, law) for sources that actually arrive."""
    for j, (rate, law) in enumerate(zip(model.rates, model.jobs), start=1):
        if rate > 0:
            yield j, rate / model.lam, law


def g_uv(model: Model, u: float, v):
    """Probability-like integrand g(u, v); vectorized over ``v``."""
    if not u > 0:
        raise ValueError("u must be positive")
    v = np.atleast_1d(np.asarray(v, dtype=float))
    b, c = model.b, model.c_star
    total = np.zeros_like(v)
    for j, weight, law in _sources(model):
        def h(a, law=law):
            a = np.asarray(a, dtype=float)[:, None]
            arg = np.minimum(ratio(u * b[0] + v * c[0], a), ratio(u * b[1] + v * c[1], 1.0 - a))
            return law.survival(arg)
        total += weight * model.switch.expect_column(j, h, rel_tol=EXPECT_REL_TOL, breakpoints=_g_kinks(u, v, b, c))
    return total if total.size > 1 else float(total[0])


def _g_kinks(u, v, b, c):
    # the min switches branch where (u b1 + v c1) / a = (u b2 + v c2) / (1 - a); only a scalar v has one such point
    if v.size != 1:
        return ()
    x1, x2 = u * b[0] + v[0] * c[0], u * b[1] + v[0] * c[1]
    return (x1 / (x1 + x2),)


def theta(model: Model) -> float:
    """theta = sum_j (lambda_j / lambda) E[X_j] E[min{A_1j / c1*, A_2j / c2*}]; raises ThetaZero."""
    c1s, c2s = model.c_star
    total = 0.0
    for j, weight, law in _sources(model):
        e_min = model.switch.expect_column(
            j, lambda a: np.minimum(np.asarray(a) / c1s, (1.0 - np.asarray(a)) / c2s),
            rel_tol=EXPECT_REL_TOL, breakpoints=(c1s / (c1s + c2s),))
        total += weight * law.mean * e_min
    scale = sum(w * law.mean for _, w, law in _sources(model)) / min(c1s, c2s)
    if total <= THETA_FLOOR * scale:
        raise ThetaZero("theta vanishes: every switch realization sends some job entirely to one server")
    return total


def _combined_integral(model: Model, u: float, mode: str) -> float:
    b, c = model.b, model.c_star
    total = 0.0
    for j, weight, law in _sources(model):
        total += weight * column_expectation(
            model.switch, j,
            lambda a, law=law: column_integral(law.survival, u, a, b, c, mode, power=law_map_power(law)),
            rel_tol=EXPECT_REL_TOL, breakpoints=column_kinks(b, c))
    return total


def or_integral(model: Model, u: float) -> float:
    """``int_0^inf g(u, v) dv`` without the theta precondition."""
    return _combined_integral(model, float(u), "min")


def and_integral(model: Model, u: float) -> float:
    """The max-form counterpart of :func:`or_integral`."""
    return _combined_integral(model, float(u), "max")


def psi_or_subexp(model: Model, u: float) -> float:
    if not u > 0:
        raise ValueError("u must be positive")
    theta(model)
    return or_integral(model, u)


def psi_single_subexp(model: Model, i: int, u_i: float, sources=None) -> float:
    """Single-component ruin asymptote for server ``i`` at its own barrier ``u_i``.

    The v-integral has the exact antiderivative
    ``int_0^inf Fbar((u_i + v c*) / a) dv = (a / c*) * int_{u_i / a}^inf Fbar``,
    so only the expectation over A and the law's integrated tail remain.
    ``sources`` optionally restricts the sum to the given job sources.
    """
    if i not in (1, 2):
        raise ValueError("server index must be 1 or 2")
    if not u_i > 0:
        raise ValueError("u_i must be positive")
    c_i = model.c_star[i - 1]
    total = 0.0
    for j, weight, law in _sources(model):
        if sources is not None and j not in sources:
            continue

        def per_entry(a_1j, law=law):
            a = a_1j if i == 1 else 1.0 - a_1j
            if a <= 0.0:
                return 0.0
            return a / c_i * law.upper_integrated_tail(u_i / a)
        total += weight * column_expectation(model.switch, j, per_entry, rel_tol=EXPECT_REL_TOL)
    return total


def equivalence_ratio(model: Model, u: float) -> float:
    """r(u) = (Psi_1(b1 u) + Psi_2(b2 u)) / Psi_or(u), computed from the asymptotic forms."""
    single = psi_single_subexp(model, 1, model.b1 * u) + psi_single_subexp(model, 2, model.b2 * u)
    return single / or_integral(model, u)


def psi_and_subexp(model: Model, u: float, check_u: float = None,
                   threshold: float = CONDITION_THRESHOLD) -> Union[float, _Marker]:
    """Max-form asymptote, or :data:`LITTLE_O` when the single terms already match Psi_or.

    The condition is judged at ``check_u`` (default ``u``): it fails when
    ``|r(check_u) - 1| < threshold``.
    """
    if not u > 0:
        raise ValueError("u must be positive")
    theta(model)
    r = equivalence_ratio(model, check_u if check_u is not None else u)
    if abs(r - 1.0) < threshold:
        return LITTLE_O
    return and_integral(model, u)


def subexp_cdf(model: Model, u) -> np.ndarray:
    """``1 - int g(u, .) / theta`` on the given grid."""
    th = theta(model)
    return np.array([1.0 - or_integral(model, x) / th for x in np.atleast_1d(u)])


@dataclass(frozen=True)
class SubexpReport:
    theta: float
    psi_or: Callable[[float], float]
    psi_single: Tuple[Callable[[float], float], Callable[[float], float]]
    psi_and: Union[Callable[[float], float], _Marker]
    equivalence_diagnostic: Callable[[float], float]
    check_u: float
    r_at_check: float
    assumptions: Tuple[str, ...] = field(default=(
        "subexponentiality of the integrated-tail laws is assumed from the declared tail classes",))


def subexp_report(model: Model, grid, threshold: float = CONDITION_THRESHOLD) -> SubexpReport:
    grid = np.asarray(grid, dtype=float)
    th = theta(model)
    check_u = float(grid.max())
    r = equivalence_ratio(model, check_u)
    psi_and = LITTLE_O if abs(r - 1.0) < threshold else (lambda u: and_integral(model, u))
    return SubexpReport(
        theta=th,
        psi_or=lambda u: or_integral(model, u),
        psi_single=(lambda x: psi_single_subexp(model, 1, x), lambda x: psi_single_subexp(model, 2, x)),
        psi_and=psi_and,
        equivalence_diagnostic=lambda u: equivalence_ratio(model, u),
        check_u=check_u,
        r_at_check=r,
    )
