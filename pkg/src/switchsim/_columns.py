"""Per-column integrals shared by the heavy-tail modules.

Every heavy-tail formula is a sum over job sources ``j`` of an expectation
over column ``j`` of A of an integral

    int_0^inf tail(combine{(u b1 + v c1) / a, (u b2 + v c2) / (1 - a)}) dv

where ``combine`` is ``min`` or ``max`` and ``a = A_1j``. The division-by-zero
conventions (x / 0 = inf, tail(inf) = 0) live in :func:`ratio` and nowhere else.
"""

from __future__ import annotations

import math

import numpy as np

from .numerics import integrate_interval, integrate_semi_infinite

QUAD_REL_TOL = 1e-10


def ratio(x, a):
    """``x / a`` with ``x / 0 = inf`` for positive ``x``."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(a > 0, x / np.where(a > 0, a, 1.0), np.inf)
    return out


def power_tail(alpha):
    """Pure power tail ``x**-alpha`` (with ``inf -> 0``), used for limiting constants."""
    def tail(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(np.isfinite(x), np.power(x, -alpha, where=x > 0, out=np.full(x.shape, np.inf)), 0.0)
    return tail


def map_power_for(alpha):
    """Power of the ``[0, 1) -> [0, inf)`` map that keeps a ``v**-alpha`` integrand smooth at the end."""
    if alpha is None:
        return 1
    return int(min(40, max(1, math.ceil(2.0 / (alpha - 1.0)))))


def law_map_power(law):
    tail = law.tail_class
    return map_power_for(getattr(tail, "alpha", None))


def crossing(u, a, b, c):
    """The ``v >= 0`` at which the two arguments are equal, or None if they never cross."""
    if a <= 0.0 or a >= 1.0:
        return None
    slope = c[0] * (1.0 - a) - c[1] * a
    offset = u * (b[1] * a - b[0] * (1.0 - a))
    if slope == 0.0:
        return None
    v = offset / slope
    return v if v > 0 else None


def column_integrand(tail, u, a, b, c, mode):
    """v -> tail(combine(...)) for one switch entry ``a = A_1j``."""
    pick = np.minimum if mode == "min" else np.maximum

    def f(v):
        v = np.asarray(v, dtype=float)
        first = ratio(u * b[0] + v * c[0], a)
        second = ratio(u * b[1] + v * c[1], 1.0 - a)
        return tail(pick(first, second))
    return f


def column_integral(tail, u, a, b, c, mode, rel_tol=QUAD_REL_TOL, power=1):
    """Integral over v of :func:`column_integrand`, split at the min/max kink."""
    f = column_integrand(tail, u, a, b, c, mode)
    v_star = crossing(u, a, b, c)
    if v_star is None:
        return integrate_semi_infinite(f, rel_tol=rel_tol, abs_tol=1e-300, power=power).value
    head = integrate_interval(f, 0.0, v_star, rel_tol=rel_tol, abs_tol=1e-300).value
    tail_part = integrate_semi_infinite(lambda w: f(v_star + w), rel_tol=rel_tol, abs_tol=1e-300,
                                        power=power).value
    return head + tail_part


def column_kinks(b, c):
    """Entries ``a`` where the min/max over the two servers switches branch at ``v = 0`` or ``v = inf``."""
    return b[0] / (b[0] + b[1]), c[0] / (c[0] + c[1])


def column_expectation(switch, j, per_entry, rel_tol=1e-8, breakpoints=()):
    """E over column j of a scalar function of ``a = A_1j`` evaluated entry by entry."""
    def h(values):
        values = np.asarray(values, dtype=float)
        return np.array([per_entry(float(a)) for a in values.ravel()]).reshape(values.shape)
    return switch.expect_column(j, h, rel_tol=rel_tol, breakpoints=breakpoints)


def single_column_integral(tail, u, a, c, power=1, rel_tol=QUAD_REL_TOL):
    """``int_0^inf tail((u + v c) / a) dv`` for one server; zero when ``a = 0``."""
    if a <= 0.0:
        return 0.0
    return integrate_semi_infinite(lambda v: tail((u + v * c) / a), rel_tol=rel_tol, abs_tol=1e-300,
                                   power=power).value
