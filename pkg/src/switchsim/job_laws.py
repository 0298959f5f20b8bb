"""Job (claim) size distributions and the analytic functionals the asymptotics consume.

All laws are positive, have finite mean, and are immutable. ``survival`` is
vectorized and maps ``+inf`` to 0, which is how the ``F(x/0) := 0`` convention
enters every formula downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy import special

from .errors import ConfigError, DivergentTail, Unsupported
from .numerics import integrate_interval, integrate_semi_infinite


@dataclass(frozen=True)
class LightTail:
    pass


@dataclass(frozen=True)
class RegVarying:
    """Pure power tail ``survival(x) ~ constant * x**-alpha``."""

    alpha: float
    constant: float


@dataclass(frozen=True)
class SubexpOther:
    pass


TailClass = Union[LightTail, RegVarying, SubexpOther]


class JobLaw:
    """Common interface; concrete kinds override the closed forms they have."""

    kind = "abstract"

    # -- to be provided by subclasses -------------------------------------------------
    @property
    def mean(self) -> float:
        raise NotImplementedError

    @property
    def tail_class(self) -> TailClass:
        raise NotImplementedError

    @property
    def mgf_domain_sup(self) -> float:
        """Supremum of ``s`` with finite mgf; the boundary itself counts as divergent."""
        return 0.0

    def _survival(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    # -- shared behaviour -------------------------------------------------------------
    @property
    def is_light(self) -> bool:
        return isinstance(self.tail_class, LightTail)

    def survival(self, x):
        """P(X > x); equals 1 for x <= 0 and 0 at +inf. Accepts scalars or arrays."""
        arr = np.asarray(x, dtype=float)
        out = np.ones_like(arr)
        pos = arr > 0
        if np.any(pos):
            xp = arr[pos]
            vals = np.zeros_like(xp)
            finite = np.isfinite(xp)
            vals[finite] = self._survival(xp[finite])
            out[pos] = vals
        return float(out) if out.ndim == 0 else out

    def cdf(self, x):
        return 1.0 - self.survival(x)

    def upper_integrated_tail(self, x: float) -> float:
        """``int_x^inf survival(y) dy``; generic path is adaptive quadrature."""
        x = max(float(x), 0.0)
        return integrate_semi_infinite(lambda v: self.survival(x + v)).value

    def mgf(self, s: float) -> float:
        """E[exp(s X)], or ``inf`` when ``s`` is at or beyond the domain supremum."""
        s = float(s)
        if s == 0.0:
            return 1.0
        if s >= self.mgf_domain_sup:
            return math.inf
        # integration by parts: E[e^{sX}] = 1 + s int_0^inf e^{sx} survival(x) dx
        return 1.0 + s * integrate_semi_infinite(lambda v: np.exp(s * v) * self.survival(v)).value

    def mgf_prime(self, s: float) -> float:
        """d/ds E[exp(s X)] = E[X exp(s X)]; only defined for light-tailed laws."""
        if not self.is_light:
            raise Unsupported(f"mgf derivative requested for heavy-tailed {self.kind} law")
        s = float(s)
        if s >= self.mgf_domain_sup:
            return math.inf
        return integrate_semi_infinite(lambda v: np.exp(s * v) * (1.0 + s * v) * self.survival(v)).value

    def quantile(self, p):
        raise Unsupported(f"{self.kind} law has no quantile function")

    def sample(self, rng: np.random.Generator, size=None):
        """Inverse-transform draw(s) using ``rng.random``."""
        u = rng.random(size)
        return self.quantile_from_upper(u)

    def quantile_from_upper(self, w):
        """Inverse of the survival function: the x with survival(x) = w."""
        return self.quantile(1.0 - np.asarray(w, dtype=float))

    def to_dict(self) -> dict:
        raise Unsupported(f"{self.kind} law is not serializable")


@dataclass(frozen=True)
class Exponential(JobLaw):
    rate: float
    kind = "exponential"

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ConfigError(f"exponential rate must be positive, got {self.rate}", "rate")

    @property
    def mean(self):
        return 1.0 / self.rate

    @property
    def tail_class(self):
        return LightTail()

    @property
    def mgf_domain_sup(self):
        return self.rate

    def _survival(self, x):
        return np.exp(-self.rate * x)

    def upper_integrated_tail(self, x):
        return math.exp(-self.rate * max(float(x), 0.0)) / self.rate

    def mgf(self, s):
        s = float(s)
        return self.rate / (self.rate - s) if s < self.rate else math.inf

    def mgf_prime(self, s):
        s = float(s)
        return self.rate / (self.rate - s) ** 2 if s < self.rate else math.inf

    def quantile_from_upper(self, w):
        return -np.log(w) / self.rate

    def quantile(self, p):
        return -np.log1p(-np.asarray(p, dtype=float)) / self.rate

    def to_dict(self):
        return {"type": "exponential", "rate": self.rate}


@dataclass(frozen=True)
class Pareto(JobLaw):
    """``survival(x) = (scale / x)**alpha`` for x >= scale."""

    alpha: float
    scale: float = 1.0
    kind = "pareto"

    def __post_init__(self):
        if not self.scale > 0:
            raise ConfigError(f"pareto scale must be positive, got {self.scale}", "scale")
        if not self.alpha > 1:
            raise DivergentTail(f"pareto alpha={self.alpha} <= 1 has infinite mean")

    @property
    def mean(self):
        return self.alpha * self.scale / (self.alpha - 1.0)

    @property
    def tail_class(self):
        return RegVarying(self.alpha, self.scale ** self.alpha)

    def _survival(self, x):
        return np.where(x < self.scale, 1.0, (self.scale / np.maximum(x, self.scale)) ** self.alpha)

    def upper_integrated_tail(self, x):
        x = max(float(x), 0.0)
        a, m = self.alpha, self.scale
        if x >= m:
            return m ** a * x ** (1.0 - a) / (a - 1.0)
        return (m - x) + m / (a - 1.0)

    def mgf(self, s):
        if float(s) > 0:
            return math.inf
        return super().mgf(s)

    def quantile_from_upper(self, w):
        return self.scale * np.asarray(w, dtype=float) ** (-1.0 / self.alpha)

    def quantile(self, p):
        return self.quantile_from_upper(1.0 - np.asarray(p, dtype=float))

    def to_dict(self):
        return {"type": "pareto", "alpha": self.alpha, "scale": self.scale}


@dataclass(frozen=True)
class Weibull(JobLaw):
    """``survival(x) = exp(-(x / scale)**shape)``; heavy (subexponential) for shape < 1."""

    shape: float
    scale: float
    kind = "weibull"

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise ConfigError("weibull shape and scale must be positive", "shape")

    @property
    def mean(self):
        return self.scale * math.gamma(1.0 + 1.0 / self.shape)

    @property
    def tail_class(self):
        return SubexpOther() if self.shape < 1 else LightTail()

    @property
    def mgf_domain_sup(self):
        if self.shape < 1:
            return 0.0
        if self.shape == 1:
            return 1.0 / self.scale
        return math.inf

    def _survival(self, x):
        return np.exp(-((x / self.scale) ** self.shape))

    def upper_integrated_tail(self, x):
        x = max(float(x), 0.0)
        k = 1.0 / self.shape
        return self.mean * special.gammaincc(k, (x / self.scale) ** self.shape)

    def quantile_from_upper(self, w):
        return self.scale * (-np.log(np.asarray(w, dtype=float))) ** (1.0 / self.shape)

    def quantile(self, p):
        return self.scale * (-np.log1p(-np.asarray(p, dtype=float))) ** (1.0 / self.shape)

    def to_dict(self):
        return {"type": "weibull", "shape": self.shape, "scale": self.scale}


@dataclass(frozen=True, eq=False)
class Custom(JobLaw):
    """User-supplied law. ``tail_class`` must be declared; it is never inferred."""

    survival_fn: Callable[[np.ndarray], np.ndarray]
    mean_value: float
    declared_tail: TailClass
    mgf_fn: Optional[Callable[[float], float]] = None
    domain_sup: Optional[float] = None
    quantile_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    kind = "custom"

    def __post_init__(self):
        if not (self.mean_value > 0 and math.isfinite(self.mean_value)):
            raise DivergentTail("custom law needs a finite positive mean")
        if isinstance(self.declared_tail, RegVarying) and self.declared_tail.alpha <= 1:
            raise DivergentTail("regularly varying index must exceed 1")

    @property
    def mean(self):
        return self.mean_value

    @property
    def tail_class(self):
        return self.declared_tail

    @property
    def mgf_domain_sup(self):
        if self.domain_sup is not None:
            return self.domain_sup
        return 0.0

    def _survival(self, x):
        return np.clip(np.asarray(self.survival_fn(x), dtype=float), 0.0, 1.0)

    def mgf(self, s):
        s = float(s)
        if self.mgf_fn is not None and s < self.mgf_domain_sup:
            return float(self.mgf_fn(s))
        return super().mgf(s)

    def mgf_prime(self, s):
        if self.mgf_fn is None and self.domain_sup is None:
            raise Unsupported("custom law without mgf information")
        return super().mgf_prime(s)

    def quantile(self, p):
        if self.quantile_fn is None:
            raise Unsupported("custom law without quantile function cannot be sampled")
        return self.quantile_fn(np.asarray(p, dtype=float))


def integrate_survival(law: JobLaw, upper: float, rel_tol: float = 1e-10) -> float:
    """Finite-range quadrature ``int_0^upper survival``; used as an independent check of ``mean``."""
    return integrate_interval(law.survival, 0.0, upper, rel_tol=rel_tol, abs_tol=1e-14,
                              initial_pieces=64).value


def law_from_dict(data: dict, path: str = "job") -> JobLaw:
    """Build a law from its JSON fragment, e.g. ``{"type": "pareto", "alpha": 1.5, "scale": 1}``."""
    if not isinstance(data, dict):
        raise ConfigError("expected an object", path)
    kind = data.get("type")
    try:
        if kind == "exponential":
            return Exponential(float(_need(data, "rate", path)))
        if kind == "pareto":
            return Pareto(float(_need(data, "alpha", path)), float(data.get("scale", 1.0)))
        if kind == "weibull":
            return Weibull(float(_need(data, "shape", path)), float(_need(data, "scale", path)))
    except DivergentTail as exc:
        raise ConfigError(str(exc), path) from None
    except ConfigError as exc:
        raise ConfigError(exc.detail, f"{path}.{exc.path}" if exc.path else path) from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad number: {exc}", path) from None
    raise ConfigError(f"unknown job law type {kind!r}", f"{path}.type")


def _need(data, key, path):
    if key not in data:
        # relative; the caller prefixes the law's own path
        raise ConfigError("missing field", key)
    return data[key]
