"""Parameter bundle for the two-source, two-server switch and its dual risk model."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import ConfigError, NetProfitViolated
from .job_laws import JobLaw, LightTail, RegVarying, law_from_dict
from .switch_laws import SwitchLaw, switch_from_dict


class Regime(str, enum.Enum):
    LIGHT = "Light"
    REG_VARYING = "RegVarying"
    SUBEXP_GENERAL = "SubexpGeneral"
    MIXED = "Mixed"


@dataclass(frozen=True)
class NetProfitReport:
    ok: bool
    c_star: Tuple[float, float]
    server: Optional[int] = None
    excess: float = 0.0

    def __str__(self):
        if self.ok:
            return "net-profit condition holds: c* = ({:.6g}, {:.6g})".format(*self.c_star)
        return (f"net-profit condition violated at server {self.server}: "
                f"load exceeds work speed by {self.excess:.6g}")


@dataclass(frozen=True)
class Model:
    """Arrival rates, work speeds, job laws, switch law and barrier split.

    Construction rejects models that violate the net-profit condition unless
    ``validate=False`` is passed (used by the ``check`` command to report
    the violation instead of failing).
    """

    lambda1: float
    lambda2: float
    c1: float
    c2: float
    job1: JobLaw
    job2: JobLaw
    switch: SwitchLaw
    b1: float = 0.5
    validate: bool = True

    def __post_init__(self):
        for name in ("lambda1", "lambda2"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ConfigError("arrival rate must be nonnegative", name)
        if self.lam <= 0:
            raise ConfigError("at least one arrival rate must be positive", "lambda1")
        for name in ("c1", "c2"):
            if not getattr(self, name) > 0:
                raise ConfigError("work speed must be positive", name)
        if not 0.0 < self.b1 < 1.0:
            raise ConfigError("barrier split must lie in (0, 1)", "b1")
        if self.validate:
            report = check_net_profit(self)
            if not report.ok:
                raise NetProfitViolated(str(report), report.server, report.excess)

    @property
    def lam(self) -> float:
        return self.lambda1 + self.lambda2

    @property
    def b2(self) -> float:
        return 1.0 - self.b1

    @property
    def b(self) -> Tuple[float, float]:
        return self.b1, self.b2

    @property
    def speeds(self) -> Tuple[float, float]:
        return self.c1, self.c2

    @property
    def rates(self) -> Tuple[float, float]:
        return self.lambda1, self.lambda2

    @property
    def jobs(self) -> Tuple[JobLaw, JobLaw]:
        return self.job1, self.job2

    @property
    def c_star(self) -> Tuple[float, float]:
        return safety_loading(self)

    def mean_loads(self) -> Tuple[float, float]:
        """Work per unit time routed to each server."""
        m11, m12 = self.switch.mean_entries()
        w1 = self.lambda1 * self.job1.mean
        w2 = self.lambda2 * self.job2.mean
        return m11 * w1 + m12 * w2, (1 - m11) * w1 + (1 - m12) * w2

    def with_(self, **changes) -> "Model":
        data = {f: getattr(self, f) for f in self.__dataclass_fields__}
        data.update(changes)
        return Model(**data)

    def to_dict(self) -> dict:
        return {
            "lambda1": self.lambda1, "lambda2": self.lambda2,
            "c1": self.c1, "c2": self.c2, "b1": self.b1,
            "job1": self.job1.to_dict(), "job2": self.job2.to_dict(),
            "switch": self.switch.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict, validate: bool = True) -> "Model":
        if not isinstance(data, dict):
            raise ConfigError("model config must be a JSON object")
        try:
            numbers = {k: float(data[k]) for k in ("lambda1", "lambda2", "c1", "c2", "b1")}
        except KeyError as exc:
            raise ConfigError("missing field", exc.args[0]) from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad number: {exc}") from None
        for key in ("job1", "job2", "switch"):
            if key not in data:
                raise ConfigError("missing field", key)
        return cls(job1=law_from_dict(data["job1"], "job1"), job2=law_from_dict(data["job2"], "job2"),
                   switch=switch_from_dict(data["switch"]), validate=validate, **numbers)


def safety_loading(model: Model) -> Tuple[float, float]:
    """Per-arrival drift margins ``c_i* = (c_i - mean load_i) / lambda``."""
    load1, load2 = model.mean_loads()
    return (model.c1 - load1) / model.lam, (model.c2 - load2) / model.lam


def check_net_profit(model: Model) -> NetProfitReport:
    load1, load2 = model.mean_loads()
    c_star = ((model.c1 - load1) / model.lam, (model.c2 - load2) / model.lam)
    for i, (speed, load) in enumerate(((model.c1, load1), (model.c2, load2)), start=1):
        if not load < speed:
            return NetProfitReport(False, c_star, server=i, excess=load - speed)
    return NetProfitReport(True, c_star)


def regime(model: Model) -> Regime:
    """Classify from the declared tail classes only."""
    t1, t2 = model.job1.tail_class, model.job2.tail_class
    if isinstance(t1, LightTail) and isinstance(t2, LightTail):
        return Regime.LIGHT
    if isinstance(t1, RegVarying) and isinstance(t2, RegVarying):
        return Regime.REG_VARYING
    if isinstance(t1, RegVarying) and isinstance(t2, LightTail):
        return Regime.MIXED
    if isinstance(t2, RegVarying) and isinstance(t1, LightTail):
        return Regime.MIXED
    return Regime.SUBEXP_GENERAL


def split_barrier(model: Model, u: float) -> Tuple[float, float]:
    if not u > 0:
        raise ValueError("barrier u must be positive")
    return model.b1 * u, model.b2 * u
