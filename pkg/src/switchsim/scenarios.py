"""Named run configurations, including built-ins for the figures of the reference study.

All built-ins share lambda1 = lambda2 = 1, c1 = 5, c2 = 8 and b1 = 0.8; they
differ in job laws and switch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

import numpy as np

from .errors import ConfigError
from .job_laws import Exponential, Pareto, Weibull
from .model import Model
from .montecarlo import McConfig, WorkloadConfig
from .switch_laws import Bernoulli, Beta, Deterministic


@dataclass(frozen=True)
class UGrid:
    u_min: float
    u_max: float
    n_points: int
    spacing: str = "log"

    def __post_init__(self):
        if not self.u_min > 0:
            raise ConfigError("must be positive", "u_grid.u_min")
        if not self.u_max >= self.u_min:
            raise ConfigError("must be at least u_min", "u_grid.u_max")
        if self.n_points < 2:
            raise ConfigError("need at least two points", "u_grid.n_points")
        if self.spacing not in ("log", "linear"):
            raise ConfigError("must be 'log' or 'linear'", "u_grid.spacing")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.u_min, self.u_max, self.n_points)
        return np.linspace(self.u_min, self.u_max, self.n_points)

    def to_dict(self):
        return {"u_min": self.u_min, "u_max": self.u_max, "n_points": self.n_points, "spacing": self.spacing}


@dataclass(frozen=True)
class Output:
    csv_path: str
    svg_path: Optional[str] = None


@dataclass(frozen=True)
class Scenario:
    name: str
    model: Model
    u_grid: UGrid
    mc: McConfig = field(default_factory=McConfig)
    outputs: List[Output] = field(default_factory=list)
    plot_scale: str = "loglog"  # loglog, loglin or logneglog

    def to_dict(self) -> dict:
        wc = self.mc.workload
        return {
            "name": self.name,
            "model": self.model.to_dict(),
            "u_grid": self.u_grid.to_dict(),
            "mc": {"n_paths": self.mc.n_paths, "seed": self.mc.seed, "max_jumps": self.mc.max_jumps,
                   "stop_margin": self.mc.stop_margin,
                   "workload": {"t_burn": wc.t_burn, "t_total": wc.t_total,
                                "sample_interval": wc.sample_interval, "n_samples": wc.n_samples,
                                "n_batches": wc.n_batches}},
            "outputs": [{"csv_path": o.csv_path, "svg_path": o.svg_path} for o in self.outputs],
            "plot_scale": self.plot_scale,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict, validate: bool = True) -> "Scenario":
        if not isinstance(data, dict):
            raise ConfigError("scenario must be a JSON object")
        if "model" not in data:
            raise ConfigError("missing field", "model")
        try:
            model = Model.from_dict(data["model"], validate=validate)
        except ConfigError as exc:
            raise ConfigError(exc.detail, f"model.{exc.path}" if exc.path else "model") from None
        grid = data.get("u_grid")
        if not isinstance(grid, dict):
            raise ConfigError("missing or malformed", "u_grid")
        try:
            u_grid = UGrid(float(grid["u_min"]), float(grid["u_max"]), int(grid["n_points"]),
                           str(grid.get("spacing", "log")))
        except KeyError as exc:
            raise ConfigError("missing field", f"u_grid.{exc.args[0]}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad value: {exc}", "u_grid") from None
        mc = _mc_from_dict(data.get("mc", {}))
        outputs = [Output(o["csv_path"], o.get("svg_path")) for o in data.get("outputs", [])]
        return cls(str(data.get("name", "custom")), model, u_grid, mc, outputs,
                   str(data.get("plot_scale", "loglog")))

    @classmethod
    def from_json(cls, text: str, validate: bool = True) -> "Scenario":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data, validate)


def _mc_from_dict(data: dict) -> McConfig:
    if not isinstance(data, dict):
        raise ConfigError("expected an object", "mc")
    try:
        wd = data.get("workload", {}) or {}
        workload = WorkloadConfig(
            t_burn=_opt_float(wd.get("t_burn")), t_total=_opt_float(wd.get("t_total")),
            sample_interval=_opt_float(wd.get("sample_interval")),
            n_samples=int(wd.get("n_samples", WorkloadConfig.n_samples)),
            n_batches=int(wd.get("n_batches", WorkloadConfig.n_batches)))
        return McConfig(n_paths=int(data.get("n_paths", McConfig.n_paths)), seed=int(data.get("seed", 0)),
                        max_jumps=int(data.get("max_jumps", McConfig.max_jumps)),
                        stop_margin=_opt_float(data.get("stop_margin")), workload=workload)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), "mc") from None


def _opt_float(x):
    return None if x is None else float(x)


# -- built-ins ---------------------------------------------------------------------------

PARETO_LAWS = (Pareto(1.5, 1.0), Pareto(2.0, 2.0))
EXPONENTIAL_LAWS = (Exponential(1.0 / 3.0), Exponential(0.25))
# survival exp(-(2x)^(1/3)) and exp(-(x/2)^(1/2))
WEIBULL_LAWS = (Weibull(1.0 / 3.0, 0.5), Weibull(0.5, 2.0))

SWITCHES = {
    "bernoulli": Bernoulli(0.4, 0.7),
    "deterministic": Deterministic(0.4, 0.7),
    "beta1": Beta(0.4, 0.6, 0.7, 0.3),
    "beta2": Beta(1.5, 2.25, 3.0, 9.0 / 7.0),
}

HEAVY_GRID = UGrid(10.0, 1000.0, 9, "log")
LIGHT_GRID = UGrid(5.0, 100.0, 9, "linear")


def reference_model(laws, switch, **changes) -> Model:
    params = dict(lambda1=1.0, lambda2=1.0, c1=5.0, c2=8.0, job1=laws[0], job2=laws[1], switch=switch, b1=0.8)
    params.update(changes)
    return Model(**params)


def builtin(name: str) -> Scenario:
    table = {
        "fig2": (PARETO_LAWS, "bernoulli", HEAVY_GRID, "loglog"),
        "fig3": (EXPONENTIAL_LAWS, "bernoulli", LIGHT_GRID, "loglin"),
        "fig4": (WEIBULL_LAWS, "deterministic", HEAVY_GRID, "logneglog"),
        "fig5": (PARETO_LAWS, "deterministic", HEAVY_GRID, "loglog"),
        "fig6": (EXPONENTIAL_LAWS, "deterministic", LIGHT_GRID, "loglin"),
    }
    if name not in table:
        raise ConfigError(f"unknown scenario {name!r}; built-ins are {', '.join(BUILTIN_NAMES)}", "scenario")
    laws, switch, grid, scale = table[name]
    return Scenario(name, reference_model(laws, SWITCHES[switch]), grid, McConfig(n_paths=10_000, seed=1),
                    [Output(f"{name}.csv", f"{name}.svg")], scale)


def comparison_scenarios() -> Dict[str, Scenario]:
    """The mean-matched switch comparison, for heavy and light job sizes."""
    out = {}
    for tail, laws, grid, scale in (("heavy", PARETO_LAWS, HEAVY_GRID, "loglog"),
                                    ("light", EXPONENTIAL_LAWS, LIGHT_GRID, "loglin")):
        for key, switch in SWITCHES.items():
            name = f"fig7_{tail}_{key}"
            out[name] = Scenario(name, reference_model(laws, switch), grid, McConfig(n_paths=10_000, seed=1),
                                 [Output(f"{name}.csv")], scale)
    return out


BUILTIN_NAMES = ("fig2", "fig3", "fig4", "fig5", "fig6")
FIGURE_NAMES = BUILTIN_NAMES + ("fig7",)


def with_mc(scenario: Scenario, **changes) -> Scenario:
    return replace(scenario, mc=replace(scenario.mc, **changes))
