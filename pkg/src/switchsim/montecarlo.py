"""Monte Carlo estimates of the ruin and workload exceedance probabilities.

Risk side: each path walks the jump chain of the dual risk process
``S_i(t) = sum of switched job shares - c_i t`` and records the running
maxima of ``S_1 / b_1``, ``S_2 / b_2`` and ``min(S_1 / b_1, S_2 / b_2)``.
Ruin at barrier ``u`` is then just "maximum > u", so one path answers every
``u`` of a grid with common random numbers. Ruin can only happen at jump
epochs because the process decreases in between.

Workload side: one long event-driven run of the two coupled queues,
observed at regular epochs after a burn-in; standard errors come from batch
means because successive observations are correlated.

Path ``k`` draws from a PCG64 stream seeded by ``SeedSequence(seed,
spawn_key=(k,))``, so results do not depend on how paths are grouped or
ordered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Sequence

import numba
import numpy as np

from .errors import NetProfitViolated, SwitchSimError, Unsupported
from .job_laws import Exponential, JobLaw, Pareto, Weibull
from .model import Model, Regime, check_net_profit, regime
from .switch_laws import Beta, SwitchLaw

PROBABILITIES = ("psi1", "psi2", "psi_or", "psi_and", "psi_and_sim")
WORKLOAD_PROBABILITIES = ("psi1", "psi2", "psi_or", "psi_and")

# heavy tails: stop margin is sized so the single-component asymptote from that depth is below this
HEAVY_RESIDUAL = 0.01
MIN_BATCHES = 20


@dataclass(frozen=True)
class WorkloadConfig:
    """Long-run workload observation window; ``None`` picks model-based defaults."""

    t_burn: Optional[float] = None
    t_total: Optional[float] = None
    sample_interval: Optional[float] = None
    n_samples: int = 100_000
    n_batches: int = MIN_BATCHES

    def resolve(self, model: Model) -> "WorkloadConfig":
        t_burn = self.t_burn
        if t_burn is None:
            t_burn = 50.0 / min(model.c_star) * max(law.mean for law in model.jobs)
        interval = self.sample_interval if self.sample_interval is not None else 25.0 / model.lam
        t_total = self.t_total if self.t_total is not None else t_burn + self.n_samples * interval
        out = replace(self, t_burn=t_burn, t_total=t_total, sample_interval=interval)
        if not t_burn < t_total:
            raise ValueError("workload burn-in must end before the total run time")
        if self.n_batches < MIN_BATCHES:
            raise ValueError(f"batch means need at least {MIN_BATCHES} batches")
        return out


@dataclass(frozen=True)
class McConfig:
    n_paths: int = 10_000
    seed: int = 0
    max_jumps: int = 1_000_000
    stop_margin: Optional[float] = None
    workload: WorkloadConfig = field(default_factory=WorkloadConfig)

    def __post_init__(self):
        if self.n_paths < 1:
            raise ValueError("n_paths must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    std_err: float
    n: int
    censored_fraction: float = 0.0

    @classmethod
    def from_count(cls, hits: int, n: int, censored: int = 0) -> "McEstimate":
        p = hits / n
        return cls(p, math.sqrt(p * (1.0 - p) / n), n, censored / n)


@dataclass(frozen=True)
class RuinOutcome:
    hit1: bool
    hit2: bool
    hit_or: bool
    hit_and: bool
    hit_and_sim: bool
    censored: bool


# -- parameter packing for the compiled kernels --------------------------------------

_EXPONENTIAL, _PARETO, _WEIBULL = 0, 1, 2
_ATOMIC, _BETA = 0, 1


def _law_code(law: JobLaw):
    if isinstance(law, Exponential):
        return _EXPONENTIAL, float(law.rate), 0.0
    if isinstance(law, Pareto):
        return _PARETO, float(law.alpha), float(law.scale)
    if isinstance(law, Weibull):
        return _WEIBULL, float(law.shape), float(law.scale)
    raise Unsupported(f"simulation of {law.kind} job laws is not supported")


def _switch_tables(switch: SwitchLaw):
    """Column marginals: atoms with cumulative weights, or Beta parameters."""
    if isinstance(switch, Beta):
        empty = np.zeros(1)
        params = np.array([switch.beta1, switch.gamma1, switch.beta2, switch.gamma2], dtype=float)
        return _BETA, params, empty, empty, empty, empty
    v1, w1 = switch.column_atoms(1)
    v2, w2 = switch.column_atoms(2)
    as_float = lambda x: np.ascontiguousarray(x, dtype=float)
    return _ATOMIC, np.zeros(4), as_float(v1), as_float(np.cumsum(w1)), as_float(v2), as_float(np.cumsum(w2))


@dataclass(frozen=True)
class _Packed:
    lam1: float
    lam: float
    c1: float
    c2: float
    law1: tuple
    law2: tuple
    switch: tuple

    @classmethod
    def of(cls, model: Model) -> "_Packed":
        return cls(float(model.lambda1), float(model.lam), float(model.c1), float(model.c2),
                   _law_code(model.job1), _law_code(model.job2), _switch_tables(model.switch))


@numba.njit(cache=True, inline="always")
def _draw_job(gen, code, p1, p2):
    if code == 0:
        return gen.standard_exponential() / p1
    w = 1.0 - gen.random()  # in (0, 1]
    if code == 1:
        return p2 * w ** (-1.0 / p1)
    return p2 * (-math.log(w)) ** (1.0 / p1)


@numba.njit(cache=True, inline="always")
def _draw_entry(gen, kind, beta_params, values, cum, j):
    if kind == 1:
        return gen.beta(beta_params[2 * j], beta_params[2 * j + 1])
    if values.shape[0] == 1:
        return values[0]
    r = gen.random()
    for k in range(values.shape[0] - 1):
        if r < cum[k]:
            return values[k]
    return values[values.shape[0] - 1]


@numba.njit(cache=True)
def _risk_path(gen, lam1, lam, c1, c2, l1, a1, s1, l2, a2, s2, kind, bp, v1, cw1, v2, cw2,
               b1, b2, u_min, u_max, margin, max_jumps):
    """Running maxima of S1/b1, S2/b2 and min of both, the jump count, and a truncation flag."""
    x1 = 0.0
    x2 = 0.0
    m1 = -np.inf
    m2 = -np.inf
    msim = -np.inf
    low1 = b1 * u_min - margin
    low2 = b2 * u_min - margin
    for n in range(max_jumps):
        # one arrival; written out here because a helper returning a tuple costs ~40 ns per jump
        t = gen.standard_exponential() / lam
        if gen.random() * lam < lam1:
            x = _draw_job(gen, l1, a1, s1)
            a = _draw_entry(gen, kind, bp, v1, cw1, 0)
        else:
            x = _draw_job(gen, l2, a2, s2)
            a = _draw_entry(gen, kind, bp, v2, cw2, 1)
        x1 += a * x - c1 * t
        x2 += (1.0 - a) * x - c2 * t
        r1 = x1 / b1
        r2 = x2 / b2
        if r1 > m1:
            m1 = r1
        if r2 > m2:
            m2 = r2
        r = min(r1, r2)
        if r > msim:
            msim = r
        if msim > u_max:
            return m1, m2, msim, n + 1, False
        if x1 < low1 and x2 < low2:
            return m1, m2, msim, n + 1, False
    return m1, m2, msim, max_jumps, True


@numba.njit(cache=True)
def _workload_run(gen, lam1, lam, c1, c2, l1, a1, s1, l2, a2, s2, kind, bp, v1, cw1, v2, cw2,
                  t_burn, interval, n_samples):
    """Workloads (W1, W2) observed at t_burn + k * interval, k = 0..n_samples-1."""
    out = np.empty((n_samples, 2))
    w1 = 0.0
    w2 = 0.0
    t = 0.0
    k = 0
    next_sample = t_burn
    while k < n_samples:
        dt = gen.standard_exponential() / lam
        if gen.random() * lam < lam1:
            x = _draw_job(gen, l1, a1, s1)
            a = _draw_entry(gen, kind, bp, v1, cw1, 0)
        else:
            x = _draw_job(gen, l2, a2, s2)
            a = _draw_entry(gen, kind, bp, v2, cw2, 1)
        arrival = t + dt
        while k < n_samples and next_sample < arrival:
            out[k, 0] = max(w1 - c1 * (next_sample - t), 0.0)
            out[k, 1] = max(w2 - c2 * (next_sample - t), 0.0)
            k += 1
            next_sample = t_burn + k * interval
        w1 = max(w1 - c1 * dt, 0.0) + a * x
        w2 = max(w2 - c2 * dt, 0.0) + (1.0 - a) * x
        t = arrival
    return out


def _kernel_args(p: _Packed):
    kind, bp, v1, cw1, v2, cw2 = p.switch
    return (p.lam1, p.lam, p.c1, p.c2, *p.law1, *p.law2, kind, bp, v1, cw1, v2, cw2)


def path_generator(seed: int, k: int) -> np.random.Generator:
    """Independent stream for path ``k``: a pure function of ``(seed, k)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(k),))))


# -- stop margin -----------------------------------------------------------------------

def default_stop_margin(model: Model) -> float:
    """Depth below every barrier at which a path is declared safe.

    Light tails: ``40 max(c*) lambda / min(kappa)``. Heavy tails: the depth at
    which each single-component ruin asymptote drops below ``HEAVY_RESIDUAL``,
    since there the return probability from depth H decays only polynomially.
    """
    reg = regime(model)
    if reg is Regime.LIGHT:
        from .asymptotics_light import adjustment_coefficient
        try:
            kappa = min(adjustment_coefficient(model, 1), adjustment_coefficient(model, 2))
        except SwitchSimError:
            kappa = 1.0
        return 40.0 * max(model.c_star) * model.lam / kappa
    from .asymptotics_subexp import psi_single_subexp
    base = 40.0 * max(model.c_star) * model.lam
    depth = base
    for i in (1, 2):
        while psi_single_subexp(model, i, depth) > HEAVY_RESIDUAL and depth < 1e9:
            depth *= 2.0
    return depth


# -- risk side -------------------------------------------------------------------------

def _require_net_profit(model: Model):
    report = check_net_profit(model)
    if not report.ok:
        raise NetProfitViolated(str(report), report.server, report.excess)


@dataclass(frozen=True)
class PathMaxima:
    """Per-path running maxima; ruin at ``u`` is ``maximum > u``."""

    m1: np.ndarray
    m2: np.ndarray
    msim: np.ndarray
    jumps: np.ndarray
    truncated: np.ndarray
    stop_margin: float
    interrupted: bool = False

    def outcomes(self, u: float):
        hit1 = self.m1 > u
        hit2 = self.m2 > u
        sim = self.msim > u
        return hit1, hit2, sim

    def estimates(self, u: float) -> Dict[str, McEstimate]:
        hit1, hit2, sim = self.outcomes(u)
        n = len(hit1)
        flags = {"psi1": hit1, "psi2": hit2, "psi_or": hit1 | hit2, "psi_and": hit1 & hit2, "psi_and_sim": sim}
        out = {}
        for name, hit in flags.items():
            # a truncated path leaves a flag open only where it has not been hit yet
            censored = int(np.count_nonzero(self.truncated & ~hit))
            out[name] = McEstimate.from_count(int(np.count_nonzero(hit)), n, censored)
        return out


def simulate_maxima(model: Model, u_grid: Sequence[float], config: McConfig) -> PathMaxima:
    """Run ``config.n_paths`` risk paths resolving ruin for every barrier in ``u_grid``."""
    _require_net_profit(model)
    u_grid = np.asarray(u_grid, dtype=float)
    if np.any(u_grid <= 0):
        raise ValueError("barriers must be positive")
    margin = config.stop_margin if config.stop_margin is not None else default_stop_margin(model)
    args = _kernel_args(_Packed.of(model))
    n = config.n_paths
    m1 = np.empty(n)
    m2 = np.empty(n)
    msim = np.empty(n)
    jumps = np.empty(n, dtype=np.int64)
    truncated = np.empty(n, dtype=bool)
    u_min, u_max = float(u_grid.min()), float(u_grid.max())
    done = 0
    try:
        for k in range(n):
            gen = path_generator(config.seed, k)
            m1[k], m2[k], msim[k], jumps[k], truncated[k] = _risk_path(
                gen, *args, model.b1, model.b2, u_min, u_max, margin, config.max_jumps)
            done = k + 1
    except KeyboardInterrupt:
        if done == 0:
            raise
        # keep the completed paths so callers can flush partial results
        return PathMaxima(m1[:done], m2[:done], msim[:done], jumps[:done], truncated[:done], margin, True)
    return PathMaxima(m1, m2, msim, jumps, truncated, margin)


def simulate_risk_path(model: Model, u: float, rng: np.random.Generator, config: McConfig) -> RuinOutcome:
    """One path at a single barrier ``u``."""
    _require_net_profit(model)
    margin = config.stop_margin if config.stop_margin is not None else default_stop_margin(model)
    args = _kernel_args(_Packed.of(model))
    m1, m2, msim, _, truncated = _risk_path(rng, *args, model.b1, model.b2, u, u, margin, config.max_jumps)
    hit1, hit2, sim = m1 > u, m2 > u, msim > u
    return RuinOutcome(hit1, hit2, hit1 or hit2, hit1 and hit2, sim, truncated and not sim)


def estimate_ruin(model: Model, u: float, config: McConfig) -> Dict[str, McEstimate]:
    """The five ruin probabilities at barrier ``u``."""
    return simulate_maxima(model, [u], config).estimates(u)


def estimate_ruin_grid(model: Model, u_grid: Sequence[float], config: McConfig) -> Dict[float, Dict[str, McEstimate]]:
    maxima = simulate_maxima(model, u_grid, config)
    return {float(u): maxima.estimates(float(u)) for u in u_grid}


# -- workload side ---------------------------------------------------------------------

@dataclass(frozen=True)
class WorkloadSamples:
    w: np.ndarray  # shape (n_samples, 2)
    config: WorkloadConfig

    def exceedance(self, model: Model, u: float) -> Dict[str, McEstimate]:
        """Exceedance frequencies with batch-means standard errors."""
        over1 = self.w[:, 0] > model.b1 * u
        over2 = self.w[:, 1] > model.b2 * u
        flags = {"psi1": over1, "psi2": over2, "psi_or": over1 | over2, "psi_and": over1 & over2}
        return {name: batch_means(flag.astype(float), self.config.n_batches) for name, flag in flags.items()}


def batch_means(x: np.ndarray, n_batches: int) -> McEstimate:
    """Mean of ``x`` with the standard error of ``n_batches`` contiguous batch means."""
    usable = (len(x) // n_batches) * n_batches
    means = x[:usable].reshape(n_batches, -1).mean(axis=1)
    se = float(means.std(ddof=1) / math.sqrt(n_batches))
    return McEstimate(float(means.mean()), se, usable)


def simulate_workload(model: Model, rng: np.random.Generator, config: McConfig) -> WorkloadSamples:
    _require_net_profit(model)
    wc = config.workload.resolve(model)
    n_samples = int(math.floor((wc.t_total - wc.t_burn) / wc.sample_interval))
    if n_samples < wc.n_batches:
        raise ValueError("workload window holds fewer samples than batches")
    args = _kernel_args(_Packed.of(model))
    w = _workload_run(rng, *args, wc.t_burn, wc.sample_interval, n_samples)
    return WorkloadSamples(w, wc)


def estimate_workload(model: Model, u_grid: Sequence[float], config: McConfig) -> Dict[float, Dict[str, McEstimate]]:
    # the workload run gets its own stream, keyed past every path index
    samples = simulate_workload(model, path_generator(config.seed, 2**63), config)
    return {float(u): samples.exceedance(model, float(u)) for u in u_grid}
