"""Ruin and exceedance probabilities for two servers fed through a random switch.

Two compound Poisson job streams are split by a random column-stochastic
2x2 matrix between two servers. The package computes heavy- and light-tail
asymptotics of the ruin probabilities of the dual risk process and checks
them by Monte Carlo.
"""

from .errors import (ConfigError, DivergentTail, NetProfitViolated, NoAdjustmentCoefficient, NoBracket,
                     NoConvergence, NotRegVarying, NumericalError, QuadratureNoConvergence, SwitchSimError,
                     ThetaZero, Unsupported)
from .job_laws import Custom, Exponential, JobLaw, LightTail, Pareto, RegVarying, SubexpOther, Weibull
from .model import Model, Regime, check_net_profit, regime, safety_loading, split_barrier
from .switch_laws import Bernoulli, Beta, Deterministic, DiscreteMixture, SwitchLaw

__all__ = [
    "ConfigError", "DivergentTail", "NetProfitViolated", "NoAdjustmentCoefficient", "NoBracket", "NoConvergence",
    "NotRegVarying", "NumericalError", "QuadratureNoConvergence", "SwitchSimError", "ThetaZero", "Unsupported",
    "Custom", "Exponential", "JobLaw", "LightTail", "Pareto", "RegVarying", "SubexpOther", "Weibull",
    "Model", "Regime", "check_net_profit", "regime", "safety_loading", "split_barrier",
    "Bernoulli", "Beta", "Deterministic", "DiscreteMixture", "SwitchLaw",
]
