"""Model generators shared by the property tests and the acceptance suite."""

import numpy as np

from switchsim.job_laws import Exponential, Pareto
from switchsim.model import Model
from switchsim.switch_laws import Bernoulli, Beta, Deterministic


def random_switch(rng):
    kind = rng.integers(3)
    if kind == 0:
        return Deterministic(*rng.uniform(0.05, 0.95, 2))
    if kind == 1:
        return Bernoulli(*rng.uniform(0.05, 0.95, 2))
    return Beta(*rng.uniform(0.3, 4.0, 4))


def random_rv_model(rng):
    """Two Pareto sources, random switch and barrier split, speeds with a positive safety loading."""
    job1 = Pareto(rng.uniform(1.2, 3.0), rng.uniform(0.5, 2.0))
    # equal indices half of the time so both sources carry weight
    alpha2 = job1.alpha if rng.random() < 0.5 else rng.uniform(1.2, 3.0)
    job2 = Pareto(alpha2, rng.uniform(0.5, 2.0))
    switch = random_switch(rng)
    lam1, lam2 = rng.uniform(0.2, 2.0, 2)
    probe = Model(lam1, lam2, 1.0, 1.0, job1, job2, switch, validate=False)
    load1, load2 = probe.mean_loads()
    c1, c2 = load1 * rng.uniform(1.1, 3.0) + 0.05, load2 * rng.uniform(1.1, 3.0) + 0.05
    return Model(lam1, lam2, c1, c2, job1, job2, switch, b1=rng.uniform(0.1, 0.9))


def single_server_exponential(c1=4.0):
    """Everything routed to server 1; Psi_1(x) = rho exp(-(1 - rho) x) with unit-mean jobs, rho = 2 / c1."""
    return Model(1.0, 1.0, c1, 1.0, Exponential(1.0), Exponential(1.0), Deterministic(1.0, 1.0), b1=0.5)
