"""Acceptance criteria 1-10; each test prints one PASS/FAIL line.

Runtime budgets are asserted alongside the numbers. "Milliseconds" is taken
as under 100 ms and "seconds" as under 60 s.
"""

import math
import time

import numpy as np
import pytest

from helpers import random_rv_model
from switchsim._columns import column_expectation, column_integral, column_kinks, law_map_power
from switchsim.asymptotics_light import adjustment_coefficient, cramer_constant
from switchsim.asymptotics_rv import c_and_sim, c_vee, psi_curves_rv
from switchsim.asymptotics_subexp import EXPECT_REL_TOL, and_integral, or_integral, psi_single_subexp
from switchsim.job_laws import Exponential, Weibull
from switchsim.montecarlo import McConfig, WorkloadConfig, estimate_workload, simulate_maxima
from switchsim.scenarios import SWITCHES, builtin

MILLISECONDS = 0.1
SECONDS = 60.0


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def identity_gap(maxima, u):
    est = maxima.estimates(u)
    return abs(est["psi_and"].p_hat - (est["psi1"].p_hat + est["psi2"].p_hat - est["psi_or"].p_hat))


# -- shared Monte Carlo runs --------------------------------------------------------------

@pytest.fixture(scope="module")
def fig2_runs():
    model = builtin("fig2").model
    start = time.perf_counter()
    risk = simulate_maxima(model, [20.0, 50.0], McConfig(n_paths=100_000, seed=2024))
    work = estimate_workload(model, [20.0, 50.0],
                             McConfig(seed=2024, workload=WorkloadConfig(n_samples=100_000)))
    return risk, work, time.perf_counter() - start


@pytest.fixture(scope="module")
def light_runs():
    start = time.perf_counter()
    runs = {name: simulate_maxima(builtin(name).model, [10.0, 20.0, 30.0, 40.0],
                                  McConfig(n_paths=100_000, seed=7)) for name in ("fig3", "fig6")}
    return runs, time.perf_counter() - start


@pytest.fixture(scope="module")
def fig5_run():
    start = time.perf_counter()
    run = simulate_maxima(builtin("fig5").model, [50.0, 100.0, 200.0, 400.0], McConfig(n_paths=1_000_000, seed=5))
    return run, time.perf_counter() - start


# -- criteria ------------------------------------------------------------------------------

def test_criterion_01_adjustment_coefficients(report):
    targets = {"fig3": (0.054, 0.178), "fig6": (0.084, 0.383)}
    ok, parts = True, []
    for name, target in targets.items():
        model = builtin(name).model
        start = time.perf_counter()
        kappas = [adjustment_coefficient(model, i) for i in (1, 2)]
        elapsed = time.perf_counter() - start
        ok &= all(abs(k - t) <= 1e-3 for k, t in zip(kappas, target)) and elapsed < MILLISECONDS
        parts.append(f"{name} kappa=({kappas[0]:.6f}, {kappas[1]:.6f}) in {elapsed * 1e3:.1f} ms")
    report(1, ok, "; ".join(parts))


def test_criterion_02_cramer_constants(report):
    targets = {"fig3": ((0.796, 0.005), (0.343, 0.005)), "fig6": ((0.78, 0.01), (0.341, 0.005))}
    ok, parts = True, []
    for name, target in targets.items():
        model = builtin(name).model
        kappas = [adjustment_coefficient(model, i) for i in (1, 2)]
        start = time.perf_counter()
        constants = [cramer_constant(model, i, k) for i, k in zip((1, 2), kappas)]
        elapsed = time.perf_counter() - start
        ok &= all(abs(c - t) <= tol for c, (t, tol) in zip(constants, target)) and elapsed < MILLISECONDS
        parts.append(f"{name} C=({constants[0]:.6f}, {constants[1]:.6f}) in {elapsed * 1e3:.1f} ms")
    report(2, ok, "; ".join(parts))


def test_criterion_03_regular_variation_constants(report):
    targets = {"fig2": ((0.8, 0.24, 1.431, 0.48), 0.005), "fig5": ((0.506, 0.186, 0.756, 0.226), 0.01)}
    ok, parts = True, []
    start = time.perf_counter()
    for name, (values, tol) in targets.items():
        coeffs = psi_curves_rv(builtin(name).model).coefficients
        got = [coeffs[k].coef for k in ("psi1", "psi2", "psi_or", "psi_and")]
        ok &= all(abs(g - t) <= tol * abs(g) for g, t in zip(got, values))
        parts.append(f"{name} ({', '.join(f'{g:.5f}' for g in got)}) vs {values}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < SECONDS
    report(3, ok, "; ".join(parts) + f"; {elapsed:.1f} s")


def _source_term(model, j, u):
    b, c = model.b, model.c_star
    law = model.jobs[j - 1]
    weight = model.rates[j - 1] / model.lam
    return weight * column_expectation(
        model.switch, j, lambda a: column_integral(law.survival, u, a, b, c, "min", power=law_map_power(law)),
        rel_tol=EXPECT_REL_TOL, breakpoints=column_kinks(b, c))


def test_criterion_04_weibull_integral_identity(report):
    model = builtin("fig4").model
    closed = lambda u: (0.1374 * u ** (2 / 3) + 0.31449 * u ** (1 / 3) + 0.36) * math.exp(-0.87358 * u ** (1 / 3))
    ok, parts = True, []
    start = time.perf_counter()
    for u in (200.0, 500.0, 1000.0):
        numeric = or_integral(model, u)
        ratio = numeric / closed(u)
        share2 = _source_term(model, 2, u) / numeric
        ok &= abs(ratio - 1.0) <= 0.01 and share2 < 1e-3
        parts.append(f"u={u:g}: ratio {ratio:.4f}, second-source share {share2:.2e}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < SECONDS
    report(4, ok, "; ".join(parts) + f"; {elapsed:.1f} s")


def test_criterion_05_duality(report, fig2_runs):
    risk, work, elapsed = fig2_runs
    ok, parts = elapsed <= 300.0, []
    for u in (20.0, 50.0):
        r, w = risk.estimates(u)["psi_or"], work[u]["psi_or"]
        z = (r.p_hat - w.p_hat) / math.hypot(r.std_err, w.std_err)
        ok &= abs(z) <= 3.0
        parts.append(f"u={u:g}: risk {r.p_hat:.4f}+-{r.std_err:.4f}, workload {w.p_hat:.4f}+-{w.std_err:.4f}, "
                     f"z={z:+.2f}")
    report(5, ok, "; ".join(parts) + f"; {elapsed:.0f} s")


def test_criterion_06_lundberg_domination(report, light_runs):
    runs, elapsed = light_runs
    ok, worst = elapsed <= 300.0, []
    for name, maxima in runs.items():
        model = builtin(name).model
        k1, k2 = adjustment_coefficient(model, 1), adjustment_coefficient(model, 2)
        slack = math.inf
        for u in (10.0, 20.0, 30.0, 40.0):
            est = maxima.estimates(u)
            e1, e2 = math.exp(-k1 * model.b1 * u), math.exp(-k2 * model.b2 * u)
            checks = ((est["psi1"], e1), (est["psi2"], e2), (est["psi_or"], min(1.0, e1 + e2)))
            for e, bound in checks:
                slack = min(slack, bound - (e.p_hat - 3 * e.std_err))
        ok &= slack >= 0
        worst.append(f"{name} smallest slack {slack:.4f}")
    report(6, ok, "; ".join(worst) + f"; {elapsed:.0f} s")


def test_criterion_07_mc_versus_asymptote(report, fig5_run):
    maxima, elapsed = fig5_run
    u = np.array([50.0, 100.0, 200.0, 400.0])
    p = np.array([maxima.estimates(x)["psi_or"].p_hat for x in u])
    ratio = p[2] / (0.756 * 200.0 ** -0.5)
    slope = np.polyfit(np.log(u), np.log(p), 1)[0]
    ok = 0.7 <= ratio <= 1.3 and abs(slope + 0.5) <= 0.1 and elapsed <= 600.0
    report(7, ok, f"ratio at u=200 {ratio:.3f}, fitted slope {slope:.3f} (target -0.5 +- 0.1), "
                  f"{len(maxima.m1)} paths in {elapsed:.0f} s")


def test_criterion_08_bernoulli_independence(report, fig2_runs):
    est = fig2_runs[0].estimates(50.0)
    gap = abs(est["psi_and"].p_hat - est["psi1"].p_hat * est["psi2"].p_hat)
    ok = gap <= 4 * est["psi_and"].std_err
    report(8, ok, f"|and - product| = {gap:.5f}, 4 SE = {4 * est['psi_and'].std_err:.5f}")


def test_criterion_09_estimator_identity(report, fig2_runs, light_runs, fig5_run):
    runs = [(fig2_runs[0], (20.0, 50.0)), (fig5_run[0], (50.0, 100.0, 200.0, 400.0))]
    runs += [(m, (10.0, 20.0, 30.0, 40.0)) for m in light_runs[0].values()]
    gap = max(identity_gap(m, u) for m, grid in runs for u in grid)
    report(9, gap <= 4 * np.finfo(float).eps, f"largest |and - (1 + 2 - or)| over {len(runs)} runs: {gap:.1e}")


def test_criterion_10_invariant_suites(report):
    start = time.perf_counter()
    # mgf derivative against central differences
    mgf_err = 0.0
    for law in (Exponential(1 / 3), Exponential(0.25), Weibull(2.0, 1.5)):
        sup = law.mgf_domain_sup if math.isfinite(law.mgf_domain_sup) else 1.0
        for s in (0.1 * sup, 0.5 * sup, 0.9 * sup):
            h = 1e-5 * s
            fd = (law.mgf(s + h) - law.mgf(s - h)) / (2 * h)
            mgf_err = max(mgf_err, abs(law.mgf_prime(s) / fd - 1.0))
    # switch normalization and linearity
    f, g = (lambda a: np.exp(-a)), (lambda a: np.cos(3 * a))
    switch_err = 0.0
    for switch in SWITCHES.values():
        for j in (1, 2):
            switch_err = max(switch_err, abs(switch.expect_column(j, np.ones_like) - 1.0))
            lhs = switch.expect_column(j, lambda a: 2.5 * f(a) - 1.5 * g(a))
            rhs = 2.5 * switch.expect_column(j, f) - 1.5 * switch.expect_column(j, g)
            switch_err = max(switch_err, abs(lhs - rhs))
    # min/max complementarity
    comp_err = 0.0
    for name in ("fig4", "fig5"):
        model = builtin(name).model
        for u in (20.0, 200.0, 1000.0):
            singles = psi_single_subexp(model, 1, model.b1 * u) + psi_single_subexp(model, 2, model.b2 * u)
            comp_err = max(comp_err, abs((or_integral(model, u) + and_integral(model, u)) / singles - 1.0))
    # simultaneous ruin never beats union ruin
    rng = np.random.default_rng(20240613)
    ordered = sum(c_and_sim(m) <= c_vee(m) * (1 + 1e-9) for m in (random_rv_model(rng) for _ in range(50)))
    elapsed = time.perf_counter() - start
    ok = mgf_err <= 1e-4 and switch_err <= 1e-10 and comp_err <= 1e-5 and ordered == 50 and elapsed < SECONDS
    report(10, ok, f"mgf {mgf_err:.1e}, switch {switch_err:.1e}, complementarity {comp_err:.1e}, "
                   f"c_and_sim <= c_vee on {ordered}/50 models; {elapsed:.1f} s")
