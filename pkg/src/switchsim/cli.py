"""Command-line front end: ``switchsim check|asymptotics|simulate|figure``.

Exit codes: 0 ok, 2 configuration error, 3 net-profit condition violated,
4 numerical failure or a formula that does not apply to the model, 130 when
interrupted (after flushing partial simulation results).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import _svg
from .asymptotics_light import adjustment_coefficient, cramer_constant, light_report
from .asymptotics_rv import PowerLaw, psi_curves_rv
from .asymptotics_subexp import subexp_report, theta
from .errors import ConfigError, NetProfitViolated, NotRegVarying, NumericalError, SwitchSimError, ThetaZero, Unsupported
from .model import Model, Regime, check_net_profit, regime
from .montecarlo import PROBABILITIES, WORKLOAD_PROBABILITIES, McEstimate, estimate_workload, simulate_maxima
from .scenarios import FIGURE_NAMES, Scenario, builtin, comparison_scenarios, with_mc

EXIT_OK, EXIT_CONFIG, EXIT_NET_PROFIT, EXIT_NUMERIC, EXIT_INTERRUPTED = 0, 2, 3, 4, 130

ASYMPTOTIC_COLUMNS = ("u", "psi1_asym", "psi2_asym", "psi_or_asym", "psi_and_asym", "psi_andsim_asym", "bound_or")


# -- tables ------------------------------------------------------------------------------

def asymptotic_rows(model: Model, u_grid: Sequence[float]) -> List[Dict[str, Optional[float]]]:
    """One row per barrier; ``None`` marks a column with no asymptote for this regime.

    ``psi1_asym`` and ``psi2_asym`` are the single-server probabilities at the
    split barriers ``b1 u`` and ``b2 u``. Regularly varying models report the
    leading power laws.
    """
    u_grid = np.sort(np.asarray(u_grid, dtype=float))
    kind = regime(model)
    rows = []
    if kind is Regime.LIGHT:
        rep = light_report(model)
        for u in u_grid:
            rows.append({"u": u, "psi1_asym": rep.cc1 * math.exp(-rep.kappa1 * model.b1 * u),
                         "psi2_asym": rep.cc2 * math.exp(-rep.kappa2 * model.b2 * u),
                         "psi_or_asym": rep.psi_or(u), "psi_and_asym": None, "psi_andsim_asym": None,
                         "bound_or": rep.bounds(u)[2]})
    elif kind in (Regime.REG_VARYING, Regime.MIXED):
        coeffs = psi_curves_rv(model).coefficients

        def at(key, x):
            term = coeffs[key]
            return float(term(x)) if isinstance(term, PowerLaw) else None
        for u in u_grid:
            rows.append({"u": u, "psi1_asym": at("psi1", model.b1 * u), "psi2_asym": at("psi2", model.b2 * u),
                         "psi_or_asym": at("psi_or", u), "psi_and_asym": at("psi_and", u),
                         "psi_andsim_asym": at("psi_and_sim", u), "bound_or": None})
    else:
        rep = subexp_report(model, u_grid)
        for u in u_grid:
            rows.append({"u": u, "psi1_asym": rep.psi_single[0](model.b1 * u),
                         "psi2_asym": rep.psi_single[1](model.b2 * u), "psi_or_asym": rep.psi_or(u),
                         "psi_and_asym": rep.psi_and(u) if callable(rep.psi_and) else None,
                         "psi_andsim_asym": None, "bound_or": None})
    return rows


def simulation_columns(workload: bool) -> List[str]:
    cols = ["u"]
    for p in PROBABILITIES:
        cols += [f"{p}_est", f"{p}_se", f"{p}_censored"]
    cols.append("and_minus_product")
    if workload:
        for p in WORKLOAD_PROBABILITIES:
            cols += [f"w_{p}_est", f"w_{p}_se"]
        cols.append("duality_or_z")
    return cols


def simulation_rows(risk: Dict[float, Dict[str, McEstimate]],
                    work: Optional[Dict[float, Dict[str, McEstimate]]] = None) -> List[dict]:
    rows = []
    for u in sorted(risk):
        est = risk[u]
        row = {"u": u}
        for p in PROBABILITIES:
            row[f"{p}_est"] = est[p].p_hat
            row[f"{p}_se"] = est[p].std_err
            row[f"{p}_censored"] = est[p].censored_fraction
        row["and_minus_product"] = abs(est["psi_and"].p_hat - est["psi1"].p_hat * est["psi2"].p_hat)
        if work is not None:
            w = work[u]
            for p in WORKLOAD_PROBABILITIES:
                row[f"w_{p}_est"] = w[p].p_hat
                row[f"w_{p}_se"] = w[p].std_err
            se = math.hypot(est["psi_or"].std_err, w["psi_or"].std_err)
            diff = est["psi_or"].p_hat - w["psi_or"].p_hat
            row["duality_or_z"] = diff / se if se > 0 else (0.0 if diff == 0 else math.inf)
        rows.append(row)
    return rows


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(rows: List[dict], columns: Sequence[str], stream) -> None:
    """Dot decimals and LF line endings regardless of locale or platform."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])


def csv_text(rows: List[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    write_csv(rows, columns, buf)
    return buf.getvalue()


def _json_value(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else str(x)


def json_text(rows: List[dict], columns: Sequence[str]) -> str:
    return json.dumps([{c: _json_value(r.get(c)) for c in columns} for r in rows], indent=2) + "\n"


# -- commands ------------------------------------------------------------------------------

def check_report(model: Model) -> dict:
    net = check_net_profit(model)
    kind = regime(model)
    report = {"c_star": list(net.c_star), "regime": kind.value, "net_profit": net.ok,
              "net_profit_message": str(net), "kappa": None, "cramer": None, "theta": None, "notes": []}
    if not net.ok:
        return report
    if kind is Regime.LIGHT:
        try:
            kappas = [adjustment_coefficient(model, i) for i in (1, 2)]
            report["kappa"] = kappas
            report["cramer"] = [cramer_constant(model, i, k) for i, k in zip((1, 2), kappas)]
        except NumericalError as exc:
            report["notes"].append(f"no adjustment coefficient: {exc}")
    else:
        try:
            report["theta"] = theta(model)
        except ThetaZero:
            report["theta"] = "zero"
    return report


def _format_report(report: dict) -> str:
    lines = [f"regime: {report['regime']}",
             "c*: ({:.6g}, {:.6g})".format(*report["c_star"]),
             report["net_profit_message"]]
    if report["kappa"] is not None:
        lines.append("kappa: ({:.6g}, {:.6g})".format(*report["kappa"]))
        lines.append("Cramer constants: ({:.6g}, {:.6g})".format(*report["cramer"]))
    if report["theta"] is not None:
        t = report["theta"]
        lines.append(f"theta: {t}" if isinstance(t, str) else f"theta: {t:.6g}")
    lines += report["notes"]
    return "\n".join(lines) + "\n"


def cmd_check(scenario: Scenario, fmt: str, out) -> int:
    report = check_report(scenario.model)
    out.write(json.dumps(report, indent=2) + "\n" if fmt == "json" else _format_report(report))
    return EXIT_OK if report["net_profit"] else EXIT_NET_PROFIT


def cmd_asymptotics(scenario: Scenario) -> List[dict]:
    return asymptotic_rows(scenario.model, scenario.u_grid.values())


def run_simulation(scenario: Scenario, workload: bool):
    """Risk-side estimates (and the workload side on request); the flag reports an interrupt."""
    grid = scenario.u_grid.values()
    maxima = simulate_maxima(scenario.model, grid, scenario.mc)
    risk = {float(u): maxima.estimates(float(u)) for u in grid}
    work = None
    if workload and not maxima.interrupted:
        try:
            work = estimate_workload(scenario.model, grid, scenario.mc)
        except KeyboardInterrupt:
            return simulation_rows(risk), True
    return simulation_rows(risk, work), maxima.interrupted


SIM_SERIES = (("psi1", "Psi1(b1 u)"), ("psi2", "Psi2(b2 u)"), ("psi_or", "Psi_or"), ("psi_and", "Psi_and"))
ASYM_SERIES = (("psi1_asym", "asym Psi1"), ("psi2_asym", "asym Psi2"), ("psi_or_asym", "asym Psi_or"),
               ("psi_and_asym", "asym Psi_and"), ("bound_or", "Lundberg bound"))


def figure_series(sim_rows: List[dict], asym_rows: List[dict]) -> List[_svg.Series]:
    series = []
    u = [r["u"] for r in sim_rows]
    for key, label in SIM_SERIES:
        series.append(_svg.Series(f"MC {label}", u, [r[f"{key}_est"] for r in sim_rows], markers=True))
    ua = [r["u"] for r in asym_rows]
    for key, label in ASYM_SERIES:
        values = [r[key] for r in asym_rows]
        if all(v is not None for v in values):
            series.append(_svg.Series(label, ua, values))
    return series


def cmd_figure(name: str, out_dir: str, paths: Optional[int] = None, seed: Optional[int] = None,
               log=sys.stderr) -> List[str]:
    """Write the figure's data CSV and SVG; returns the written paths."""
    if name not in FIGURE_NAMES:
        raise ConfigError(f"unknown figure {name!r}; choose from {', '.join(FIGURE_NAMES)}", "figure")
    os.makedirs(out_dir, exist_ok=True)
    if name == "fig7":
        return _comparison_figure(out_dir, paths, seed, log)
    scenario = _override(builtin(name), paths, seed)
    asym = cmd_asymptotics(scenario)
    sim, interrupted = run_simulation(scenario, workload=False)
    merged = [{**a, **s} for a, s in zip(asym, sim)]
    columns = list(ASYMPTOTIC_COLUMNS) + simulation_columns(False)[1:]
    out = scenario.outputs[0]
    csv_path = os.path.join(out_dir, out.csv_path)
    _write(csv_path, csv_text(merged, columns))
    written = [csv_path]
    if interrupted:
        return written
    svg_path = os.path.join(out_dir, out.svg_path)
    _write(svg_path, _svg.render(figure_series(sim, asym), scenario.plot_scale, title=name))
    return written + [svg_path]


def _comparison_figure(out_dir, paths, seed, log) -> List[str]:
    """Simulated union and joint probabilities under the four mean-matched switches."""
    scenarios = comparison_scenarios()
    written = []
    for tail in ("heavy", "light"):
        runs = {k: v for k, v in scenarios.items() if k.startswith(f"fig7_{tail}_")}
        columns, merged, series, scale = ["u"], None, [], None
        for name, scenario in runs.items():
            scenario = _override(scenario, paths, seed)
            scale = scenario.plot_scale
            log.write(f"{name}: {scenario.mc.n_paths} paths\n")
            rows, interrupted = run_simulation(scenario, workload=False)
            if interrupted:
                raise KeyboardInterrupt
            switch = name.rsplit("_", 1)[1]
            if merged is None:
                merged = [{"u": r["u"]} for r in rows]
            for key in ("psi_or", "psi_and"):
                columns += [f"{switch}_{key}_est", f"{switch}_{key}_se"]
                for m, r in zip(merged, rows):
                    m[f"{switch}_{key}_est"] = r[f"{key}_est"]
                    m[f"{switch}_{key}_se"] = r[f"{key}_se"]
                series.append(_svg.Series(f"{switch} {key}", [r["u"] for r in rows],
                                          [r[f"{key}_est"] for r in rows], markers=(key == "psi_and")))
        csv_path = os.path.join(out_dir, f"fig7_{tail}.csv")
        svg_path = os.path.join(out_dir, f"fig7_{tail}.svg")
        _write(csv_path, csv_text(merged, columns))
        _write(svg_path, _svg.render(series, scale, title=f"fig7 ({tail} tails)"))
        written += [csv_path, svg_path]
    return written


# -- plumbing ------------------------------------------------------------------------------

def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _override(scenario: Scenario, paths: Optional[int], seed: Optional[int]) -> Scenario:
    changes = {}
    if paths is not None:
        changes["n_paths"] = paths
    if seed is not None:
        changes["seed"] = seed
    try:
        return with_mc(scenario, **changes) if changes else scenario
    except ValueError as exc:
        raise ConfigError(str(exc), "mc") from None


def load_scenario(args, validate: bool = True) -> Scenario:
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror}", args.config) from None
        scenario = Scenario.from_json(text, validate=validate)
    else:
        scenario = builtin(args.scenario)
        if not validate:
            scenario = replace(scenario, model=scenario.model.with_(validate=False))
    return _override(scenario, args.paths, args.seed)


def _emit(rows, columns, args, default_name) -> None:
    text = json_text(rows, columns) if args.format == "json" else csv_text(rows, columns)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        ext = "json" if args.format == "json" else "csv"
        path = os.path.join(args.out, f"{default_name}.{ext}")
        _write(path, text)
        sys.stderr.write(f"wrote {path}\n")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="switchsim", description="Two-server random-switch ruin and exceedance "
                                     "probabilities: asymptotics and Monte Carlo.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("check", "validate a model and print its regime and constants"),
                       ("asymptotics", "tabulate the asymptotic curves on the barrier grid"),
                       ("simulate", "Monte Carlo estimates on the barrier grid")):
        p = sub.add_parser(name, help=text)
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument("--config", help="scenario JSON file")
        source.add_argument("--scenario", help="built-in scenario name (fig2 ... fig6)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--paths", type=int, default=None, help="number of Monte Carlo paths")
        p.add_argument("--out", default=None, help="output directory (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--workload", action="store_true", help="add workload-side estimates (simulate)")
    p = sub.add_parser("figure", help="write a figure's data CSV and SVG plot")
    p.add_argument("name", help=f"one of {', '.join(FIGURE_NAMES)}")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--paths", type=int, default=None)
    p.add_argument("--out", default=".")
    return parser


def _dispatch(args) -> int:
    if args.command == "check":
        return cmd_check(load_scenario(args, validate=False), args.format, sys.stdout)
    if args.command == "asymptotics":
        scenario = load_scenario(args)
        _emit(cmd_asymptotics(scenario), ASYMPTOTIC_COLUMNS, args, f"{scenario.name}_asymptotics")
        return EXIT_OK
    if args.command == "simulate":
        scenario = load_scenario(args)
        rows, interrupted = run_simulation(scenario, args.workload)
        _emit(rows, simulation_columns(args.workload and not interrupted), args, f"{scenario.name}_simulate")
        if interrupted:
            sys.stderr.write("interrupted: partial results written\n")
            return EXIT_INTERRUPTED
        return EXIT_OK
    for path in cmd_figure(args.name, args.out, args.paths, args.seed):
        sys.stderr.write(f"wrote {path}\n")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except NetProfitViolated as exc:
        sys.stderr.write(f"model invalid: {exc}\n")
        return EXIT_NET_PROFIT
    except (NumericalError, NotRegVarying, Unsupported) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except KeyboardInterrupt:
        sys.stderr.write("interrupted\n")
        return EXIT_INTERRUPTED
    except SwitchSimError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
