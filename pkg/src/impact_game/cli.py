"""Command-line surface: every computation scriptable, deterministic output.

Subcommands: equilibrium, sweep, limits, continuous, montecarlo, tax,
verify.  Options may come from flags or from a key=value config file
(flags win).  CSV output uses '.' decimals, ',' separators, a header row
and LF line endings; JSON output is an object with a "meta" echo of the
full configuration and a "data" payload.  Floats are emitted with
shortest round-trip formatting, so files parse back bit-identically.

Exit codes: 0 success, 1 parameter/usage error, 2 internal numerical error
(including any tolerance breach found by `verify`).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .asymptotics import limit_bundle
from .closed_form import InternalConsistencyError, nu_closed_form, omega_closed_form
from .continuous_time import continuous_cost, continuous_equilibrium, fredholm_residual
from .costs import cost_decomposition, expected_cost
from .equilibrium import (
    SolverBreakdownError,
    dense_nu_omega,
    equilibrium_strategies,
    solve_nu,
    solve_omega,
)
from .model import GameParams, ParameterError
from .montecarlo import SimConfig, simulate_cost

THREADS_ENV = "IMPACT_GAME_THREADS"

_COMMANDS = ("equilibrium", "sweep", "limits", "continuous", "montecarlo", "tax", "verify")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation: command, model parameters, and I/O."""

    command: str
    rho: float = 1.0
    T: float = 1.0
    N: int = 50
    theta: float = 0.25
    x: float = 1.0
    y: float = 0.0
    n_list: tuple[int, ...] | None = None
    output_path: str | None = None
    format: str = "csv"
    samples: int = 10000
    seed: int = 0
    price_model: str = "constant_zero"
    walk_scale: float = 0.0
    curve_points: int = 0
    grid_points: int = 64
    grid: str = "small"

    def params(self) -> GameParams:
        return GameParams(rho=self.rho, T=self.T, N=self.N, theta=self.theta,
                          x=self.x, y=self.y)


def _parse_n_list(text: str) -> tuple[int, ...]:
    """Accept 'a:b', 'a:b:step', or comma-separated integers."""
    text = text.strip()
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) == 2:
            lo, hi, step = parts[0], parts[1], 1
        elif len(parts) == 3:
            lo, hi, step = parts
        else:
            raise ValueError(f"bad n-list range {text!r}")
        return tuple(range(lo, hi + 1, step))
    return tuple(int(p) for p in text.split(","))


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


_FIELD_TYPES = {
    "rho": float, "T": float, "N": int, "theta": float, "x": float, "y": float,
    "n_list": _parse_n_list, "output_path": str, "format": str,
    "samples": int, "seed": int, "price_model": str, "walk_scale": float,
    "curve_points": int, "grid_points": int, "grid": str,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are parameter errors: exit 1
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_config(argv) -> RunConfig:
    parser = _Parser(prog="impact-game", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="|".join(_COMMANDS))
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="key=value file; flags override it")
        p.add_argument("--rho", type=float, default=None)
        p.add_argument("--T", type=float, default=None)
        p.add_argument("--N", type=int, default=None)
        p.add_argument("--theta", type=float, default=None)
        p.add_argument("--x", type=float, default=None)
        p.add_argument("--y", type=float, default=None)
        p.add_argument("--output", dest="output_path", default=None)
        p.add_argument("--format", choices=("json", "csv"), default=None)
        if name == "sweep":
            p.add_argument("--n-list", dest="n_list", type=_parse_n_list, default=None)
        if name == "tax":
            p.add_argument("--n-list", dest="n_list", type=_parse_n_list, default=None)
        if name == "montecarlo":
            p.add_argument("--samples", type=int, default=None)
            p.add_argument("--seed", type=int, default=None)
            p.add_argument("--price-model", dest="price_model",
                           choices=("constant_zero", "random_walk"), default=None)
            p.add_argument("--walk-scale", dest="walk_scale", type=float, default=None)
        if name == "limits":
            p.add_argument("--curve-points", dest="curve_points", type=int, default=None)
        if name == "continuous":
            p.add_argument("--grid-points", dest="grid_points", type=int, default=None)
        if name == "verify":
            p.add_argument("--grid", choices=("small", "full"), default=None)
    ns = parser.parse_args(argv)

    merged: dict = {}
    if ns.config:
        for key, raw in _read_config_file(ns.config).items():
            if key not in _FIELD_TYPES:
                raise ParameterError(f"unknown config key {key!r}")
            merged[key] = _FIELD_TYPES[key](raw)
    for key in _FIELD_TYPES:
        flag_value = getattr(ns, key, None)
        if flag_value is not None:
            merged[key] = flag_value
    config = RunConfig(command=ns.command, **merged)
    if config.command == "sweep" and config.n_list is None:
        raise ParameterError("sweep requires --n-list (or n_list in the config file)")
    return config


def _normalize(value):
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return value


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(config: RunConfig, meta: dict, header: list[str], rows: list[list]) -> None:
    rows = [[_normalize(v) for v in row] for row in rows]
    if config.format == "json":
        payload = {
            "meta": {"version": __version__, **meta},
            "data": {"columns": header, "rows": rows},
        }
        text = json.dumps(payload, sort_keys=True) + "\n"
    else:
        lines = [",".join(header)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(config: RunConfig) -> dict:
    meta = asdict(config)
    if meta.get("n_list") is not None:
        meta["n_list"] = list(meta["n_list"])
    return meta


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}")


def _cmd_equilibrium(config: RunConfig) -> None:
    params = config.params()
    sol = equilibrium_strategies(params)
    dt = params.dt
    rows = [
        [k, k * dt, sol.v[k], sol.w[k], sol.xi_star[k], sol.eta_star[k]]
        for k in range(params.n_points)
    ]
    _emit(config, _meta(config), ["k", "t_k", "v_k", "w_k", "xi_k", "eta_k"], rows)


def _sweep_row(config: RunConfig, n: int) -> list:
    p = GameParams(rho=config.rho, T=config.T, N=n, theta=config.theta,
                   x=config.x, y=config.y)
    breakdown = cost_decomposition(p)
    bundle = limit_bundle(config.rho, config.T, config.x, config.y)
    if config.theta > 0.0:
        limit = bundle.cost_limit_pos
    else:
        limit = bundle.cost_limit_even if n % 2 == 0 else bundle.cost_limit_odd
    return [n, breakdown.cost_xi, breakdown.cost_eta, breakdown.total_cost,
            limit, abs(breakdown.cost_xi - limit),
            breakdown.tax_revenue, breakdown.taxation_cost]


def _cmd_sweep(config: RunConfig) -> None:
    n_list = list(config.n_list)
    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda n: _sweep_row(config, n), n_list))
    else:
        rows = [_sweep_row(config, n) for n in n_list]
    header = ["N", "cost_xi", "cost_eta", "total_cost", "limit", "abs_error",
              "tax_revenue", "taxation_cost"]
    _emit(config, _meta(config), header, rows)


def _cmd_limits(config: RunConfig) -> None:
    bundle = limit_bundle(config.rho, config.T, config.x, config.y)
    if config.curve_points > 0:
        ts = np.linspace(0.0, config.T, config.curve_points)
        header = ["t", "v_limit", "w_limit", "f_plus", "f_minus", "g_plus",
                  "g_minus", "phi_plus", "phi_minus", "psi_plus", "psi_minus"]
        rows = [
            [float(t), float(bundle.v_limit(t)), float(bundle.w_limit(t)),
             float(bundle.f_plus(t)), float(bundle.f_minus(t)),
             float(bundle.g_plus(t)), float(bundle.g_minus(t)),
             float(bundle.phi_plus(t)), float(bundle.phi_minus(t)),
             float(bundle.psi_plus(t)), float(bundle.psi_minus(t))]
            for t in ts
        ]
    else:
        header = ["quantity", "value"]
        rows = [
            ["cost_limit_pos", bundle.cost_limit_pos],
            ["cost_limit_even", bundle.cost_limit_even],
            ["cost_limit_odd", bundle.cost_limit_odd],
            ["tr_limit", bundle.tr_limit],
            ["tr_minus_tc_liminf", bundle.tr_minus_tc_liminf],
        ]
    _emit(config, _meta(config), header, rows)


def _cmd_continuous(config: RunConfig) -> None:
    X, Y = continuous_equilibrium(config.rho, config.T, config.x, config.y)
    report = fredholm_residual(config.rho, config.T, config.x, config.y,
                               config.theta, config.grid_points)
    rows = [
        ["jump_at_0", X.jump_at_0],
        ["jump_at_T_agent1", X.jump_at_T],
        ["jump_at_T_agent2", Y.jump_at_T],
        ["cost_agent1", continuous_cost(config.rho, config.T, config.x, config.y)],
        ["cost_agent2", continuous_cost(config.rho, config.T, config.y, config.x)],
        ["foc_constant_agent1", report.constant_estimate_agent1],
        ["foc_constant_agent2", report.constant_estimate_agent2],
        ["foc_max_abs_deviation", report.max_abs_deviation],
        ["foc_analytic_constant_agent1", report.analytic_constant_agent1],
        ["foc_analytic_constant_agent2", report.analytic_constant_agent2],
    ]
    _emit(config, _meta(config), ["quantity", "value"], rows)


def _cmd_montecarlo(config: RunConfig) -> None:
    params = config.params()
    sol = equilibrium_strategies(params)
    sim = SimConfig(n_samples=config.samples, seed=config.seed,
                    price_model=config.price_model, walk_scale=config.walk_scale)
    mean_xi, mean_eta, stderr_xi, stderr_eta = simulate_cost(
        params, sol.xi_star, sol.eta_star, sim)
    formula_xi = expected_cost(params, sol.xi_star, sol.eta_star)
    formula_eta = expected_cost(params, sol.eta_star, sol.xi_star)
    rows = [
        ["mean_cost_agent1", mean_xi],
        ["mean_cost_agent2", mean_eta],
        ["stderr_agent1", stderr_xi],
        ["stderr_agent2", stderr_eta],
        ["formula_cost_agent1", formula_xi],
        ["formula_cost_agent2", formula_eta],
        ["z_agent1", (mean_xi - formula_xi) / stderr_xi],
        ["z_agent2", (mean_eta - formula_eta) / stderr_eta],
    ]
    _emit(config, _meta(config), ["quantity", "value"], rows)


def _cmd_tax(config: RunConfig) -> None:
    n_list = list(config.n_list) if config.n_list else [config.N]
    rows = []
    for n in n_list:
        p = GameParams(rho=config.rho, T=config.T, N=n, theta=config.theta,
                       x=config.x, y=config.y)
        breakdown = cost_decomposition(p)
        rows.append([n, breakdown.tax_revenue, breakdown.taxation_cost])
    _emit(config, _meta(config), ["N", "tax_revenue", "taxation_cost"], rows)


_VERIFY_GRIDS = {
    "small": {"N": (2, 3, 5, 10, 50), "theta": (0.0, 0.05, 0.25, 1.0), "rhoT": (0.1, 1.0, 10.0)},
    "full": {"N": (2, 3, 5, 10, 50, 200), "theta": (0.0, 0.05, 0.24, 0.25, 1.0), "rhoT": (0.1, 1.0, 10.0)},
}


def _cmd_verify(config: RunConfig) -> None:
    """Cross-oracle consistency suite; raises on any tolerance breach."""
    grid = _VERIFY_GRIDS[config.grid]
    failures: list[str] = []

    def check(name: str, value: float, bound: float) -> None:
        status = "ok" if value <= bound else "FAIL"
        sys.stdout.write(f"{status:4s} {name}: {value:.3e} (bound {bound:.1e})\n")
        if value > bound:
            failures.append(name)

    for rhoT in grid["rhoT"]:
        for theta in grid["theta"]:
            for n in grid["N"]:
                p = GameParams(rho=rhoT, T=config.T, N=n, theta=theta, x=1.0, y=0.5)
                nu_s, om_s = solve_nu(p), solve_omega(p)
                nu_c, om_c = nu_closed_form(p), omega_closed_form(p)
                nu_d, om_d = dense_nu_omega(p)
                tag = f"N={n},theta={theta},rhoT={rhoT}"
                scale_nu = np.max(np.abs(nu_d))
                scale_om = np.max(np.abs(om_d))
                check(f"nu dense-vs-struct [{tag}]",
                      float(np.max(np.abs(nu_s - nu_d))) / scale_nu, 1e-8)
                check(f"nu closed-vs-struct [{tag}]",
                      float(np.max(np.abs(nu_c - nu_s))) / scale_nu, 1e-8)
                check(f"omega dense-vs-struct [{tag}]",
                      float(np.max(np.abs(om_s - om_d))) / scale_om, 1e-8)
                check(f"omega closed-vs-struct [{tag}]",
                      float(np.max(np.abs(om_c - om_s))) / scale_om, 1e-8)

                sol = equilibrium_strategies(p)
                g1 = np.max(np.abs(sol.xi_star)) + np.max(np.abs(sol.eta_star))
                check(f"foc deviation [{tag}]", sol.foc_deviation, 1e-9 * max(1.0, g1))
                breakdown = cost_decomposition(p)
                direct = expected_cost(p, sol.xi_star, sol.eta_star)
                check(f"cost decomposition [{tag}]",
                      abs(breakdown.cost_xi - direct) / max(1e-300, abs(direct)), 1e-9)

    for rhoT in grid["rhoT"]:
        report = fredholm_residual(rhoT, config.T, 1.0, 0.5, 0.25, 64)
        check(f"fredholm deviation [rhoT={rhoT}]", report.max_abs_deviation, 1e-10)
        cc = continuous_cost(rhoT, config.T, 1.0, 0.5)
        lim = limit_bundle(rhoT, config.T, 1.0, 0.5).cost_limit_pos
        check(f"continuous cost vs limit [rhoT={rhoT}]",
              abs(cc - lim) / max(1e-300, abs(lim)), 1e-10)

    if failures:
        raise InternalConsistencyError(f"{len(failures)} verification check(s) failed")
    sys.stdout.write("all verification checks passed\n")


def run(config: RunConfig) -> int:
    """Execute a resolved configuration; returns the process exit code."""
    handlers = {
        "equilibrium": _cmd_equilibrium,
        "sweep": _cmd_sweep,
        "limits": _cmd_limits,
        "continuous": _cmd_continuous,
        "montecarlo": _cmd_montecarlo,
        "tax": _cmd_tax,
        "verify": _cmd_verify,
    }
    try:
        handlers[config.command](config)
    except ParameterError as exc:
        sys.stderr.write(f"parameter error: {exc}\n")
        return 1
    except (SolverBreakdownError, InternalConsistencyError) as exc:
        sys.stderr.write(f"numerical error: {exc}\n")
        return 2
    return 0


def main(argv=None) -> None:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = build_config(argv)
    except ParameterError as exc:
        sys.stderr.write(f"parameter error: {exc}\n")
        raise SystemExit(1)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"parameter error: {exc}\n")
        raise SystemExit(1)
    raise SystemExit(run(config))


if __name__ == "__main__":
    main()
