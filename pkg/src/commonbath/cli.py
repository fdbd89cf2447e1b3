"""Command line interface.

    commonbath run --scenario fig1 [--gamma 0.1] [--g 0,0.2,1.0] [--out DIR]
    commonbath compare --scenario fig1
    commonbath run --scenario custom --init "+-+" --solver jump --tmax 50 --points 501

Options may also come from a flat key=value config file (--config FILE);
explicit flags override file entries.  Exit codes: 0 success, 2 configuration
error, 3 numerical failure (including solver disagreement in ``compare``).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .errors import InvalidInputError, NumericalFailureError
from .scenarios import (
    SCENARIO_NAMES,
    SOLVER_NAMES,
    compare_solvers,
    default_config,
    run_scenario,
    write_outputs,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise InvalidInputError(f"cannot parse number list {text!r}")


def read_config_file(path: str) -> dict[str, str]:
    options: dict[str, str] = {}
    try:
        with open(path) as handle:
            for lineno, raw in enumerate(handle, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise InvalidInputError(
                        f"{path}:{lineno}: expected 'key = value', got {line!r}"
                    )
                options[key.strip()] = value.strip()
    except OSError as exc:
        raise InvalidInputError(f"cannot read config file {path}: {exc}")
    return options


_FILE_KEYS = (
    "scenario", "n_qubits", "gamma", "g", "p", "tmax", "points", "init",
    "solver", "dt", "out",
)


def resolve_config(args: argparse.Namespace):
    file_options = read_config_file(args.config) if args.config else {}
    for key in file_options:
        if key not in _FILE_KEYS:
            raise InvalidInputError(f"unknown config key {key!r}")

    scenario = args.scenario or file_options.get("scenario")
    if scenario is None:
        raise InvalidInputError("a scenario is required (--scenario or config file)")
    cfg = default_config(scenario)

    def pick(flag_value, key):
        return flag_value if flag_value is not None else file_options.get(key)

    gamma = pick(args.gamma, "gamma")
    if gamma is not None:
        cfg = replace(cfg, gamma=float(gamma))
    g = pick(args.g, "g")
    if g is not None:
        cfg = replace(cfg, g_values=_parse_float_list(str(g)))
    p = pick(args.p, "p")
    if p is not None:
        cfg = replace(cfg, p_values=_parse_float_list(str(p)))
    tmax = pick(args.tmax, "tmax")
    if tmax is not None:
        cfg = replace(cfg, t_max=float(tmax))
    points = pick(args.points, "points")
    if points is not None:
        cfg = replace(cfg, t_points=int(points))
    dt = pick(args.dt, "dt")
    if dt is not None:
        cfg = replace(cfg, dt=float(dt))
    solver = pick(args.solver, "solver")
    if solver is not None:
        cfg = replace(cfg, solver=str(solver))
    init = pick(args.init, "init")
    n_qubits = pick(args.n_qubits, "n_qubits")
    if init is not None:
        init = str(init)
        inferred = len(init) if all(c in "+-" for c in init) else None
        if n_qubits is not None:
            cfg = replace(cfg, n_qubits=int(n_qubits))
        elif inferred is not None:
            cfg = replace(cfg, n_qubits=inferred)
        cfg = replace(cfg, init=init)
    elif n_qubits is not None:
        cfg = replace(cfg, n_qubits=int(n_qubits))

    out = pick(args.out, "out")
    return cfg.validate(), out if out is not None else "."


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commonbath",
        description="Entanglement dynamics of qubits decaying into a common environment",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "run a scenario and write CSV curve data"),
        ("compare", "run all solvers on a scenario and report deviations"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--scenario", choices=SCENARIO_NAMES, default=None)
        cmd.add_argument("--config", help="flat key=value config file")
        cmd.add_argument("--gamma", type=float, default=None, help="collective decay rate")
        cmd.add_argument("--g", default=None, help="comma-separated coupling values")
        cmd.add_argument("--p", default=None, help="comma-separated Werner fidelities")
        cmd.add_argument("--tmax", type=float, default=None)
        cmd.add_argument("--points", type=int, default=None)
        cmd.add_argument("--dt", type=float, default=None, help="integrator step size")
        cmd.add_argument("--solver", choices=SOLVER_NAMES, default=None)
        cmd.add_argument("--init", default=None,
                         help="initial state: +/- string, werner+:P, werner-:P, random:SEED")
        cmd.add_argument("--n-qubits", dest="n_qubits", type=int, default=None)
        cmd.add_argument("--out", default=None, help="output directory (default: .)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, out_dir = resolve_config(args)
        if args.command == "run":
            table = run_scenario(cfg)
            csv_path, meta_path = write_outputs(cfg, table, out_dir)
            print(f"wrote {csv_path} and {meta_path}")
            return EXIT_OK
        report = compare_solvers(cfg)
        for line in report.lines():
            print(line)
        return EXIT_OK if report.passed else EXIT_NUMERICAL
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
