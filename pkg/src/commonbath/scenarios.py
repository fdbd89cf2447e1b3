"""Scenario runner: turns named parameter sets into machine-readable curves.

The five stock scenarios cover the model's characteristic plots:

fig1  concurrence of |+-> under gamma = 0.1 for coupling g in {0, 0.2, 1}
fig2  coupling-induced extra concurrence dC = C(g) - C(g=0), with and
      without dissipation
fig3  concurrence of the Werner(+) family over a grid of fidelities p
fig4  same for Werner(-)
fig5  one-vs-rest negativities N_A, N_B, N_C of |+-+> for g in {0, 0.2, 1}

``custom`` runs a user-specified initial state.  Output is a CSV file (12
significant digits) plus a flat key=value metadata sidecar; identical
configurations produce byte-identical files.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .closedform import ClosedFormSolution, Scenario, rho_exact
from .dynamics import jump_solve, liouvillian_solve, rk4_solve
from .entanglement import concurrence, negativity
from .errors import InvalidInputError
from .hilbert import DensityMatrix, ModelParams, product_state, werner_state

SCENARIO_NAMES = ("fig1", "fig2", "fig3", "fig4", "fig5", "custom")
SOLVER_NAMES = ("jump", "rk4", "liouvillian", "analytic")
COMPARE_TOL = 1e-5

_WERNER_P_GRID = tuple(np.linspace(-1 / 3, 1, 29))


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    n_qubits: int
    gamma: float
    g_values: tuple[float, ...]
    p_values: tuple[float, ...]
    t_max: float
    t_points: int
    init: str
    solver: str
    dt: float

    def validate(self) -> "ScenarioConfig":
        if self.scenario not in SCENARIO_NAMES:
            raise InvalidInputError(f"unknown scenario {self.scenario!r}")
        if self.solver not in SOLVER_NAMES:
            raise InvalidInputError(f"unknown solver {self.solver!r}")
        if self.t_points < 2:
            raise InvalidInputError("t_points must be at least 2")
        if self.t_max <= 0:
            raise InvalidInputError("t_max must be positive")
        if self.dt <= 0:
            raise InvalidInputError("dt must be positive")
        if not self.g_values:
            raise InvalidInputError("at least one g value is required")
        if self.scenario in ("fig3", "fig4") and not self.p_values:
            raise InvalidInputError("Werner scenarios need a p grid")
        return self

    def time_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.t_points)


def default_config(scenario: str) -> ScenarioConfig:
    base = ScenarioConfig(
        scenario=scenario,
        n_qubits=2,
        gamma=0.1,
        g_values=(0.0, 0.2, 1.0),
        p_values=(),
        t_max=50.0,
        t_points=501,
        init="+-",
        solver="jump",
        dt=1e-3,
    )
    if scenario == "fig2":
        return replace(base, g_values=(1.0,))
    if scenario == "fig3":
        return replace(base, g_values=(0.0,), p_values=_WERNER_P_GRID, init="werner+")
    if scenario == "fig4":
        return replace(base, g_values=(0.0,), p_values=_WERNER_P_GRID, init="werner-")
    if scenario == "fig5":
        return replace(base, n_qubits=3, init="+-+")
    if scenario == "custom":
        return replace(base, g_values=(1.0,))
    if scenario != "fig1":
        raise InvalidInputError(f"unknown scenario {scenario!r}")
    return base


def _fmt(x: float) -> str:
    return f"{x:g}"


def parse_init(text: str, n_qubits: int) -> DensityMatrix:
    """Initial-state specifier: a +/- string, werner+/-:p, or random:SEED."""
    if text and all(c in "+-" for c in text):
        if len(text) != n_qubits:
            raise InvalidInputError(
                f"init {text!r} has {len(text)} qubits, config says {n_qubits}"
            )
        return product_state(text)
    if text.startswith("werner+") or text.startswith("werner-"):
        sign = text[6]
        _, _, p_part = text.partition(":")
        if not p_part:
            raise InvalidInputError(f"init {text!r} is missing the fidelity, e.g. werner+:0.8")
        if n_qubits != 2:
            raise InvalidInputError("Werner states are two-qubit states")
        return werner_state(float(p_part), sign)
    if text.startswith("random:"):
        seed = int(text.partition(":")[2])
        rng = np.random.default_rng(seed)
        dim = 2 ** n_qubits
        vector = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        vector /= np.linalg.norm(vector)
        return DensityMatrix(np.outer(vector, vector.conj()), "product")
    raise InvalidInputError(f"cannot parse initial state {text!r}")


def closed_form_for(init: str, params: ModelParams) -> ClosedFormSolution | None:
    """The matching closed-form scenario, or None when no formula exists."""
    if init == "+-" and params.n_qubits == 2:
        return ClosedFormSolution(Scenario.TWO_QUBIT_PLUS_MINUS, params)
    if init == "+-+" and params.n_qubits == 3:
        return ClosedFormSolution(Scenario.THREE_QUBIT_PMP, params)
    if init.startswith("werner") and params.n_qubits == 2:
        sign = init[6]
        p = float(init.partition(":")[2])
        scenario = Scenario.WERNER_PLUS if sign == "+" else Scenario.WERNER_MINUS
        return ClosedFormSolution(scenario, params, p)
    return None


def solve_trajectory(
    cfg: ScenarioConfig, g: float, gamma: float, init: str, solver: str
) -> list[np.ndarray]:
    """Product-basis states on the configured grid, by the requested solver."""
    params = ModelParams(cfg.n_qubits, g, gamma)
    grid = cfg.time_grid()
    if solver == "analytic":
        sol = closed_form_for(init, params)
        if sol is None:
            raise InvalidInputError(
                f"no closed-form solution for init {init!r} with {cfg.n_qubits} qubits"
            )
        return [rho_exact(sol, t).matrix for t in grid]
    rho0 = parse_init(init, cfg.n_qubits)
    if solver == "jump":
        return [state.matrix for _, state in jump_solve(params, rho0, grid, dt=cfg.dt)]
    if solver == "rk4":
        return [state.matrix for state in rk4_solve(params, rho0, grid, dt=cfg.dt)]
    if solver == "liouvillian":
        return [state.matrix for state in liouvillian_solve(params, rho0, grid)]
    raise InvalidInputError(f"unknown solver {solver!r}")


@dataclass(frozen=True)
class CurveSpec:
    """One trajectory of a scenario and the measure columns it produces."""

    g: float
    gamma: float
    init: str
    columns: tuple[str, ...]
    measures: tuple[str, ...]  # "C" | "NA" | "NB" | "NC"


def scenario_curves(cfg: ScenarioConfig) -> list[CurveSpec]:
    if cfg.scenario in ("fig3", "fig4"):
        sign = "+" if cfg.scenario == "fig3" else "-"
        return [
            CurveSpec(
                g=cfg.g_values[0],
                gamma=cfg.gamma,
                init=f"werner{sign}:{p:.12g}",
                columns=(f"C_p{_fmt(p)}",),
                measures=("C",),
            )
            for p in cfg.p_values
        ]
    if cfg.n_qubits == 3:
        return [
            CurveSpec(
                g=g,
                gamma=cfg.gamma,
                init=cfg.init,
                columns=tuple(f"N{part}_g{_fmt(g)}" for part in "ABC"),
                measures=("NA", "NB", "NC"),
            )
            for g in cfg.g_values
        ]
    return [
        CurveSpec(
            g=g,
            gamma=cfg.gamma,
            init=cfg.init,
            columns=(f"C_g{_fmt(g)}",),
            measures=("C",),
        )
        for g in cfg.g_values
    ]


def _measure(states: list[np.ndarray], which: str) -> np.ndarray:
    if which == "C":
        return np.array([concurrence(s) for s in states])
    site = {"NA": 1, "NB": 2, "NC": 3}[which]
    return np.array([negativity(s, site) for s in states])


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    values: np.ndarray  # (t_points, len(columns))

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.columns.index(name)]

    def write_csv(self, path: Path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(self.columns)
            for row in self.values:
                writer.writerow([f"{x:.12g}" for x in row])


def run_scenario(cfg: ScenarioConfig) -> ResultTable:
    """Compute the scenario's measure columns on the configured time grid."""
    cfg.validate()
    grid = cfg.time_grid()
    columns: list[str] = ["t"]
    data: list[np.ndarray] = [grid]

    if cfg.scenario == "fig2":
        gammas = (cfg.gamma, 0.0) if cfg.gamma != 0.0 else (0.0,)
        for gamma in gammas:
            on = solve_trajectory(cfg, cfg.g_values[0], gamma, cfg.init, cfg.solver)
            off = solve_trajectory(cfg, 0.0, gamma, cfg.init, cfg.solver)
            delta = _measure(on, "C") - _measure(off, "C")
            columns.append(f"dC_gamma{_fmt(gamma)}")
            data.append(delta)
    else:
        for curve in scenario_curves(cfg):
            states = solve_trajectory(cfg, curve.g, curve.gamma, curve.init, cfg.solver)
            for column, measure in zip(curve.columns, curve.measures):
                columns.append(column)
                data.append(_measure(states, measure))

    return ResultTable(tuple(columns), np.column_stack(data))


def write_outputs(cfg: ScenarioConfig, table: ResultTable, out_dir) -> tuple[Path, Path]:
    """Write ``<scenario>.csv`` and its ``.meta`` sidecar; returns both paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{cfg.scenario}.csv"
    meta_path = out / f"{cfg.scenario}.meta"
    table.write_csv(csv_path)
    meta = {
        "scenario": cfg.scenario,
        "n_qubits": str(cfg.n_qubits),
        "gamma": f"{cfg.gamma:.12g}",
        "g_values": ",".join(f"{g:.12g}" for g in cfg.g_values),
        "p_values": ",".join(f"{p:.12g}" for p in cfg.p_values),
        "t_max": f"{cfg.t_max:.12g}",
        "t_points": str(cfg.t_points),
        "init": cfg.init,
        "solver": cfg.solver,
        "dt": f"{cfg.dt:.12g}",
    }
    with open(meta_path, "w") as handle:
        for key in sorted(meta):
            handle.write(f"{key} = {meta[key]}\n")
    return csv_path, meta_path


@dataclass(frozen=True)
class ComparisonEntry:
    curve: str
    solver_a: str
    solver_b: str
    max_deviation: float


@dataclass(frozen=True)
class ComparisonReport:
    entries: tuple[ComparisonEntry, ...]
    analytic_missing: tuple[str, ...]
    tolerance: float

    @property
    def max_deviation(self) -> float:
        return max((e.max_deviation for e in self.entries), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            flag = "ok" if e.max_deviation <= self.tolerance else "FAIL"
            out.append(
                f"{e.curve}: {e.solver_a} vs {e.solver_b}: "
                f"max |drho| = {e.max_deviation:.3e} [{flag}]"
            )
        for curve in self.analytic_missing:
            out.append(f"{curve}: analytic: not available")
        out.append(f"overall max deviation {self.max_deviation:.3e} "
                   f"({'PASS' if self.passed else 'FAIL'} at {self.tolerance:g})")
        return out


def compare_solvers(cfg: ScenarioConfig, tolerance: float = COMPARE_TOL) -> ComparisonReport:
    """Run every solver on each curve and report pairwise state deviations."""
    cfg.validate()
    curves: list[tuple[str, float, float, str]] = []
    if cfg.scenario == "fig2":
        gammas = (cfg.gamma, 0.0) if cfg.gamma != 0.0 else (0.0,)
        for gamma in gammas:
            for g in (cfg.g_values[0], 0.0):
                curves.append((f"gamma{_fmt(gamma)}_g{_fmt(g)}", g, gamma, cfg.init))
    else:
        for curve in scenario_curves(cfg):
            label = curve.columns[0].split("_", 1)[1] if "_" in curve.columns[0] else curve.columns[0]
            curves.append((label, curve.g, curve.gamma, curve.init))

    entries: list[ComparisonEntry] = []
    missing: list[str] = []
    for label, g, gamma, init in curves:
        params = ModelParams(cfg.n_qubits, g, gamma)
        solvers = ["jump", "rk4", "liouvillian"]
        if closed_form_for(init, params) is not None:
            solvers.append("analytic")
        else:
            missing.append(label)
        trajectories = {
            name: solve_trajectory(cfg, g, gamma, init, name) for name in solvers
        }
        for i, name_a in enumerate(solvers):
            for name_b in solvers[i + 1:]:
                dev = max(
                    float(np.max(np.abs(a - b)))
                    for a, b in zip(trajectories[name_a], trajectories[name_b])
                )
                entries.append(ComparisonEntry(label, name_a, name_b, dev))
    return ComparisonReport(tuple(entries), tuple(missing), tolerance)
