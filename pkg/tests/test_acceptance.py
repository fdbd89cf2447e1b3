"""End-to-end acceptance suite.

One test per shipping criterion, each at its stated tolerance, each printing
a PASS line (run with ``pytest -s`` to see them like a checklist).  These are
the package's exit criteria; the per-module suites cover the finer grain.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from commonbath.closedform import (
    ClosedFormSolution,
    Scenario,
    concurrence_exact,
    rho_exact,
    rho_steady,
    steady_concurrence_werner,
)
from commonbath.dynamics import (
    jump_solve,
    lindblad_generator,
    lindblad_generator_individual,
    liouvillian_solve,
    rk4_solve,
    steady_state,
)
from commonbath.entanglement import (
    cn_bound_check,
    concurrence,
    concurrence_via_sqrtm,
    negativity,
)
from commonbath.hilbert import (
    DensityMatrix,
    ModelParams,
    collective_basis,
    product_state,
    werner_state,
)
from commonbath.linalg import kron, max_abs_diff

from conftest import random_density, random_separable, random_unitary

GAMMA = 0.1
GRID = np.linspace(0.0, 50.0, 501)
P_VALUES = (-1 / 3, 0.0, 1 / 3, 0.6, 1.0)


def passline(number, text):
    print(f"\nACCEPTANCE {number}: PASS - {text}")


@pytest.fixture(scope="module")
def two_qubit_curves():
    """Jump-solver trajectories of |+-> for the three reference couplings."""
    curves = {}
    for g in (0.0, 0.2, 1.0):
        params = ModelParams(2, g, GAMMA)
        start = time.perf_counter()
        states = [s.matrix for _, s in jump_solve(params, product_state("+-"), GRID, dt=1e-3)]
        elapsed = time.perf_counter() - start
        curves[g] = (states, elapsed)
    return curves


@pytest.fixture(scope="module")
def three_qubit_curve():
    params = ModelParams(3, 1.0, GAMMA)
    return [s.matrix for _, s in jump_solve(params, product_state("+-+"), GRID, dt=1e-3)]


def test_criterion_01_exact_two_qubit_solution(two_qubit_curves):
    worst = 0.0
    slowest = 0.0
    for g, (states, elapsed) in two_qubit_curves.items():
        sol = ClosedFormSolution(Scenario.TWO_QUBIT_PLUS_MINUS, ModelParams(2, g, GAMMA))
        dev = max(
            max_abs_diff(state, rho_exact(sol, t).matrix)
            for t, state in zip(GRID, states)
        )
        worst = max(worst, dev)
        slowest = max(slowest, elapsed)
        assert dev <= 1e-6, f"g={g}: entrywise deviation {dev:.3e}"
        assert elapsed <= 10.0, f"g={g}: runtime {elapsed:.1f}s exceeds 10s"
    passline(1, f"jump solver matches the exact |+-> solution "
                f"(max dev {worst:.2e}, slowest curve {slowest:.2f}s)")


def test_criterion_02_concurrence_curve(two_qubit_curves):
    worst = 0.0
    for g, (states, _) in two_qubit_curves.items():
        sol = ClosedFormSolution(Scenario.TWO_QUBIT_PLUS_MINUS, ModelParams(2, g, GAMMA))
        dev = max(
            abs(concurrence(state) - concurrence_exact(sol, t))
            for t, state in zip(GRID, states)
        )
        worst = max(worst, dev)
        assert dev <= 1e-6, f"g={g}: concurrence deviation {dev:.3e}"
    params = ModelParams(2, 1.0, GAMMA)
    late = jump_solve(params, product_state("+-"), [0.0, 200 / GAMMA], dt=5e-3)
    c_infinity = concurrence(late[-1][1].matrix)
    assert abs(c_infinity - 0.5) <= 1e-4
    passline(2, f"concurrence curves match the closed form (max dev {worst:.2e}); "
                f"C(200/gamma) = {c_infinity:.6f}")


def test_criterion_03_werner_steady_concurrences():
    params = ModelParams(2, 1.0, GAMMA)
    worst = 0.0
    for sign in ("+", "-"):
        for p in P_VALUES:
            settled = steady_state(params, werner_state(p, sign))
            dev = abs(concurrence(settled.matrix) - steady_concurrence_werner(p, sign))
            worst = max(worst, dev)
            assert dev <= 1e-6, f"W{sign}, p={p}: deviation {dev:.3e}"
    passline(3, f"Werner steady concurrences (1-p)/4 and (1+3p)/4 reproduced "
                f"(max dev {worst:.2e})")


def test_criterion_04_sudden_death_and_revival():
    params = ModelParams(2, 1.0, GAMMA)
    grid = np.linspace(0.0, 60.0, 1201)
    run = jump_solve(params, werner_state(0.8, "+"), grid, dt=2e-3)
    values = np.array([concurrence(state.matrix) for _, state in run])
    dead = values <= 1e-9
    assert values[0] > 0.69  # starts entangled at (3p-1)/2
    assert dead.any(), "no zero-concurrence interval found"
    first = int(np.argmax(dead))
    last = len(dead) - 1 - int(np.argmax(dead[::-1]))
    t1, t2 = grid[first], grid[last]
    assert 0.0 < t1 < t2 < grid[-1]
    assert np.all(values[last + 1:] > 1e-9), "no revival after the dead interval"
    passline(4, f"entanglement vanishes on [{t1:.2f}, {t2:.2f}] and revives afterwards")


def test_criterion_05_three_qubit_exact_solution(three_qubit_curve):
    params = ModelParams(3, 1.0, GAMMA)
    sol = ClosedFormSolution(Scenario.THREE_QUBIT_PMP, params)
    dev = max(
        max_abs_diff(state, rho_exact(sol, t).matrix)
        for t, state in zip(GRID, three_qubit_curve)
    )
    assert dev <= 1e-6, f"entrywise deviation {dev:.3e}"
    edge_mismatch = max(
        abs(negativity(state, 1) - negativity(state, 3)) for state in three_qubit_curve
    )
    assert edge_mismatch <= 1e-9
    late = jump_solve(params, product_state("+-+"), [0.0, 200 / GAMMA], dt=5e-3)
    steady_dev = max_abs_diff(late[-1][1].matrix, rho_steady(sol).matrix)
    assert steady_dev <= 1e-6
    passline(5, f"three-qubit solution matches the closed form (dev {dev:.2e}), "
                f"N_A = N_C (max gap {edge_mismatch:.1e}), steady dev {steady_dev:.2e}")


def test_criterion_06_solver_triangle(rng):
    grid = np.linspace(0.0, 50.0, 6)
    worst = 0.0
    cases = [(2, 5e-3, 20), (3, 4e-3, 10)]
    for n, dt, count in cases:
        params = ModelParams(n, 1.0, GAMMA)
        for _ in range(count):
            rho0 = DensityMatrix(random_density(rng, 2 ** n))
            runs = {
                "jump": [s.matrix for _, s in jump_solve(params, rho0, grid, dt=dt)],
                "rk4": [s.matrix for s in rk4_solve(params, rho0, grid, dt=dt)],
                "liouvillian": [s.matrix for s in liouvillian_solve(params, rho0, grid)],
            }
            names = list(runs)
            for i, a in enumerate(names):
                for b in names[i + 1:]:
                    dev = max(
                        max_abs_diff(x, y) for x, y in zip(runs[a], runs[b])
                    )
                    worst = max(worst, dev)
                    assert dev <= 1e-6, f"N={n}: {a} vs {b} deviate by {dev:.3e}"
    passline(6, f"jump, RK4 and Liouvillian exponential agree pairwise on random "
                f"states (max dev {worst:.2e})")


def test_criterion_07_decoherence_free_suite(rng):
    grid = np.linspace(0.0, 100.0, 5)
    worst = 0.0

    def initial_states(n):
        cb = collective_basis(n)
        if n == 2:
            labels = [(1, -1), (0, 0)]
        else:
            labels = [(1, 1.5, -1.5), (0, 0.5, -0.5), (1, 0.5, -0.5)]
        columns = [cb.column(label) for label in labels]
        if n == 3:
            for _ in range(3):
                amp = rng.standard_normal(2) + 1j * rng.standard_normal(2)
                amp /= np.linalg.norm(amp)
                columns.append(amp[0] * cb.column((0, 0.5, -0.5)) + amp[1] * cb.column((1, 0.5, -0.5)))
        return [np.outer(c, c.conj()) for c in columns]

    for n in (2, 3):
        params = ModelParams(n, 1.0, GAMMA)
        for rho in initial_states(n):
            rho0 = DensityMatrix(rho)
            trajectories = [
                [s.matrix for _, s in jump_solve(params, rho0, grid, dt=1e-2)],
                [s.matrix for s in rk4_solve(params, rho0, grid, dt=1e-2)],
                [s.matrix for s in liouvillian_solve(params, rho0, grid)],
            ]
            for trajectory in trajectories:
                dev = max(max_abs_diff(state, rho) for state in trajectory)
                worst = max(worst, dev)
                assert dev <= 1e-8, f"N={n}: dark state drifted by {dev:.3e}"
    passline(7, f"all dark states and j=1/2 superpositions are stationary "
                f"under every solver (max drift {worst:.2e})")


def test_criterion_08_generator_equivalence(rng):
    worst = 0.0
    for n in (2, 3):
        params = ModelParams(n, 1.0, GAMMA)
        for _ in range(50):
            rho = random_density(rng, 2 ** n)
            dev = max_abs_diff(
                lindblad_generator(params, rho),
                lindblad_generator_individual(params, rho),
            )
            worst = max(worst, dev)
            assert dev <= 1e-10
    passline(8, f"collective and per-qubit generator forms agree entrywise "
                f"(max dev {worst:.2e})")


def test_criterion_09_measure_properties(rng):
    route_dev = 0.0
    for _ in range(500):
        rho = random_density(rng, 4)
        route_dev = max(route_dev, abs(concurrence(rho) - concurrence_via_sqrtm(rho)))
    assert route_dev <= 1e-8

    for _ in range(1000):
        assert cn_bound_check(random_density(rng, 4))[2]

    for _ in range(200):
        assert negativity(random_separable(rng, 2), 1) == 0.0

    lu_dev = 0.0
    for _ in range(200):
        rho = random_density(rng, 4)
        u = kron(random_unitary(rng, 2), random_unitary(rng, 2))
        rotated = u @ rho @ u.conj().T
        lu_dev = max(lu_dev, abs(concurrence(rho) - concurrence(rotated)))
        lu_dev = max(lu_dev, abs(negativity(rho, 1) - negativity(rotated, 1)))
        assert lu_dev <= 1e-9
    passline(9, f"concurrence routes agree ({route_dev:.2e}), C-N bound holds on 1000 "
                f"states, separable negativity is exactly 0, local-unitary "
                f"invariance ({lu_dev:.2e})")


def test_criterion_10_undamped_coherent_limit(two_qubit_curves):
    # without dissipation the coupling-induced concurrence is |sin 2gt| ...
    params = ModelParams(2, 1.0, 0.0)
    grid = np.linspace(0.0, 10.0, 20001)
    on = [s.matrix for _, s in jump_solve(params, product_state("+-"), grid, dt=1e-3)]
    off = [s.matrix for _, s in jump_solve(ModelParams(2, 0.0, 0.0), product_state("+-"), grid, dt=1e-3)]
    delta = np.array([concurrence(a) - concurrence(b) for a, b in zip(on, off)])
    dev = np.max(np.abs(delta - np.abs(np.sin(2 * grid))))
    assert dev <= 1e-8

    # ... oscillating at 2g: interior minima spaced by pi/(2g)
    minima = [
        i for i in range(1, len(grid) - 1)
        if delta[i] < delta[i - 1] and delta[i] <= delta[i + 1] and delta[i] < 0.1
    ]
    spacings = np.diff(grid[minima])
    assert len(spacings) >= 4
    assert np.max(np.abs(spacings - math.pi / 2)) <= 1e-3

    # with dissipation on, the oscillation has died down by t = 40
    on_damped, _ = two_qubit_curves[1.0]
    off_damped, _ = two_qubit_curves[0.0]
    tail = [
        abs(concurrence(a) - concurrence(b))
        for t, a, b in zip(GRID, on_damped, off_damped)
        if t >= 40.0
    ]
    assert max(tail) < 0.02
    passline(10, f"undamped dC equals |sin 2gt| (dev {dev:.2e}), zero spacing pi/2g, "
                 f"damped envelope at t>=40 is {max(tail):.4f} < 0.02")


def test_criterion_11_cli_determinism(tmp_path):
    def run(out):
        result = subprocess.run(
            [sys.executable, "-m", "commonbath.cli", "run", "--scenario", "fig1",
             "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0, result.stderr
        return (out / "fig1.csv").read_bytes(), (out / "fig1.meta").read_bytes()

    first = run(tmp_path / "a")
    second = run(tmp_path / "b")
    assert first == second
    passline(11, "two fig1 runs produced byte-identical CSV and metadata")
