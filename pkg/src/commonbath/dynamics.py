"""Dissipative dynamics of the collectively decaying register.

Three independent routes solve the same master equation

    drho/dt = -i[H_int, rho] + gamma/2 (2 J- rho J+ - J+J- rho - rho J+J-):

``jump_solve``
    Photon-counting decomposition rho = sum_n rho^(n).  The no-jump member
    rho^(0) evolves exactly through the non-Hermitian generator
    H_eff = H_int - (i gamma / 2) J+J- (matrix exponentials), while each
    rho^(n>=1) integrates its linear equation with classical RK4, fed by
    gamma J- rho^(n-1) J+.  The hierarchy terminates at the excitation count
    of the initial state because each jump removes one excitation.
``rk4_solve``
    Direct fixed-step RK4 integration of the master equation.
``liouvillian_solve``
    Exponentiation of the vectorized generator.

The jump hierarchy is propagated in the collective basis, where the no-jump
generator is block diagonal in the total-angular-momentum sectors; all
returned states are expressed in the product basis, which the entanglement
measures require.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import InvalidInputError, NumericalFailureError
from .hilbert import (
    DensityMatrix,
    ModelParams,
    collective_basis,
    collective_ops,
    density_matrix,
    embed,
    excitation_count,
    interaction_hamiltonian,
    pauli,
)
from .linalg import dagger, expm, null_space

TRACE_LEAK_TOL = 1e-6
STEADY_RESIDUAL_TOL = 1e-8
DEFAULT_JUMP_DT = 1e-3


@dataclass(frozen=True)
class JumpHierarchy:
    """Conditional matrices rho^(0)..rho^(k_max), labelled by emitted photons.

    The members are Hermitian and positive but not individually normalized;
    their traces are the photon-count probabilities and sum to one.
    """

    conditionals: tuple[np.ndarray, ...]
    k_max: int
    basis: str = "product"

    def total(self) -> np.ndarray:
        return sum(self.conditionals)

    def traces(self) -> list[float]:
        return [float(np.trace(c).real) for c in self.conditionals]


def effective_hamiltonian(params: ModelParams) -> np.ndarray:
    """Non-Hermitian no-jump generator H_int - (i gamma / 2) J+ J-."""
    jplus, jminus, _ = collective_ops(params.n_qubits)
    return interaction_hamiltonian(params) - 0.5j * params.gamma * (jplus @ jminus)


def _state_matrix(rho, params: ModelParams) -> tuple[np.ndarray, str]:
    if isinstance(rho, DensityMatrix):
        matrix, basis = np.asarray(rho.matrix, dtype=complex), rho.basis
    else:
        matrix, basis = np.asarray(rho, dtype=complex), "product"
    if matrix.shape != (params.dim, params.dim):
        raise InvalidInputError(
            f"state has shape {matrix.shape}, expected {(params.dim, params.dim)}"
        )
    return matrix, basis


def _product_matrix(rho, params: ModelParams) -> np.ndarray:
    matrix, basis = _state_matrix(rho, params)
    if basis == "collective":
        return collective_basis(params.n_qubits).to_product(matrix)
    return matrix


def lindblad_generator(params: ModelParams, rho) -> np.ndarray:
    """Right-hand side of the master equation in collective-operator form.

    Accepts a ``DensityMatrix`` (honouring its basis tag) or a plain product
    basis array; the derivative is returned in the same basis.
    """
    matrix, basis = _state_matrix(rho, params)
    jplus, jminus, _ = collective_ops(params.n_qubits)
    h_int = interaction_hamiltonian(params)
    if basis == "collective":
        cb = collective_basis(params.n_qubits)
        jplus, jminus, h_int = (
            cb.to_collective(jplus),
            cb.to_collective(jminus),
            cb.to_collective(h_int),
        )
    jpjm = jplus @ jminus
    out = -1j * (h_int @ matrix - matrix @ h_int)
    out += params.gamma * (jminus @ matrix @ jplus)
    out -= 0.5 * params.gamma * (jpjm @ matrix + matrix @ jpjm)
    return out


def lindblad_generator_individual(params: ModelParams, rho, cross_terms: bool = True) -> np.ndarray:
    """Master-equation right-hand side written with per-qubit operators.

    Includes the i != j terms through which the shared environment couples
    distinct qubits; ``cross_terms=False`` drops them, leaving independent
    single-qubit decay (useful to demonstrate that the singlet is protected
    only by the common environment).
    """
    matrix = _product_matrix(rho, params)
    n = params.n_qubits
    lowers = [embed(pauli("minus"), site, n) for site in range(1, n + 1)]
    raises_ = [embed(pauli("plus"), site, n) for site in range(1, n + 1)]
    h_int = interaction_hamiltonian(params)
    out = -1j * (h_int @ matrix - matrix @ h_int)
    for i in range(n):
        for j in range(n):
            if not cross_terms and i != j:
                continue
            pj_mi = raises_[j] @ lowers[i]
            out += 0.5 * params.gamma * (
                2.0 * lowers[i] @ matrix @ raises_[j]
                - pj_mi @ matrix
                - matrix @ pj_mi
            )
    if isinstance(rho, DensityMatrix) and rho.basis == "collective":
        return collective_basis(n).to_collective(out)
    return out


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization, so vec(A rho B) = (B^T kron A) vec(rho)."""
    return np.asarray(matrix).reshape(-1, order="F")


def unvec(vector: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(vector).reshape((dim, dim), order="F")


def liouvillian(params: ModelParams) -> np.ndarray:
    """The master equation as a dim^2 x dim^2 matrix on column-stacked states."""
    jplus, jminus, _ = collective_ops(params.n_qubits)
    h_int = interaction_hamiltonian(params)
    eye = np.eye(params.dim, dtype=complex)
    jpjm = jplus @ jminus
    out = -1j * (np.kron(eye, h_int) - np.kron(h_int.T, eye))
    out += params.gamma * np.kron(jplus.T, jminus)
    out -= 0.5 * params.gamma * (np.kron(eye, jpjm) + np.kron(jpjm.T, eye))
    return out


def _check_grid(t_grid) -> np.ndarray:
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise InvalidInputError("time grid must be a nonempty 1-d sequence")
    if abs(grid[0]) > 1e-12:
        raise InvalidInputError(f"time grid must start at 0, got {grid[0]}")
    if grid.size > 1 and np.min(np.diff(grid)) <= 0:
        raise InvalidInputError("time grid must be strictly increasing")
    return grid


def _substeps(span: float, dt: float) -> tuple[int, float]:
    n_sub = max(1, int(math.ceil(span / dt - 1e-9)))
    return n_sub, span / n_sub


def rk4_solve(params: ModelParams, rho0, t_grid, dt: float) -> list[DensityMatrix]:
    """Fixed-step RK4 integration of the master equation in the product basis.

    Requires dt (gamma + g) N^2 <= 0.1 as a stability margin.  Trace drift
    stays below 1e-8 per unit time at that step size.
    """
    grid = _check_grid(t_grid)
    if dt <= 0:
        raise InvalidInputError("dt must be positive")
    margin = dt * (params.gamma + params.g) * params.n_qubits ** 2
    if margin > 0.1 + 1e-12:
        raise InvalidInputError(
            f"dt={dt} violates the stability margin dt*(gamma+g)*N^2 <= 0.1 "
            f"(got {margin:.3g})"
        )
    rho = np.array(density_matrix(_product_matrix(rho0, params)).matrix, order="C")
    jplus, jminus, _ = collective_ops(params.n_qubits)
    h_int = interaction_hamiltonian(params)
    jpjm = np.ascontiguousarray(jplus @ jminus)
    jplus = np.ascontiguousarray(jplus)
    jminus = np.ascontiguousarray(jminus)
    h_int = np.ascontiguousarray(h_int)

    out = [DensityMatrix(rho.copy(), "product")]
    for t_prev, t_next in zip(grid[:-1], grid[1:]):
        n_sub, h = _substeps(float(t_next - t_prev), dt)
        kernels.rk4_lindblad_steps(h_int, jminus, jplus, jpjm, params.gamma, rho, h, n_sub)
        out.append(DensityMatrix(rho.copy(), "product"))
    return out


def jump_solve(
    params: ModelParams,
    rho0,
    t_grid,
    dt: float = DEFAULT_JUMP_DT,
    k_max: int | None = None,
) -> list[tuple[JumpHierarchy, DensityMatrix]]:
    """Solve the master equation through the photon-counting hierarchy.

    Returns, per grid point, the hierarchy of conditional matrices and their
    sum (the physical state), both in the product basis.  ``k_max`` defaults
    to the excitation count of the initial state; passing a larger value adds
    levels that provably stay at zero.

    Raises ``NumericalFailureError`` if the hierarchy traces leak more than
    1e-6 from unity, which indicates the step size is too coarse.
    """
    grid = _check_grid(t_grid)
    if dt <= 0:
        raise InvalidInputError("dt must be positive")
    rho_prod = density_matrix(_product_matrix(rho0, params)).matrix
    if k_max is None:
        k_max = excitation_count(rho_prod)
    if not 0 <= k_max <= params.n_qubits:
        raise InvalidInputError(f"k_max must be in [0, {params.n_qubits}], got {k_max}")

    cb = collective_basis(params.n_qubits)
    heff = np.ascontiguousarray(cb.to_collective(effective_hamiltonian(params)))
    heff_dag = np.ascontiguousarray(dagger(heff))
    _, jminus, _ = collective_ops(params.n_qubits)
    jminus = np.ascontiguousarray(cb.to_collective(jminus))
    jplus = np.ascontiguousarray(dagger(jminus))

    d = params.dim
    levels = np.zeros((k_max + 1, d, d), dtype=complex, order="C")
    levels[0] = cb.to_collective(rho_prod)

    propagators: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    def props_for(h: float) -> tuple[np.ndarray, np.ndarray]:
        if h not in propagators:
            u_half = np.ascontiguousarray(expm(-0.5j * h * heff))
            propagators[h] = (np.ascontiguousarray(u_half @ u_half), u_half)
        return propagators[h]

    def snapshot() -> tuple[JumpHierarchy, DensityMatrix]:
        traces = levels.trace(axis1=1, axis2=2).real
        leak = abs(traces.sum() - 1.0)
        if leak > TRACE_LEAK_TOL:
            raise NumericalFailureError(
                f"hierarchy trace leaked by {leak:.3e}; reduce the step size dt"
            )
        prod_levels = tuple(cb.to_product(lvl) for lvl in levels)
        hierarchy = JumpHierarchy(prod_levels, k_max, "product")
        return hierarchy, DensityMatrix(hierarchy.total(), "product")

    out = [snapshot()]
    for t_prev, t_next in zip(grid[:-1], grid[1:]):
        n_sub, h = _substeps(float(t_next - t_prev), dt)
        u_full, u_half = props_for(h)
        kernels.jump_hierarchy_steps(
            u_full, u_half, heff, heff_dag, jminus, jplus, params.gamma, levels, h, n_sub
        )
        out.append(snapshot())
    return out


def liouvillian_solve(params: ModelParams, rho0, t_grid) -> list[DensityMatrix]:
    """Evolve by exponentiating the vectorized generator (independent oracle)."""
    grid = _check_grid(t_grid)
    state = vec(density_matrix(_product_matrix(rho0, params)).matrix)
    liouv = liouvillian(params)
    steps: dict[float, np.ndarray] = {}
    out = [DensityMatrix(unvec(state, params.dim).copy(), "product")]
    for t_prev, t_next in zip(grid[:-1], grid[1:]):
        span = float(t_next - t_prev)
        if span not in steps:
            steps[span] = expm(span * liouv)
        state = steps[span] @ state
        out.append(DensityMatrix(unvec(state, params.dim).copy(), "product"))
    return out


def steady_state(params: ModelParams, rho0) -> DensityMatrix:
    """Long-time limit of the evolution started from ``rho0``.

    Computed by pairing the right null vectors of the generator (stationary
    states) with its left null vectors (conserved functionals): the steady
    state is the unique stationary operator carrying the same conserved
    quantities as the initial state.  The generator is non-normal, so plain
    orthogonal projection onto the right null vectors would be wrong.
    """
    rho_prod = density_matrix(_product_matrix(rho0, params)).matrix
    liouv = liouvillian(params)
    right = null_space(liouv, tol=1e-10)
    left = null_space(dagger(liouv), tol=1e-10)
    if not right or len(right) != len(left):
        raise NumericalFailureError(
            f"stationary subspace is ill-determined ({len(right)} right / "
            f"{len(left)} left null vectors)"
        )
    pairing = np.array([[l.conj() @ r for r in right] for l in left])
    charges = np.array([l.conj() @ vec(rho_prod) for l in left])
    try:
        coeffs = np.linalg.solve(pairing, charges)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"null-space pairing is singular: {exc}")
    steady_vec = sum(c * r for c, r in zip(coeffs, right))
    residual = float(np.linalg.norm(liouv @ steady_vec))
    if residual > STEADY_RESIDUAL_TOL:
        raise NumericalFailureError(f"steady-state residual {residual:.3e} too large")
    steady = unvec(steady_vec, params.dim)
    steady = (steady + dagger(steady)) / 2.0
    trace = float(np.trace(steady).real)
    if abs(trace) < 1e-12:
        raise NumericalFailureError("steady-state projection has vanishing trace")
    return DensityMatrix(steady / trace, "product")
