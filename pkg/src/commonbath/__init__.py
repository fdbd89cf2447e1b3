"""Entanglement dynamics of dipole-coupled qubits in a common vacuum environment.

Two or three two-level atoms couple collectively to a shared zero-temperature
reservoir.  The package solves the resulting master equation by a
photon-counting (quantum jump) hierarchy, by direct RK4 integration and by
Liouvillian exponentiation, extracts steady states, and quantifies
entanglement through the concurrence and the negativity.  Closed-form
solutions for the canonical initial states provide exact ground truth, and a
CLI turns named scenarios into CSV curve data.
"""

from ._backend import backend_name
from .closedform import (
    ClosedFormSolution,
    Scenario,
    concurrence_exact,
    delta_concurrence,
    rho_exact,
    rho_initial,
    rho_steady,
    steady_concurrence_werner,
)
from .dynamics import (
    JumpHierarchy,
    effective_hamiltonian,
    jump_solve,
    lindblad_generator,
    lindblad_generator_individual,
    liouvillian,
    liouvillian_solve,
    rk4_solve,
    steady_state,
)
from .entanglement import (
    EntanglementSample,
    cn_bound_check,
    concurrence,
    concurrence_via_sqrtm,
    measure_state,
    negativity,
    pair_concurrence,
    partial_trace,
    partial_transpose,
)
from .errors import InvalidInputError, NumericalFailureError, SimulationError
from .hilbert import (
    CollectiveBasis,
    DensityMatrix,
    ModelParams,
    ProductBasis,
    collective_basis,
    collective_ops,
    density_matrix,
    embed,
    excitation_count,
    interaction_hamiltonian,
    pauli,
    product_basis,
    product_state,
    werner_state,
)
from .scenarios import (
    ScenarioConfig,
    compare_solvers,
    default_config,
    run_scenario,
    write_outputs,
)

__version__ = "0.1.0"
