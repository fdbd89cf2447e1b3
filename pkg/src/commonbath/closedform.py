"""Closed-form solutions of the master equation for canonical initial states.

The dissipative dynamics can be solved exactly for four initial states: the
two-qubit product state |+->, the two Werner mixtures, and the three-qubit
product state |+-+>.  These formulas serve as ground truth for every
numerical solver in the package.

All solutions are assembled term by term in the collective basis and
transformed to the product basis at the end.  Coefficients that the naive
transcription would evaluate as exp(+gamma t) times exp(-k gamma t) are
implemented in the overflow-free difference-of-exponentials form; unit tests
pin the equivalence of both forms at moderate times.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import cos, exp, sin, sqrt

import numpy as np

from .errors import InvalidInputError
from .hilbert import (
    CollectiveBasis,
    DensityMatrix,
    ModelParams,
    collective_basis,
    product_state,
    werner_state,
)


class Scenario(str, Enum):
    TWO_QUBIT_PLUS_MINUS = "two_qubit_plus_minus"
    WERNER_PLUS = "werner_plus"
    WERNER_MINUS = "werner_minus"
    THREE_QUBIT_PMP = "three_qubit_pmp"


_N_QUBITS = {
    Scenario.TWO_QUBIT_PLUS_MINUS: 2,
    Scenario.WERNER_PLUS: 2,
    Scenario.WERNER_MINUS: 2,
    Scenario.THREE_QUBIT_PMP: 3,
}
_WERNER = (Scenario.WERNER_PLUS, Scenario.WERNER_MINUS)


@dataclass(frozen=True)
class ClosedFormSolution:
    """A solvable scenario: which initial state, plus model parameters.

    ``p`` is the Werner fidelity and is required exactly for the Werner
    scenarios.  The Werner evolutions are independent of the coupling g
    (the coherent interaction is diagonal on them), so their formulas below
    never reference it.
    """

    scenario: Scenario
    params: ModelParams
    p: float | None = None

    def __post_init__(self):
        if _N_QUBITS[self.scenario] != self.params.n_qubits:
            raise InvalidInputError(
                f"scenario {self.scenario.value} needs "
                f"{_N_QUBITS[self.scenario]} qubits, got {self.params.n_qubits}"
            )
        if self.scenario in _WERNER:
            if self.p is None:
                raise InvalidInputError("Werner scenarios require the fidelity p")
            if not -1 / 3 <= self.p <= 1:
                raise InvalidInputError(f"p={self.p} outside [-1/3, 1]")
        elif self.p is not None:
            raise InvalidInputError(f"{self.scenario.value} takes no parameter p")


def _from_collective(entries: dict, cb: CollectiveBasis) -> DensityMatrix:
    dim = cb.transform.shape[0]
    rho = np.zeros((dim, dim), dtype=complex)
    for (bra_label, ket_label), value in entries.items():
        rho[cb.index(bra_label), cb.index(ket_label)] = value
    return DensityMatrix(cb.to_product(rho), "product")


def _two_qubit_plus_minus(params: ModelParams, t: float) -> DensityMatrix:
    g, gamma = params.g, params.gamma
    decay2 = exp(-2 * gamma * t)
    coherence = 0.5 * exp(-gamma * t) * (cos(2 * g * t) - 1j * sin(2 * g * t))
    entries = {
        ((1, 0), (1, 0)): 0.5 * decay2,
        ((1, -1), (1, -1)): 0.5 * (1 - decay2),
        ((0, 0), (0, 0)): 0.5,
        ((1, 0), (0, 0)): coherence,
        ((0, 0), (1, 0)): coherence.conjugate(),
    }
    return _from_collective(entries, collective_basis(2))


def _werner(scenario: Scenario, params: ModelParams, p: float, t: float) -> DensityMatrix:
    gamma = params.gamma
    decay2 = exp(-2 * gamma * t)
    gt = gamma * t
    if scenario is Scenario.WERNER_PLUS:
        weights = {
            (1, 1): 0.25 * (1 - p) * decay2,
            (1, 0): 0.25 * (1 + 3 * p) * decay2 + 0.5 * (1 - p) * gt * decay2,
            (0, 0): 0.25 * (1 - p),
            (1, -1): 0.25 * (
                (1 + 3 * p) * (1 - decay2) + (1 - p) * (2 - decay2 * (1 + 2 * gt))
            ),
        }
    else:
        weights = {
            (1, 1): 0.25 * (1 - p) * decay2,
            (1, 0): 0.25 * (1 - p) * decay2 * (1 + 2 * gt),
            (1, -1): 0.25 * (1 - p) * (3 - 2 * decay2 * (1 + gt)),
            (0, 0): 0.25 * (1 + 3 * p),
        }
    entries = {(label, label): value for label, value in weights.items()}
    return _from_collective(entries, collective_basis(2))


def _three_qubit_pmp(params: ModelParams, t: float) -> DensityMatrix:
    g, gamma = params.g, params.gamma
    e1 = exp(-gamma * t)
    e52 = exp(-2.5 * gamma * t)
    e4 = exp(-4 * gamma * t)
    phase = cos(3 * g * t) - 1j * sin(3 * g * t)
    # (exp(gamma t) - 1) exp(-5 gamma t / 2) written stably:
    grow52 = exp(-1.5 * gamma * t) - e52

    up_32 = (1.0, 1.5, 0.5)
    up_12s = (1.0, 0.5, 0.5)
    up_12a = (0.0, 0.5, 0.5)
    down_32 = (1.0, 1.5, -0.5)
    down_12s = (1.0, 0.5, -0.5)
    down_12a = (0.0, 0.5, -0.5)
    bottom = (1.0, 1.5, -1.5)

    entries: dict = {}

    def hermitian_pair(bra, ket, value):
        entries[(bra, ket)] = value
        entries[(ket, bra)] = np.conjugate(value)

    entries[(up_32, up_32)] = e4 / 3
    entries[(up_12s, up_12s)] = e1 / 6
    entries[(up_12a, up_12a)] = e1 / 2
    hermitian_pair(up_32, up_12s, -(e52 / sqrt(18)) * phase)
    hermitian_pair(up_32, up_12a, (e52 / sqrt(6)) * phase)
    hermitian_pair(up_12s, up_12a, -e1 / sqrt(12))

    entries[(down_12a, down_12a)] = (1 - e1) / 2
    # 4 (exp(gamma t) - 1) exp(-4 gamma t) / 3
    entries[(down_32, down_32)] = 4 * (exp(-3 * gamma * t) - e4) / 3
    entries[(down_12s, down_12s)] = (1 - e1) / 6
    hermitian_pair(down_32, down_12s, -(2 * grow52 / sqrt(18)) * phase)
    hermitian_pair(down_32, down_12a, (2 * grow52 / sqrt(6)) * phase)
    hermitian_pair(down_12s, down_12a, -(1 - e1) / sqrt(12))

    entries[(bottom, bottom)] = (1 + 3 * e4 - 4 * exp(-3 * gamma * t)) / 3
    return _from_collective(entries, collective_basis(3))


def rho_exact(sol: ClosedFormSolution, t: float) -> DensityMatrix:
    """The exact state at time t, in the product basis."""
    if t < 0:
        raise InvalidInputError(f"time must be nonnegative, got {t}")
    if sol.scenario is Scenario.TWO_QUBIT_PLUS_MINUS:
        return _two_qubit_plus_minus(sol.params, t)
    if sol.scenario in _WERNER:
        return _werner(sol.scenario, sol.params, sol.p, t)
    return _three_qubit_pmp(sol.params, t)


def rho_initial(sol: ClosedFormSolution) -> DensityMatrix:
    """The scenario's initial state (same as ``rho_exact`` at t = 0)."""
    if sol.scenario is Scenario.TWO_QUBIT_PLUS_MINUS:
        return product_state("+-")
    if sol.scenario is Scenario.WERNER_PLUS:
        return werner_state(sol.p, "+")
    if sol.scenario is Scenario.WERNER_MINUS:
        return werner_state(sol.p, "-")
    return product_state("+-+")


def rho_steady(sol: ClosedFormSolution) -> DensityMatrix:
    """The t -> infinity limit of the exact solution."""
    cb = collective_basis(sol.params.n_qubits)
    if sol.scenario is Scenario.TWO_QUBIT_PLUS_MINUS:
        entries = {((1, -1), (1, -1)): 0.5, ((0, 0), (0, 0)): 0.5}
        return _from_collective(entries, cb)
    if sol.scenario in _WERNER:
        p = sol.p
        singlet = (1 - p) / 4 if sol.scenario is Scenario.WERNER_PLUS else (1 + 3 * p) / 4
        entries = {
            ((0, 0), (0, 0)): singlet,
            ((1, -1), (1, -1)): 1 - singlet,
        }
        return _from_collective(entries, cb)
    # Mixture of |---> with the surviving j=1/2 superposition
    # (sqrt(3)/2) |0,1/2,-1/2> - (1/2) |1,1/2,-1/2>, weights 1/3 and 2/3.
    psi = (sqrt(3) / 2) * cb.column((0, 0.5, -0.5)) - 0.5 * cb.column((1, 0.5, -0.5))
    bottom = cb.column((1, 1.5, -1.5))
    rho = np.outer(bottom, bottom.conj()) / 3 + 2 * np.outer(psi, psi.conj()) / 3
    return DensityMatrix(rho, "product")


def concurrence_exact(sol: ClosedFormSolution, t: float) -> float:
    """Concurrence of the |+-> scenario:
    C(t) = (1/2) sqrt((e^{-2 gamma t} - 1)^2 + 4 e^{-2 gamma t} sin^2(2 g t)).
    """
    if sol.scenario is not Scenario.TWO_QUBIT_PLUS_MINUS:
        raise InvalidInputError(
            f"closed-form concurrence only covers the |+-> scenario, "
            f"got {sol.scenario.value}"
        )
    if t < 0:
        raise InvalidInputError(f"time must be nonnegative, got {t}")
    decay2 = exp(-2 * sol.params.gamma * t)
    osc = sin(2 * sol.params.g * t)
    return 0.5 * sqrt((decay2 - 1) ** 2 + 4 * decay2 * osc * osc)


def steady_concurrence_werner(p: float, sign: str) -> float:
    """Long-time concurrence of the Werner evolutions: (1-p)/4 resp. (1+3p)/4."""
    if sign not in ("+", "-"):
        raise InvalidInputError(f"sign must be '+' or '-', got {sign!r}")
    if not -1 / 3 <= p <= 1:
        raise InvalidInputError(f"p={p} outside [-1/3, 1]")
    return (1 - p) / 4 if sign == "+" else (1 + 3 * p) / 4


def delta_concurrence(params: ModelParams, t: float) -> float:
    """Coupling-induced extra concurrence C(t; g) - C(t; g=0) for the |+-> state."""
    if params.n_qubits != 2:
        raise InvalidInputError("delta concurrence is a two-qubit quantity")
    with_g = ClosedFormSolution(Scenario.TWO_QUBIT_PLUS_MINUS, params)
    no_g = ClosedFormSolution(
        Scenario.TWO_QUBIT_PLUS_MINUS,
        ModelParams(2, 0.0, params.gamma),
    )
    return concurrence_exact(with_g, t) - concurrence_exact(no_g, t)
