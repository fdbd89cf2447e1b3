"""Pure-numpy fixed-step integration kernels.

These mirror the compiled kernels in ``_stepping.pyx`` exactly; whichever is
importable is selected by ``_backend``.  Both update their state arguments in
place and return them.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def rk4_lindblad_steps(h_op, jm, jp, jpjm, gamma, rho, h, n_steps):
    """Advance ``rho`` by ``n_steps`` classical RK4 steps of size ``h``.

    Right-hand side: -i[H, rho] + gamma/2 (2 Jm rho Jp - JpJm rho - rho JpJm).
    """

    def rhs(r):
        out = -1j * (h_op @ r - r @ h_op)
        out += gamma * (jm @ r @ jp)
        out -= 0.5 * gamma * (jpjm @ r + r @ jpjm)
        return out

    for _ in range(n_steps):
        k1 = rhs(rho)
        k2 = rhs(rho + (0.5 * h) * k1)
        k3 = rhs(rho + (0.5 * h) * k2)
        k4 = rhs(rho + h * k3)
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return rho


def jump_hierarchy_steps(u_full, u_half, heff, heff_dag, jm, jp, gamma, levels, h, n_steps):
    """Advance the photon-number-conditioned hierarchy by ``n_steps`` steps.

    ``levels[0]`` evolves exactly through the precomputed no-jump propagators
    ``u_full``/``u_half`` (full and half step); levels >= 1 take classical RK4
    steps of the coupled equations, with level n-1 feeding level n through
    gamma Jm rho Jp evaluated at the proper stage values.
    """
    n_levels = levels.shape[0]
    u_half_dag = u_half.conj().T
    u_full_dag = u_full.conj().T

    def rhs(level, source):
        return -1j * (heff @ level - level @ heff_dag) + gamma * (jm @ source @ jp)

    def stage(y, p0_stage):
        out = np.empty_like(y)
        for n in range(y.shape[0]):
            source = p0_stage if n == 0 else y[n - 1]
            out[n] = rhs(y[n], source)
        return out

    for _ in range(n_steps):
        p0 = levels[0]
        p0_half = u_half @ p0 @ u_half_dag
        p0_full = u_full @ p0 @ u_full_dag
        if n_levels > 1:
            y = levels[1:]
            k1 = stage(y, p0)
            k2 = stage(y + (0.5 * h) * k1, p0_half)
            k3 = stage(y + (0.5 * h) * k2, p0_half)
            k4 = stage(y + h * k3, p0_full)
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        levels[0] = p0_full
    return levels
