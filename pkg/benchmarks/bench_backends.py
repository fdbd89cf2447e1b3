#!/usr/bin/env python3
"""Benchmark the compiled stepping kernels against the numpy fallback.

Runs the standard workloads (two- and three-qubit trajectories at the
default step size) through both kernel implementations and prints a timing
table.  Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import importlib.util
import time

import numpy as np

from commonbath import _backend, _stepping_py
from commonbath.dynamics import effective_hamiltonian, interaction_hamiltonian
from commonbath.hilbert import ModelParams, collective_basis, collective_ops, product_state
from commonbath.linalg import dagger, expm

HAS_COMPILED = importlib.util.find_spec("commonbath._stepping") is not None


def workloads():
    """(name, kernel args builder, n_steps) for each benchmark case."""
    cases = []
    for n, label, init in ((2, "two-qubit", "+-"), (3, "three-qubit", "+-+")):
        params = ModelParams(n, 1.0, 0.1)
        cb = collective_basis(n)
        jplus, jminus, _ = collective_ops(n)
        h_int = np.ascontiguousarray(interaction_hamiltonian(params))
        jpjm = np.ascontiguousarray(jplus @ jminus)
        jp = np.ascontiguousarray(jplus)
        jm = np.ascontiguousarray(jminus)
        rho = np.array(product_state(init).matrix, order="C")

        heff = np.ascontiguousarray(cb.to_collective(effective_hamiltonian(params)))
        heff_dag = np.ascontiguousarray(dagger(heff))
        jm_c = np.ascontiguousarray(cb.to_collective(jminus))
        jp_c = np.ascontiguousarray(dagger(jm_c))
        u_half = np.ascontiguousarray(expm(-0.5j * 1e-3 * heff))
        u_full = np.ascontiguousarray(u_half @ u_half)
        levels = np.zeros((n + 1, 2 ** n, 2 ** n), dtype=complex, order="C")
        levels[0] = cb.to_collective(rho)

        cases.append((
            f"rk4 lindblad, {label}, 50k steps",
            lambda k, a=(h_int, jm, jp, jpjm), r=rho: k.rk4_lindblad_steps(
                *a, 0.1, np.array(r, order="C"), 1e-3, 50_000
            ),
        ))
        cases.append((
            f"jump hierarchy, {label}, 50k steps",
            lambda k, a=(u_full, u_half, heff, heff_dag, jm_c, jp_c), lv=levels:
                k.jump_hierarchy_steps(*a, 0.1, np.array(lv, order="C"), 1e-3, 50_000),
        ))
    return cases


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = [("python", _stepping_py)]
    if HAS_COMPILED:
        from commonbath import _stepping

        backends.insert(0, ("compiled", _stepping))
    else:
        print("compiled kernels not built; timing the fallback only\n")

    print(f"active backend at import: {_backend.backend_name()}\n")
    header = f"{'workload':40s}" + "".join(f"{name:>12s}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))

    for name, runner in workloads():
        times = []
        for _, kernels in backends:
            best = min(
                _timed(runner, kernels) for _ in range(args.repeat)
            )
            times.append(best)
        row = f"{name:40s}" + "".join(f"{t:11.3f}s" for t in times)
        if len(times) == 2:
            row += f"{times[1] / times[0]:9.1f}x"
        print(row)


def _timed(runner, kernels):
    start = time.perf_counter()
    runner(kernels)
    return time.perf_counter() - start


if __name__ == "__main__":
    main()
