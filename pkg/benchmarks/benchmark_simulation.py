#!/usr/bin/env python
# -*- coding: utf-8 -*-

from miptlab.circuits import CircuitSpec, build_circuit
from miptlab.exact_decoder import analyze_circuit
from miptlab.trajectories import generate_dataset, purification_time, run_trajectory

###############################################################################


def _purified(L: int, p: float):
    template = CircuitSpec(L=L, T=2 * L, p=p, circuit_seed=0)
    for seed in range(1000):
        instance = build_circuit(template.with_seed(seed))
        if purification_time(instance) is not None:
            return instance
    raise RuntimeError(f"No purified circuit at L={L} p={p}")


class TrajectorySuite:
    """
    Benchmark single trajectories and dataset generation across system sizes.
    """

    params = [8, 16, 32, 64]

    def setup(self, L):
        self.instance = build_circuit(CircuitSpec(L=L, T=L, p=0.2, circuit_seed=1))

    def time_run_trajectory(self, L):
        run_trajectory(self.instance, 0)

    def time_generate_dataset(self, L):
        generate_dataset(self.instance, 64, scheduler="synchronous", force=True)

    def peakmem_run_trajectory(self, L):
        return run_trajectory(self.instance, 0)


class ExactDecoderSuite:
    """
    Benchmark the symbolic key measurement analysis of one purified circuit.
    """

    params = [8, 16, 32]

    def setup(self, L):
        self.instance = _purified(L, 0.3)

    def time_analyze_circuit(self, L):
        analyze_circuit(self.instance)
