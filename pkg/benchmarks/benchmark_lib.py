#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Benchmarks for general library operations.
"""

from miptlab.circuits import CircuitSpec
from miptlab.trajectories import purification_times

###############################################################################


class LibInitSuite:
    def time_base_import(self):
        """
        Benchmark how long it takes to import the library as a whole.
        """
        import miptlab  # noqa: F401


class SchedulerSuite:
    """
    Compare dask schedulers on the circuit fan-out of a purification histogram.
    """

    params = ["synchronous", "threads", "processes"]

    def setup(self, scheduler):
        self.template = CircuitSpec(L=16, T=16, p=0.2, circuit_seed=0)

    def time_purification_times(self, scheduler):
        purification_times(self.template, 32, scheduler=scheduler)
