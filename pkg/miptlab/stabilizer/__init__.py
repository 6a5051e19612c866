#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .clifford import CliffordGate, sample_random_clifford_2q  # noqa: F401
from .pauli import PauliString  # noqa: F401
from .tableau import Tableau, new_tableau  # noqa: F401
