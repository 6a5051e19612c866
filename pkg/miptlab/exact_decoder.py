#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Exact decoding of the reference qubit from measurement records.

The stabilizer simulation is run once per circuit with every sign replaced by an
affine function over GF(2) of the outcome bits of undetermined measurements. When
the reference purifies, the sign of the stabilizer element supported on the
reference alone names the key measurements and the constant c with
p_R = c * s_j1 * ... * s_jm on every trajectory.
"""

import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .circuits import CircuitInstance, apply_layer, entangle_reference
from .exceptions import (
    CircuitNotDecodableError,
    TableauInvariantError,
    WindowTooSmallError,
)
from .stabilizer import Tableau
from .trajectories import TrajectoryRecord, run_trajectory
from .transforms import window_sites
from .types import Axis, PathLike, Seed, Slot, WindowSpec
from .utils import gf2, io_utils

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


@dataclass(frozen=True)
class AffineSignFunction:
    """
    Sign (-1)^(constant + sum of b_v over `variables`) where b_v = (1 - s_v) / 2 is
    the outcome bit of undetermined measurement number v.
    """

    constant: int
    variables: Tuple[int, ...]

    def evaluate(self, bits: np.ndarray) -> int:
        """Sign for a vector of outcome bits indexed by variable."""
        parity = self.constant
        for variable in self.variables:
            parity ^= int(bits[variable])
        return 1 - 2 * parity

    def __xor__(self, bit: int) -> "AffineSignFunction":
        return AffineSignFunction(self.constant ^ int(bit), self.variables)


class SymbolicTableau(Tableau):
    """
    Tableau whose sign bits are affine functions of undetermined outcome bits.

    Constant parts live in the base sign vector and variable coefficients in a
    packed (2n, words) matrix that doubles its word capacity when full. Gates
    only flip constants. Undetermined measurements allocate a fresh variable
    instead of drawing a random bit, and measurement outcomes come back as
    AffineSignFunction objects.
    """

    def __init__(self, n_total: int, validate: bool = False):
        super().__init__(n_total, bit_stream=None, validate=validate)
        self._coeff = gf2.zeros(2 * n_total, gf2.WORD_BITS)
        self._n_vars = 0

    @property
    def n_variables(self) -> int:
        return self._n_vars

    def _affine(self, constant: int, coeff: np.ndarray) -> AffineSignFunction:
        bits = gf2.unpack_bits(coeff, self._n_vars)
        return AffineSignFunction(
            int(constant), tuple(int(v) for v in np.flatnonzero(bits))
        )

    def _allocate_variable(self) -> int:
        capacity = self._coeff.shape[1] * gf2.WORD_BITS
        if self._n_vars == capacity:
            grown = np.zeros(
                (self._coeff.shape[0], 2 * self._coeff.shape[1]), dtype=np.uint64
            )
            grown[:, : self._coeff.shape[1]] = self._coeff
            self._coeff = grown
        self._n_vars += 1
        return self._n_vars - 1

    ###########################################################################
    # Sign hooks

    def _rowsum_signs(
        self, targets: np.ndarray, source: int, phase: np.ndarray
    ) -> None:
        super()._rowsum_signs(targets, source, phase)
        self._coeff[targets] ^= self._coeff[source]

    def _product_sign(self, rows: np.ndarray, phase: int) -> AffineSignFunction:
        constant = int(np.bitwise_xor.reduce(self._r[rows], initial=0) ^ phase)
        coeff = np.bitwise_xor.reduce(
            self._coeff[rows], axis=0, initial=np.uint64(0)
        )
        return self._affine(constant, coeff)

    def _copy_row(self, dst: int, src: int) -> None:
        super()._copy_row(dst, src)
        self._coeff[dst] = self._coeff[src]

    def _set_random_sign(
        self, row: int, sign_bit: int, forced: Optional[int]
    ) -> AffineSignFunction:
        variable = self._allocate_variable()
        self._coeff[row] = 0
        gf2.set_bit(self._coeff[row], variable, np.uint64(1))
        self._r[row] = sign_bit
        return AffineSignFunction(0, (variable,))

    def _outcome_of(self, sign: Any, sign_bit: int) -> AffineSignFunction:
        return sign ^ sign_bit

    ###########################################################################

    def reference_function(self) -> Optional[Tuple[Axis, AffineSignFunction]]:
        """Axis and symbolic sign of the reference-only element, None if mixed."""
        element = self._reference_element()
        if element is None:
            return None

        rows, x_ref, z_ref, phase = element
        return Axis.from_bits(x_ref, z_ref), self._product_sign(rows, phase)

    def validate(self) -> None:
        super().validate()
        stray = gf2.unpack_bits(self._coeff, self._coeff.shape[1] * gf2.WORD_BITS)
        if np.any(stray[:, self._n_vars :]):
            raise TableauInvariantError(
                "Sign coefficients reference unallocated outcome variables."
            )


###############################################################################


@dataclass(frozen=True)
class KeyMeasurementReport:
    """
    Exact decoding data of one purifying circuit.

    Attributes
    ----------
    fingerprint: str
        Fingerprint of the analyzed circuit.
    axis: Axis
        Purification axis.
    constant: int
        c in p_R * s_j1 * ... * s_jm = c, +1 or -1.
    key_set: Tuple[Slot, ...]
        Key measurement slots (layer, site), in execution order.
    purification_time: int
        t_p in layers.
    undetermined_slots: Tuple[Slot, ...]
        Slot of each outcome variable, in execution order.
    determined_slots: Tuple[Slot, ...]
        Slots whose outcome is fixed by earlier outcomes.
    constraints: Tuple[Tuple[Slot, AffineSignFunction], ...]
        For each determined slot, its outcome as a function of earlier
        undetermined outcomes.
    """

    fingerprint: str
    axis: Axis
    constant: int
    key_set: Tuple[Slot, ...]
    purification_time: int
    undetermined_slots: Tuple[Slot, ...]
    determined_slots: Tuple[Slot, ...]
    constraints: Tuple[Tuple[Slot, AffineSignFunction], ...]

    @property
    def determined_flags(self) -> Dict[Slot, bool]:
        flags = {slot: False for slot in self.undetermined_slots}
        flags.update({slot: True for slot in self.determined_slots})
        return dict(sorted(flags.items()))

    def to_dict(self) -> Dict[str, Any]:
        def pairs(slots: Sequence[Slot]) -> List[List[int]]:
            return [[int(layer), int(site)] for layer, site in slots]

        return {
            "fingerprint": self.fingerprint,
            "axis": self.axis.name,
            "c": self.constant,
            "key_set": pairs(self.key_set),
            "purification_time": self.purification_time,
            "undetermined_slots": pairs(self.undetermined_slots),
            "determined_slots": pairs(self.determined_slots),
            "constraints": [
                {
                    "slot": [int(slot[0]), int(slot[1])],
                    "constant": function.constant,
                    "slots": pairs(
                        [self.undetermined_slots[v] for v in function.variables]
                    ),
                }
                for slot, function in self.constraints
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def write_report(
    report: KeyMeasurementReport, uri: PathLike, fs_kwargs: Dict[str, Any] = {}
) -> None:
    io_utils.write_text(uri, report.to_json() + "\n", fs_kwargs=fs_kwargs)


###############################################################################


def analyze_circuit(
    instance: CircuitInstance, validate: bool = False
) -> KeyMeasurementReport:
    """
    Classify every measurement as determined or undetermined and extract the
    key measurement set of a purifying circuit.

    Measurements within a round are performed in ascending site order.

    Parameters
    ----------
    instance: CircuitInstance
        The circuit to analyze.
    validate: bool
        Check tableau invariants and affine closure after every operation.
        Default: False

    Returns
    -------
    report: KeyMeasurementReport
        Key set, constant, axis and the constraints of determined slots.

    Raises
    ------
    CircuitNotDecodableError
        The reference never purifies within the circuit depth.
    """
    t = SymbolicTableau(instance.n_sites + 1, validate=validate)
    for layer in instance.scramble_prefix or ():
        apply_layer(t, layer)
    entangle_reference(t, instance.spec)

    undetermined: List[Slot] = []
    determined: List[Slot] = []
    constraints: List[Tuple[Slot, AffineSignFunction]] = []
    purification: Optional[Tuple[int, Axis, AffineSignFunction]] = None

    for layer in range(instance.depth):
        apply_layer(t, instance.gates[layer])

        random_outcome = False
        for site in instance.measure_sites[layer]:
            outcome, is_determined = t.measure_z(site)
            if is_determined:
                determined.append((layer, site))
                constraints.append(((layer, site), outcome))  # type: ignore
            else:
                undetermined.append((layer, site))
                random_outcome = True

        if purification is None and random_outcome:
            found = t.reference_function()
            if found is not None:
                purification = (layer + 1, found[0], found[1])

    if purification is None:
        raise CircuitNotDecodableError(instance.fingerprint(), instance.depth)

    t_p, axis, sign = purification
    report = KeyMeasurementReport(
        fingerprint=instance.fingerprint(),
        axis=axis,
        constant=1 - 2 * sign.constant,
        key_set=tuple(undetermined[v] for v in sign.variables),
        purification_time=t_p,
        undetermined_slots=tuple(undetermined),
        determined_slots=tuple(determined),
        constraints=tuple(constraints),
    )
    log.debug(
        f"Circuit {report.fingerprint}: t_p={t_p} axis={axis.name} "
        f"{len(report.key_set)} key measurement(s) of {len(undetermined)} undetermined"
    )
    return report


###############################################################################


def _window_positions(
    slots: Sequence[Slot], window: Optional[WindowSpec], n_sites: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Row and column of each slot inside a (possibly cropped) outcome matrix."""
    layers = np.array([slot[0] for slot in slots], dtype=np.int64)
    sites = np.array([slot[1] for slot in slots], dtype=np.int64)
    if window is None:
        return layers, sites

    column_of = {int(site): k for k, site in enumerate(window_sites(window, n_sites))}
    missing = [
        slot
        for slot in slots
        if slot[0] >= window.depth or int(slot[1]) not in column_of
    ]
    if missing:
        raise WindowTooSmallError(
            f"Window {window} hides key measurement slot(s) {missing}."
        )
    columns = np.array([column_of[int(site)] for site in sites], dtype=np.int64)
    return layers, columns


def key_set_in_window(
    report: KeyMeasurementReport, window: WindowSpec, n_sites: int
) -> bool:
    """Whether every key measurement lies inside the window."""
    try:
        _window_positions(report.key_set, window, n_sites)
    except WindowTooSmallError:
        return False
    return True


def _outcome_matrix(record: Union[TrajectoryRecord, np.ndarray]) -> np.ndarray:
    if isinstance(record, TrajectoryRecord):
        return record.outcomes
    return np.asarray(record)


def predict(
    report: KeyMeasurementReport,
    record: Union[TrajectoryRecord, np.ndarray],
    window: Optional[WindowSpec] = None,
    n_sites: Optional[int] = None,
) -> int:
    """
    Exact reference sign p_R = c * s_j1 * ... * s_jm of a trajectory.

    Parameters
    ----------
    report: KeyMeasurementReport
        Analysis of the circuit the record comes from.
    record: Union[TrajectoryRecord, np.ndarray]
        A trajectory record or its outcome matrix.
    window: Optional[WindowSpec]
        Crop applied to the outcome matrix, None for a full (T, L) matrix.
        Default: None
    n_sites: Optional[int]
        Circuit width, required with a window to locate slots in the cropped
        matrix.

    Returns
    -------
    p_R: int
        +1 or -1.

    Raises
    ------
    WindowTooSmallError
        A key slot lies outside the window.
    """
    outcomes = _outcome_matrix(record)
    if window is not None and n_sites is None:
        raise ValueError("Predicting from a cropped record needs the circuit width.")
    rows, columns = _window_positions(report.key_set, window, n_sites or 0)
    product = int(np.prod(outcomes[rows, columns].astype(np.int64)))
    return report.constant * product


def check_constraints(
    report: KeyMeasurementReport, record: Union[TrajectoryRecord, np.ndarray]
) -> bool:
    """
    Whether every determined outcome of a full (T, L) outcome matrix agrees with
    its affine constraint over the undetermined outcomes.
    """
    outcomes = _outcome_matrix(record)
    if len(report.undetermined_slots):
        layers, sites = zip(*report.undetermined_slots)
        bits = (outcomes[list(layers), list(sites)] < 0).astype(np.uint8)
    else:
        bits = np.zeros(0, dtype=np.uint8)

    for (layer, site), function in report.constraints:
        if outcomes[layer, site] != function.evaluate(bits):
            return False
    return True


class KeyMeasurementPredictor:
    """
    The exact decoder wrapped as a classifier over cropped outcome images.

    Parameters
    ----------
    report: KeyMeasurementReport
        Analysis of the circuit.
    window: Optional[WindowSpec]
        Crop of the images to classify, None for full matrices.
    n_sites: int
        Circuit width.

    Raises
    ------
    WindowTooSmallError
        The window hides a key slot.
    """

    def __init__(
        self,
        report: KeyMeasurementReport,
        window: Optional[WindowSpec],
        n_sites: int,
    ):
        self.report = report
        self._rows, self._columns = _window_positions(report.key_set, window, n_sites)

    def predict(self, images: np.ndarray) -> np.ndarray:
        images = np.asarray(images)
        if images.ndim == 4:
            images = images[..., 0]
        values = images[:, self._rows, self._columns].astype(np.int64)
        return (self.report.constant * np.prod(values, axis=1)).astype(np.int8)

    def predict_proba(self, images: np.ndarray) -> np.ndarray:
        return (self.predict(images) == 1).astype(np.float64)


def replay_with_forced_outcomes(
    instance: CircuitInstance,
    trajectory_seed: Seed,
    forced: Mapping[Slot, int],
) -> TrajectoryRecord:
    """
    Re-run a trajectory with some undetermined outcomes imposed. Every other
    undetermined slot draws the same stream bit as the original run.
    """
    return run_trajectory(instance, trajectory_seed, forced=forced)
