#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import xarray as xr

from . import constants
from .circuits import (
    CircuitInstance,
    CircuitSpec,
    apply_layer,
    build_circuit,
    circuit_seeds,
    entangle_reference,
)
from .dimensions import DEFAULT_DIMENSION_ORDER_LIST, DimensionNames
from .exceptions import (
    CircuitNotDecodableError,
    TableauInvariantError,
    UnexpectedShapeError,
)
from .stabilizer import Tableau
from .transforms import crop_to_window
from .types import Axis, PathLike, Seed, Slot, WindowSpec
from .utils.parallel import parallel_map
from .utils.random_streams import RandomBitStream, keyed_hash

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


@dataclass
class TrajectoryRecord:
    """
    One run of a circuit.

    Attributes
    ----------
    outcomes: np.ndarray
        int8 matrix of shape (T, L): +1 / -1 for measured sites, 0 elsewhere.
    t_p: Optional[int]
        Number of layers after which the reference was first purified, or None if
        it stayed mixed through layer T.
    axis: Optional[Axis]
        Purification axis, None if unpurified.
    label: Optional[int]
        Reference sign p_R along the axis, None if unpurified.
    trajectory_seed: int
        Seed of the outcome stream.
    ref_entropy: np.ndarray
        Reference entropy after each layer, index 0 being the entangled
        initial state.
    """

    outcomes: np.ndarray
    t_p: Optional[int]
    axis: Optional[Axis]
    label: Optional[int]
    trajectory_seed: int
    ref_entropy: np.ndarray = field(repr=False, default_factory=lambda: np.ones(1))

    @property
    def purified(self) -> bool:
        return self.t_p is not None


def prepare_tableau(
    instance: CircuitInstance,
    trajectory_seed: Seed = 0,
    validate: bool = False,
) -> Tableau:
    """Initial state of a run: optional scramble, then the reference Bell pair."""
    stream = RandomBitStream(instance.circuit_seed, trajectory_seed, tag="trajectory")
    t = Tableau(instance.n_sites + 1, bit_stream=stream, validate=validate)
    for layer in instance.scramble_prefix or ():
        apply_layer(t, layer)
    entangle_reference(t, instance.spec)
    return t


def run_trajectory(
    instance: CircuitInstance,
    trajectory_seed: Seed,
    forced: Optional[Mapping[Slot, int]] = None,
    validate: bool = False,
) -> TrajectoryRecord:
    """
    Run a circuit once and record every measurement outcome.

    Parameters
    ----------
    instance: CircuitInstance
        The circuit.
    trajectory_seed: Seed
        Keys the outcome stream together with the circuit seed.
    forced: Optional[Mapping[Slot, int]]
        Outcomes to impose on undetermined measurements at given (layer, site)
        slots. Stream bits are consumed as usual so the remaining slots draw the
        same bits as an unforced run.
        Default: None
    validate: bool
        Run the tableau invariant validator after every operation.
        Default: False

    Returns
    -------
    record: TrajectoryRecord
        The outcome matrix with purification time, axis and label.
    """
    t = prepare_tableau(instance, trajectory_seed, validate=validate)
    forced = forced or {}

    outcomes = np.zeros((instance.depth, instance.n_sites), dtype=np.int8)
    ref_entropy = np.ones(instance.depth + 1, dtype=np.int8)
    t_p = None
    status = None
    for layer in range(instance.depth):
        apply_layer(t, instance.gates[layer])

        random_outcome = False
        for site in instance.measure_sites[layer]:
            outcome, determined = t.measure_z(site, forced.get((layer, site)))
            outcomes[layer, site] = outcome
            random_outcome |= not determined

        # Only an undetermined measurement can change the reference entropy
        if t_p is None and random_outcome:
            status = t.ref_status()
            if status.purified:
                t_p = layer + 1
        ref_entropy[layer + 1] = 1 if t_p is None else 0

    if t_p is None:
        return TrajectoryRecord(
            outcomes, None, None, None, int(trajectory_seed), ref_entropy
        )

    assert status is not None
    return TrajectoryRecord(
        outcomes, t_p, status.axis, status.sign, int(trajectory_seed), ref_entropy
    )


def purification_time(
    instance: CircuitInstance, trajectory_seed: Seed = 0
) -> Optional[int]:
    """t_p of a circuit. Trajectory independent for Clifford circuits."""
    return run_trajectory(instance, trajectory_seed).t_p


def probe_circuit(seed: int, template: CircuitSpec) -> Optional[int]:
    return purification_time(build_circuit(template.with_seed(seed)))


def purification_times(
    template: CircuitSpec,
    n_circuits: int,
    base_seed: Seed = 0,
    scheduler: str = "threads",
) -> List[Optional[int]]:
    """Purification time of each circuit of a seeded family, in seed order."""
    seeds = circuit_seeds(base_seed, n_circuits)
    return parallel_map(probe_circuit, seeds, scheduler=scheduler, template=template)


def histogram_from_times(times: Sequence[Optional[int]], depth: int) -> np.ndarray:
    """Probability mass over t_p = 1..T followed by the unpurified bin."""
    counts = np.zeros(depth + 1, dtype=np.float64)
    for t_p in times:
        counts[depth if t_p is None else t_p - 1] += 1
    return counts / max(1, len(times))


def purification_histogram(
    L: int,
    T: int,
    p: float,
    N_c: int,
    base_seed: Seed = 0,
    init: str = constants.INIT_PRODUCT,
    scheduler: str = "threads",
) -> np.ndarray:
    """
    Empirical distribution r_p of purification times over fresh circuits, one
    trajectory per circuit.

    Returns
    -------
    masses: np.ndarray
        Length T + 1: masses for t_p = 1..T, then the unpurified mass. Sums to 1.
    """
    if N_c < 1:
        raise ValueError(f"Need at least one circuit (received N_c={N_c}).")

    template = CircuitSpec(L=L, T=T, p=p, circuit_seed=0, init=init)
    times = purification_times(template, N_c, base_seed=base_seed, scheduler=scheduler)
    return histogram_from_times(times, T)


###############################################################################


def lightcone_window(
    instance: CircuitInstance,
    t_p: int,
    velocity: int = constants.LIGHTCONE_VELOCITY,
    padding: int = constants.LIGHTCONE_PADDING,
) -> WindowSpec:
    """
    Box around the statistical light cone of the reference partner:
    depth t_p, width min(L, 2 v t_p + w_0), centered on the partner.
    """
    width = min(instance.n_sites, 2 * velocity * t_p + padding)
    return WindowSpec(instance.ref_site, width, t_p)


def depth_window(instance: CircuitInstance, depth: int) -> WindowSpec:
    """Keep layers [0, depth) over the whole width."""
    return WindowSpec(instance.ref_site, instance.n_sites, depth)


def full_window(instance: CircuitInstance) -> WindowSpec:
    return depth_window(instance, instance.depth)


###############################################################################


@dataclass
class Dataset:
    """
    Labelled trajectories of one circuit, stored column-wise.

    Attributes
    ----------
    L, T, p, circuit_seed:
        Circuit parameters.
    axis: Optional[Axis]
        Purification axis shared by every record; None for forced-label sets.
    window: Optional[WindowSpec]
        Crop applied to the outcomes, None for full matrices.
    outcomes: np.ndarray
        int8 array (N, depth, width).
    labels: np.ndarray
        int8 array (N,) of +1 / -1.
    trajectory_seeds: np.ndarray
        uint64 array (N,).
    """

    L: int
    T: int
    p: float
    circuit_seed: int
    axis: Optional[Axis]
    window: Optional[WindowSpec]
    outcomes: np.ndarray
    labels: np.ndarray
    trajectory_seeds: np.ndarray

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def image_shape(self) -> tuple:
        return tuple(self.outcomes.shape[1:])

    def images(self, dtype: Any = np.float64) -> np.ndarray:
        """Network input batch (N, depth, width, 1) with values -1, 0, +1."""
        return self.outcomes[..., np.newaxis].astype(dtype)

    def targets(self) -> np.ndarray:
        """Labels encoded as BCE targets: +1 -> 1.0, -1 -> 0.0."""
        return (self.labels == 1).astype(np.float64)

    def select(self, indices: Any) -> "Dataset":
        return Dataset(
            self.L,
            self.T,
            self.p,
            self.circuit_seed,
            self.axis,
            self.window,
            self.outcomes[indices],
            self.labels[indices],
            self.trajectory_seeds[indices],
        )

    def subset(self, n: int) -> "Dataset":
        """The first n records; prefixes of one dataset are nested."""
        return self.select(slice(0, n))

    def split(self, fraction: float) -> Tuple["Dataset", "Dataset"]:
        """Split off the trailing `fraction` of records, e.g. as a validation set."""
        if not 0.0 <= fraction < 1.0:
            raise ValueError(
                f"Split fraction must lie in [0, 1) (received {fraction})."
            )

        n_tail = int(round(len(self) * fraction))
        n_head = len(self) - n_tail
        return self.select(slice(0, n_head)), self.select(slice(n_head, len(self)))

    def crop(self, window: WindowSpec) -> "Dataset":
        """
        Crop the full outcome matrices of an uncropped dataset to a window.

        Raises
        ------
        UnexpectedShapeError
            The dataset is already cropped or the window does not fit.
        """
        if self.window is not None and self.image_shape != (self.T, self.L):
            raise UnexpectedShapeError(
                f"Dataset is already cropped to {self.window}; crop the full "
                f"matrices instead."
            )

        out = self.select(slice(None))
        out.outcomes = crop_to_window(self.outcomes, window)
        out.window = window
        return out

    def with_labels(self, labels: np.ndarray) -> "Dataset":
        out = self.select(slice(None))
        out.labels = np.asarray(labels, dtype=np.int8)
        return out

    def to_xarray(self) -> xr.DataArray:
        return xr.DataArray(
            self.outcomes,
            dims=DEFAULT_DIMENSION_ORDER_LIST,
            coords={DimensionNames.Record: self.trajectory_seeds},
            attrs={
                "L": self.L,
                "T": self.T,
                "p": self.p,
                "circuit_seed": self.circuit_seed,
                "axis": None if self.axis is None else self.axis.name,
                "window": None if self.window is None else tuple(self.window),
            },
        )


def _forced_label(circuit_seed: int, trajectory_seed: int) -> int:
    return 1 - 2 * int(keyed_hash(circuit_seed, trajectory_seed, tag="label") & 1)


def _run(seed: int, instance: CircuitInstance, validate: bool) -> TrajectoryRecord:
    return run_trajectory(instance, seed, validate=validate)


def generate_dataset(
    instance: CircuitInstance,
    N_t: int,
    window: Optional[WindowSpec] = None,
    seed_offset: int = 0,
    force: bool = False,
    scheduler: str = "synchronous",
    validate: bool = False,
) -> Dataset:
    """
    Run a circuit N_t times with distinct trajectory seeds and collect
    (outcomes, p_R) pairs.

    Parameters
    ----------
    instance: CircuitInstance
        The circuit. Must purify within its depth unless `force` is set.
    N_t: int
        Number of trajectories.
    window: Optional[WindowSpec]
        Crop applied to every outcome matrix.
        Default: None
    seed_offset: int
        Trajectory seeds are seed_offset, ..., seed_offset + N_t - 1, so sets built
        with disjoint ranges never share a trajectory.
        Default: 0
    force: bool
        Build a null dataset for an unpurified circuit, labelling each record by
        a keyed coin flip.
        Default: False
    scheduler: str
        dask scheduler for the trajectory fan-out.
        Default: "synchronous"
    validate: bool
        Run the tableau invariant validator after every operation.
        Default: False

    Returns
    -------
    dataset: Dataset
        Records in trajectory seed order.

    Raises
    ------
    CircuitNotDecodableError
        The circuit never purifies and `force` is not set.
    """
    if N_t < 1:
        raise ValueError(f"Need at least one trajectory (received N_t={N_t}).")

    probe = run_trajectory(instance, seed_offset, validate=validate)
    if probe.t_p is None and not force:
        raise CircuitNotDecodableError(instance.fingerprint(), instance.depth)

    seeds = list(range(seed_offset + 1, seed_offset + N_t))
    records = [probe] + parallel_map(
        _run, seeds, scheduler=scheduler, instance=instance, validate=validate
    )

    if probe.t_p is None:
        labels = [
            _forced_label(instance.circuit_seed, r.trajectory_seed) for r in records
        ]
        axis = None
    else:
        if any(r.axis != probe.axis or r.t_p != probe.t_p for r in records):
            raise TableauInvariantError(
                f"Purification axis or time differs between trajectories of "
                f"circuit {instance.fingerprint()}."
            )
        labels = [r.label for r in records]  # type: ignore
        axis = probe.axis

    outcomes = np.stack([r.outcomes for r in records])
    return Dataset(
        L=instance.n_sites,
        T=instance.depth,
        p=instance.spec.p,
        circuit_seed=instance.circuit_seed,
        axis=axis,
        window=window,
        outcomes=crop_to_window(outcomes, window),
        labels=np.asarray(labels, dtype=np.int8),
        trajectory_seeds=np.asarray(
            [r.trajectory_seed for r in records], dtype=np.uint64
        ),
    )


def write_dataset(
    dataset: Dataset, uri: PathLike, fs_kwargs: Dict[str, Any] = {}
) -> None:
    from .writers import DatasetWriter

    DatasetWriter.save(dataset, uri, fs_kwargs=fs_kwargs)


def read_dataset(uri: PathLike, fs_kwargs: Dict[str, Any] = {}) -> Dataset:
    from .readers import DatasetReader

    return DatasetReader(uri, fs_kwargs=fs_kwargs).data
