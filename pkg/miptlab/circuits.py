#!/usr/bin/env python
# -*- coding: utf-8 -*-

import hashlib
import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
import yaml

from . import constants
from .exceptions import InvalidCircuitSpecError
from .stabilizer import CliffordGate, PauliString, Tableau, sample_random_clifford_2q
from .types import Axis, PathLike, Seed
from .utils import io_utils
from .utils.random_streams import keyed_generator, keyed_hash, keyed_uniform

###############################################################################

log = logging.getLogger(__name__)

###############################################################################

_SEED_LIMIT = 1 << 64


@dataclass(frozen=True)
class CircuitSpec:
    """
    Deterministic description of a brickwall hybrid circuit on L system qubits
    with periodic boundary conditions.

    Parameters
    ----------
    L: int
        Number of system qubits. Must be even.
    T: int
        Number of layers; each layer is a unitary brickwall layer followed by a
        measurement round.
    p: float
        Probability that a site is measured in a measurement round.
    circuit_seed: int
        64-bit seed from which every gate and measurement site derives.
    init: str
        Initial state, "product" or "scrambled".
        Default: "product"
    ref_site: Optional[int]
        System qubit entangled with the reference.
        Default: None (L // 2)
    final_measurement_round: bool
        Whether the last unitary layer is followed by a measurement round.
        Default: True
    """

    L: int
    T: int
    p: float
    circuit_seed: int
    init: str = constants.INIT_PRODUCT
    ref_site: Optional[int] = None
    final_measurement_round: bool = True

    def __post_init__(self) -> None:
        if self.ref_site is None:
            object.__setattr__(self, "ref_site", self.L // 2)

        if self.L < 2 or self.L % 2:
            raise InvalidCircuitSpecError(
                f"Brickwall circuits need an even number of qubits "
                f"(received L={self.L})."
            )
        if self.T < 1:
            raise InvalidCircuitSpecError(
                f"Depth must be positive (received T={self.T})."
            )
        if not 0.0 <= self.p <= 1.0:
            raise InvalidCircuitSpecError(
                f"Measurement rate must lie in [0, 1] (received p={self.p})."
            )
        if not 0 <= self.circuit_seed < _SEED_LIMIT:
            raise InvalidCircuitSpecError(
                f"Circuit seed must be a 64-bit unsigned integer "
                f"(received {self.circuit_seed})."
            )
        if self.init not in constants.INIT_MODES:
            raise InvalidCircuitSpecError(
                f"Initial state must be one of {constants.INIT_MODES} "
                f"(received '{self.init}')."
            )
        if not 0 <= self.ref_site < self.L:  # type: ignore
            raise InvalidCircuitSpecError(
                f"Reference partner site {self.ref_site} outside [0, {self.L})."
            )

    @property
    def reference(self) -> int:
        """Tableau index of the reference qubit."""
        return self.L

    def with_seed(self, circuit_seed: Seed) -> "CircuitSpec":
        return replace(self, circuit_seed=int(circuit_seed))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "CircuitSpec":
        unknown = set(values) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidCircuitSpecError(
                f"Unknown circuit spec keys: {sorted(unknown)}"
            )
        return cls(**values)


def load_circuit_spec(uri: PathLike, fs_kwargs: Dict[str, Any] = {}) -> CircuitSpec:
    """Read a circuit spec from a YAML document."""
    values = yaml.safe_load(io_utils.read_bytes(uri, fs_kwargs=fs_kwargs))
    return CircuitSpec.from_dict(values)


def save_circuit_spec(
    spec: CircuitSpec, uri: PathLike, fs_kwargs: Dict[str, Any] = {}
) -> None:
    io_utils.write_text(
        uri, yaml.safe_dump(spec.to_dict(), sort_keys=True), fs_kwargs=fs_kwargs
    )


def circuit_seeds(base_seed: Seed, count: int, offset: int = 0) -> List[int]:
    """The family of circuit seeds derived from one base seed."""
    counters = np.arange(offset, offset + count, dtype=np.uint64)
    return [int(seed) for seed in keyed_hash(base_seed, counters, tag="circuit")]


###############################################################################


@dataclass(frozen=True)
class GatePlacement:
    sites: Tuple[int, int]
    gate: CliffordGate


Layer = Tuple[GatePlacement, ...]


@dataclass(frozen=True)
class CircuitInstance:
    """
    A fully materialized hybrid circuit. Immutable and freely shareable.

    Attributes
    ----------
    spec: CircuitSpec
        The spec this instance was built from. For sub-circuits, a spec on L_B
        sites whose gates are inherited from the parent rather than regenerated.
    gates: Tuple[Layer, ...]
        Per layer, the gate placements in ascending site order.
    measure_sites: Tuple[Tuple[int, ...], ...]
        Per layer, measured sites in ascending order (the measurement order).
    scramble_prefix: Optional[Tuple[Layer, ...]]
        Unitary-only layers applied before the reference is entangled.
    root_sites: Tuple[int, ...]
        Site i of this instance is site root_sites[i] of the full circuit.
    periodic: bool
        Whether the brickwall wraps around (false for narrow strips).
    """

    spec: CircuitSpec
    gates: Tuple[Layer, ...]
    measure_sites: Tuple[Tuple[int, ...], ...]
    scramble_prefix: Optional[Tuple[Layer, ...]] = None
    root_sites: Tuple[int, ...] = field(default=())
    periodic: bool = True

    def __post_init__(self) -> None:
        if len(self.root_sites) == 0:
            object.__setattr__(self, "root_sites", tuple(range(self.spec.L)))

    @property
    def n_sites(self) -> int:
        return self.spec.L

    @property
    def depth(self) -> int:
        return self.spec.T

    @property
    def ref_site(self) -> int:
        return self.spec.ref_site  # type: ignore

    @property
    def circuit_seed(self) -> int:
        return self.spec.circuit_seed

    def measurement_mask(self) -> np.ndarray:
        mask = np.zeros((self.depth, self.n_sites), dtype=bool)
        for layer, sites in enumerate(self.measure_sites):
            mask[layer, list(sites)] = True
        return mask

    def slots(self) -> List[Tuple[int, int]]:
        """Measurement slots (layer, site) in execution order."""
        return [
            (layer, site)
            for layer, sites in enumerate(self.measure_sites)
            for site in sites
        ]

    def to_bytes(self) -> bytes:
        spec = self.spec
        parts = [
            f"{spec.L}|{spec.T}|{spec.p!r}|{spec.circuit_seed}|{spec.init}|"
            f"{spec.ref_site}|{int(spec.final_measurement_round)}|"
            f"{int(self.periodic)}|{self.root_sites}".encode()
        ]
        for layers in (self.scramble_prefix or (), self.gates):
            for layer in layers:
                for placement in layer:
                    parts.append(str(placement.sites).encode())
                    parts.append(placement.gate.to_bytes())
                parts.append(b";")
            parts.append(b"#")
        for sites in self.measure_sites:
            parts.append(str(sites).encode())
        return b"".join(parts)

    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_bytes()).hexdigest()[:16]


###############################################################################


def brickwall_pairs(L: int, layer: int) -> List[Tuple[int, int]]:
    """
    Site pairs of a brickwall layer: (2i, 2i+1) on even layers and
    (2i+1, 2i+2) mod L on odd ones.
    """
    offset = layer % 2
    return [((2 * i + offset) % L, (2 * i + 1 + offset) % L) for i in range(L // 2)]


def _brickwall_layer(seed: int, layer: int, L: int, tag: str) -> Layer:
    return tuple(
        GatePlacement(
            (a, b), sample_random_clifford_2q(keyed_generator(seed, layer, a, tag=tag))
        )
        for a, b in brickwall_pairs(L, layer)
    )


def build_scramble_prefix(spec: CircuitSpec) -> Tuple[Layer, ...]:
    """T_s = L unitary-only brickwall layers keyed independently of the circuit."""
    return tuple(
        _brickwall_layer(spec.circuit_seed, layer, spec.L, tag="scramble")
        for layer in range(spec.L)
    )


def build_circuit(spec: CircuitSpec) -> CircuitInstance:
    """
    Materialize the gates and measurement sites of a spec.

    The gate at (layer, leftmost site s) is drawn from a stream keyed by
    (circuit_seed, layer, s, "gate") and the measurement coin at (layer, site)
    from (circuit_seed, layer, site, "meas"), so the result is a pure function of
    `spec`.

    Parameters
    ----------
    spec: CircuitSpec
        The circuit description.

    Returns
    -------
    instance: CircuitInstance
        The materialized circuit.
    """
    gates = tuple(
        _brickwall_layer(spec.circuit_seed, layer, spec.L, tag="gate")
        for layer in range(spec.T)
    )

    layers = np.arange(spec.T, dtype=np.uint64)[:, np.newaxis]
    sites = np.arange(spec.L, dtype=np.uint64)[np.newaxis, :]
    coins = keyed_uniform(spec.circuit_seed, layers, sites, tag="meas") < spec.p
    if not spec.final_measurement_round:
        coins[-1] = False

    measure_sites = tuple(
        tuple(int(site) for site in np.flatnonzero(row)) for row in coins
    )
    prefix = (
        build_scramble_prefix(spec)
        if spec.init == constants.INIT_SCRAMBLED
        else None
    )
    return CircuitInstance(spec, gates, measure_sites, scramble_prefix=prefix)


def apply_layer(t: Tableau, layer: Iterable[GatePlacement]) -> None:
    for placement in layer:
        t.apply_gate(placement.gate, placement.sites)


def scramble_initial(spec: CircuitSpec, t: Tableau) -> None:
    """
    Apply the scrambling prefix of a spec (T_s = L unitary-only layers).

    Raises
    ------
    InvalidCircuitSpecError
        The spec does not ask for a scrambled initial state.
    """
    if spec.init != constants.INIT_SCRAMBLED:
        raise InvalidCircuitSpecError(
            f"Spec with init='{spec.init}' has no scrambling prefix."
        )
    for layer in build_scramble_prefix(spec):
        apply_layer(t, layer)


def unscramble(t: Tableau, prefix: Tuple[Layer, ...]) -> None:
    """Undo a scrambling prefix by applying inverse gates in reverse order."""
    for layer in reversed(prefix):
        for placement in reversed(layer):
            t.apply_gate(placement.gate.inverse(), placement.sites)


def entangle_reference(t: Tableau, spec: CircuitSpec) -> None:
    """
    Make a Bell pair between the reference qubit (last tableau index, in |0>)
    and the system qubit at spec.ref_site: H on the partner, then CNOT from the
    partner onto the reference.

    The H is skipped if +-X on the partner already stabilizes the state, which
    would otherwise leave the reference pure; the result is then stabilizer
    equivalent and the reference entropy is 1 either way.
    """
    partner = spec.ref_site
    reference = t.n_total - 1
    if not t.is_stabilized(PauliString.single(t.n_total, partner, Axis.X)):
        t.apply_gate(CliffordGate.hadamard(), [partner])
    t.apply_gate(CliffordGate.cnot(), [partner, reference])


###############################################################################


def _restrict_layers(
    layers: Tuple[Layer, ...], local_of: Dict[int, int], keep_all: bool
) -> Tuple[Layer, ...]:
    restricted = []
    for layer in layers:
        kept = []
        for placement in layer:
            a, b = placement.sites
            if a not in local_of or b not in local_of:
                continue
            if not keep_all and local_of[b] != local_of[a] + 1:
                continue
            kept.append(GatePlacement((local_of[a], local_of[b]), placement.gate))
        restricted.append(tuple(sorted(kept, key=lambda g: g.sites[0])))
    return tuple(restricted)


def derive_subcircuit(parent: CircuitInstance, L_B: int) -> CircuitInstance:
    """
    Restrict a circuit to a strip of L_B sites centered on its reference partner.

    Gates fully inside the strip are kept bit-identical, gates straddling the strip
    edge are dropped (open boundary), measurement sites inside the strip are kept.
    For L_B equal to the parent width the parent's boundary is kept, so the gate
    multiset is unchanged.

    Parameters
    ----------
    parent: CircuitInstance
        The circuit to restrict.
    L_B: int
        Strip width, even, with 4 <= L_B <= parent width.

    Returns
    -------
    subcircuit: CircuitInstance
        Instance on L_B sites whose reference partner is the strip center.

    Raises
    ------
    InvalidCircuitSpecError
        L_B odd or out of range.
    """
    L = parent.n_sites
    if L_B % 2 or not constants.MIN_SUBCIRCUIT_WIDTH <= L_B <= L:
        raise InvalidCircuitSpecError(
            f"Sub-circuit width must be even and within "
            f"[{constants.MIN_SUBCIRCUIT_WIDTH}, {L}] (received L_B={L_B})."
        )

    start = parent.ref_site - L_B // 2
    strip = [(start + k) % L for k in range(L_B)]
    local_of = {site: k for k, site in enumerate(strip)}
    keep_all = L_B == L

    gates = _restrict_layers(parent.gates, local_of, keep_all)
    prefix = (
        _restrict_layers(parent.scramble_prefix, local_of, keep_all)
        if parent.scramble_prefix is not None
        else None
    )
    measure_sites = tuple(
        tuple(sorted(local_of[site] for site in sites if site in local_of))
        for sites in parent.measure_sites
    )
    spec = replace(parent.spec, L=L_B, ref_site=L_B // 2)

    return CircuitInstance(
        spec,
        gates,
        measure_sites,
        scramble_prefix=prefix,
        root_sites=tuple(parent.root_sites[site] for site in strip),
        periodic=parent.periodic and keep_all,
    )
