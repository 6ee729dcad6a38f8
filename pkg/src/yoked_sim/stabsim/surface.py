"""Rotated surface-code memory circuits in the {H, CZ, M_Z, R_Z} gateset."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import structlog

from yoked_sim.errors import ParameterError
from yoked_sim.stabsim.circuit import Instruction, NoisyCircuit, Op

logger = structlog.get_logger(__name__)

Coord = tuple[int, int]

# Data-qubit offsets visited by each plaquette type in the four entangling layers.
# The last two X-check offsets share a row, so X hooks run parallel to the Z logical.
SCHEDULES: dict[str, dict[str, tuple[Coord, ...]]] = {
    "hook_safe": {
        "X": ((1, 1), (-1, 1), (1, -1), (-1, -1)),
        "Z": ((1, 1), (1, -1), (-1, 1), (-1, -1)),
    },
    "hook_aligned": {
        "X": ((1, 1), (1, -1), (-1, 1), (-1, -1)),
        "Z": ((1, 1), (-1, 1), (1, -1), (-1, -1)),
    },
}


@dataclass(frozen=True)
class SurfaceLayout:
    """Qubit coordinates of a distance-d rotated patch.

    Data qubits sit on odd (x, y) in [1, 2d-1]; plaquettes on even coordinates. Z-type
    weight-two plaquettes line the left and right edges, X-type the top and bottom, so
    X-error chains end on the top and bottom edges and the Z logical runs along y = 1.
    """

    d: int

    @cached_property
    def data(self) -> tuple[Coord, ...]:
        return tuple(
            (x, y) for y in range(1, 2 * self.d, 2) for x in range(1, 2 * self.d, 2)
        )

    def plaquette_type(self, coord: Coord) -> str:
        x, y = coord
        return "X" if ((x + y) // 2) % 2 == 0 else "Z"

    @cached_property
    def plaquettes(self) -> tuple[Coord, ...]:
        edge = 2 * self.d
        found: list[Coord] = []
        for y in range(0, edge + 1, 2):
            for x in range(0, edge + 1, 2):
                on_side = x in (0, edge)
                on_cap = y in (0, edge)
                if on_side and on_cap:
                    continue
                kind = self.plaquette_type((x, y))
                if on_side and kind != "Z":
                    continue
                if on_cap and kind != "X":
                    continue
                found.append((x, y))
        return tuple(found)

    @cached_property
    def index(self) -> dict[Coord, int]:
        ordered = self.data + self.plaquettes
        return {coord: i for i, coord in enumerate(ordered)}

    @property
    def num_qubits(self) -> int:
        return len(self.data) + len(self.plaquettes)

    def support(self, plaquette: Coord) -> list[Coord]:
        x, y = plaquette
        data = set(self.data)
        corners = ((x + 1, y + 1), (x - 1, y + 1), (x + 1, y - 1), (x - 1, y - 1))
        return [c for c in corners if c in data]

    def of_type(self, kind: str) -> list[Coord]:
        return [p for p in self.plaquettes if self.plaquette_type(p) == kind]

    @property
    def logical_row(self) -> list[Coord]:
        """Data qubits whose Z product is the logical observable."""

        return [c for c in self.data if c[1] == 1]

    @property
    def opposite_row(self) -> list[Coord]:
        """Equivalent logical representative along the bottom edge."""

        return [c for c in self.data if c[1] == 2 * self.d - 1]


def _entangling_layers(layout: SurfaceLayout, schedule: str) -> list[list[tuple[int, int]]]:
    """Four layers of (control, target) pairs of the equivalent CNOT circuit."""

    try:
        orders = SCHEDULES[schedule]
    except KeyError as exc:
        msg = f"unknown schedule {schedule!r}; choose from {sorted(SCHEDULES)}"
        raise ParameterError(msg) from exc
    data = set(layout.data)
    layers: list[list[tuple[int, int]]] = []
    for step in range(4):
        pairs: list[tuple[int, int]] = []
        for plaquette in layout.plaquettes:
            kind = layout.plaquette_type(plaquette)
            dx, dy = orders[kind][step]
            neighbour = (plaquette[0] + dx, plaquette[1] + dy)
            if neighbour not in data:
                continue
            m, q = layout.index[plaquette], layout.index[neighbour]
            pairs.append((m, q) if kind == "X" else (q, m))
        layers.append(pairs)
    return layers


def _hadamard_slots(layout: SurfaceLayout, layers: list[list[tuple[int, int]]]) -> list[list[int]]:
    """Hadamards around each CZ layer, cancelled in pairs; slot i precedes CZ layer i."""

    parity = [[0] * layout.num_qubits for _ in range(len(layers) + 1)]
    for plaquette in layout.of_type("X"):
        m = layout.index[plaquette]
        parity[0][m] ^= 1
        parity[-1][m] ^= 1
    for step, pairs in enumerate(layers):
        for _, target in pairs:
            parity[step][target] ^= 1
            parity[step + 1][target] ^= 1
    return [[q for q, bit in enumerate(slot) if bit] for slot in parity]


def _with_idles(gates: list[Instruction], num_qubits: int) -> list[Instruction]:
    busy = {t for g in gates for t in g.targets}
    idle = tuple(q for q in range(num_qubits) if q not in busy)
    return gates + ([Instruction(Op.I, idle)] if idle else [])


def generate_surface_memory_circuit(
    d: int,
    rounds: int,
    basis: str = "Z",
    schedule: str = "hook_safe",
    *,
    opposite_observable: bool = False,
) -> NoisyCircuit:
    """Noiseless Z-basis memory experiment on a rotated distance-d patch.

    Observable 0 is the top-row representative; `opposite_observable` adds the
    bottom-row one as observable 1.
    """

    if d < 3 or d % 2 == 0:
        raise ParameterError(f"distance must be an odd integer >= 3, got {d}")
    if rounds < 1:
        raise ParameterError(f"rounds must be >= 1, got {rounds}")
    if basis.upper() != "Z":
        raise ParameterError("only Z-basis memory experiments are supported")

    layout = SurfaceLayout(d)
    n = layout.num_qubits
    cnot_layers = _entangling_layers(layout, schedule)
    slots = _hadamard_slots(layout, cnot_layers)
    measure_qubits = tuple(layout.index[p] for p in layout.plaquettes)
    z_plaquettes = set(layout.of_type("Z"))

    out: list[Instruction] = [Instruction(Op.R, tuple(range(n)), noiseless=True)]
    record: dict[tuple[Coord, int], int] = {}
    measured = 0

    for rnd in range(rounds):
        if rnd > 0:
            out += [Instruction(Op.TICK), Instruction(Op.R, measure_qubits)]
        for step in range(len(cnot_layers) + 1):
            if slots[step]:
                out.append(Instruction(Op.TICK))
                out += _with_idles([Instruction(Op.H, tuple(slots[step]))], n)
            if step < len(cnot_layers):
                flat = tuple(q for pair in cnot_layers[step] for q in pair)
                out.append(Instruction(Op.TICK))
                out += _with_idles([Instruction(Op.CZ, flat)], n)
        out += [Instruction(Op.TICK), Instruction(Op.M, measure_qubits)]
        for plaquette in layout.plaquettes:
            record[(plaquette, rnd)] = measured
            measured += 1
        for plaquette in layout.plaquettes:
            if rnd == 0:
                if plaquette in z_plaquettes:
                    out.append(Instruction(Op.DETECTOR, (record[(plaquette, 0)],)))
            else:
                out.append(
                    Instruction(
                        Op.DETECTOR, (record[(plaquette, rnd)], record[(plaquette, rnd - 1)])
                    )
                )

    data_qubits = tuple(layout.index[c] for c in layout.data)
    out += [Instruction(Op.TICK), Instruction(Op.M, data_qubits, noiseless=True)]
    data_record = {coord: measured + i for i, coord in enumerate(layout.data)}
    for plaquette in layout.of_type("Z"):
        targets = tuple(data_record[c] for c in layout.support(plaquette))
        out.append(Instruction(Op.DETECTOR, targets + (record[(plaquette, rounds - 1)],)))
    out.append(
        Instruction(Op.OBSERVABLE, tuple(data_record[c] for c in layout.logical_row), index=0)
    )
    if opposite_observable:
        targets = tuple(data_record[c] for c in layout.opposite_row)
        out.append(Instruction(Op.OBSERVABLE, targets, index=1))

    circuit = NoisyCircuit(num_qubits=n, instructions=tuple(out))
    logger.debug(
        "stabsim.circuit_generated",
        d=d,
        rounds=rounds,
        schedule=schedule,
        detectors=circuit.num_detectors,
    )
    return circuit
