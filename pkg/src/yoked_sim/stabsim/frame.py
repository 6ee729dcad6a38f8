"""Vectorised Pauli-frame simulation of noisy stabilizer circuits."""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from multiprocessing import get_context
from pathlib import Path
from typing import Protocol

import numpy as np
import numpy.typing as npt
import structlog
from scipy import sparse

from yoked_sim.core.config import get_settings
from yoked_sim.errors import CircuitStructureError, ParameterError
from yoked_sim.stabsim.circuit import Channel, Instruction, NoisyCircuit, Op

logger = structlog.get_logger(__name__)

BoolArray = npt.NDArray[np.bool_]

# Pauli codes: 0 = I, 1 = X, 2 = Y, 3 = Z.
_HAS_X = np.array([False, True, True, False])
_HAS_Z = np.array([False, False, True, True])


@dataclass(frozen=True)
class ElementaryError:
    """One outcome of one channel: the instruction, the target slot and the Pauli codes.

    `slot` is the target position for single-qubit channels and the pair position for DEP2.
    For MERR the code 1 means "flip the measurement".
    """

    step: int
    slot: int
    paulis: tuple[int, ...]
    probability: float


class NoiseSource(Protocol):
    def channel(
        self, step: int, inst: Instruction, rows: int
    ) -> tuple[BoolArray, BoolArray] | None: ...


def shot_rng(seed: int, shot: int) -> np.random.Generator:
    """Counter-based stream owned by one shot."""

    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, shot])))


def _channel_width(inst: Instruction) -> int:
    width = len(inst.targets)
    return width // 2 if inst.channel is Channel.DEP2 else width


class RandomNoise:
    """Channel outcomes for shots first_shot..first_shot+rows-1.

    Every noise instruction owns a fixed slice of each shot's stream, in circuit
    order, so a shot's outcome depends only on (seed, shot, channel index).
    """

    def __init__(self, circuit: NoisyCircuit, seed: int, first_shot: int, rows: int) -> None:
        self._columns: dict[int, slice] = {}
        total = 0
        for step, inst in enumerate(circuit.instructions):
            if inst.op is Op.NOISE:
                width = _channel_width(inst)
                self._columns[step] = slice(total, total + width)
                total += width
        self._draws = np.empty((rows, total), dtype=np.float64)
        for row in range(rows):
            self._draws[row] = shot_rng(seed, first_shot + row).random(total)

    def channel(
        self, step: int, inst: Instruction, rows: int
    ) -> tuple[BoolArray, BoolArray] | None:
        p = inst.probability
        if p <= 0.0:
            return None
        if rows != self._draws.shape[0]:
            raise ParameterError(f"noise prepared for {self._draws.shape[0]} rows, got {rows}")
        draws = self._draws[:, self._columns[step]]
        width = draws.shape[1]
        hit = draws < p
        if inst.channel is Channel.DEP1:
            codes = np.where(hit, np.minimum((draws / (p / 3)).astype(np.int64), 2) + 1, 0)
            return _HAS_X[codes], _HAS_Z[codes]
        if inst.channel is Channel.DEP2:
            pair = np.where(hit, np.minimum((draws / (p / 15)).astype(np.int64), 14) + 1, 0)
            codes = np.empty((rows, 2 * width), dtype=np.int64)
            codes[:, 0::2] = pair // 4
            codes[:, 1::2] = pair % 4
            return _HAS_X[codes], _HAS_Z[codes]
        if inst.channel is Channel.ZERR:
            return np.zeros_like(hit), hit
        return hit, np.zeros_like(hit)


class InjectedNoise:
    """Apply a fixed list of elementary errors per row; every other channel stays silent."""

    def __init__(self, circuit: NoisyCircuit, per_row: Sequence[Sequence[ElementaryError]]) -> None:
        self._by_step: dict[int, list[tuple[int, ElementaryError]]] = {}
        for row, errors in enumerate(per_row):
            for error in errors:
                self._by_step.setdefault(error.step, []).append((row, error))
        self._circuit = circuit

    def channel(
        self, step: int, inst: Instruction, rows: int
    ) -> tuple[BoolArray, BoolArray] | None:
        hits = self._by_step.get(step)
        if not hits:
            return None
        width = len(inst.targets)
        codes = np.zeros((rows, width), dtype=np.int64)
        span = 2 if inst.channel is Channel.DEP2 else 1
        for row, error in hits:
            for offset, code in enumerate(error.paulis):
                codes[row, error.slot * span + offset] ^= code
        if inst.channel is Channel.ZERR:
            return np.zeros(codes.shape, dtype=bool), codes > 0
        if inst.channel in (Channel.XERR, Channel.MERR):
            return codes > 0, np.zeros(codes.shape, dtype=bool)
        return _HAS_X[codes], _HAS_Z[codes]


@dataclass(frozen=True)
class DetectionData:
    """Sampled detection events with their seed/shot provenance."""

    detectors: BoolArray
    observables: BoolArray
    seed: int
    first_shot: int = 0

    @property
    def shots(self) -> int:
        return int(self.detectors.shape[0])

    def write(self, path: Path) -> Path:
        """Little-endian packed bits per shot plus a JSON sidecar."""

        rows = np.concatenate([self.detectors, self.observables], axis=1)
        packed = np.packbits(rows, axis=1, bitorder="little")
        path.write_bytes(packed.tobytes())
        sidecar = path.with_suffix(path.suffix + ".json")
        meta = {
            "shots": self.shots,
            "detectors": int(self.detectors.shape[1]),
            "observables": int(self.observables.shape[1]),
            "bytes_per_shot": int(packed.shape[1]) if packed.ndim == 2 else 0,
            "seed": self.seed,
            "first_shot": self.first_shot,
        }
        sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
        return sidecar

    @classmethod
    def read(cls, path: Path) -> DetectionData:
        meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
        raw = np.frombuffer(path.read_bytes(), dtype=np.uint8)
        packed = raw.reshape(meta["shots"], meta["bytes_per_shot"])
        width = meta["detectors"] + meta["observables"]
        bits = np.unpackbits(packed, axis=1, bitorder="little")[:, :width].astype(bool)
        return cls(
            detectors=bits[:, : meta["detectors"]],
            observables=bits[:, meta["detectors"] :],
            seed=meta["seed"],
            first_shot=meta["first_shot"],
        )


def _parity_matrix(groups: Sequence[tuple[int, ...]], width: int) -> sparse.csr_matrix:
    rows = [r for r, group in enumerate(groups) for _ in group]
    cols = [c for group in groups for c in group]
    data = np.ones(len(cols), dtype=np.int32)
    return sparse.csr_matrix((data, (rows, cols)), shape=(len(groups), width), dtype=np.int32)


class FrameSimulator:
    """Propagate Pauli frames for many rows at once through one circuit."""

    def __init__(self, circuit: NoisyCircuit) -> None:
        self.circuit = circuit
        self._steps = [
            (i, inst, np.asarray(inst.targets, dtype=np.int64))
            for i, inst in enumerate(circuit.instructions)
            if inst.op not in (Op.TICK, Op.DETECTOR, Op.OBSERVABLE)
        ]
        m = circuit.num_measurements
        self._detector_matrix = _parity_matrix(circuit.detectors, m)
        observables = circuit.observables
        groups = [observables.get(k, ()) for k in range(circuit.num_observables)]
        self._observable_matrix = _parity_matrix(groups, m)

    def run(self, rows: int, noise: NoiseSource) -> tuple[BoolArray, BoolArray]:
        """Return (detector bits, observable flips), each with one row per frame."""

        n = self.circuit.num_qubits
        x = np.zeros((rows, n), dtype=bool)
        z = np.zeros((rows, n), dtype=bool)
        pending = np.zeros((rows, n), dtype=bool)
        record = np.zeros((rows, self.circuit.num_measurements), dtype=bool)
        measured = 0
        for step, inst, targets in self._steps:
            op = inst.op
            if op is Op.H:
                x[:, targets], z[:, targets] = z[:, targets], x[:, targets]
            elif op is Op.CZ:
                a, b = targets[0::2], targets[1::2]
                z[:, a] ^= x[:, b]
                z[:, b] ^= x[:, a]
            elif op is Op.M:
                count = targets.size
                record[:, measured : measured + count] = x[:, targets] ^ pending[:, targets]
                pending[:, targets] = False
                z[:, targets] = False
                measured += count
            elif op is Op.R:
                x[:, targets] = False
                z[:, targets] = False
            elif op is Op.NOISE:
                flips = noise.channel(step, inst, rows)
                if flips is None:
                    continue
                fx, fz = flips
                if inst.channel is Channel.MERR:
                    pending[:, targets] ^= fx
                else:
                    x[:, targets] ^= fx
                    z[:, targets] ^= fz
        as_int = record.astype(np.int32)
        detectors = (self._detector_matrix @ as_int.T).T % 2
        observables = (self._observable_matrix @ as_int.T).T % 2
        return detectors.astype(bool), observables.astype(bool)


def enumerate_elementary_errors(circuit: NoisyCircuit) -> list[ElementaryError]:
    """Every nonzero-probability outcome of every channel, in circuit order."""

    errors: list[ElementaryError] = []
    for step, inst in enumerate(circuit.instructions):
        if inst.op is not Op.NOISE or inst.probability <= 0.0:
            continue
        p = inst.probability
        if inst.channel is Channel.DEP1:
            for slot in range(len(inst.targets)):
                errors += [ElementaryError(step, slot, (code,), p / 3) for code in (1, 2, 3)]
        elif inst.channel is Channel.DEP2:
            for slot in range(len(inst.targets) // 2):
                errors += [
                    ElementaryError(step, slot, (combo // 4, combo % 4), p / 15)
                    for combo in range(1, 16)
                ]
        else:
            errors += [ElementaryError(step, slot, (1,), p) for slot in range(len(inst.targets))]
    return errors


def _sample_chunk(args: tuple[NoisyCircuit, int, int, int]) -> tuple[BoolArray, BoolArray]:
    circuit, seed, start, count = args
    return FrameSimulator(circuit).run(count, RandomNoise(circuit, seed, start, count))


def sample_detectors(
    circuit: NoisyCircuit,
    shots: int,
    seed: int,
    *,
    workers: int | None = None,
    first_shot: int = 0,
) -> DetectionData:
    """Sample detection events; shot i depends only on (seed, i).

    Shots are simulated in chunks of `shot_block` rows; the chunking never changes results.
    """

    if circuit.num_detectors == 0:
        raise CircuitStructureError("circuit has no detectors to sample")
    if shots < 0 or first_shot < 0:
        raise ParameterError("shots and first_shot must be non-negative")
    settings = get_settings()
    chunk = settings.shot_block
    workers = workers or settings.workers
    end = first_shot + shots
    jobs = [
        (circuit, seed, start, min(chunk, end - start)) for start in range(first_shot, end, chunk)
    ]

    if workers > 1 and len(jobs) > 1:
        with get_context("spawn").Pool(processes=workers) as pool:
            results = pool.map(_sample_chunk, jobs)
    else:
        results = [_sample_chunk(job) for job in jobs]

    if results:
        detectors = np.concatenate([r[0] for r in results])
        observables = np.concatenate([r[1] for r in results])
    else:
        detectors = np.zeros((0, circuit.num_detectors), dtype=bool)
        observables = np.zeros((0, circuit.num_observables), dtype=bool)
    logger.debug("stabsim.sampled", shots=shots, seed=seed, chunks=len(jobs), workers=workers)
    return DetectionData(
        detectors=detectors,
        observables=observables,
        seed=seed,
        first_shot=first_shot,
    )
