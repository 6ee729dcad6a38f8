"""Layered stabilizer circuits with noise channels and detector annotations."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from enum import Enum

from yoked_sim.errors import CircuitStructureError, ParameterError


class Op(str, Enum):
    """Circuit instruction kinds."""

    H = "H"
    I = "I"  # noqa: E741
    CZ = "CZ"
    M = "M"
    R = "R"
    TICK = "TICK"
    NOISE = "NOISE"
    DETECTOR = "DETECTOR"
    OBSERVABLE = "OBSERVABLE"


class Channel(str, Enum):
    """Noise channels; MERR flips the next Z-basis measurement of its target."""

    MERR = "MERR"
    XERR = "XERR"
    ZERR = "ZERR"
    DEP1 = "DEP1"
    DEP2 = "DEP2"


GATES = frozenset({Op.H, Op.I, Op.CZ, Op.M, Op.R})
UNITARIES = frozenset({Op.H, Op.I, Op.CZ})
COLLAPSING = frozenset({Op.M, Op.R})


@dataclass(frozen=True)
class Instruction:
    op: Op
    targets: tuple[int, ...] = ()
    channel: Channel | None = None
    probability: float = 0.0
    index: int = 0
    noiseless: bool = False

    def to_line(self) -> str:
        body = " ".join(str(t) for t in self.targets)
        if self.op is Op.NOISE:
            assert self.channel is not None
            return f"NOISE {self.channel.value} {self.probability!r} {body}".rstrip()
        if self.op is Op.OBSERVABLE:
            return f"OBSERVABLE {self.index} {body}".rstrip()
        tag = "[noiseless]" if self.noiseless else ""
        return f"{self.op.value}{tag} {body}".rstrip()


@dataclass(frozen=True)
class NoisyCircuit:
    """Ordered instruction list; detectors and observables index the measurement record."""

    num_qubits: int
    instructions: tuple[Instruction, ...]

    def __post_init__(self) -> None:
        measured = 0
        for inst in self.instructions:
            if any(t < 0 for t in inst.targets):
                raise CircuitStructureError(f"negative target in {inst.to_line()}")
            if inst.op in GATES and any(t >= self.num_qubits for t in inst.targets):
                raise CircuitStructureError(f"target out of range in {inst.to_line()}")
            if inst.op is Op.CZ and len(inst.targets) % 2:
                raise CircuitStructureError("CZ needs an even number of targets")
            if inst.op is Op.NOISE:
                if not 0.0 <= inst.probability <= 1.0:
                    raise ParameterError(f"channel probability {inst.probability} outside [0, 1]")
                if inst.channel is Channel.DEP2 and len(inst.targets) % 2:
                    raise CircuitStructureError("DEP2 needs an even number of targets")
            if inst.op is Op.M:
                measured += len(inst.targets)
            if inst.op in (Op.DETECTOR, Op.OBSERVABLE) and any(t >= measured for t in inst.targets):
                raise CircuitStructureError(
                    f"{inst.op.value} references a measurement that has not happened yet"
                )

    @property
    def num_measurements(self) -> int:
        return sum(len(i.targets) for i in self.instructions if i.op is Op.M)

    @property
    def detectors(self) -> list[tuple[int, ...]]:
        return [i.targets for i in self.instructions if i.op is Op.DETECTOR]

    @property
    def num_detectors(self) -> int:
        return sum(1 for i in self.instructions if i.op is Op.DETECTOR)

    @property
    def observables(self) -> dict[int, tuple[int, ...]]:
        merged: dict[int, list[int]] = {}
        for inst in self.instructions:
            if inst.op is Op.OBSERVABLE:
                merged.setdefault(inst.index, []).extend(inst.targets)
        return {k: tuple(v) for k, v in sorted(merged.items())}

    @property
    def num_observables(self) -> int:
        observables = self.observables
        return max(observables) + 1 if observables else 0

    def noise_channels(self) -> list[Instruction]:
        return [i for i in self.instructions if i.op is Op.NOISE]

    def layers(self) -> Iterator[list[Instruction]]:
        """Yield the instructions between consecutive TICKs."""

        layer: list[Instruction] = []
        for inst in self.instructions:
            if inst.op is Op.TICK:
                yield layer
                layer = []
            else:
                layer.append(inst)
        yield layer

    def require_layered(self) -> None:
        """Raise unless every qubit is acted on by at most one gate per layer."""

        for number, layer in enumerate(self.layers()):
            seen: set[int] = set()
            for inst in layer:
                if inst.op not in GATES:
                    continue
                overlap = seen.intersection(inst.targets)
                if overlap or len(set(inst.targets)) != len(inst.targets):
                    raise CircuitStructureError(
                        f"layer {number} acts twice on qubits {sorted(overlap) or inst.targets}; "
                        "separate time slices with TICK"
                    )
                seen.update(inst.targets)

    def to_text(self) -> str:
        header = f"QUBITS {self.num_qubits}\n"
        return header + "".join(inst.to_line() + "\n" for inst in self.instructions)


def _parse_line(parts: Sequence[str]) -> Instruction:
    head = parts[0]
    noiseless = head.endswith("[noiseless]")
    name = head.removesuffix("[noiseless]")
    op = Op(name)
    if op is Op.NOISE:
        return Instruction(
            op=op,
            channel=Channel(parts[1]),
            probability=float(parts[2]),
            targets=tuple(int(t) for t in parts[3:]),
        )
    if op is Op.OBSERVABLE:
        return Instruction(op=op, index=int(parts[1]), targets=tuple(int(t) for t in parts[2:]))
    return Instruction(op=op, targets=tuple(int(t) for t in parts[1:]), noiseless=noiseless)


def parse_circuit(text: str) -> NoisyCircuit:
    """Parse the line-oriented text produced by `NoisyCircuit.to_text`."""

    num_qubits: int | None = None
    instructions: list[Instruction] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "QUBITS":
            num_qubits = int(parts[1])
            continue
        try:
            instructions.append(_parse_line(parts))
        except (ValueError, IndexError) as exc:
            raise CircuitStructureError(f"line {lineno}: cannot parse {raw!r}") from exc
    if num_qubits is None:
        touched = [t for i in instructions if i.op in GATES for t in i.targets]
        num_qubits = max(touched) + 1 if touched else 0
    return NoisyCircuit(num_qubits=num_qubits, instructions=tuple(instructions))
