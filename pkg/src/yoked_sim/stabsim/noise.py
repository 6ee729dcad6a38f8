"""SI1000 superconducting-inspired circuit noise."""

from __future__ import annotations

import structlog

from yoked_sim.schemas.noise import NoiseParams
from yoked_sim.stabsim.circuit import (
    COLLAPSING,
    GATES,
    Channel,
    Instruction,
    NoisyCircuit,
    Op,
)

logger = structlog.get_logger(__name__)


def _channel(channel: Channel, p: float, targets: tuple[int, ...]) -> list[Instruction]:
    if p <= 0.0 or not targets:
        return []
    return [Instruction(Op.NOISE, targets, channel=channel, probability=p)]


def _noisy_layer(layer: list[Instruction], num_qubits: int, p: float) -> list[Instruction]:
    gates = [inst for inst in layer if inst.op in GATES]
    annotations = [inst for inst in layer if inst.op not in GATES]
    if gates and all(inst.noiseless for inst in gates):
        return list(layer)

    busy = {t for inst in gates for t in inst.targets}
    idle = tuple(q for q in range(num_qubits) if q not in busy)
    collapsing = any(inst.op in COLLAPSING for inst in gates)

    out: list[Instruction] = []
    for inst in gates:
        if inst.op is Op.M:
            out += _channel(Channel.MERR, 5 * p, inst.targets)
            out.append(inst)
            out += _channel(Channel.DEP1, p, inst.targets)
        elif inst.op is Op.R:
            out.append(inst)
            out += _channel(Channel.XERR, 2 * p, inst.targets)
        elif inst.op is Op.CZ:
            out.append(inst)
            out += _channel(Channel.DEP2, p, inst.targets)
        else:
            out.append(inst)
            out += _channel(Channel.DEP1, p / 10, inst.targets)
    if gates:
        out += _channel(Channel.DEP1, 2 * p if collapsing else p / 10, idle)
    return out + annotations


def apply_si1000(circuit: NoisyCircuit, params: NoiseParams) -> NoisyCircuit:
    """Insert SI1000 channels into a noiseless layered circuit.

    Layers whose gates are all tagged noiseless are copied unchanged.
    """

    circuit.require_layered()
    layers = list(circuit.layers())
    out: list[Instruction] = []
    for number, layer in enumerate(layers):
        if number:
            out.append(Instruction(Op.TICK))
        out += _noisy_layer(layer, circuit.num_qubits, params.p)
    noisy = NoisyCircuit(num_qubits=circuit.num_qubits, instructions=tuple(out))
    logger.debug(
        "stabsim.noise_applied",
        p=params.p,
        channels=len(noisy.noise_channels()),
        layers=len(layers),
    )
    return noisy
