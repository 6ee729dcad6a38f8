import math

import numpy as np
import pytest

from yoked_sim.core.config import get_settings
from yoked_sim.errors import CircuitStructureError, ParameterError
from yoked_sim.schemas.noise import NoiseParams
from yoked_sim.stabsim import (
    BOUNDARY,
    Channel,
    DetectionData,
    DetectorErrorGraph,
    EdgeKind,
    GraphEdge,
    Instruction,
    NoisyCircuit,
    Op,
    apply_si1000,
    build_phenomenological_graph,
    combine_probabilities,
    edge_weight,
    extract_error_graph,
    frame,
    generate_surface_memory_circuit,
    observable_sector,
    parse_circuit,
    parse_graph,
    sample_detectors,
)


def _noisy(d: int = 3, rounds: int = 2, p: float = 1e-3, **kwargs: object) -> NoisyCircuit:
    return apply_si1000(generate_surface_memory_circuit(d, rounds, **kwargs), NoiseParams(p=p))


def _channels(circuit: NoisyCircuit, channel: Channel) -> list[Instruction]:
    return [i for i in circuit.noise_channels() if i.channel is channel]


def test_memory_circuit_shape() -> None:
    circuit = generate_surface_memory_circuit(3, 2)

    assert circuit.num_qubits == 17
    assert circuit.num_detectors == 16
    assert circuit.num_observables == 1
    assert len(circuit.observables[0]) == 3


@pytest.mark.parametrize("d", [3, 5])
def test_each_round_adds_all_plaquette_detectors(d: int) -> None:
    shorter = generate_surface_memory_circuit(d, 2)
    longer = generate_surface_memory_circuit(d, 3)

    assert longer.num_detectors - shorter.num_detectors == d * d - 1


def test_opposite_observable() -> None:
    circuit = generate_surface_memory_circuit(3, 1, opposite_observable=True)

    assert circuit.num_observables == 2
    assert set(circuit.observables[0]).isdisjoint(circuit.observables[1])


def test_invalid_memory_parameters() -> None:
    with pytest.raises(ParameterError):
        generate_surface_memory_circuit(4, 2)
    with pytest.raises(ParameterError):
        generate_surface_memory_circuit(3, 0)
    with pytest.raises(ParameterError):
        generate_surface_memory_circuit(3, 2, schedule="zigzag")


def test_si1000_channel_strengths() -> None:
    p = 1e-3
    circuit = _noisy(p=p)

    assert {i.probability for i in _channels(circuit, Channel.DEP2)} == {p}
    assert {i.probability for i in _channels(circuit, Channel.MERR)} == {5 * p}
    assert {i.probability for i in _channels(circuit, Channel.XERR)} == {2 * p}
    assert {i.probability for i in _channels(circuit, Channel.DEP1)} == {p / 10, p, 2 * p}


def test_si1000_keeps_noiseless_layers() -> None:
    circuit = _noisy()
    first_layer = next(circuit.layers())

    assert [i.op for i in first_layer] == [Op.R]
    assert first_layer[0].noiseless


def test_noise_follows_cz_and_surrounds_measurement() -> None:
    circuit = _noisy()
    instructions = list(circuit.instructions)

    for index, inst in enumerate(instructions):
        if inst.op is Op.CZ:
            follow = instructions[index + 1]
            assert follow.channel is Channel.DEP2
            assert follow.targets == inst.targets
        if inst.op is Op.M and not inst.noiseless:
            assert instructions[index - 1].channel is Channel.MERR
            assert instructions[index + 1].channel is Channel.DEP1


def test_zero_noise_has_no_channels_and_no_edges() -> None:
    circuit = _noisy(p=0.0)

    assert circuit.noise_channels() == []
    assert circuit.num_detectors == 16
    assert extract_error_graph(circuit).edges == ()


def test_layering_is_required() -> None:
    circuit = NoisyCircuit(
        num_qubits=2,
        instructions=(Instruction(Op.H, (0,)), Instruction(Op.H, (0, 1))),
    )

    with pytest.raises(CircuitStructureError):
        apply_si1000(circuit, NoiseParams(p=1e-3))


def test_detector_cannot_reference_future_measurement() -> None:
    with pytest.raises(CircuitStructureError):
        NoisyCircuit(num_qubits=1, instructions=(Instruction(Op.DETECTOR, (0,)),))


def test_circuit_text_parses_back() -> None:
    circuit = _noisy()

    assert parse_circuit(circuit.to_text()) == circuit


def test_extracted_graph() -> None:
    graph = extract_error_graph(_noisy())

    assert graph.num_detectors == 16
    assert graph.edges
    assert all(0.0 < e.probability < 0.5 for e in graph.edges)
    assert graph.tagged[0]
    assert any(e.is_boundary and e.observables & 1 for e in graph.edges)
    assert parse_graph(graph.to_text()) == graph


def test_extracted_graph_at_strongest_noise() -> None:
    graph = extract_error_graph(_noisy(p=0.1))

    free = [e for e in graph.edges if e.probability == 0.5]

    assert free
    assert all(e.weight == 0.0 for e in free)
    assert all(0.0 < e.probability <= 0.5 for e in graph.edges)
    assert parse_graph(graph.to_text()) == graph


def test_graph_rejects_probability_above_half() -> None:
    edge = GraphEdge(0, BOUNDARY, 0.6)

    with pytest.raises(ParameterError):
        DetectorErrorGraph(num_detectors=1, edges=(edge,))


def test_extracted_graph_tags_both_sides() -> None:
    graph = extract_error_graph(_noisy(rounds=1, opposite_observable=True))

    assert graph.num_observables == 2
    assert graph.tagged[0]
    assert graph.tagged[1]
    assert graph.tagged[0].isdisjoint(graph.tagged[1])


def test_observable_sector_contains_first_round() -> None:
    graph = extract_error_graph(_noisy())

    sector = observable_sector(graph)

    assert set(range(4)) <= {int(i) for i in sector}
    assert np.all(np.diff(sector) > 0)


def test_phenomenological_graph_counts() -> None:
    graph = build_phenomenological_graph(3, 2, 0.01, 0.02)

    assert graph.num_detectors == 8
    assert graph.count(EdgeKind.SPACELIKE) == 18
    assert graph.count(EdgeKind.TIMELIKE) == 4
    assert {e.probability for e in graph.edges if e.kind is EdgeKind.TIMELIKE} == {0.02}
    assert len(graph.tagged[0]) == 4


def test_phenomenological_graph_rejects_bad_probability() -> None:
    with pytest.raises(ParameterError):
        build_phenomenological_graph(3, 2, 0.0, 0.01)


def test_probability_helpers() -> None:
    assert combine_probabilities(0.1, 0.2) == pytest.approx(0.26)
    assert combine_probabilities(0.5, 0.1 / 3) == 0.5
    assert combine_probabilities(1e-3 / 15, 0.5) == 0.5
    assert edge_weight(0.1) == pytest.approx(math.log(9))


def test_sampling_is_deterministic_per_shot() -> None:
    circuit = _noisy(p=5e-3)

    whole = sample_detectors(circuit, 40, seed=11)
    again = sample_detectors(circuit, 40, seed=11)
    tail = sample_detectors(circuit, 15, seed=11, first_shot=20)

    assert np.array_equal(whole.detectors, again.detectors)
    assert np.array_equal(whole.detectors[20:35], tail.detectors)
    assert np.array_equal(whole.observables[20:35], tail.observables)


@pytest.mark.parametrize("chunk", [1, 7])
def test_sampling_does_not_depend_on_chunk_size(monkeypatch, chunk: int) -> None:
    circuit = _noisy(p=5e-3)
    reference = sample_detectors(circuit, 20, seed=4)
    chunked = get_settings().model_copy(update={"shot_block": chunk})
    monkeypatch.setattr(frame, "get_settings", lambda: chunked)

    data = sample_detectors(circuit, 20, seed=4)
    tail = sample_detectors(circuit, 5, seed=4, first_shot=13)

    assert np.array_equal(data.detectors, reference.detectors)
    assert np.array_equal(data.observables, reference.observables)
    assert np.array_equal(tail.detectors, reference.detectors[13:18])


def test_noiseless_sampling_is_silent() -> None:
    data = sample_detectors(_noisy(p=0.0), 10, seed=1)

    assert data.shots == 10
    assert not data.detectors.any()
    assert not data.observables.any()


def test_detection_data_file(tmp_path) -> None:
    data = sample_detectors(_noisy(p=5e-3), 12, seed=3)
    path = tmp_path / "shots.b8"

    data.write(path)
    loaded = DetectionData.read(path)

    assert np.array_equal(loaded.detectors, data.detectors)
    assert np.array_equal(loaded.observables, data.observables)
    assert loaded.seed == 3
