"""Surface-code circuits, SI1000 noise, Pauli-frame sampling and matching graphs."""

from yoked_sim.stabsim.circuit import Channel, Instruction, NoisyCircuit, Op, parse_circuit
from yoked_sim.stabsim.frame import (
    DetectionData,
    ElementaryError,
    FrameSimulator,
    InjectedNoise,
    enumerate_elementary_errors,
    sample_detectors,
    shot_rng,
)
from yoked_sim.stabsim.graph import (
    BOUNDARY,
    DetectorErrorGraph,
    EdgeKind,
    GraphEdge,
    build_phenomenological_graph,
    combine_probabilities,
    edge_weight,
    extract_error_graph,
    observable_sector,
    parse_graph,
    tag_boundary_sides,
)
from yoked_sim.stabsim.noise import apply_si1000
from yoked_sim.stabsim.surface import SCHEDULES, SurfaceLayout, generate_surface_memory_circuit

__all__ = [
    "BOUNDARY",
    "Channel",
    "DetectionData",
    "DetectorErrorGraph",
    "EdgeKind",
    "ElementaryError",
    "FrameSimulator",
    "GraphEdge",
    "InjectedNoise",
    "Instruction",
    "NoisyCircuit",
    "Op",
    "SCHEDULES",
    "SurfaceLayout",
    "apply_si1000",
    "build_phenomenological_graph",
    "combine_probabilities",
    "edge_weight",
    "enumerate_elementary_errors",
    "extract_error_graph",
    "generate_surface_memory_circuit",
    "observable_sector",
    "parse_circuit",
    "parse_graph",
    "sample_detectors",
    "shot_rng",
    "tag_boundary_sides",
]
