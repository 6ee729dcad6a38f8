"""Outer-code simulations of yoked blocks: gap sampling and single-round circuit level."""

from yoked_sim.outersim.fullsim import (
    YokeAssignment,
    simulate_concatenated_single_round,
    yoked_block_graph,
)
from yoked_sim.outersim.gapsim import OuterShotRunner, mask_bits, run_gap_simulation
from yoked_sim.outersim.graph import OuterGraph, build_outer_graph
from yoked_sim.outersim.memory import memory_experiment
from yoked_sim.outersim.stats import failure_stats, wilson_interval

__all__ = [
    "OuterGraph",
    "OuterShotRunner",
    "YokeAssignment",
    "build_outer_graph",
    "failure_stats",
    "mask_bits",
    "memory_experiment",
    "run_gap_simulation",
    "simulate_concatenated_single_round",
    "wilson_interval",
    "yoked_block_graph",
]
