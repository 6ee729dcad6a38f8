"""Exact matching decoder with forced-class decoding and complementary gaps."""

from yoked_sim.matcher.decoder import (
    DB_PER_NEPER,
    GapValue,
    MatchingDecoder,
    MatchResult,
    as_syndrome,
    complementary_gap,
    decode,
    decode_forced,
)
from yoked_sim.matcher.graph import MatchingGraph

__all__ = [
    "DB_PER_NEPER",
    "GapValue",
    "MatchResult",
    "MatchingDecoder",
    "MatchingGraph",
    "as_syndrome",
    "complementary_gap",
    "decode",
    "decode_forced",
]
