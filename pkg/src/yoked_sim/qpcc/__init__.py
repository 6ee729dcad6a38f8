"""Quantum parity check outer codes and their GF(2) algebra."""

from yoked_sim.qpcc.code import (
    ParityCheckCode,
    PatchPermutation,
    PauliType,
    build_qpcc,
    in_stabilizer_span,
    rank_k,
    rate_table,
    unpermuted_checks,
    validate_sides,
    verify_commutation,
)
from yoked_sim.qpcc.distance import (
    CodeParameters,
    SearchPath,
    code_parameters,
    is_rectangle,
    minimum_weight_patterns,
)

__all__ = [
    "CodeParameters",
    "ParityCheckCode",
    "PatchPermutation",
    "PauliType",
    "SearchPath",
    "build_qpcc",
    "code_parameters",
    "in_stabilizer_span",
    "is_rectangle",
    "minimum_weight_patterns",
    "rank_k",
    "rate_table",
    "unpermuted_checks",
    "validate_sides",
    "verify_commutation",
]
