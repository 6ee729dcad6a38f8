"""Text exports of check matrices."""

from __future__ import annotations

import numpy as np

from yoked_sim.qpcc.code import ParityCheckCode, PauliType
from yoked_sim.qpcc.gf2 import BitMatrix


def dense_text(checks: BitMatrix) -> str:
    return "".join("".join("1" if b else "0" for b in row) + "\n" for row in checks)


def sparse_lines(code: ParityCheckCode) -> list[str]:
    """One line per check: the Pauli type then the support indices."""

    lines = []
    for pauli_type in PauliType:
        for row in code.checks(pauli_type):
            support = " ".join(str(int(q)) for q in np.flatnonzero(row))
            lines.append(f"{pauli_type.value} {support}")
    return lines


def sparse_text(code: ParityCheckCode) -> str:
    return "".join(line + "\n" for line in sparse_lines(code))


def parse_sparse_text(text: str, n: int) -> tuple[BitMatrix, BitMatrix]:
    """Inverse of `sparse_text`; returns (x_checks, z_checks)."""

    rows: dict[str, list[np.ndarray]] = {"X": [], "Z": []}
    for raw in text.splitlines():
        parts = raw.split()
        if not parts:
            continue
        row = np.zeros(n, dtype=np.uint8)
        row[[int(q) for q in parts[1:]]] = 1
        rows[parts[0]].append(row)
    return (
        np.vstack(rows["X"]) if rows["X"] else np.zeros((0, n), dtype=np.uint8),
        np.vstack(rows["Z"]) if rows["Z"] else np.zeros((0, n), dtype=np.uint8),
    )
