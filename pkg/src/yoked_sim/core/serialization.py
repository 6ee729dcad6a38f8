"""Deterministic JSON for data files: sorted keys, floats as 12-significant-digit strings."""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel


def to_wire(value: Any) -> Any:
    if isinstance(value, BaseModel):
        value = value.model_dump()
    if value is None or isinstance(value, (bool, np.bool_)):
        return None if value is None else bool(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.ndarray):
        return to_wire(value.tolist())
    if isinstance(value, dict):
        return {str(k): to_wire(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_wire(v) for v in items]
    return value


def dumps(value: Any) -> str:
    return json.dumps(to_wire(value), sort_keys=True, indent=2) + "\n"
