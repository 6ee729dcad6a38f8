import json
from enum import Enum
from pathlib import Path

import numpy as np

from yoked_sim.core.serialization import dumps, to_wire
from yoked_sim.schemas.noise import NoiseParams


class _Colour(str, Enum):
    RED = "red"


def test_floats_become_twelve_digit_strings() -> None:
    assert to_wire(0.1 + 0.2) == "0.3"
    assert to_wire(1 / 3) == "0.333333333333"
    assert to_wire(np.float64(2.5)) == "2.5"
    assert to_wire(1e-14) == "1e-14"


def test_scalars_keep_their_kind() -> None:
    assert to_wire(True) is True
    assert to_wire(np.bool_(False)) is False
    assert to_wire(np.int64(7)) == 7
    assert to_wire(None) is None
    assert to_wire(_Colour.RED) == "red"
    assert to_wire(Path("runs/a.json")) == "runs/a.json"


def test_containers_and_models() -> None:
    assert to_wire({3: np.array([1, 2])}) == {"3": [1, 2]}
    assert to_wire(frozenset({3, 1})) == [1, 3]
    assert to_wire(NoiseParams(p=0.001)) == {"p": "0.001"}


def test_dumps_is_sorted_and_newline_terminated() -> None:
    text = dumps({"b": 1, "a": 0.5})

    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": "0.5", "b": 1}
