"""Named quivers and recurrences used by the tests and the command line."""

from __future__ import annotations

import json
from importlib import resources

from .dynamics import Period2Spec, RecurrenceSpec
from .quiver import QuiverMatrix, build_period1, exceptional_period2, period2_tuple, primitive

# period-1 exponent tuples
PERIOD1 = {
    "s4": (1, -2, 1),
    "s5": (1, -1, -1, 1),
    "gr6a": (1, -1, 0, -1, 1),
    "gr6b": (1, 0, -2, 0, 1),
    "gr6c": (0, 1, -2, 1, 0),
    "p31": (1, 1),
    "p41": (1, 0, 1),
    "p51": (1, 0, 0, 1),
    "p61": (1, 0, 0, 0, 1),
    "p81": (1, 0, 0, 0, 0, 0, 1),
    "p52": (0, 1, 1, 0),
    "p4142": (1, -1, 1),
    "p6163": (1, 0, -1, 0, 1),
    "p6263": (0, 1, -1, 1, 0),
    "p8184": (1, 0, 0, -1, 0, 0, 1),
}

# the Somos-4 matrix and its mutation at node 1, as printed
S4_MATRIX = ((0, -1, 2, -1), (1, 0, -3, 2), (-2, 3, 0, -1), (1, -2, 1, 0))
S4_MUTATED = ((0, 1, -2, 1), (-1, 0, -1, 2), (2, 1, 0, -3), (-1, -2, 3, 0))


def s4gen(c: int) -> QuiverMatrix:
    """Four-node family containing S4 (c = 2) and the composite quiver (c = 1)."""
    return QuiverMatrix(
        [
            [0, -1, c, -1],
            [1, 0, -(c + 1), c],
            [-c, c + 1, 0, -1],
            [1, -c, 1, 0],
        ]
    )


def spec(name: str) -> RecurrenceSpec:
    if name not in PERIOD1:
        raise KeyError(f"unknown recurrence fixture {name!r}")
    return RecurrenceSpec(PERIOD1[name])


def period2_spec(name: str) -> Period2Spec:
    if name == "reg4":
        return Period2Spec(4, period2_tuple(4, 1, 1, 2))
    if name == "reg5":
        return Period2Spec(5, period2_tuple(5, 1, t=2))
    raise KeyError(f"unknown period-2 fixture {name!r}")


def quiver(name: str) -> QuiverMatrix:
    if name in PERIOD1:
        return build_period1(PERIOD1[name])
    if name in ("reg4", "reg5"):
        return period2_spec(name).quivers()[0]
    if name == "exc5":
        return exceptional_period2(1)[0]
    raise KeyError(f"unknown quiver fixture {name!r}")


def names() -> list[str]:
    return sorted(list(PERIOD1) + ["reg4", "reg5", "exc5"])


def shipped(name: str) -> QuiverMatrix:
    """Quiver read from the packaged JSON file."""
    text = resources.files(__package__).joinpath("data").joinpath(f"{name}.json").read_text()
    return QuiverMatrix.from_json(json.loads(text))


def primitive_fixture(n: int, k: int) -> QuiverMatrix:
    return primitive(n, k)
