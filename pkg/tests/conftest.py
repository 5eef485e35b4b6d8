from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

from toricnccr.lattice import ToricData, validate_toric_data

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

REFLEXIVE = (
    "refl_3a", "refl_4a", "refl_4b", "refl_4c", "refl_5a", "refl_5b",
    "refl_6a", "refl_6b", "refl_6c", "refl_6d", "refl_7a", "refl_7b",
    "refl_8a", "refl_8b", "refl_8c", "refl_9a",
)
PARALLELOGRAMS = ("para_1_0_0_2", "para_1_1_m1_1", "para_2_1_m1_2")
ALL_POLYGONS = (
    "conifold", "c3", "tri_idx2", "tri_idx4",
) + PARALLELOGRAMS + REFLEXIVE


def fixture_points(name: str) -> list[tuple[int, int]]:
    with open(FIXTURES / ("%s.json" % name)) as f:
        return [tuple(p) for p in json.load(f)["points"]]


@lru_cache(maxsize=None)
def load(name: str) -> ToricData:
    return validate_toric_data(fixture_points(name))
