from __future__ import annotations

import pytest

from conftest import load
from toricnccr.cm import enumerate_cm, is_cm
from toricnccr.lattice import normalize, vec_sub
from toricnccr.modmax import (
    compatibility_graph,
    enumerate_mm,
    enumerate_mm_by_generations,
)


def polygon_double_area(data) -> int:
    pts = data.points
    s = 0
    for i in range(len(pts)):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % len(pts)]
        s += x1 * y2 - x2 * y1
    return abs(s)


def test_frozen_conifold_sets() -> None:
    assert enumerate_mm(load("conifold")) == (
        ((0, 0, 0, 0), (0, 1, 1, 1)),
        ((0, 0, 0, 0), (1, 1, 2, 1)),
    )


def test_frozen_conifold_compatibility_graph() -> None:
    data = load("conifold")
    cls = enumerate_cm(data)
    adj = compatibility_graph(data)
    z = cls.index((0, 0, 0, 0))
    a = cls.index((0, 1, 1, 1))
    b = cls.index((1, 1, 2, 1))
    assert adj[z] == frozenset({a, b})
    assert b not in adj[a]
    assert z not in adj[z]


def test_triangles_have_one_set() -> None:
    assert enumerate_mm(load("c3")) == (((0, 0, 0),),)
    t2 = enumerate_mm(load("tri_idx2"))
    assert len(t2) == 1 and len(t2[0]) == 2
    t4 = enumerate_mm(load("tri_idx4"))
    assert len(t4) == 1 and len(t4[0]) == 4


@pytest.mark.parametrize(
    "name", ["conifold", "c3", "tri_idx2", "tri_idx4", "refl_5a", "refl_6a"])
def test_independent_enumerator_agrees(name: str) -> None:
    data = load(name)
    assert enumerate_mm_by_generations(data) == enumerate_mm(data)


@pytest.mark.parametrize(
    "name",
    ["conifold", "c3", "tri_idx2", "tri_idx4", "para_2_1_m1_2",
     "refl_3a", "refl_5a", "refl_6a"])
def test_set_shape(name: str) -> None:
    data = load(name)
    sets = enumerate_mm(data)
    zero = (0,) * data.k
    vol = polygon_double_area(data)
    assert sets == tuple(sorted(sets))
    for s in sets:
        assert s == tuple(sorted(s))
        assert zero in s
        # every member set has the singularity's normalized volume many
        # summands: the rank of the resolutions
        assert len(s) == vol
        assert len(set(s)) == len(s)


@pytest.mark.parametrize("name", ["conifold", "refl_5a", "para_1_0_0_2"])
def test_sets_are_modifying_and_maximal(name: str) -> None:
    data = load(name)
    classes = enumerate_cm(data)
    for s in enumerate_mm(data):
        for b in s:
            assert b in classes
            for c in s:
                if b != c:
                    d = normalize(data, vec_sub(b, c))[0]
                    assert is_cm(data, d).cm
        members = set(s)
        for z in classes:
            if z in members:
                continue
            extends = all(
                is_cm(data, normalize(data, vec_sub(z, b))[0]).cm
                and is_cm(data, normalize(data, vec_sub(b, z))[0]).cm
                for b in s
            )
            assert not extends, (s, z)


def test_frozen_set_counts() -> None:
    assert len(enumerate_mm(load("para_2_1_m1_2"))) == 72
    assert len(enumerate_mm(load("refl_6a"))) == 96
