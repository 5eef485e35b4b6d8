from __future__ import annotations

import pytest

from conftest import PARALLELOGRAMS, load
from toricnccr.dimer import class_dimers, dimer_isomorphic, extract_dimer
from toricnccr.modmax import enumerate_mm
from toricnccr.mutation import (
    BadVertexDegree,
    LoopOrTwoCycle,
    MutatedZeroVertex,
    mutate,
    mutate_dimer,
    mutation_graph,
    parallelogram_sides,
    parallelogram_structure,
    write_dot,
)
from toricnccr.quiver import (
    affine_equivalent,
    build_quiver,
    nccr_classes,
    nccr_quivers,
)


def test_conifold_worked_example() -> None:
    data = load("conifold")
    S = ((0, 0, 0, 0), (0, 1, 1, 1))
    Q = build_quiver(data, list(S))
    S2 = mutate(S, Q, Q.vertices.index((0, 1, 1, 1)))
    assert S2 == ((0, 0, 0, 0), (1, 1, 2, 1))


def test_double_mutation_is_involutive() -> None:
    data = load("conifold")
    S = ((0, 0, 0, 0), (0, 1, 1, 1))
    Q = build_quiver(data, list(S))
    S2 = mutate(S, Q, 1)
    Q2 = build_quiver(data, list(S2))
    S3 = mutate(S2, Q2, Q2.vertices.index((1, 1, 2, 1)))
    assert affine_equivalent(build_quiver(data, list(S3)), Q) is not None


def test_zero_vertex_refused() -> None:
    data = load("conifold")
    S = ((0, 0, 0, 0), (0, 1, 1, 1))
    Q = build_quiver(data, list(S))
    with pytest.raises(MutatedZeroVertex):
        mutate(S, Q, Q.vertices.index((0, 0, 0, 0)))
    c3 = load("c3")
    with pytest.raises(MutatedZeroVertex):
        mutate(enumerate_mm(c3)[0], nccr_quivers(c3)[0], 0)


def test_wrong_degree_refused() -> None:
    # scan for a non-zero vertex with degree != 2+2 and assert the error
    found = False
    for name in ("refl_6a", "refl_5a", "para_2_1_m1_2"):
        data = load(name)
        sets = enumerate_mm(data)
        for qi, q in enumerate(nccr_quivers(data)):
            for v in range(1, len(q.vertices)):
                ins = [a for a in q.arrows
                       if a.head == v and a.tail != a.head]
                outs = [a for a in q.arrows
                        if a.tail == v and a.tail != a.head]
                loops = [a for a in q.arrows if a.tail == a.head == v]
                if not loops and (len(ins) != 2 or len(outs) != 2):
                    with pytest.raises(BadVertexDegree):
                        mutate(sets[qi], q, v)
                    found = True
                    break
            if found:
                break
        if found:
            break
    assert found


def test_vertex_out_of_range() -> None:
    data = load("conifold")
    S = ((0, 0, 0, 0), (0, 1, 1, 1))
    Q = build_quiver(data, list(S))
    with pytest.raises(Exception):
        mutate(S, Q, 7)


def test_mutation_lands_in_mm_list() -> None:
    for name in ("conifold", "para_1_0_0_2", "refl_4a"):
        data = load(name)
        sets = enumerate_mm(data)
        raw, _ = nccr_classes(data)
        quivers = nccr_quivers(data)
        for cls in raw:
            qi = cls[0]
            q = quivers[qi]
            for v in range(1, len(q.vertices)):
                try:
                    result = mutate(sets[qi], q, v)
                except (MutatedZeroVertex, BadVertexDegree,
                        LoopOrTwoCycle):
                    continue
                assert result in sets  # mutate itself re-checks; frozen here


def test_involution_via_class_membership() -> None:
    for name in ("conifold", "refl_4a", "para_1_0_0_2"):
        data = load(name)
        sets = enumerate_mm(data)
        raw, _ = nccr_classes(data)
        quivers = nccr_quivers(data)
        class_of = {}
        for ci, cls in enumerate(raw):
            for qi in cls:
                class_of[qi] = ci
        for cls in raw:
            qi = cls[0]
            q = quivers[qi]
            for v in range(1, len(q.vertices)):
                try:
                    S2 = mutate(sets[qi], q, v)
                except (MutatedZeroVertex, BadVertexDegree,
                        LoopOrTwoCycle):
                    continue
                ti = sets.index(S2)
                q2 = quivers[ti]
                changed = set(S2) - set(sets[qi])
                v2 = S2.index(changed.pop()) if changed else v
                S3 = mutate(S2, q2, v2)
                assert class_of[sets.index(S3)] == class_of[qi]


def test_mutate_dimer_agrees_on_conifold() -> None:
    data = load("conifold")
    Q = build_quiver(data, [(0, 0, 0, 0), (0, 1, 1, 1)])
    model = extract_dimer(Q)
    out = mutate_dimer(model, 1)
    assert dimer_isomorphic(model, out)


def test_mutate_dimer_runs_on_parallelogram() -> None:
    data = load("para_2_1_m1_2")
    raw, _ = nccr_classes(data)
    quivers = nccr_quivers(data)
    checked = 0
    for cls in raw[:2]:
        q = quivers[cls[0]]
        model = extract_dimer(q)
        for v in range(1, len(q.vertices)):
            try:
                mutate_dimer(model, v)  # internal cross-check must not raise
            except (MutatedZeroVertex, BadVertexDegree, LoopOrTwoCycle):
                continue
            checked += 1
            if checked >= 4:
                return
    assert checked > 0


def test_mutation_graph_frozen_small() -> None:
    g = mutation_graph(load("conifold"), mod_opposite=False)
    assert len(g.nodes) == 1 and g.connected
    assert list(g.edges) == [(0, 1, 0)]
    g3 = mutation_graph(load("c3"), mod_opposite=False)
    assert len(g3.nodes) == 1 and len(g3.edges) == 0 and g3.connected


def test_mutation_graph_parallelogram_frozen() -> None:
    data = load("para_2_1_m1_2")
    raw_graph = mutation_graph(data, mod_opposite=False)
    assert len(raw_graph.nodes) == 5
    assert len(raw_graph.edges) == 105
    assert raw_graph.connected
    mod_graph = mutation_graph(data, mod_opposite=True)
    assert len(mod_graph.nodes) == 4
    assert len(mod_graph.edges) == 60
    assert mod_graph.connected


def test_mutation_graph_hexagon_frozen() -> None:
    data = load("refl_6a")
    raw_graph = mutation_graph(data, mod_opposite=False)
    assert len(raw_graph.nodes) == 6 and raw_graph.connected
    assert len(raw_graph.edges) == 69
    mod_graph = mutation_graph(data, mod_opposite=True)
    assert len(mod_graph.nodes) == 4 and mod_graph.connected
    assert len(mod_graph.edges) == 41


def test_parallelogram_sides() -> None:
    assert parallelogram_sides(load("conifold")) == ((1, 0), (0, 1))
    assert parallelogram_sides(load("para_2_1_m1_2")) == ((1, -2), (2, 1))
    assert parallelogram_sides(load("refl_4b")) is None
    assert parallelogram_sides(load("refl_4a")) == ((1, -1), (1, 1))


@pytest.mark.parametrize("name", PARALLELOGRAMS + ("conifold",))
def test_parallelogram_structure(name: str) -> None:
    data = load(name)
    (a, b), (c, d) = parallelogram_sides(data)
    det = abs(a * d - b * c)
    for model in class_dimers(data):
        squares, hom = parallelogram_structure(model)
        assert squares == 2 * det
        assert hom == (0, 0)


def test_parallelogram_structure_frozen_detail() -> None:
    data = load("para_2_1_m1_2")
    models = class_dimers(data)
    diagonal_counts = []
    for model in models:
        n_straight = sum(
            1 for a in model.quiver.arrows
            if sum(1 for s in a.slack if s) == 1)
        diagonal_counts.append(len(model.quiver.arrows) - n_straight)
        # straight arrows: two per square side pair
        assert n_straight == 2 * len(model.quiver.vertices)
    assert sorted(diagonal_counts) == [0, 4, 6, 6, 8]


def test_pure_tiling_class() -> None:
    data = load("para_2_1_m1_2")
    raw, _ = nccr_classes(data)
    quivers = nccr_quivers(data)
    pure = [ci for ci, cls in enumerate(raw)
            if all(sum(a.slack) == 1 for a in quivers[cls[0]].arrows)]
    assert len(pure) == 1
    model = extract_dimer(quivers[raw[pure[0]][0]])
    faces = model.faces()
    assert len(faces) == 10
    assert all(len(c) == 4 for c in faces)


def test_write_dot_format() -> None:
    g = mutation_graph(load("conifold"))
    text = write_dot(g, ["only"])
    assert text.startswith("graph mutations {")
    assert text.rstrip().endswith("}")
    assert 'n0 [label="only"];' in text
    assert 'n0 -- n0 [label="v1"];' in text
