from __future__ import annotations

from fractions import Fraction as F
from itertools import product

import pytest

from conftest import load
from toricnccr.lattice import kappa, normalize, phi_t, vec_sub
from toricnccr.modmax import enumerate_mm
from toricnccr.quiver import (
    affine_equivalent,
    build_quiver,
    nccr_classes,
    nccr_quivers,
    opposite,
)

# ---------------------------------------------------------------------------
# independent oracle: minimal generators of the endomorphism algebra, found by
# brute-force lattice search.  Hom(T_b, T_c) is the set of lattice points m
# with <m, v_i> >= c_i - b_i; an arrow exists per generator that is not a
# nonunit * nonunit product through any summand.  Self-contained on purpose.


def _det3(rows) -> int:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _adj3(rows):
    (a, b, c), (d, e, f), (g, h, i) = rows
    return (
        (e * i - f * h, c * h - b * i, b * f - c * e),
        (f * g - d * i, a * i - c * g, c * d - a * f),
        (d * h - e * g, b * g - a * h, a * e - b * d),
    )


def solve_box(data, lows, highs):
    """All integer m with lows_i <= <m, v_i> <= highs_i for every ray."""
    rows = data.rays[:3]
    det = _det3(rows)
    adj = _adj3(rows)
    out = []
    for vals in product(*(range(lows[i], highs[i] + 1) for i in range(3))):
        num = tuple(sum(adj[r][c] * vals[c] for c in range(3))
                    for r in range(3))
        if any(n % det for n in num):
            continue
        m = tuple(n // det for n in num)
        ok = True
        for i in range(3, data.k):
            d = sum(m[j] * data.rays[i][j] for j in range(3))
            if d < lows[i] or d > highs[i]:
                ok = False
                break
        if ok:
            out.append(m)
    return out


def algebra_reducible(data, members, b, c, m):
    """m in Hom(T_b, T_c) factors as nonunit * nonunit through a summand."""
    pt = phi_t(data, m)
    k = data.k
    for d in members:
        lows = [d[i] - b[i] for i in range(k)]
        highs = [pt[i] - (c[i] - d[i]) for i in range(k)]
        if any(lo > hi for lo, hi in zip(lows, highs)):
            continue
        for m1 in solve_box(data, lows, highs):
            if d == b and m1 == (0, 0, 0):
                continue  # unit on the left
            m2 = tuple(m[j] - m1[j] for j in range(3))
            if d == c and m2 == (0, 0, 0):
                continue  # unit on the right
            return True
    return False


def oracle_arrows(data, members, cap=None):
    cap = cap if cap is not None else data.k
    k = data.k
    out = set()
    for b in members:
        for c in members:
            diff = [c[i] - b[i] for i in range(k)]
            for m in solve_box(data, diff, [d + cap for d in diff]):
                if b == c and m == (0, 0, 0):
                    continue  # the idempotent, not a generator
                if algebra_reducible(data, members, b, c, m):
                    continue
                slack = tuple(
                    sum(m[j] * data.rays[i][j] for j in range(3)) - diff[i]
                    for i in range(k))
                out.add((b, c, m, slack))
    return out


def quiver_arrows(q):
    return {
        (q.vertices[a.tail], q.vertices[a.head], a.monomial, a.slack)
        for a in q.arrows
    }


# ---------------------------------------------------------------------------


def test_frozen_conifold_quiver() -> None:
    data = load("conifold")
    q = build_quiver(data, [(0, 0, 0, 0), (0, 1, 1, 1)])
    assert q.vertices == ((0, 0, 0, 0), (0, 1, 1, 1))
    got = {(a.tail, a.head, a.slack, a.monomial) for a in q.arrows}
    assert got == {
        (0, 1, (1, 0, 0, 0), (0, 0, 1)),
        (0, 1, (0, 0, 1, 0), (1, 1, 0)),
        (1, 0, (0, 1, 0, 0), (0, -1, 0)),
        (1, 0, (0, 0, 0, 1), (-1, 0, 0)),
    }
    lifts = {a.slack: a.lift for a in q.arrows}
    assert lifts[(1, 0, 0, 0)] == (F(1, 2), F(1, 2), F(-3, 4))
    assert lifts[(0, 0, 1, 0)] == (F(-1, 2), F(-1, 2), F(1, 4))
    assert lifts[(0, 1, 0, 0)] == (F(-1, 2), F(1, 2), F(-1, 4))
    assert lifts[(0, 0, 0, 1)] == (F(1, 2), F(-1, 2), F(-1, 4))
    assert q.points == ((F(0), F(0), F(0)), (F(1, 2), F(1, 2), F(1, 4)))


def test_frozen_c3_quiver() -> None:
    q = build_quiver(load("c3"), [(0, 0, 0)])
    assert len(q.vertices) == 1 and len(q.arrows) == 3
    assert {a.slack for a in q.arrows} == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert {tuple(a.lift) for a in q.arrows} == {
        (F(1), F(1), F(-1)), (F(-1), F(0), F(0)), (F(0), F(-1), F(0))}


@pytest.mark.parametrize(
    "name,si",
    [("conifold", 0), ("conifold", 1), ("c3", 0), ("tri_idx2", 0)])
def test_arrows_match_brute_force_oracle(name: str, si: int) -> None:
    data = load(name)
    members = enumerate_mm(data)[si]
    q = build_quiver(data, members)
    assert quiver_arrows(q) == oracle_arrows(data, members)


def test_arrows_match_oracle_on_hexagon_class_reps() -> None:
    data = load("refl_6a")
    raw, _ = nccr_classes(data)
    quivers = nccr_quivers(data)
    for cls in raw:
        q = quivers[cls[0]]
        assert quiver_arrows(q) == oracle_arrows(data, list(q.vertices))


@pytest.mark.parametrize("name", ["conifold", "refl_5a", "para_1_1_m1_1"])
def test_arrow_invariants(name: str) -> None:
    data = load(name)
    k = data.k
    for q in nccr_quivers(data):
        for v in range(len(q.vertices)):
            ins = sum(1 for a in q.arrows if a.head == v)
            outs = sum(1 for a in q.arrows if a.tail == v)
            assert ins == outs >= 2
        for a in q.arrows:
            tail_b = q.vertices[a.tail]
            head_b = q.vertices[a.head]
            assert head_b == normalize(data, vec_sub(tail_b, a.slack))[0]
            pt = phi_t(data, a.monomial)
            for i in range(k):
                assert pt[i] == head_b[i] - tail_b[i] + a.slack[i]
                assert a.slack[i] >= 0
            assert 1 <= sum(a.slack) <= k - 2
            want_lift = tuple(
                kh - kt - mi
                for kh, kt, mi in zip(kappa(data, head_b),
                                      kappa(data, tail_b), a.monomial))
            assert tuple(a.lift) == want_lift


def test_affine_equivalent_identity_and_conifold_pair() -> None:
    data = load("conifold")
    q1 = build_quiver(data, [(0, 0, 0, 0), (0, 1, 1, 1)])
    q2 = build_quiver(data, [(0, 0, 0, 0), (1, 1, 2, 1)])
    m = affine_equivalent(q1, q1)
    assert m is not None
    assert m.A == ((1, 0, 0), (0, 1, 0), (0, 0, 1)) and m.t == (0, 0, 0)
    m12 = affine_equivalent(q1, q2)
    assert m12 is not None
    assert m12.apply_point(q1.points[1]) in set(q2.points)


def test_opposite() -> None:
    data = load("conifold")
    q = build_quiver(data, [(0, 0, 0, 0), (0, 1, 1, 1)])
    oq = opposite(q)
    assert oq.vertices == ((0, 0, 0, 0), (1, 1, 2, 1))
    assert len(oq.arrows) == 4
    qc = build_quiver(load("c3"), [(0, 0, 0)])
    assert opposite(qc).vertices == ((0, 0, 0),)


def test_dedup_frozen_small() -> None:
    assert nccr_classes(load("conifold")) == (
        ((0, 1),), (((0, 1), False),))
    assert nccr_classes(load("c3")) == (((0,),), (((0,), False),))


def test_dedup_hexagon_frozen() -> None:
    raw, mod = nccr_classes(load("refl_6a"))
    assert len(raw) == 6
    assert sorted(len(c) for c in raw) == [6, 6, 12, 18, 18, 36]
    assert len(mod) == 4
    # the two chiral pairs merge, each flagged; the achiral classes do not
    assert sorted(star for _, star in mod) == [False, False, True, True]


def test_parallelogram_class_sizes_frozen() -> None:
    raw, mod = nccr_classes(load("para_2_1_m1_2"))
    assert sorted(len(c) for c in raw) == [2, 10, 20, 20, 20]
    assert len(raw) == 5 and len(mod) == 4
