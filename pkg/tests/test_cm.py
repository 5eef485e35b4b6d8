from __future__ import annotations

import random
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load
from toricnccr.cm import (
    PrefixNotCM,
    cm_interval,
    enumerate_cm,
    is_cm,
    is_cm_by_cells,
    is_segment,
    signature_of,
)
from toricnccr.lattice import (
    ToricError,
    normalize,
    phi,
    phi_t,
    validate_toric_data,
    vec_add,
    vec_sub,
)


def det3(rows) -> int:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def kernel_basis(data) -> list[tuple[int, ...]]:
    """Integer vectors spanning ker(phi) over Q, built from ray dependencies.

    For each ray v_n beyond the first three, solve v_n = sum lam_i v_i over
    the first three rays and clear denominators.
    """
    rows = data.rays[:3]
    d = det3(rows)
    assert d != 0
    out = []
    for n in range(3, data.k):
        vn = data.rays[n]
        lam = []
        for i in range(3):
            repl = [vn if j == i else rows[j] for j in range(3)]
            lam.append(det3(repl))  # Cramer numerator: lam_i * d
        vec = [0] * data.k
        for i in range(3):
            vec[i] = -lam[i]
        vec[n] = d
        g = 0
        for x in vec:
            g = gcd(g, abs(x))
        out.append(tuple(x // g for x in vec))
    return out


def test_kernel_basis_helper_is_a_kernel() -> None:
    for name in ("conifold", "refl_5a", "refl_6a"):
        data = load(name)
        for v in kernel_basis(data):
            assert phi(data, v) == (0, 0, 0)
            assert any(v)


def test_frozen_conifold_witness() -> None:
    data = load("conifold")
    w = is_cm(data, (0, 1, 0, 1))
    assert not w.cm
    assert w.witness == (0, 0, 0)
    assert w.signature == "+-+-"
    w2 = is_cm_by_cells(data, (0, 1, 0, 1))
    assert (w2.cm, w2.witness, w2.signature) == (w.cm, w.witness, w.signature)
    assert not w  # CMWitness is falsy when NotCM


def test_frozen_conifold_classes_are_cm() -> None:
    data = load("conifold")
    for b in [(0, 0, 0, 0), (0, 1, 1, 1), (1, 1, 2, 1)]:
        assert is_cm(data, b).cm
        assert is_cm_by_cells(data, b).cm


def test_signature_helpers() -> None:
    data = load("conifold")
    assert signature_of(data, (0, 1, 0, 1), (0, 0, 0)) == "+-+-"
    assert not is_segment("+-+-")
    assert is_segment("++--")
    assert is_segment("----")
    assert is_segment("++++")


def test_triangles_are_always_cm() -> None:
    c3 = load("c3")
    assert is_cm(c3, (5, -3, 2)).cm
    assert is_cm_by_cells(c3, (5, -3, 2)).cm


def test_enumerate_cm_frozen() -> None:
    assert enumerate_cm(load("conifold")) == (
        (0, 0, 0, 0), (0, 1, 1, 1), (1, 1, 2, 1))
    assert enumerate_cm(load("c3")) == ((0, 0, 0),)
    t2 = enumerate_cm(load("tri_idx2"))
    assert len(t2) == 2 and (0, 0, 0) in t2


def test_enumerate_cm_closed_under_normalize_and_sorted() -> None:
    for name in ("conifold", "tri_idx2", "tri_idx4", "refl_5a", "refl_6a"):
        data = load(name)
        classes = enumerate_cm(data)
        assert classes == tuple(sorted(classes))
        assert len(set(classes)) == len(classes)
        assert (0,) * data.k in classes
        for b in classes:
            assert normalize(data, b)[0] == b
            assert is_cm(data, b).cm


def test_cm_interval_frozen_and_probe_independent() -> None:
    data = load("conifold")
    assert cm_interval(data, (0, 0, 0), 0) == (-1, 1)
    assert cm_interval(data, (0, 0, 0), 17) == (-1, 1)
    assert cm_interval(data, (0, 0, 0), -17) == (-1, 1)


def test_cm_interval_prefix_must_be_cm() -> None:
    data = load("refl_5a")
    reduced = data.prefix(4)
    bad = None
    rng = random.Random(5)
    while bad is None:
        cand = tuple(rng.randint(-2, 2) for _ in range(4))
        if not is_cm(reduced, cand).cm:
            bad = cand
    with pytest.raises(PrefixNotCM):
        cm_interval(data, bad, 0)


@pytest.mark.parametrize("name", ["refl_5a", "refl_6a", "para_2_1_m1_2"])
def test_cm_interval_matches_exhaustive_scan(name: str) -> None:
    data = load(name)
    reduced = validate_toric_data(data.points[:-1])
    classes = enumerate_cm(reduced)
    rng = random.Random(11)
    lo, hi = -20, 20
    for _ in range(12):
        base = classes[rng.randrange(len(classes))]
        m = tuple(rng.randint(-2, 2) for _ in range(3))
        prefix = vec_add(base, phi_t(reduced, m))
        got = cm_interval(data, prefix, rng.randint(-3, 3))
        want = [z for z in range(lo, hi + 1) if is_cm(data, prefix + (z,)).cm]
        if want:
            assert want == list(range(want[0], want[-1] + 1))
        if got is None:
            assert not want
        else:
            assert list(range(max(got[0], lo), min(got[1], hi) + 1)) == want


@pytest.mark.parametrize("name", ["conifold", "refl_5a", "refl_6a"])
@settings(max_examples=50, deadline=None)
@given(draw=st.data())
def test_zero_lemma_on_kernel_vectors(name: str, draw) -> None:
    data = load(name)
    basis = kernel_basis(data)
    coeffs = draw.draw(st.tuples(*[st.integers(-2, 2)] * len(basis)))
    b = tuple(sum(c * v[i] for c, v in zip(coeffs, basis))
              for i in range(data.k))
    assert phi(data, b) == (0, 0, 0)
    if any(b):
        assert not is_cm(data, b).cm
        assert not is_cm_by_cells(data, b).cm
    else:
        assert is_cm(data, b).cm


@pytest.mark.parametrize("name", ["conifold", "refl_5a"])
@settings(max_examples=50, deadline=None)
@given(draw=st.data())
def test_cm_is_isomorphism_invariant(name: str, draw) -> None:
    data = load(name)
    b = draw.draw(st.tuples(*[st.integers(-4, 4)] * data.k))
    m = draw.draw(st.tuples(*[st.integers(-2, 2)] * 3))
    shifted = vec_add(b, phi_t(data, m))
    assert is_cm(data, b).cm == is_cm(data, shifted).cm


@pytest.mark.parametrize("name", ["refl_5a", "refl_6a"])
def test_removal_keeps_cm(name: str) -> None:
    data = load(name)
    rng = random.Random(3)
    found = 0
    for _ in range(20000):
        if found >= 25:
            break
        b = tuple(rng.randint(-3, 3) for _ in range(data.k))
        if not is_cm(data, b).cm:
            continue
        found += 1
        for i in range(data.k):
            remaining = [p for j, p in enumerate(data.points) if j != i]
            try:
                reduced = validate_toric_data(remaining)
            except ToricError:
                continue
            order = [data.rays.index(r) for r in reduced.rays]
            br = tuple(b[j] for j in order)
            assert is_cm(reduced, br).cm, (name, b, i)
    assert found >= 25


def test_oracle_agreement_spot_check() -> None:
    rng = random.Random(0)
    for name in ("conifold", "tri_idx2", "refl_5b"):
        data = load(name)
        for _ in range(500):
            b = tuple(rng.randint(-5, 5) for _ in range(data.k))
            a = is_cm(data, b)
            c = is_cm_by_cells(data, b)
            assert (a.cm, a.witness, a.signature) == (c.cm, c.witness,
                                                      c.signature)


def test_blocking_difference_of_conifold_sets() -> None:
    # the two nonzero conifold classes cannot share a set: their difference
    # normalizes to the frozen NotCM vector
    data = load("conifold")
    d = normalize(data, vec_sub((0, 1, 1, 1), (1, 1, 2, 1)))[0]
    assert d == (0, 1, 0, 1)
    assert not is_cm(data, d).cm
