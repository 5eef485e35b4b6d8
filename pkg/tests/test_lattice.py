from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load
from toricnccr.lattice import (
    Duplicate,
    HeightNotPreserved,
    InputError,
    NonConvex,
    ToricData,
    frac_str,
    kappa,
    normalize,
    phi,
    phi_t,
    quotient_cone,
    validate_toric_data,
    vec_add,
)


def test_canonical_order_starts_lex_least_counterclockwise() -> None:
    data = validate_toric_data([(1, 1), (0, 0), (0, 1), (1, 0)])
    assert data.rays == ((0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1))
    assert data == load("conifold")


def test_input_order_is_irrelevant() -> None:
    pts = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
    a = validate_toric_data(pts)
    b = validate_toric_data(list(reversed(pts)))
    assert a.rays == b.rays
    assert a.rays[0] == (-1, -1, 1)


def test_validate_rejections() -> None:
    with pytest.raises(NonConvex):
        validate_toric_data([(0, 0), (1, 0)])
    with pytest.raises(Duplicate):
        validate_toric_data([(0, 0), (1, 0), (0, 1), (1, 0)])
    with pytest.raises(NonConvex):  # collinear
        validate_toric_data([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(NonConvex):  # boundary point that is not a corner
        validate_toric_data([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)])
    with pytest.raises(NonConvex):  # interior point
        validate_toric_data([(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)])
    with pytest.raises(InputError):
        validate_toric_data([(0, 0), (1, 0), (0.5, 1)])


def test_direct_constructor_rechecks() -> None:
    with pytest.raises(HeightNotPreserved):
        ToricData([(0, 0, 1), (1, 0, 2), (0, 1, 1)])
    with pytest.raises(NonConvex):  # clockwise order
        ToricData([(0, 0, 1), (0, 1, 1), (1, 0, 1)])


def test_toric_data_immutable_and_hashable() -> None:
    data = load("conifold")
    with pytest.raises(AttributeError):
        data.rays = ()
    assert data == validate_toric_data([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert len({data, load("conifold")}) == 1


def test_gram_data_conifold() -> None:
    data = load("conifold")
    assert data.k == 4
    assert data.gram == ((2, 1, 2), (1, 2, 2), (2, 2, 4))
    assert data.gram_det == 4


def test_kappa_frozen_values() -> None:
    data = load("conifold")
    assert kappa(data, (0, 0, 0, 0)) == (0, 0, 0)
    assert kappa(data, (0, 1, 1, 1)) == (
        Fraction(1, 2), Fraction(1, 2), Fraction(1, 4))
    # kappa is a retraction of phi_t: kappa(phi_t(m)) == m
    for m in [(0, 0, 0), (1, -2, 3), (5, 0, -1)]:
        assert kappa(data, phi_t(data, m)) == m


@pytest.mark.parametrize("name", ["conifold", "refl_6a", "para_2_1_m1_2"])
@settings(max_examples=60, deadline=None)
@given(draw=st.data())
def test_kappa_linear_and_normalize_laws(name: str, draw) -> None:
    data = load(name)
    ints = st.integers(-30, 30)
    bvec = st.tuples(*[ints] * data.k)
    a = draw.draw(bvec)
    b = draw.draw(bvec)
    ka, kb = kappa(data, a), kappa(data, b)
    assert kappa(data, vec_add(a, b)) == tuple(x + y for x, y in zip(ka, kb))

    bp, m = normalize(data, a)
    # b' = b + phi_t(m), kappa(b') in [0,1)^3 with exact comparisons
    assert bp == vec_add(a, phi_t(data, m))
    kp = kappa(data, bp)
    assert all(0 <= c < 1 for c in kp)
    # denominators divide the Gram determinant
    assert all(c.denominator > 0 and data.gram_det % c.denominator == 0
               for c in kp)
    # idempotence
    bpp, m2 = normalize(data, bp)
    assert bpp == bp and m2 == (0, 0, 0)
    # shift invariance: adding any phi_t image does not change the class
    shift = draw.draw(st.tuples(*[st.integers(-3, 3)] * 3))
    assert normalize(data, vec_add(a, phi_t(data, shift)))[0] == bp


def test_phi_and_phi_t_are_adjoint() -> None:
    data = load("refl_5a")
    for m in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, -1, 3)]:
        for b in [(1, 0, 0, 0, 0), (0, 1, -1, 2, 0)]:
            lhs = sum(x * y for x, y in zip(phi_t(data, m), b))
            rhs = sum(x * y for x, y in zip(m, phi(data, b)))
            assert lhs == rhs


def test_prefix_drops_trailing_rays() -> None:
    data = load("refl_5a")
    p4 = data.prefix(4)
    assert p4.rays == data.rays[:4]
    assert p4.k == 4


def test_quotient_cone_example() -> None:
    # index-5 quotient of the conifold: the parallelogram fixture
    U = ((2, -1, 0), (1, 2, 0), (0, 0, 1))
    derived = quotient_cone(U, load("conifold"))
    assert derived == load("para_2_1_m1_2")
    assert sorted(derived.points) == [(-1, 2), (0, 0), (1, 3), (2, 1)]


def test_quotient_cone_rejections() -> None:
    data = load("conifold")
    with pytest.raises(HeightNotPreserved):
        quotient_cone(((1, 0, 0), (0, 1, 0), (0, 0, 2)), data)
    with pytest.raises(InputError):
        quotient_cone(((1, 0, 0), (1, 0, 0), (0, 0, 1)), data)
    with pytest.raises(InputError):
        quotient_cone(((1, 0), (0, 1), (0, 0)), data)


def test_quotient_cone_identity_and_unimodular() -> None:
    data = load("refl_6a")
    eye = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert quotient_cone(eye, data) == data
    # a unimodular shear preserves class counts downstream; here just validity
    shear = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
    out = quotient_cone(shear, data)
    assert out.k == data.k


def test_frac_str() -> None:
    assert frac_str(Fraction(3, 4)) == "3/4"
    assert frac_str(Fraction(-1, 2)) == "-1/2"
    assert frac_str(Fraction(8, 4)) == "2"
    assert frac_str(0) == "0"
