"""Exact lattice arithmetic for height-1 cones over convex lattice polygons.

The singularity is encoded by the corner rays v_1..v_k of a lattice polygon
placed at height 1 (third coordinate 1, the Gorenstein condition).  Everything
downstream lives on the two lattices M = Z^3 (monomial exponents) and
Z^k (bound vectors b describing the rank-1 modules T(b)), connected by

    phi(b)   = sum_i b_i v_i            (Z^k -> Z^3)
    phi_t(m) = (<m, v_1>, ..., <m, v_k>) (Z^3 -> Z^k)
    kappa(b) = (phi phi^T)^{-1} phi(b)   (Z^k -> Q^3, exact rationals)

All arithmetic is exact: Python ints and fractions.Fraction.  No floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vec2 = tuple[int, int]
Vec3 = tuple[int, int, int]
BVec = tuple[int, ...]
# exact rational 3-vector; denominators of kappa values divide gram_det
RationalVec3 = tuple[Fraction, Fraction, Fraction]


class ToricError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ToricError):
    """Invalid input data (CLI exit code 2)."""


class CheckFailure(ToricError):
    """A verified internal property failed (CLI exit code 1)."""


class InternalCheckError(CheckFailure):
    """A property that is provably true for valid pipelines failed anyway."""


class NonConvex(InputError):
    pass


class NonPrimitive(InputError):
    pass


class Duplicate(InputError):
    pass


class NonPrimitiveImage(InputError):
    pass


class HeightNotPreserved(InputError):
    pass


def _gcd3(a: int, b: int, c: int) -> int:
    from math import gcd

    return gcd(gcd(abs(a), abs(b)), abs(c))


def _det3(rows: Sequence[Vec3]) -> int:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _adjugate3(rows: Sequence[Vec3]) -> tuple[Vec3, Vec3, Vec3]:
    """Adjugate of a 3x3 integer matrix: adj(A) @ A = A @ adj(A) = det(A) I."""
    (a, b, c), (d, e, f), (g, h, i) = rows
    return (
        (e * i - f * h, c * h - b * i, b * f - c * e),
        (f * g - d * i, a * i - c * g, c * d - a * f),
        (d * h - e * g, b * g - a * h, a * e - b * d),
    )


def _matvec3(m: Sequence[Vec3], v: Sequence[int]) -> Vec3:
    return (
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    )


def _cross2(o: Vec2, a: Vec2, b: Vec2) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


class ToricData:
    """Validated corner rays of the Gorenstein cone plus cached Gram data.

    ``rays`` are in strictly convex counterclockwise cyclic order.  Instances
    are immutable and hashable; ``validate_toric_data`` is the public
    constructor for raw user input, the class constructor trusts the cyclic
    order but still re-checks every invariant.
    """

    __slots__ = ("rays", "points", "gram", "gram_det", "gram_adj", "_hash")

    def __init__(self, rays: Sequence[Vec3]):
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        k = len(rays)
        if k < 3:
            raise NonConvex("need at least 3 rays, got %d" % k)
        for r in rays:
            if len(r) != 3:
                raise InputError("ray %r is not a 3-vector" % (r,))
            if r[2] != 1:
                raise HeightNotPreserved("ray %r has height %d != 1" % (r, r[2]))
            if _gcd3(*r) != 1:
                raise NonPrimitive("ray %r is not primitive" % (r,))
        points = tuple((r[0], r[1]) for r in rays)
        if len(set(points)) != k:
            raise Duplicate("duplicate rays in %r" % (points,))
        # strict convexity in the given cyclic order: every consecutive triple
        # is a strict left turn.  For an all-corner polygon this also rules out
        # any three collinear rays (a third vertex on an edge line would not be
        # an extreme point).
        for i in range(k):
            o, a, b = points[i], points[(i + 1) % k], points[(i + 2) % k]
            if _cross2(o, a, b) <= 0:
                raise NonConvex(
                    "points %r, %r, %r do not make a strict left turn" % (o, a, b)
                )
        g = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
        for r in rays:
            for i in range(3):
                for j in range(3):
                    g[i][j] += r[i] * r[j]
        gram = tuple(tuple(row) for row in g)
        det = _det3(gram)
        assert det > 0, "gram matrix must be positive definite"
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "gram_det", det)
        object.__setattr__(self, "gram_adj", _adjugate3(gram))
        object.__setattr__(self, "_hash", hash(rays))

    def __setattr__(self, name, value):
        raise AttributeError("ToricData is immutable")

    @property
    def k(self) -> int:
        return len(self.rays)

    def __eq__(self, other) -> bool:
        return isinstance(other, ToricData) and self.rays == other.rays

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "ToricData(%r)" % (list(self.points),)

    def prefix(self, j: int) -> "ToricData":
        """Sub-data on the first j rays (consecutive corners stay convex)."""
        assert 3 <= j <= self.k
        return ToricData(self.rays[:j])


def _hull_vertices(points: Sequence[Vec2]) -> list[Vec2]:
    """Convex hull corners (strict), counterclockwise, via monotone chain."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: list[Vec2] = []
        for p in seq:
            while len(out) >= 2 and _cross2(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def validate_toric_data(raw_points: Iterable[Sequence[int]]) -> ToricData:
    """Validate raw 2d integer points and build canonical ToricData.

    Points are sorted into counterclockwise cyclic order starting from the
    lexicographically least point.  Nothing is discarded: every input point
    must be a corner of the convex hull, otherwise NonConvex.
    """
    pts: list[Vec2] = []
    for p in raw_points:
        p = tuple(p)
        if len(p) != 2 or not all(isinstance(x, int) for x in p):
            raise InputError("point %r is not an integer 2-vector" % (p,))
        pts.append((p[0], p[1]))
    if len(set(pts)) != len(pts):
        seen = set()
        for p in pts:
            if p in seen:
                raise Duplicate("duplicate point %r" % (p,))
            seen.add(p)
    if len(pts) < 3:
        raise NonConvex("need at least 3 points, got %d" % len(pts))
    hull = _hull_vertices(pts)
    if set(hull) != set(pts):
        bad = sorted(set(pts) - set(hull))[0]
        raise NonConvex("point %r is not a corner of the convex hull" % (bad,))
    start = hull.index(min(hull))
    ordered = hull[start:] + hull[:start]
    return ToricData([(x, y, 1) for x, y in ordered])


def phi(data: ToricData, b: Sequence[int]) -> Vec3:
    """phi(b) = sum_i b_i v_i."""
    assert len(b) == data.k
    x = y = z = 0
    for bi, (vx, vy, vz) in zip(b, data.rays):
        x += bi * vx
        y += bi * vy
        z += bi * vz
    return (x, y, z)


def phi_t(data: ToricData, m: Sequence[int]) -> BVec:
    """phi_t(m) = (<m, v_i>)_i."""
    mx, my, mz = m
    return tuple(mx * vx + my * vy + mz * vz for (vx, vy, vz) in data.rays)


def _kappa_num(data: ToricData, b: Sequence[int]) -> Vec3:
    """Integer numerators of kappa(b) over the common denominator gram_det."""
    return _matvec3(data.gram_adj, phi(data, b))


def kappa(data: ToricData, b: Sequence[int]) -> RationalVec3:
    """kappa(b) = (phi phi^T)^{-1} phi(b), exact; kappa(phi_t(m)) = m."""
    num = _kappa_num(data, b)
    d = data.gram_det
    return (Fraction(num[0], d), Fraction(num[1], d), Fraction(num[2], d))


def normalize(data: ToricData, b: Sequence[int]) -> tuple[BVec, Vec3]:
    """Canonical class representative: b' = b + phi_t(m) with kappa(b') in [0,1)^3.

    Returns (b', m).  Two b-vectors describe isomorphic modules iff their
    normalized forms are equal.
    """
    num = _kappa_num(data, b)
    d = data.gram_det
    m = (-(num[0] // d), -(num[1] // d), -(num[2] // d))
    shift = phi_t(data, m)
    bp = tuple(bi + si for bi, si in zip(b, shift))
    return bp, m


def quotient_cone(U: Sequence[Sequence[int]], data: ToricData) -> ToricData:
    """Push the cone through an integer matrix U fixing the Gorenstein height.

    Returns validate_toric_data of the projected images of U v_i; the index of
    the quotient group is |det U|.
    """
    U = tuple(tuple(int(x) for x in row) for row in U)
    if len(U) != 3 or any(len(row) != 3 for row in U):
        raise InputError("U must be a 3x3 integer matrix")
    if U[2] != (0, 0, 1):
        raise HeightNotPreserved("third row of U must be (0, 0, 1), got %r" % (U[2],))
    if _det3(U) == 0:
        raise InputError("U is singular")
    images = []
    for r in data.rays:
        w = _matvec3(U, r)
        if _gcd3(*w) != 1:
            raise NonPrimitiveImage("image %r of ray %r is not primitive" % (w, r))
        assert w[2] == 1
        images.append((w[0], w[1]))
    return validate_toric_data(images)


def vec_sub(a: Sequence[int], b: Sequence[int]) -> BVec:
    return tuple(x - y for x, y in zip(a, b))


def vec_add(a: Sequence[int], b: Sequence[int]) -> BVec:
    return tuple(x + y for x, y in zip(a, b))


def frac_str(x) -> str:
    """Exact decimal-free JSON form of a rational: '3/4', '-1/2', '2'."""
    return str(Fraction(x))
