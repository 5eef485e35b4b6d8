"""Embedded NCCR quivers in the 3-torus and affine-equivalence dedup (Step 3).

A maximal modifying set S gives the quiver of its endomorphism algebra:
vertices are the classes b at their kappa points in [0,1)^3, arrows the
minimal algebra generators between summands.  An arrow from b with slack
s in {0,1}^k lands on head = normalize(b - s); its monomial is the normalize
shift and its lift is the exact displacement Delta = kappa(head) - kappa(tail)
- m = -kappa(s) in the universal cover.

Two embedded quivers are the same NCCR when an affine map x -> Ax + t with
A in GL_3(Z) matches vertex points and arrows (tail point mod Z^3, lift).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

from .lattice import (
    BVec,
    CheckFailure,
    InternalCheckError,
    RationalVec3,
    ToricData,
    Vec3,
    kappa,
    normalize,
    phi_t,
    vec_sub,
)
from .modmax import ModifyingSet, enumerate_mm


class SlackBoundViolated(CheckFailure):
    pass


class Disconnected(CheckFailure):
    pass


class DegenerateLifts(CheckFailure):
    pass


@dataclass(frozen=True, slots=True)
class Arrow:
    tail: int
    head: int
    slack: BVec
    monomial: Vec3
    lift: RationalVec3


@dataclass(frozen=True, slots=True)
class EmbeddedQuiver:
    data: ToricData
    vertices: tuple[BVec, ...]
    points: tuple[RationalVec3, ...]
    arrows: tuple[Arrow, ...]

    def out_degree(self, v: int) -> int:
        return sum(1 for a in self.arrows if a.tail == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for a in self.arrows if a.head == v)

    def arrows_between(self, tail: int, head: int) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows if a.tail == tail and a.head == head)


@dataclass(frozen=True, slots=True)
class AffineMap:
    """x -> A x + t with A in GL_3(Z), t taken modulo Z^3."""

    A: tuple[Vec3, Vec3, Vec3]
    t: RationalVec3

    def apply_point(self, p: Sequence[Fraction]) -> RationalVec3:
        q = tuple(
            sum(Fraction(self.A[r][c]) * p[c] for c in range(3)) + self.t[r]
            for r in range(3)
        )
        return (q[0] % 1, q[1] % 1, q[2] % 1)

    def apply_vector(self, d: Sequence[Fraction]) -> RationalVec3:
        return tuple(
            sum(Fraction(self.A[r][c]) * d[c] for c in range(3)) for r in range(3)
        )


def _proper_subslacks(s: BVec):
    """Nonzero slacks strictly below s componentwise (subsets of its support)."""
    support = [i for i, x in enumerate(s) if x]
    k = len(s)
    for r in range(1, len(support)):
        for sub in combinations(support, r):
            t = [0] * k
            for i in sub:
                t[i] = 1
            yield tuple(t)


def build_quiver(data: ToricData, members: Sequence[BVec]) -> EmbeddedQuiver:
    """Quiver of the endomorphism algebra of the modifying set.

    Arrow rule: from each vertex b, for each slack s in {0,1}^k with
    1 <= sum(s) <= k-1, the candidate head is c = normalize(b - s); an arrow
    is emitted iff c is a member and no proper subslack of s already lands on
    a member (such a factorization splits the hom through that summand, so
    the generator is not minimal).
    """
    members = tuple(sorted(tuple(b) for b in members))
    k = data.k
    index = {b: i for i, b in enumerate(members)}
    points = tuple(kappa(data, b) for b in members)
    if len(set(points)) != len(points):
        raise InternalCheckError("coincident vertex points in a modifying set")

    slacks = sorted(
        s
        for s in _binary_vectors(k)
        if 1 <= sum(s) <= k - 1
    )
    arrows: list[Arrow] = []
    for b in members:
        ti = index[b]
        for s in slacks:
            c, m = normalize(data, vec_sub(b, s))
            hi = index.get(c)
            if hi is None:
                continue
            if any(
                normalize(data, vec_sub(b, s2))[0] in index
                for s2 in _proper_subslacks(s)
            ):
                continue
            if sum(s) > k - 2:
                raise SlackBoundViolated(
                    "arrow slack %r exceeds k-2 from vertex %r" % (s, b)
                )
            # hom validity <m, v_i> >= c_i - b_i (equality slack is exactly s)
            pt = phi_t(data, m)
            if any(pt[i] - (c[i] - b[i]) != s[i] for i in range(k)):
                raise InternalCheckError("slack/monomial bookkeeping broke")
            lift = tuple(
                points[hi][r] - points[ti][r] - m[r] for r in range(3)
            )
            ks = kappa(data, s)
            if any(lift[r] != -ks[r] for r in range(3)):
                raise InternalCheckError("arrow lift is not -kappa(slack)")
            if lift == (0, 0, 0):
                raise InternalCheckError("zero lift on an arrow")
            arrows.append(Arrow(ti, hi, s, m, lift))

    q = EmbeddedQuiver(data, members, points, tuple(arrows))
    _assert_connected(q)
    for v in range(len(members)):
        if q.in_degree(v) != q.out_degree(v):
            raise InternalCheckError("in-degree != out-degree at vertex %d" % v)
    return q


def _binary_vectors(k: int):
    for mask in range(1 << k):
        yield tuple((mask >> (k - 1 - i)) & 1 for i in range(k))


def _assert_connected(q: EmbeddedQuiver) -> None:
    n = len(q.vertices)
    fwd: list[set[int]] = [set() for _ in range(n)]
    rev: list[set[int]] = [set() for _ in range(n)]
    for a in q.arrows:
        fwd[a.tail].add(a.head)
        rev[a.head].add(a.tail)
    for adj in (fwd, rev):
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise Disconnected(
                "quiver on %r is not strongly connected" % (q.vertices,)
            )


def _scaled_lift(q: EmbeddedQuiver, a: Arrow) -> Vec3:
    g = q.data.gram_det
    out = []
    for x in a.lift:
        y = x * g
        assert y.denominator == 1
        out.append(int(y))
    return tuple(out)


def _scaled_point(q: EmbeddedQuiver, v: int) -> Vec3:
    g = q.data.gram_det
    out = []
    for x in q.points[v]:
        y = x * g
        assert y.denominator == 1
        out.append(int(y))
    return tuple(out)


def _det3i(a: Vec3, b: Vec3, c: Vec3) -> int:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def _arrow_keys(q: EmbeddedQuiver) -> set[tuple[Vec3, Vec3]]:
    """(g*tail point mod g, g*lift) for every arrow; exact integer keys."""
    g = q.data.gram_det
    keys = set()
    for a in q.arrows:
        p = _scaled_point(q, a.tail)
        keys.add(((p[0] % g, p[1] % g, p[2] % g), _scaled_lift(q, a)))
    assert len(keys) == len(q.arrows), "arrows not identified by (tail, lift)"
    return keys


def affine_equivalent(
    q1: EmbeddedQuiver, q2: EmbeddedQuiver, dets: tuple[int, ...] = (1, -1)
) -> Optional[AffineMap]:
    """First affine map carrying q1 onto q2, or None.

    The map is pinned down by the images of three arrows with linearly
    independent lifts; candidates are filtered by |det| equality, integrality
    and det in `dets` before the full vertex/arrow bijection check.
    """
    if q1.data != q2.data:
        raise ValueError("quivers over different toric data are never compared")
    if len(q1.vertices) != len(q2.vertices) or len(q1.arrows) != len(q2.arrows):
        return None
    deg1 = sorted((q1.in_degree(v), q1.out_degree(v)) for v in range(len(q1.vertices)))
    deg2 = sorted((q2.in_degree(v), q2.out_degree(v)) for v in range(len(q2.vertices)))
    if deg1 != deg2:
        return None

    g = q1.data.gram_det
    lifts1 = [_scaled_lift(q1, a) for a in q1.arrows]
    lifts2 = [_scaled_lift(q2, a) for a in q2.arrows]
    n = len(lifts1)

    base = None
    for i, j, l in combinations(range(n), 3):
        d = _det3i(lifts1[i], lifts1[j], lifts1[l])
        if d != 0:
            base = (i, j, l, d)
            break
    if base is None:
        raise DegenerateLifts(
            "all arrow lifts lie in a plane; no affine frame exists "
            "(cannot happen for a dimer-consistent quiver)"
        )
    bi, bj, bl, bdet = base
    # columns of D are the three scaled base lifts
    D = tuple(
        (lifts1[bi][r], lifts1[bj][r], lifts1[bl][r]) for r in range(3)
    )
    adjD = _adj3(D)

    keys2 = _arrow_keys(q2)
    pts2 = set()
    for v in range(len(q2.vertices)):
        p = _scaled_point(q2, v)
        pts2.add((p[0] % g, p[1] % g, p[2] % g))

    p1 = _scaled_point(q1, q1.arrows[bi].tail)
    pts1 = [_scaled_point(q1, v) for v in range(len(q1.vertices))]
    tails1 = [_scaled_point(q1, a.tail) for a in q1.arrows]

    for p in range(n):
        for qx in range(n):
            if qx == p:
                continue
            for r in range(n):
                if r == p or r == qx:
                    continue
                dd = _det3i(lifts2[p], lifts2[qx], lifts2[r])
                if abs(dd) != abs(bdet):
                    continue
                Dp = tuple(
                    (lifts2[p][c], lifts2[qx][c], lifts2[r][c]) for c in range(3)
                )
                # A = D' adj(D) / det(D); must be integral with det +-1
                num = _matmul3(Dp, adjD)
                if any(num[y][x] % bdet for y in range(3) for x in range(3)):
                    continue
                A = tuple(
                    tuple(num[y][x] // bdet for x in range(3)) for y in range(3)
                )
                if _det3i(*A) not in dets:
                    continue
                # t from the first base arrow's tail (scaled by g)
                tp = _scaled_point(q2, q2.arrows[p].tail)
                tg = tuple(
                    tp[y] - sum(A[y][c] * p1[c] for c in range(3)) for y in range(3)
                )
                # vertices must biject
                ok = True
                for pt in pts1:
                    img = tuple(
                        (sum(A[y][c] * pt[c] for c in range(3)) + tg[y]) % g
                        for y in range(3)
                    )
                    if img not in pts2:
                        ok = False
                        break
                if not ok:
                    continue
                for idx, a in enumerate(q1.arrows):
                    pt = tails1[idx]
                    img = tuple(
                        (sum(A[y][c] * pt[c] for c in range(3)) + tg[y]) % g
                        for y in range(3)
                    )
                    dl = lifts1[idx]
                    dimg = tuple(
                        sum(A[y][c] * dl[c] for c in range(3)) for y in range(3)
                    )
                    if (img, dimg) not in keys2:
                        ok = False
                        break
                if not ok:
                    continue
                t = tuple(Fraction(tg[y], g) % 1 for y in range(3))
                return AffineMap(A, t)
    return None


def _adj3(m):
    (a, b, c), (d, e, f), (g2, h, i) = m
    return (
        (e * i - f * h, c * h - b * i, b * f - c * e),
        (f * g2 - d * i, a * i - c * g2, c * d - a * f),
        (d * h - e * g2, b * g2 - a * h, a * e - b * d),
    )


def _matmul3(x, y):
    return tuple(
        tuple(sum(x[r][k2] * y[k2][c] for k2 in range(3)) for c in range(3))
        for r in range(3)
    )


def opposite(q: EmbeddedQuiver) -> EmbeddedQuiver:
    """Quiver of the dual set {normalize(-b) : b in vertices}.

    Reversing every arrow of q yields exactly this quiver's arrow set, so the
    arrow counts must agree.
    """
    data = q.data
    members = sorted(normalize(data, tuple(-x for x in b))[0] for b in q.vertices)
    out = build_quiver(data, members)
    if len(out.arrows) != len(q.arrows):
        raise InternalCheckError("opposite quiver changed the arrow count")
    return out


def dedup_nccrs(
    quivers: Sequence[EmbeddedQuiver],
) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[tuple[int, ...], bool], ...]]:
    """Partition quivers into affine-equivalence classes, then merge classes
    with their opposites.

    Returns (raw, mod): raw = index tuples per class, ordered by smallest
    member; mod = (index tuple, asterisk) with asterisk set when the class is
    not equivalent to its own opposite.
    """
    n = len(quivers)
    reps: list[int] = []
    assign: list[int] = []
    for qi in range(n):
        placed = None
        for ci, ri in enumerate(reps):
            if affine_equivalent(quivers[ri], quivers[qi]) is not None:
                placed = ci
                break
        if placed is None:
            placed = len(reps)
            reps.append(qi)
        assign.append(placed)
    raw = tuple(
        tuple(i for i in range(n) if assign[i] == c) for c in range(len(reps))
    )

    by_vertices = {quivers[i].vertices: i for i in range(n)}
    opp_of: list[int] = []
    for ci, ri in enumerate(reps):
        oq = opposite(quivers[ri])
        oi = by_vertices.get(oq.vertices)
        if oi is not None:
            opp_of.append(assign[oi])
            continue
        hit = None
        for cj, rj in enumerate(reps):
            if affine_equivalent(quivers[rj], oq) is not None:
                hit = cj
                break
        if hit is None:
            raise InternalCheckError("opposite quiver matches no class")
        opp_of.append(hit)

    seen: set[int] = set()
    mod: list[tuple[tuple[int, ...], bool]] = []
    for ci in range(len(reps)):
        if ci in seen:
            continue
        cj = opp_of[ci]
        seen.add(ci)
        seen.add(cj)
        members = tuple(sorted(raw[ci] + (raw[cj] if cj != ci else ())))
        mod.append((members, cj != ci))
    return raw, tuple(mod)


@lru_cache(maxsize=None)
def nccr_quivers(data: ToricData) -> tuple[EmbeddedQuiver, ...]:
    """One quiver per maximal modifying set, in enumerate_mm order."""
    return tuple(build_quiver(data, s) for s in enumerate_mm(data))


@lru_cache(maxsize=None)
def nccr_classes(
    data: ToricData,
) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[tuple[int, ...], bool], ...]]:
    return dedup_nccrs(nccr_quivers(data))
