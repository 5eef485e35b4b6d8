"""Dimer models on the 2-torus extracted from embedded quivers.

Every arrow of an embedded quiver projects to a straight segment on the
2-torus (forget the third coordinate).  For the quivers produced by the
resolution pipeline these segments cut the torus into polygonal faces that
inherit a consistent orientation: counterclockwise faces are directed cycles
of the quiver, clockwise faces are directed cycles of the reversed quiver.
This module builds that face structure with exact rational arithmetic and
derives everything that depends on it: R-charges, perfect matchings, the
recovered polygon, type sequences, and the census rows reported by the CLI.
"""
from __future__ import annotations

import functools
import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .lattice import (
    BVec,
    CheckFailure,
    InputError,
    InternalCheckError,
    RationalVec3,
    ToricData,
    Vec3,
    frac_str,
)
from .quiver import EmbeddedQuiver, nccr_classes, nccr_quivers, opposite


class SegmentCrossing(CheckFailure):
    """Two projected arrows meet away from shared endpoints."""


class OverlappingSegments(CheckFailure):
    """Two projected arrows share a sub-segment of positive length."""


class FaceTooShort(CheckFailure):
    """A traced face has fewer than three sides."""


class OrientabilityFailure(CheckFailure):
    """A traced face mixes forward and backward arrows."""


class ManifoldFailure(CheckFailure):
    """The face structure is not that of a torus-filling dimer."""


class NotInterior(InputError):
    """The supplied covector is not interior to the dual cone."""


class Infeasible(CheckFailure):
    """No interior covector gives every arrow a positive charge."""


class DegenerateCycles(CheckFailure):
    """The closed walks of the quiver do not span three dimensions."""


class PolygonMismatch(CheckFailure):
    """The polygon recovered from perfect matchings differs from the input."""


class NotReflexive(CheckFailure):
    """The input polygon does not have exactly one interior lattice point."""


class TiedHeights(CheckFailure):
    """Two module classes share a third coordinate; heights cannot be ordered."""


Vec2F = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class DimerModel:
    """Face-structured projection of an embedded quiver to the 2-torus.

    ``faces_pos`` lists counterclockwise faces as cyclic arrow-index tuples
    (consecutive arrows compose head-to-tail); ``faces_neg`` lists clockwise
    faces, cyclic in the reversed quiver.
    """

    quiver: EmbeddedQuiver
    faces_pos: tuple[tuple[int, ...], ...]
    faces_neg: tuple[tuple[int, ...], ...]

    @property
    def data(self) -> ToricData:
        return self.quiver.data

    def faces(self) -> tuple[tuple[int, ...], ...]:
        return self.faces_pos + self.faces_neg

    def position(self, v: int) -> Vec2F:
        p = self.quiver.points[v]
        return (p[0], p[1])

    def direction(self, a: int) -> Vec2F:
        lift = self.quiver.arrows[a].lift
        return (lift[0], lift[1])


@dataclass(frozen=True)
class PerfectMatching:
    """Arrow subset meeting every face exactly once, with its lattice vector."""

    arrows: tuple[int, ...]
    nvec: Vec3


@dataclass(frozen=True)
class RCharge:
    """Per-arrow charges induced by an interior covector."""

    values: tuple[Fraction, ...]
    x: tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class CensusRow:
    """One line of the resolution census: affine classes printed together.

    ``classes`` holds the raw affine-class indices reported on this row (two
    when the row merges a class with its distinct opposite, flagged by
    ``star``); ``rep`` is the index of the representative quiver in the
    ``nccr_quivers`` order.
    """

    classes: tuple[int, ...]
    rep: int
    star: bool


# ---------------------------------------------------------------------------
# exact planar geometry


def _cross(o: Vec2F, a: Vec2F, b: Vec2F) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _strictly_between(p: Vec2F, a: Vec2F, b: Vec2F) -> bool:
    """p collinear with segment ab: is p strictly inside it?"""
    dot = (a[0] - p[0]) * (b[0] - p[0]) + (a[1] - p[1]) * (b[1] - p[1])
    return dot < 0


def _segment_conflict(p1: Vec2F, q1: Vec2F, p2: Vec2F, q2: Vec2F) -> Optional[str]:
    """Classify how segments p1q1 and p2q2 meet.

    Returns None when they are disjoint or share only common endpoints,
    "cross" for a transversal interior intersection or an endpoint in the
    other segment's interior, and "overlap" for a shared sub-segment.
    """
    d1 = _cross(p2, q2, p1)
    d2 = _cross(p2, q2, q1)
    d3 = _cross(p1, q1, p2)
    d4 = _cross(p1, q1, q2)
    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        # collinear: overlap iff the shared part has positive length
        axis = 0 if p1[0] != q1[0] else 1
        lo1, hi1 = sorted((p1[axis], q1[axis]))
        lo2, hi2 = sorted((p2[axis], q2[axis]))
        if max(lo1, lo2) < min(hi1, hi2):
            return "overlap"
        return None
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 and \
            ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
        return "cross"
    # an endpoint (always a vertex point of the dimer) inside the other segment
    if d1 == 0 and _strictly_between(p1, p2, q2):
        return "cross"
    if d2 == 0 and _strictly_between(q1, p2, q2):
        return "cross"
    if d3 == 0 and _strictly_between(p2, p1, q1):
        return "cross"
    if d4 == 0 and _strictly_between(q2, p1, q1):
        return "cross"
    return None


def _check_segments(q: EmbeddedQuiver) -> None:
    """Reject projections where arrows cross, overlap, or hit vertex points."""
    n = len(q.arrows)
    segs = []
    for a in q.arrows:
        p = q.points[a.tail]
        start = (p[0], p[1])
        end = (p[0] + a.lift[0], p[1] + a.lift[1])
        segs.append((start, end))
    boxes = []
    for s, e in segs:
        boxes.append((
            min(s[0], e[0]), max(s[0], e[0]),
            min(s[1], e[1]), max(s[1], e[1]),
        ))
    for i in range(n):
        for j in range(i, n):
            ax0, ax1, ay0, ay1 = boxes[i]
            bx0, bx1, by0, by1 = boxes[j]
            for nx in range(math.ceil(ax0 - bx1), math.floor(ax1 - bx0) + 1):
                for ny in range(math.ceil(ay0 - by1), math.floor(ay1 - by0) + 1):
                    if i == j and nx == 0 and ny == 0:
                        continue
                    p2 = (segs[j][0][0] + nx, segs[j][0][1] + ny)
                    q2 = (segs[j][1][0] + nx, segs[j][1][1] + ny)
                    kind = _segment_conflict(segs[i][0], segs[i][1], p2, q2)
                    if kind == "cross":
                        raise SegmentCrossing(
                            "projected arrows %d and %d intersect away from "
                            "shared endpoints" % (i, j)
                        )
                    if kind == "overlap":
                        raise OverlappingSegments(
                            "projected arrows %d and %d share a sub-segment"
                            % (i, j)
                        )


def _angle_quadrant(d: Vec2F) -> int:
    dx, dy = d
    if dx > 0 and dy >= 0:
        return 0
    if dx <= 0 and dy > 0:
        return 1
    if dx < 0 and dy <= 0:
        return 2
    return 3


def _angle_cmp(d1: Vec2F, d2: Vec2F) -> int:
    q1, q2 = _angle_quadrant(d1), _angle_quadrant(d2)
    if q1 != q2:
        return -1 if q1 < q2 else 1
    cr = d1[0] * d2[1] - d1[1] * d2[0]
    if cr > 0:
        return -1
    if cr < 0:
        return 1
    return 0


# ---------------------------------------------------------------------------
# dart bookkeeping: arrow a owns darts 2a (forward) and 2a+1 (backward)


def _dart_vertex(q: EmbeddedQuiver, d: int) -> int:
    a = q.arrows[d >> 1]
    return a.tail if d % 2 == 0 else a.head


def _dart_direction(q: EmbeddedQuiver, d: int) -> Vec2F:
    lift = q.arrows[d >> 1].lift
    if d % 2 == 0:
        return (lift[0], lift[1])
    return (-lift[0], -lift[1])


def _rotation_system(q: EmbeddedQuiver) -> dict[int, int]:
    """Map each dart to the next dart counterclockwise around its vertex."""
    at_vertex: dict[int, list[int]] = {v: [] for v in range(len(q.vertices))}
    for d in range(2 * len(q.arrows)):
        at_vertex[_dart_vertex(q, d)].append(d)
    rot: dict[int, int] = {}
    for v, darts in at_vertex.items():
        if not darts:
            raise InternalCheckError("vertex %d has no incident arrows" % v)
        darts.sort(key=functools.cmp_to_key(
            lambda a, b: _angle_cmp(_dart_direction(q, a), _dart_direction(q, b))
        ))
        for i in range(len(darts) - 1):
            if _angle_cmp(_dart_direction(q, darts[i]),
                          _dart_direction(q, darts[i + 1])) == 0:
                raise InternalCheckError(
                    "two arrow ends at vertex %d share a direction" % v
                )
        for i, d in enumerate(darts):
            rot[d] = darts[(i + 1) % len(darts)]
    return rot


def _canon_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate a cyclic tuple so it starts at its smallest entry."""
    k = min(range(len(cycle)), key=lambda i: cycle[i])
    return tuple(cycle[k:]) + tuple(cycle[:k])


def extract_dimer(q: EmbeddedQuiver) -> DimerModel:
    """Project an embedded quiver to the 2-torus and trace its faces."""
    for v, p in enumerate(q.points):
        for w in range(v + 1, len(q.points)):
            if p[0] == q.points[w][0] and p[1] == q.points[w][1]:
                raise InternalCheckError(
                    "vertices %d and %d project to the same point" % (v, w)
                )
    for i, a in enumerate(q.arrows):
        if a.lift[0] == 0 and a.lift[1] == 0:
            raise InternalCheckError("arrow %d projects to a point" % i)
    _check_segments(q)
    rot = _rotation_system(q)
    rot_prev = {nxt: d for d, nxt in rot.items()}

    # faces: orbits of dart -> clockwise-next dart at the far end; every
    # orbit walks its region counterclockwise in dart directions
    nd = 2 * len(q.arrows)
    seen = [False] * nd
    face_pos: list[tuple[int, ...]] = []
    face_neg: list[tuple[int, ...]] = []
    for start in range(nd):
        if seen[start]:
            continue
        orbit = []
        d = start
        while True:
            orbit.append(d)
            seen[d] = True
            d = rot_prev[d ^ 1]
            if d == start:
                break
            if seen[d]:
                raise InternalCheckError("face tracing revisited a dart")
        if len(orbit) < 3:
            raise FaceTooShort(
                "face %s has %d sides" % (sorted(set(x >> 1 for x in orbit)),
                                          len(orbit))
            )
        parities = {d % 2 for d in orbit}
        if len(parities) != 1:
            raise OrientabilityFailure(
                "face through arrows %s mixes directions"
                % sorted(set(x >> 1 for x in orbit))
            )
        total = [Fraction(0), Fraction(0)]
        pos = (Fraction(0), Fraction(0))
        area2 = Fraction(0)
        for d in orbit:
            step = _dart_direction(q, d)
            nxt = (pos[0] + step[0], pos[1] + step[1])
            area2 += pos[0] * nxt[1] - pos[1] * nxt[0]
            total[0] += step[0]
            total[1] += step[1]
            pos = nxt
        if total[0] != 0 or total[1] != 0:
            raise InternalCheckError("face boundary does not close up")
        forward = parities == {0}
        if area2 <= 0:
            raise OrientabilityFailure(
                "face through arrows %s winds the wrong way"
                % sorted(set(x >> 1 for x in orbit))
            )
        arrows_cyc = _canon_cycle([d >> 1 for d in orbit])
        if forward:
            face_pos.append(arrows_cyc)
        else:
            face_neg.append(arrows_cyc)

    face_pos.sort(key=lambda c: (len(c), c))
    face_neg.sort(key=lambda c: (len(c), c))
    model = DimerModel(q, tuple(face_pos), tuple(face_neg))
    _check_dimer_axioms(model)
    return model


def _check_dimer_axioms(model: DimerModel) -> None:
    q = model.quiver
    n = len(q.arrows)
    counts_pos = [0] * n
    counts_neg = [0] * n
    for cyc in model.faces_pos:
        for a in cyc:
            counts_pos[a] += 1
    for cyc in model.faces_neg:
        for a in cyc:
            counts_neg[a] += 1
    if counts_pos != [1] * n or counts_neg != [1] * n:
        raise ManifoldFailure(
            "some arrow does not lie on exactly one face of each orientation"
        )
    k = len(q.data.rays)
    for cyc in model.faces():
        slack_sum = [0] * k
        for a in cyc:
            s = q.arrows[a].slack
            for i in range(k):
                slack_sum[i] += s[i]
        if slack_sum != [1] * k:
            raise InternalCheckError(
                "face %s has slack sum %s" % (cyc, tuple(slack_sum))
            )
    faces = model.faces()
    if len(q.vertices) - n + len(faces) != 0:
        raise ManifoldFailure(
            "embedding is not cellular: V - E + F = %d"
            % (len(q.vertices) - n + len(faces))
        )
    # local condition: at each vertex, incident faces and arrows form a
    # connected incidence graph
    for v in range(len(q.vertices)):
        arrows_v = [i for i, a in enumerate(q.arrows)
                    if a.tail == v or a.head == v]
        faces_v = []
        for fi, cyc in enumerate(faces):
            walk = [q.arrows[a].tail for a in cyc] if fi < len(model.faces_pos) \
                else [q.arrows[a].head for a in cyc]
            if v in walk:
                faces_v.append(fi)
        nodes = {("a", i) for i in arrows_v} | {("f", i) for i in faces_v}
        parent = {x: x for x in nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for fi in faces_v:
            for a in faces[fi]:
                if ("a", a) in nodes:
                    ra, rf = find(("a", a)), find(("f", fi))
                    if ra != rf:
                        parent[ra] = rf
        roots = {find(x) for x in nodes}
        if len(roots) != 1:
            raise ManifoldFailure(
                "faces and arrows at vertex %d do not form a disk" % v
            )


# ---------------------------------------------------------------------------
# R-charges


def _dot3(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]


def _arrow_kappa(model: DimerModel) -> tuple[RationalVec3, ...]:
    """kappa of each arrow's slack (the negated lift)."""
    return tuple(
        (-a.lift[0], -a.lift[1], -a.lift[2]) for a in model.quiver.arrows
    )


def _charge_values(model: DimerModel, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    h = _dot3(x, (Fraction(0), Fraction(0), Fraction(1)))
    return tuple(2 * _dot3(x, ak) / h for ak in _arrow_kappa(model))


def _assert_charge_identities(model: DimerModel, values: Sequence[Fraction]) -> None:
    q = model.quiver
    for cyc in model.faces():
        if sum(values[a] for a in cyc) != 2:
            raise InternalCheckError("face charge sum is not 2")
    for v in range(len(q.vertices)):
        s = sum(1 - values[i] for i, a in enumerate(q.arrows) if a.head == v)
        s += sum(1 - values[i] for i, a in enumerate(q.arrows) if a.tail == v)
        if s != 2:
            raise InternalCheckError("vertex charge sum is not 2")


def find_rcharge(model: DimerModel,
                 x: Optional[Sequence] = None) -> RCharge:
    """Assign positive charges R_a from an interior covector.

    With ``x`` supplied, validates interiority and uses it directly.  With
    ``x`` absent, searches for a rational covector making every charge
    positive by exact elimination, and reports ``Infeasible`` (naming the
    obstructing arrows) when no such covector exists.
    """
    data = model.data
    if x is not None:
        xv = tuple(Fraction(c) for c in x)
        if len(xv) != 3:
            raise NotInterior("covector must have three components")
        for ray in data.rays:
            if _dot3(xv, ray) <= 0:
                raise NotInterior(
                    "covector (%s) is not positive on ray %s"
                    % (", ".join(frac_str(c) for c in xv), ray)
                )
        if xv[2] <= 0:
            raise NotInterior("covector has nonpositive height component")
    else:
        xv = _find_positive_covector(model)
    values = _charge_values(model, xv)
    _assert_charge_identities(model, values)
    bad = [i for i, v in enumerate(values) if not 0 < v < 2]
    if bad:
        raise Infeasible(
            "covector (%s) gives charge outside (0, 2) on arrows %s"
            % (", ".join(frac_str(c) for c in xv), bad)
        )
    return RCharge(values, xv)


def _find_positive_covector(model: DimerModel) -> tuple[Fraction, Fraction, Fraction]:
    """Find x with x3 = 1 making every constraint row pair positively.

    Constraints are strict: <x, w> > 0 for every ray w and every arrow's
    slack image w = kappa(slack).  Solved by eliminating x1 then x2 exactly.
    Each constraint carries the set of arrow indices it came from so that an
    empty interval reports the arrows obstructing feasibility.
    """
    rows: list[tuple[Fraction, Fraction, Fraction, frozenset[int]]] = []
    for ray in model.data.rays:
        rows.append((Fraction(ray[0]), Fraction(ray[1]), Fraction(ray[2]),
                     frozenset()))
    for i, ak in enumerate(_arrow_kappa(model)):
        rows.append((ak[0], ak[1], ak[2], frozenset([i])))

    def eliminate(rows, var):
        lows, highs, rest = [], [], []
        for r in rows:
            a = r[var]
            if a > 0:
                lows.append(r)
            elif a < 0:
                highs.append(r)
            else:
                rest.append(r)
        for lo in lows:
            for hi in highs:
                # a_lo * x_var + (..) > 0 and a_hi * x_var + (..) > 0 combine
                comb = tuple(
                    lo[j] * (-hi[var]) + hi[j] * lo[var] for j in range(3)
                ) + (lo[3] | hi[3],)
                rest.append(comb)
        return lows, highs, rest

    lows1, highs1, rows2 = eliminate(rows, 0)
    lows2, highs2, rows3 = eliminate(rows2, 1)
    # rows3 constrain nothing but the constant (x3 = 1): c > 0 must hold
    for r in rows3:
        if r[2] <= 0:
            raise Infeasible(
                "no interior covector gives positive charges; obstructing "
                "arrows %s" % sorted(r[3])
            )

    def pick(lows, highs, var, point):
        """Midpoint of the open interval for coordinate ``var`` at ``point``."""
        lo_val = hi_val = None
        lo_src = hi_src = frozenset()
        for r in lows + highs:
            rest = sum(r[j] * point[j] for j in range(3) if j != var)
            v = -rest / r[var]
            if r[var] > 0:
                if lo_val is None or v > lo_val:
                    lo_val, lo_src = v, r[3]
            else:
                if hi_val is None or v < hi_val:
                    hi_val, hi_src = v, r[3]
        if lo_val is not None and hi_val is not None:
            if lo_val >= hi_val:
                raise Infeasible(
                    "no interior covector gives positive charges; "
                    "obstructing arrows %s" % sorted(lo_src | hi_src)
                )
            return (lo_val + hi_val) / 2
        if lo_val is not None:
            return lo_val + 1
        if hi_val is not None:
            return hi_val - 1
        return Fraction(0)

    x2 = pick(lows2, highs2, 1, (Fraction(0), Fraction(0), Fraction(1)))
    x1 = pick(lows1, highs1, 0, (Fraction(0), x2, Fraction(1)))
    xv = (x1, x2, Fraction(1))
    for r in rows:
        if r[0] * xv[0] + r[1] * xv[1] + r[2] <= 0:
            raise InternalCheckError("covector search produced an infeasible point")
    return xv


# ---------------------------------------------------------------------------
# perfect matchings and the recovered polygon


def perfect_matchings(model: DimerModel) -> tuple[PerfectMatching, ...]:
    """All arrow subsets meeting every face exactly once, with lattice vectors."""
    faces = model.faces()
    nf = len(faces)
    n = len(model.quiver.arrows)
    face_arrows = [tuple(sorted(set(c))) for c in faces]
    arrow_faces: list[list[int]] = [[] for _ in range(n)]
    for fi, arrs in enumerate(face_arrows):
        for a in arrs:
            arrow_faces[a].append(fi)
    results: list[tuple[int, ...]] = []
    chosen: list[int] = []
    banned = [0] * n
    covered = [False] * nf

    def backtrack() -> None:
        best_fi, best_cands = -1, None
        for fi in range(nf):
            if covered[fi]:
                continue
            cands = [a for a in face_arrows[fi] if banned[a] == 0]
            if best_cands is None or len(cands) < len(best_cands):
                best_fi, best_cands = fi, cands
                if not cands:
                    break
        if best_cands is None:
            results.append(tuple(sorted(chosen)))
            return
        for a in best_cands:
            touched = []
            ok = True
            for fi in arrow_faces[a]:
                if covered[fi]:
                    ok = False
                    break
            if not ok:
                continue
            for fi in arrow_faces[a]:
                covered[fi] = True
                for b in face_arrows[fi]:
                    banned[b] += 1
                    touched.append(b)
            chosen.append(a)
            backtrack()
            chosen.pop()
            for fi in arrow_faces[a]:
                covered[fi] = False
            for b in touched:
                banned[b] -= 1

    backtrack()
    results.sort()
    if not results:
        raise InternalCheckError("dimer admits no perfect matching")
    out = []
    for arrows in results:
        for fi, arrs in enumerate(face_arrows):
            hits = sum(1 for a in arrows if a in set(arrs))
            if hits != 1:
                raise InternalCheckError("matching misses a face")
        out.append(PerfectMatching(arrows, _solve_nvec(model, arrows)))
    return tuple(out)


@lru_cache(maxsize=None)
def _cycle_data(model: DimerModel):
    """Cycles whose degrees span 3-space, plus extra cycles for checks.

    Returns (basis, extras): each entry is (signed arrow-coefficient tuple,
    degree 3-vector).  Cycles are taken from the full integer cycle space —
    the faces plus one fundamental cycle per non-tree arrow, with tree arrows
    traversed against their direction counted negatively.  In a strongly
    connected quiver every such cycle is an integer combination of directed
    cycles, and the matching-count identity is linear, so signed
    coefficients are valid.  The basis has three entries with invertible
    degree matrix, the first being a face (degree (0,0,1)).
    """
    q = model.quiver
    na = len(q.arrows)
    nv = len(q.vertices)

    def entry(coeffs: Sequence[int]):
        flow = [0] * nv
        deg = [Fraction(0)] * 3
        for j, z in enumerate(coeffs):
            if z:
                a = q.arrows[j]
                flow[a.tail] -= z
                flow[a.head] += z
                m = a.monomial
                for c in range(3):
                    deg[c] += z * m[c]
        if any(flow):
            raise InternalCheckError("cycle coefficients are not conserved")
        if any(d.denominator != 1 for d in deg):
            raise InternalCheckError("cycle has fractional degree")
        return tuple(coeffs), tuple(int(d) for d in deg)

    cycles = []
    for face in model.faces_pos + model.faces_neg:
        coeffs = [0] * na
        for a in face:
            coeffs[a] += 1
        cycles.append(entry(coeffs))
    # spanning tree of the underlying graph; one fundamental cycle per chord
    parent: dict[int, tuple[int, int, int]] = {0: (-1, -1, 0)}
    order = [0]
    queue = deque([0])
    incident: list[list[int]] = [[] for _ in range(nv)]
    for i, a in enumerate(q.arrows):
        incident[a.tail].append(i)
        incident[a.head].append(i)
    tree: set[int] = set()
    while queue:
        v = queue.popleft()
        for i in incident[v]:
            a = q.arrows[i]
            w = a.head if a.tail == v else a.tail
            if w not in parent:
                parent[w] = (v, i, 1 if a.tail == v else -1)
                tree.add(i)
                order.append(w)
                queue.append(w)
    if len(parent) != nv:
        raise InternalCheckError("quiver graph is not connected")

    def tree_path(v: int) -> list[tuple[int, int]]:
        path = []
        while v != 0:
            pv, i, sign = parent[v]
            path.append((i, sign))
            v = pv
        return path

    for i, a in enumerate(q.arrows):
        if i in tree:
            continue
        coeffs = [0] * na
        coeffs[i] += 1
        for j, sign in tree_path(a.head):
            coeffs[j] -= sign
        for j, sign in tree_path(a.tail):
            coeffs[j] += sign
        cycles.append(entry(coeffs))

    basis = []
    extras = []
    rows: list[Vec3] = []
    for cyc in cycles:
        if len(basis) < 3:
            trial = rows + [cyc[1]]
            if _rank3(trial) == len(trial):
                basis.append(cyc)
                rows.append(cyc[1])
                continue
        extras.append(cyc)
    if len(basis) < 3:
        raise DegenerateCycles(
            "cycle-space degrees span only %d dimensions" % len(basis)
        )
    return tuple(basis), tuple(extras)


def _rank3(rows: Sequence[Vec3]) -> int:
    mat = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    for col in range(3):
        pivot = None
        for r in range(rank, len(mat)):
            if mat[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col] / mat[rank][col]
                for c in range(3):
                    mat[r][c] -= f * mat[rank][c]
        rank += 1
    return rank


def _solve_nvec(model: DimerModel, arrows: Sequence[int]) -> Vec3:
    basis, extras = _cycle_data(model)
    pm = set(arrows)
    mat = [b[1] for b in basis]
    rhs = [sum(z for a, z in enumerate(b[0]) if z and a in pm)
           for b in basis]
    det = (
        mat[0][0] * (mat[1][1] * mat[2][2] - mat[1][2] * mat[2][1])
        - mat[0][1] * (mat[1][0] * mat[2][2] - mat[1][2] * mat[2][0])
        + mat[0][2] * (mat[1][0] * mat[2][1] - mat[1][1] * mat[2][0])
    )
    if det == 0:
        raise DegenerateCycles("degenerate cycle basis")
    n = []
    for c in range(3):
        cols = [list(row) for row in mat]
        for r in range(3):
            cols[r][c] = rhs[r]
        dc = (
            cols[0][0] * (cols[1][1] * cols[2][2] - cols[1][2] * cols[2][1])
            - cols[0][1] * (cols[1][0] * cols[2][2] - cols[1][2] * cols[2][0])
            + cols[0][2] * (cols[1][0] * cols[2][1] - cols[1][1] * cols[2][0])
        )
        if dc % det != 0:
            raise InternalCheckError("matching vector is not integral")
        n.append(dc // det)
    nvec = tuple(n)
    for coeffs, deg in extras:
        if sum(deg[c] * nvec[c] for c in range(3)) != \
                sum(z for a, z in enumerate(coeffs) if z and a in pm):
            raise InternalCheckError(
                "matching vector fails on an independent cycle"
            )
    return nvec


def pm_vector(model: DimerModel, matching: PerfectMatching) -> Vec3:
    """Lattice vector of a perfect matching (first coordinate pair at height 1)."""
    return _solve_nvec(model, matching.arrows)


def _hull_corners(points: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    pts = sorted(set(points))
    if len(pts) == 1:
        return list(pts)

    def half(seq):
        out: list[tuple[int, int]] = []
        for p in seq:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                cr = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
                if cr <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def recovered_polygon(model: DimerModel) -> tuple[Vec3, ...]:
    """Corners of the matching-vector hull; must equal the input rays."""
    matchings = perfect_matchings(model)
    for m in matchings:
        if m.nvec[2] != 1:
            raise InternalCheckError("matching vector off height 1")
    corners = _hull_corners([(m.nvec[0], m.nvec[1]) for m in matchings])
    got = {(c[0], c[1], 1) for c in corners}
    want = set(model.data.rays)
    if got != want:
        raise PolygonMismatch(
            "recovered corners %s differ from input rays %s"
            % (sorted(got), sorted(want))
        )
    return tuple(sorted(got))


def extremal_matchings(
    model: DimerModel,
) -> tuple[tuple[Vec3, tuple[int, ...]], ...]:
    """Per input ray, the indices of matchings whose vector is that corner."""
    matchings = perfect_matchings(model)
    recovered_polygon(model)
    out = []
    for ray in model.data.rays:
        idx = tuple(i for i, m in enumerate(matchings) if m.nvec == ray)
        if not idx:
            raise InternalCheckError("corner %s has no matching" % (ray,))
        out.append((ray, idx))
    return tuple(out)


# ---------------------------------------------------------------------------
# type sequences and the reflexive classifier


def _interior_lattice_points(points: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    n = len(points)
    found = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            inside = True
            for i in range(n):
                a, b = points[i], points[(i + 1) % n]
                cr = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0])
                if cr <= 0:
                    inside = False
                    break
            if inside:
                found.append((x, y))
    return found


def _degree_zero_homs(data, b: BVec, c: BVec) -> int:
    """Count monomials of charge-grading zero mapping module class b into c.

    These are lattice vectors m = (m1, m2, 0) whose twisted exponents stay
    componentwise above c - b.  The feasible region is an intersection of
    half-planes with the polygon vertices as normals, hence compact whenever
    the origin lies strictly inside the polygon (the reflexive case where
    this is used).
    """
    v = [c[i] - b[i] for i in range(len(b))]
    pts = data.points
    k = len(pts)
    cons = [
        (Fraction(pts[i][0]), Fraction(pts[i][1]), Fraction(v[i]))
        for i in range(k)
    ]
    verts = []
    for i in range(k):
        for j in range(i + 1, k):
            a1, b1, c1 = cons[i]
            a2, b2, c2 = cons[j]
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            m1 = (c1 * b2 - c2 * b1) / det
            m2 = (a1 * c2 - a2 * c1) / det
            if all(a * m1 + b * m2 >= cc for a, b, cc in cons):
                verts.append((m1, m2))
    if not verts:
        return 0
    lo1 = math.ceil(min(p[0] for p in verts))
    hi1 = math.floor(max(p[0] for p in verts))
    lo2 = math.ceil(min(p[1] for p in verts))
    hi2 = math.floor(max(p[1] for p in verts))
    count = 0
    for m1 in range(lo1, hi1 + 1):
        for m2 in range(lo2, hi2 + 1):
            if all(a * m1 + b * m2 >= cc for a, b, cc in cons):
                count += 1
    return count


def _tied_group_orders(data, q, group: list[int]) -> list[list[int]]:
    """All orders of same-height vertices keeping zero-grade homs forward.

    With distinct heights the vertex order is forced and all zero-grade homs
    point from earlier to later positions; a group of tied vertices must be
    arranged to keep that property.  A pair with homomorphisms both ways
    admits no arrangement at all; a pair with none leaves its relative order
    free, so several arrangements may come back.
    """
    before: dict[int, set[int]] = {u: set() for u in group}
    for i, u in enumerate(group):
        for w in group[i + 1:]:
            uw = _degree_zero_homs(data, q.vertices[u], q.vertices[w])
            wu = _degree_zero_homs(data, q.vertices[w], q.vertices[u])
            if uw > 0 and wu > 0:
                raise TiedHeights(
                    "tied module classes %d and %d carry zero-grade"
                    " homomorphisms both ways" % (u, w)
                )
            if uw > 0:
                before[w].add(u)
            elif wu > 0:
                before[u].add(w)
    orders: list[list[int]] = []

    def extend(prefix: list[int], left: set[int]) -> None:
        if not left:
            orders.append(list(prefix))
            return
        for u in sorted(left):
            if before[u] & left:
                continue
            prefix.append(u)
            left.remove(u)
            extend(prefix, left)
            left.add(u)
            prefix.pop()

    extend([], set(group))
    if not orders:
        raise TiedHeights(
            "tied module classes %s admit no compatible order" % (group,)
        )
    return orders


def type_sequence(model: DimerModel) -> tuple[int, ...]:
    """Arrow counts minus two between consecutive height-ordered vertices."""
    data = model.data
    if len(_interior_lattice_points(data.points)) != 1:
        raise NotReflexive(
            "polygon %s does not have exactly one interior lattice point"
            % (data.points,)
        )
    q = model.quiver
    heights = [p[2] for p in q.points]
    # arrows drop in height (their third lift coordinate is negative), so
    # consecutive-vertex arrow counts run from higher to lower classes
    groups: dict[Fraction, list[int]] = {}
    for v in range(len(q.vertices)):
        groups.setdefault(heights[v], []).append(v)
    choices: list[list[list[int]]] = []
    for h in sorted(groups, reverse=True):
        g = groups[h]
        choices.append(_tied_group_orders(data, q, g) if len(g) > 1 else [g])
    n = len(q.vertices)

    def sequence(order: list[int]) -> tuple[int, ...]:
        return tuple(
            len(q.arrows_between(order[(i - 1) % n], order[i % n])) - 2
            for i in range(1, n + 1)
        )

    first: Optional[tuple[int, ...]] = None
    canon: Optional[tuple[int, ...]] = None
    for combo in itertools.product(*choices):
        order = [v for part in combo for v in part]
        seq = sequence(order)
        if first is None:
            first = seq
            canon = _dihedral_canon(seq)
        elif _dihedral_canon(seq) != canon:
            raise TiedHeights(
                "tied module classes leave the type sequence ambiguous"
            )
    assert first is not None
    return first


REFLEXIVE_CORNERS: dict[str, tuple[tuple[int, int], ...]] = {
    "3a": ((-1, -1), (1, 0), (0, 1)),
    "4a": ((0, -1), (1, 0), (0, 1), (-1, 0)),
    "4b": ((1, -1), (0, 1), (-1, 0), (0, -1)),
    "4c": ((1, -1), (0, 1), (-1, -1)),
    "5a": ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1)),
    "5b": ((1, -1), (0, 1), (-1, 0), (-1, -1)),
    "6a": ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)),
    "6b": ((1, 0), (0, 1), (-1, 1), (-1, -1), (0, -1)),
    "6c": ((1, 0), (0, 1), (-2, -1), (0, -1)),
    "6d": ((0, 1), (-2, -1), (1, -1)),
    "7a": ((1, 0), (0, 1), (-1, 1), (-1, -1), (1, -1)),
    "7b": ((1, 0), (0, 1), (-2, -1), (1, -1)),
    "8a": ((1, 1), (-1, 1), (-1, -1), (1, -1)),
    "8b": ((0, 1), (-1, 1), (-1, -1), (2, -1)),
    "8c": ((0, 1), (2, -1), (-2, -1)),
    "9a": ((-1, 2), (-1, -1), (2, -1)),
}


def _boundary_lattice_points(
    corners: Sequence[tuple[int, int]],
) -> list[tuple[int, int]]:
    pts = []
    n = len(corners)
    for i in range(n):
        a, b = corners[i], corners[(i + 1) % n]
        g = math.gcd(abs(b[0] - a[0]), abs(b[1] - a[1]))
        sx, sy = (b[0] - a[0]) // g, (b[1] - a[1]) // g
        for j in range(g):
            pts.append((a[0] + j * sx, a[1] + j * sy))
    return pts


def reference_type_sequence(
    corners: Sequence[tuple[int, int]],
) -> tuple[int, ...]:
    """The intrinsic sequence of a reflexive polygon over its boundary points."""
    n = len(corners)
    area2 = sum(
        corners[i][0] * corners[(i + 1) % n][1]
        - corners[i][1] * corners[(i + 1) % n][0]
        for i in range(n)
    )
    if area2 < 0:
        corners = tuple(reversed(corners))
    w = _boundary_lattice_points(corners)
    n = len(w)
    seq = []
    for i in range(n):
        a, b = w[(i - 1) % n], w[(i + 1) % n]
        seq.append(-(a[0] * b[1] - a[1] * b[0]))
    return tuple(seq)


def _dihedral_canon(seq: Sequence[int]) -> tuple[int, ...]:
    n = len(seq)
    best = None
    for s in (tuple(seq), tuple(reversed(seq))):
        for r in range(n):
            cand = s[r:] + s[:r]
            if best is None or cand < best:
                best = cand
    return best


@lru_cache(maxsize=None)
def _reference_table() -> dict[tuple[int, ...], str]:
    table: dict[tuple[int, ...], str] = {}
    for label, corners in REFLEXIVE_CORNERS.items():
        seq = reference_type_sequence(corners)
        n = len(seq)
        if sum(seq) != 12 - 3 * n:
            raise InternalCheckError(
                "reference sequence of %s sums to %d" % (label, sum(seq))
            )
        canon = _dihedral_canon(seq)
        if canon in table:
            raise InternalCheckError(
                "reference sequences of %s and %s coincide"
                % (table[canon], label)
            )
        table[canon] = label
    return table


def polygon_type(seq: Sequence[int]) -> Optional[str]:
    """Label of the reflexive polygon whose sequence matches, if any."""
    return _reference_table().get(_dihedral_canon(seq))


# ---------------------------------------------------------------------------
# combinatorial isomorphism of dimer models


def _dart_struct(model: DimerModel, reverse: bool):
    """(phi, rho, vertex_of, forward) with darts 2a / 2a+1.

    ``phi`` is the face-traversal permutation (orbit order of the stored
    cycles) and ``rho`` the derived vertex rotation; both are intrinsic to
    the drawing and unchanged by reversing every arrow — reversal only flips
    which darts count as forward.
    """
    q = model.quiver
    nd = 2 * len(q.arrows)
    fwd = [(d % 2 == 0) != reverse for d in range(nd)]
    vertex_of = [q.arrows[d >> 1].tail if d % 2 == 0
                 else q.arrows[d >> 1].head for d in range(nd)]
    phi = [-1] * nd
    for cyc in model.faces_pos:
        for i, a in enumerate(cyc):
            phi[2 * a] = 2 * cyc[(i + 1) % len(cyc)]
    for cyc in model.faces_neg:
        for i, a in enumerate(cyc):
            phi[2 * a + 1] = 2 * cyc[(i + 1) % len(cyc)] + 1
    if -1 in phi:
        raise InternalCheckError("incomplete face data")
    rho = [phi[d ^ 1] for d in range(nd)]
    return phi, rho, vertex_of, fwd


def _dart_profile(struct, d: int) -> tuple:
    phi, rho, vertex_of, fwd = struct

    def orbit_len(perm, start):
        l, x = 1, perm[start]
        while x != start:
            x = perm[x]
            l += 1
        return l

    return (fwd[d], orbit_len(phi, d), orbit_len(phi, d ^ 1),
            orbit_len(rho, d))


def dimer_isomorphic(m1: DimerModel, m2: DimerModel,
                     reverse_second: bool = False) -> bool:
    """Direction-preserving combinatorial isomorphism of dimer models.

    True when a bijection of darts commutes with reversal, vertex rotation,
    and face traversal, and maps forward arrows to forward arrows.  With
    ``reverse_second``, compares against the second model with all arrows
    reversed.
    """
    q1, q2 = m1.quiver, m2.quiver
    if len(q1.vertices) != len(q2.vertices) or len(q1.arrows) != len(q2.arrows):
        return False
    prof1 = (sorted(len(c) for c in m1.faces_pos),
             sorted(len(c) for c in m1.faces_neg))
    f2p, f2n = m2.faces_pos, m2.faces_neg
    if reverse_second:
        f2p, f2n = f2n, f2p
    prof2 = (sorted(len(c) for c in f2p), sorted(len(c) for c in f2n))
    if prof1 != prof2:
        return False
    s1 = _dart_struct(m1, False)
    s2 = _dart_struct(m2, reverse_second)
    nd = 2 * len(q1.arrows)
    d0 = 0
    p0 = _dart_profile(s1, d0)
    for cand in range(nd):
        if _dart_profile(s2, cand) != p0:
            continue
        if _try_dart_map(s1, s2, nd, d0, cand):
            return True
    return False


def _try_dart_map(s1, s2, nd: int, d0: int, c0: int) -> bool:
    phi1, rho1, vert1, fwd1 = s1
    phi2, rho2, vert2, fwd2 = s2
    dmap = [-1] * nd
    vmap: dict[int, int] = {}
    vseen: dict[int, int] = {}
    dmap[d0] = c0
    queue = deque([d0])
    while queue:
        d = queue.popleft()
        e = dmap[d]
        if fwd1[d] != fwd2[e]:
            return False
        v, w = vert1[d], vert2[e]
        if vmap.get(v, w) != w or vseen.get(w, v) != v:
            return False
        vmap[v] = w
        vseen[w] = v
        for f1, f2 in ((d ^ 1, e ^ 1), (rho1[d], rho2[e]), (phi1[d], phi2[e])):
            if dmap[f1] == -1:
                dmap[f1] = f2
                queue.append(f1)
            elif dmap[f1] != f2:
                return False
    if -1 in dmap:
        raise InternalCheckError("dart propagation did not cover the model")
    return len(set(dmap)) == nd


# ---------------------------------------------------------------------------
# census rows (classes printed modulo opposites)


@lru_cache(maxsize=None)
def class_dimers(data: ToricData) -> tuple[DimerModel, ...]:
    """One dimer model per affine class, from its first representative."""
    raw, _ = nccr_classes(data)
    quivers = nccr_quivers(data)
    return tuple(extract_dimer(quivers[cls[0]]) for cls in raw)


@lru_cache(maxsize=None)
def census_rows(data: ToricData) -> tuple[CensusRow, ...]:
    """Affine classes grouped the way the resolution census prints them.

    Reversing every arrow of a class representative yields another valid
    dimer model.  Three situations occur, each with its own row shape:

    * the reversed dimer is isomorphic to the original (achiral): the class
      stands on its own unstarred row;
    * the reversed dimer is isomorphic to no listed class (the reversal is
      only reachable through an orientation-reversing symmetry, so both
      orientations already live in the same affine class): again one
      unstarred row;
    * the reversed dimer is isomorphic to a different class's dimer: the two
      classes are the two orientations of one chiral model.  Small pairs
      (class size at most twice the vertex count) are printed as a single
      starred row; larger pairs keep one unstarred row per orientation.
    """
    raw, _ = nccr_classes(data)
    quivers = nccr_quivers(data)
    class_of: dict[tuple, int] = {}
    for ci, members in enumerate(raw):
        for qi in members:
            class_of[quivers[qi].vertices] = ci
    opp_class = []
    for members in raw:
        oq = opposite(quivers[members[0]])
        oi = class_of.get(oq.vertices)
        if oi is None:
            raise InternalCheckError("opposite quiver matches no class")
        opp_class.append(oi)
    dimers = class_dimers(data)
    n = len(dimers)
    partner: list[Optional[int]] = []
    for ci in range(n):
        hits = [
            cj for cj in range(n)
            if dimer_isomorphic(dimers[ci], dimers[cj], reverse_second=True)
        ]
        if len(hits) > 1:
            raise InternalCheckError(
                "reversed dimer of class %d matches several classes" % ci
            )
        partner.append(hits[0] if hits else None)
    rows: list[CensusRow] = []
    done: set[int] = set()
    nv = len(quivers[0].vertices)
    for ci in range(n):
        if ci in done:
            continue
        cj = partner[ci]
        if cj is None:
            # reversal leaves the affine class but is no listed model: the
            # class is opposite to itself through a reflection
            if opp_class[ci] != ci:
                raise InternalCheckError(
                    "class %d has no reversed model yet is not"
                    " self-opposite" % ci
                )
            rows.append(CensusRow((ci,), raw[ci][0], False))
            done.add(ci)
            continue
        if ci == cj:
            rows.append(CensusRow((ci,), raw[ci][0], False))
            done.add(ci)
            continue
        if partner[cj] != ci or opp_class[ci] != cj:
            raise InternalCheckError(
                "classes %d and %d pair inconsistently under reversal"
                % (ci, cj)
            )
        if len(raw[ci]) > 2 * nv:
            rows.append(CensusRow((ci,), raw[ci][0], False))
            rows.append(CensusRow((cj,), raw[cj][0], False))
        else:
            rows.append(CensusRow((ci, cj), raw[ci][0], True))
        done.add(ci)
        done.add(cj)
    rows.sort(key=lambda r: r.classes[0])
    return tuple(rows)


# ---------------------------------------------------------------------------
# SVG rendering


def _face_polygon(model: DimerModel, fi: int) -> list[Vec2F]:
    faces = model.faces()
    cyc = faces[fi]
    forward = fi < len(model.faces_pos)
    q = model.quiver
    first = cyc[0]
    pos = model.position(q.arrows[first].tail if forward
                         else q.arrows[first].head)
    pts = [pos]
    for a in cyc[:-1]:
        d = model.direction(a)
        if not forward:
            d = (-d[0], -d[1])
        pos = (pos[0] + d[0], pos[1] + d[1])
        pts.append(pos)
    return pts


def render_svg(model: DimerModel) -> str:
    """Draw the dimer on the unit square with wrapped copies, as SVG text."""
    scale = 240
    lo, hi = Fraction(-1, 4), Fraction(5, 4)
    size = float((hi - lo) * scale)

    def fx(x: Fraction) -> str:
        return "%.2f" % ((float(x) - float(lo)) * scale)

    def fy(y: Fraction) -> str:
        return "%.2f" % ((float(hi) - float(y)) * scale)

    out = []
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" width="%.0f" height="%.0f" '
        'viewBox="0 0 %.0f %.0f">' % (size, size, size, size)
    )
    out.append(
        '<defs><marker id="ah" viewBox="0 0 10 10" refX="9" refY="5" '
        'markerWidth="6" markerHeight="6" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="#333"/></marker></defs>'
    )
    out.append('<rect width="100%" height="100%" fill="white"/>')

    def translates(pts: list[Vec2F]):
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        for nx in range(math.ceil(lo - max(xs)), math.floor(hi - min(xs)) + 1):
            for ny in range(math.ceil(lo - max(ys)),
                            math.floor(hi - min(ys)) + 1):
                yield nx, ny

    nf_pos = len(model.faces_pos)
    for fi in range(len(model.faces())):
        pts = _face_polygon(model, fi)
        fill = "#dce9f9" if fi < nf_pos else "white"
        for nx, ny in translates(pts):
            coords = " ".join(
                "%s,%s" % (fx(p[0] + nx), fy(p[1] + ny)) for p in pts
            )
            out.append(
                '<polygon points="%s" fill="%s" stroke="#bbbbbb" '
                'stroke-width="0.5"/>' % (coords, fill)
            )
    out.append(
        '<rect x="%s" y="%s" width="%.0f" height="%.0f" fill="none" '
        'stroke="#888888" stroke-dasharray="6,4"/>'
        % (fx(Fraction(0)), fy(Fraction(1)), scale, scale)
    )
    for i, a in enumerate(model.quiver.arrows):
        p = model.position(a.tail)
        d = model.direction(i)
        seg = [p, (p[0] + d[0], p[1] + d[1])]
        # trim the head so the marker does not cover the vertex dot
        for nx, ny in translates(seg):
            x1, y1 = seg[0][0] + nx, seg[0][1] + ny
            x2, y2 = seg[1][0] + nx, seg[1][1] + ny
            sx1, sy1 = float(x1), float(y1)
            sx2, sy2 = float(x2), float(y2)
            ux, uy = sx2 - sx1, sy2 - sy1
            norm = (ux * ux + uy * uy) ** 0.5
            if norm:
                sx2 -= ux / norm * 0.035
                sy2 -= uy / norm * 0.035
            out.append(
                '<line x1="%s" y1="%s" x2="%.2f" y2="%.2f" stroke="#333333" '
                'stroke-width="1.4" marker-end="url(#ah)"/>'
                % (fx(x1), fy(y1),
                   (sx2 - float(lo)) * scale, (float(hi) - sy2) * scale)
            )
    for v in range(len(model.quiver.vertices)):
        p = model.position(v)
        pts = [p]
        for nx, ny in translates(pts):
            out.append(
                '<circle cx="%s" cy="%s" r="5" fill="black"/>'
                % (fx(p[0] + nx), fy(p[1] + ny))
            )
            out.append(
                '<text x="%s" y="%s" font-size="13" font-family="monospace" '
                'fill="#c0392b">%d</text>'
                % (fx(p[0] + nx + Fraction(1, 50)),
                   fy(p[1] + ny + Fraction(1, 50)), v)
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
