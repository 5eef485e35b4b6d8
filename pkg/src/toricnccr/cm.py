"""Cohen-Macaulay test for T(b) in dimension 3 and enumeration of all classes.

T(b) fails to be Cohen-Macaulay exactly when some lattice point m has a
"non-segment" signature with respect to b: writing sign_i(m) = + iff
<m, v_i> >= b_i, the + positions must form a contiguous cyclic arc (or be
empty, or everything).  Equivalently, m lies in one of the regions cut out by
an alternating sign pattern on an index quadruple i1 < i2 < i3 < i4:

    { x : <x, v_i> >= b_i for +,  <x, v_i> <= b_i - 1 for - }

Those regions are bounded (the recession cone of an alternating pattern on
convex-position rays is trivial), so lattice-freeness is decidable by scanning
integer bounding boxes of the region vertices.  Two independent deciders are
provided: `is_cm` (per-region scan) and `is_cm_by_cells` (signature scan over
one big box); both return the globally lexicographically least witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .lattice import (
    BVec,
    CheckFailure,
    ToricData,
    Vec3,
    _adjugate3,
    _det3,
    _matvec3,
    normalize,
)


class PrefixNotCM(CheckFailure):
    pass


@dataclass(frozen=True, slots=True)
class CMWitness:
    """Either CM (no witness) or NotCM with the offending lattice point."""

    cm: bool
    witness: Optional[Vec3] = None
    signature: Optional[str] = None

    def __bool__(self) -> bool:
        return self.cm


_CM = CMWitness(True)

# int64 safety margin for the vectorized scans
_NP_LIMIT = 1 << 62


def signature_of(data: ToricData, b: Sequence[int], m: Sequence[int]) -> str:
    """Signature of lattice point m w.r.t. b: '+' iff <m, v_i> >= b_i."""
    mx, my, mz = m
    return "".join(
        "+" if mx * vx + my * vy + mz * vz >= bi else "-"
        for (vx, vy, vz), bi in zip(data.rays, b)
    )


def is_segment(signature: str) -> bool:
    """True iff the + positions form a cyclic arc (or are empty / everything)."""
    k = len(signature)
    rising = sum(
        1 for i in range(k) if signature[i] == "-" and signature[(i + 1) % k] == "+"
    )
    return rising <= 1


@lru_cache(maxsize=None)
def _region_tables(data: ToricData):
    """Per-(quadruple, alternating pattern) solve tables.

    For each region the four candidate vertices are the solutions of the four
    plane triples; entry t holds (active positions, adjugate, det, dropped
    position) with the adjugate/determinant of the 3x3 ray matrix of the
    active constraints.
    """
    regions = []
    k = data.k
    for quad in combinations(range(k), 4):
        for first in (1, -1):
            signs = (first, -first, first, -first)
            triples = []
            for t in range(4):
                active = tuple(p for p in range(4) if p != t)
                rows = tuple(data.rays[quad[p]] for p in active)
                det = _det3(rows)
                assert det != 0, "three rays collinear despite convexity"
                triples.append((active, _adjugate3(rows), det, t))
            regions.append((quad, signs, triples))
    return tuple(regions)


def _region_box(data, b, quad, signs, triples):
    """Integer bounding box of the region, or None if the region is empty.

    The region, when nonempty, is the convex hull of its feasible candidate
    vertices (every vertex of the polytope is a triple intersection), so the
    box of the feasible vertices contains every lattice point of the region.
    """
    # constraint boundary values: + -> b_i, - -> b_i - 1
    cval = [b[quad[p]] if signs[p] == 1 else b[quad[p]] - 1 for p in range(4)]
    lo = [None, None, None]
    hi = [None, None, None]
    nonempty = False
    for active, adj, det, t in triples:
        rhs = (cval[active[0]], cval[active[1]], cval[active[2]])
        num = _matvec3(adj, rhs)  # vertex * det
        if det < 0:
            num = (-num[0], -num[1], -num[2])
            den = -det
        else:
            den = det
        # check the dropped constraint at this vertex
        vt = data.rays[quad[t]]
        pairing = num[0] * vt[0] + num[1] * vt[1] + num[2] * vt[2]
        bound = cval[t] * den
        ok = pairing >= bound if signs[t] == 1 else pairing <= bound
        if not ok:
            continue
        nonempty = True
        for c in range(3):
            lo_c = -((-num[c]) // den)  # ceil
            hi_c = num[c] // den  # floor
            lo[c] = lo_c if lo[c] is None or lo_c < lo[c] else lo[c]
            hi[c] = hi_c if hi[c] is None or hi_c > hi[c] else hi[c]
    if not nonempty:
        return None
    return (lo[0], lo[1], lo[2]), (hi[0], hi[1], hi[2])


def _boxes(data: ToricData, b: Sequence[int]):
    """(box, quad, signs) for every nonempty alternating region."""
    out = []
    for quad, signs, triples in _region_tables(data):
        box = _region_box(data, b, quad, signs, triples)
        if box is not None:
            out.append((box, quad, signs))
    return out


def _scan_region(data, b, box, quad, signs) -> Optional[Vec3]:
    """Lex-least lattice point inside one alternating region, or None."""
    (lx, ly, lz), (hx, hy, hz) = box
    rays = [data.rays[i] for i in quad]
    cval = [b[quad[p]] if signs[p] == 1 else b[quad[p]] - 1 for p in range(4)]
    for x in range(lx, hx + 1):
        for y in range(ly, hy + 1):
            for z in range(lz, hz + 1):
                ok = True
                for (vx, vy, vz), c, s in zip(rays, cval, signs):
                    d = x * vx + y * vy + z * vz
                    if (d < c) if s == 1 else (d > c):
                        ok = False
                        break
                if ok:
                    return (x, y, z)
    return None


def is_cm(data: ToricData, b: Sequence[int]) -> CMWitness:
    """CM iff every alternating-quadruple region is lattice-free.

    Returns the globally lexicographically least witness point when NotCM.
    """
    b = tuple(b)
    assert len(b) == data.k
    best: Optional[Vec3] = None
    for box, quad, signs in _boxes(data, b):
        if best is not None and box[0][0] > best[0]:
            # every point of this box is lex-greater than the current witness
            continue
        hit = _scan_region(data, b, box, quad, signs)
        if hit is not None and (best is None or hit < best):
            best = hit
    if best is None:
        return _CM
    return CMWitness(False, best, signature_of(data, b, best))


def _scan_cells_numpy(data, b, lo, hi) -> Optional[Vec3]:
    rays = np.array(data.rays, dtype=np.int64)  # k x 3
    bb = np.array(b, dtype=np.int64)
    ny = hi[1] - lo[1] + 1
    nz = hi[2] - lo[2] + 1
    ys = np.arange(lo[1], hi[1] + 1, dtype=np.int64)
    zs = np.arange(lo[2], hi[2] + 1, dtype=np.int64)
    yz = np.empty((ny * nz, 2), dtype=np.int64)
    yz[:, 0] = np.repeat(ys, nz)
    yz[:, 1] = np.tile(zs, ny)
    base = yz @ rays[:, 1:].T  # (ny*nz) x k
    for x in np.arange(lo[0], hi[0] + 1, dtype=np.int64):
        dots = base + x * rays[:, 0]
        bits = dots >= bb
        rising = (~bits) & np.roll(bits, -1, axis=1)
        nonseg = rising.sum(axis=1) >= 2
        if nonseg.any():
            i = int(np.argmax(nonseg))
            return (int(x), int(yz[i, 0]), int(yz[i, 1]))
    return None


def _scan_cells_python(data, b, lo, hi) -> Optional[Vec3]:
    for x in range(lo[0], hi[0] + 1):
        for y in range(lo[1], hi[1] + 1):
            for z in range(lo[2], hi[2] + 1):
                if not is_segment(signature_of(data, b, (x, y, z))):
                    return (x, y, z)
    return None


def is_cm_by_cells(data: ToricData, b: Sequence[int]) -> CMWitness:
    """Independent oracle: signature scan over one box containing every region.

    A point has a non-segment signature iff it lies in some alternating
    region, so scanning the bounding box of the union of all regions is
    complete.  Must agree with `is_cm` on every input, witness included.
    """
    b = tuple(b)
    assert len(b) == data.k
    boxes = _boxes(data, b)
    if not boxes:
        return _CM
    lo = tuple(min(box[0][c] for box, _, _ in boxes) for c in range(3))
    hi = tuple(max(box[1][c] for box, _, _ in boxes) for c in range(3))
    mag = max(abs(lo[0]), abs(hi[0]), abs(lo[1]), abs(hi[1]), abs(lo[2]), abs(hi[2]))
    vmax = max(abs(c) for r in data.rays for c in r)
    bmax = max(1, max(abs(x) for x in b))
    if (3 * mag * vmax + bmax) < _NP_LIMIT // 4:
        hit = _scan_cells_numpy(data, b, lo, hi)
    else:
        hit = _scan_cells_python(data, b, lo, hi)
    if hit is None:
        return _CM
    return CMWitness(False, hit, signature_of(data, b, hit))


def cm_interval(
    data: ToricData,
    prefix: Sequence[int],
    probe: int,
    max_steps: int = 10**6,
) -> Optional[tuple[int, int]]:
    """Maximal integer interval of CM insertions at the last ray position.

    `data` covers j+1 rays; `prefix` is a CM vector on the first j.  Returns
    (l, u) with prefix + (z,) CM exactly for l <= z <= u, or None when no
    insertion is CM.  The walk jumps past witnesses: a witness m with sign -
    at the inserted ray forces z' <= <m, v_last>, sign + forces
    z' >= <m, v_last> + 1; the first non-monotone jump pinches the window
    shut and proves emptiness.
    """
    prefix = tuple(prefix)
    assert len(prefix) == data.k - 1
    reduced = data.prefix(data.k - 1)
    if not is_cm(reduced, prefix):
        raise PrefixNotCM("prefix %r is not CM on the reduced ray set" % (prefix,))
    w = data.rays[-1]
    direction = 0  # -1 down, +1 up
    z = probe
    for _ in range(max_steps):
        verdict = is_cm(data, prefix + (z,))
        if verdict.cm:
            break
        m = verdict.witness
        val = m[0] * w[0] + m[1] * w[1] + m[2] * w[2]
        if val < z:
            # witness keeps its signature for every z' > val: go down
            if direction == 1:
                return None
            direction = -1
            z = val
        else:
            if direction == -1:
                return None
            direction = 1
            z = val + 1
    else:
        raise CheckFailure("cm_interval jump cap (%d) exceeded" % max_steps)
    lo = hi = z
    for _ in range(max_steps):
        if is_cm(data, prefix + (hi + 1,)).cm:
            hi += 1
        else:
            break
    else:
        raise CheckFailure("cm_interval extension cap exceeded")
    for _ in range(max_steps):
        if is_cm(data, prefix + (lo - 1,)).cm:
            lo -= 1
        else:
            break
    else:
        raise CheckFailure("cm_interval extension cap exceeded")
    return (lo, hi)


@lru_cache(maxsize=None)
def enumerate_cm(data: ToricData) -> tuple[BVec, ...]:
    """All normalized Cohen-Macaulay classes, sorted lexicographically.

    Base case on the first three rays: exactly d = |det[v1 v2 v3]| classes,
    found by scanning growing boxes [-r, r]^3 (r <= d asserted; every coset of
    the index-d image lattice has a representative well inside that range).
    Each further ray is added via cm_interval around probe 0.
    """
    k = data.k
    base = data.prefix(3)
    d = abs(_det3(base.rays))
    found: set[BVec] = set()
    r = 0
    while True:
        for x in range(-r, r + 1):
            for y in range(-r, r + 1):
                for z in range(-r, r + 1):
                    found.add(normalize(base, (x, y, z))[0])
        if len(found) >= d:
            break
        r += 1
        assert r <= d, "base-case scan exceeded the index bound"
    assert len(found) == d, "more classes than the lattice index"
    classes = sorted(found)
    for j in range(3, k):
        bigger = data.prefix(j + 1)
        nxt: set[BVec] = set()
        for b in classes:
            iv = cm_interval(bigger, b, 0)
            if iv is None:
                continue
            lo, hi = iv
            for z in range(lo, hi + 1):
                nxt.add(normalize(bigger, b + (z,))[0])
        classes = sorted(nxt)
    out = tuple(classes)
    assert tuple([0] * k) in out, "the free module class is always present"
    return out
