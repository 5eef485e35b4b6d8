"""Toric mutation of resolutions and the mutation graph.

Mutation replaces one module class of a maximal modifying set by the overlap
of the two incoming neighbour modules.  The same move can be carried out
combinatorially on the dimer model by reversing the four arrows at the
vertex, shortcutting the through-paths, and cancelling length-2 faces; both
procedures are run and cross-checked against each other.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .dimer import (
    DimerModel,
    _dart_profile,
    _rotation_system,
    _try_dart_map,
    extract_dimer,
)
from .lattice import (
    InputError,
    InternalCheckError,
    ToricData,
    normalize,
    phi_t,
    vec_add,
)
from .modmax import ModifyingSet, enumerate_mm
from .quiver import EmbeddedQuiver, build_quiver, nccr_classes, nccr_quivers


class MutatedZeroVertex(InputError):
    """Mutation at the zero module class is not defined."""


class BadVertexDegree(InputError):
    """The vertex does not have exactly two arrows in and two out."""


class LoopOrTwoCycle(InputError):
    """The vertex carries a loop, so mutation is not defined there."""


class NotModifying(InternalCheckError):
    """A mutation produced a set outside the maximal modifying list."""


class UnknownClass(InternalCheckError):
    """A mutated set matched no known resolution class."""


@dataclass(frozen=True, slots=True)
class MutationGraph:
    """Classes as nodes, mutations as labelled edges, plus reachability."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    reachable: tuple[bool, ...]
    connected: bool


def _eligible(q: EmbeddedQuiver, v: int) -> tuple[list[int], list[int]]:
    """Incoming and outgoing arrow indices at v, or the matching error."""
    if not 0 <= v < len(q.vertices):
        raise InputError(
            "vertex %d out of range for %d vertices" % (v, len(q.vertices))
        )
    if q.vertices[v] == (0,) * q.data.k:
        raise MutatedZeroVertex("cannot mutate at the zero module class")
    if any(a.tail == v and a.head == v for a in q.arrows):
        raise LoopOrTwoCycle("vertex %d carries a loop" % v)
    ins = [i for i, a in enumerate(q.arrows) if a.head == v]
    outs = [i for i, a in enumerate(q.arrows) if a.tail == v]
    if len(ins) != 2 or len(outs) != 2:
        raise BadVertexDegree(
            "vertex %d has %d arrows in and %d out; mutation needs 2 and 2"
            % (v, len(ins), len(outs))
        )
    return ins, outs


def mutate(S: ModifyingSet, Q: EmbeddedQuiver, v: int) -> ModifyingSet:
    """Replace class v by the overlap of its two incoming neighbour modules.

    Each incoming arrow embeds its tail module into the module at v as the
    twist by the arrow monomial; the kernel of the sum map is the overlap of
    the two images, whose exponent vector is the componentwise maximum.
    """
    data = Q.data
    if tuple(sorted(tuple(b) for b in S)) != Q.vertices:
        raise InputError("modifying set does not match the quiver vertices")
    ins, _ = _eligible(Q, v)
    images = []
    for ai in ins:
        a = Q.arrows[ai]
        images.append(vec_add(Q.vertices[a.tail], phi_t(data, a.monomial)))
    overlap = tuple(max(x, y) for x, y in zip(*images))
    new_b = normalize(data, overlap)[0]
    members = list(Q.vertices)
    members[v] = new_b
    result = tuple(sorted(members))
    if result not in enumerate_mm(data):
        raise NotModifying(
            "mutated set %r is not maximal modifying" % (result,)
        )
    return result


# ---------------------------------------------------------------------------
# combinatorial rewrite of the face data


def _rewrite_faces(model: DimerModel, v: int):
    """The four-step rewrite at v on abstract (tail, head) and face data."""
    q = model.quiver
    ins, outs = _eligible(q, v)
    in_set, out_set = set(ins), set(outs)
    arrows_th: list[tuple[int, int]] = []

    def add(t: int, h: int) -> int:
        arrows_th.append((t, h))
        return len(arrows_th) - 1

    keep = {}
    for i, a in enumerate(q.arrows):
        if i in in_set or i in out_set:
            continue
        keep[i] = add(a.tail, a.head)
    rev = {}
    for i in outs:
        rev[i] = add(q.arrows[i].head, v)
    for j in ins:
        rev[j] = add(v, q.arrows[j].tail)
    shortcut = {}
    for i in outs:
        for j in ins:
            shortcut[(i, j)] = add(q.arrows[j].tail, q.arrows[i].head)

    pos: list[tuple[int, ...]] = []
    neg: list[tuple[int, ...]] = []

    def rewrite(cyc: tuple[int, ...], firsts: set[int], seconds: set[int],
                through):
        m = len(cyc)
        start = next(
            (p for p in range(m) if cyc[p] not in seconds), None
        )
        if start is None:
            raise InternalCheckError("face consists of second legs only")
        rot = [cyc[(start + t) % m] for t in range(m)]
        out_cyc: list[int] = []
        t = 0
        while t < m:
            x = rot[t]
            if x in firsts:
                if t + 1 >= m or rot[t + 1] not in seconds:
                    raise InternalCheckError(
                        "face passes the vertex without leaving it"
                    )
                through(out_cyc, x, rot[t + 1])
                t += 2
            elif x in seconds:
                raise InternalCheckError("unpaired second leg in a face")
            else:
                out_cyc.append(keep[x])
                t += 1
        return tuple(out_cyc)

    for cyc in model.faces_pos:
        # forward cycles pass v as in-arrow then out-arrow

        def through_pos(out_cyc, x, y):
            u = shortcut[(y, x)]
            out_cyc.append(u)
            neg.append((u, rev[x], rev[y]))

        pos.append(rewrite(cyc, in_set, out_set, through_pos))
    for cyc in model.faces_neg:
        # stored backward cycles pass v as out-arrow then in-arrow

        def through_neg(out_cyc, x, y):
            u = shortcut[(x, y)]
            out_cyc.append(u)
            pos.append((u, rev[x], rev[y]))

        neg.append(rewrite(cyc, out_set, in_set, through_neg))
    return arrows_th, pos, neg


def _cancel_digons(arrows_th, pos, neg):
    """Remove length-2 faces, splicing the two faces on their other sides."""
    pos = [list(c) for c in pos]
    neg = [list(c) for c in neg]
    dead: set[int] = set()
    while True:
        spot = None
        for faces in (pos, neg):
            for fi, c in enumerate(faces):
                if len(c) == 2:
                    spot = (faces, fi)
                    break
            if spot:
                break
        if spot is None:
            break
        faces, fi = spot
        other = neg if faces is pos else pos
        p, q = faces.pop(fi)
        if p == q:
            raise InternalCheckError("length-2 face repeats one arrow")
        pi = next(i for i, c in enumerate(other) if p in c)
        qi = next(i for i, c in enumerate(other) if q in c)
        if pi == qi:
            c = other.pop(pi)
            r = c.index(p)
            c = c[r:] + c[:r]
            s = c.index(q)
            other.append(c[1:s] + c[s + 1:])
        else:
            cp, cq = other[pi], other[qi]
            for i in sorted((pi, qi), reverse=True):
                other.pop(i)
            rp = cp.index(p)
            rq = cq.index(q)
            other.append(
                cp[rp + 1:] + cp[:rp] + cq[rq + 1:] + cq[:rq]
            )
        dead.add(p)
        dead.add(q)
    remap = {}
    alive: list[tuple[int, int]] = []
    for i, th in enumerate(arrows_th):
        if i not in dead:
            remap[i] = len(alive)
            alive.append(th)
    pos_t = tuple(tuple(remap[a] for a in c) for c in pos)
    neg_t = tuple(tuple(remap[a] for a in c) for c in neg)
    return alive, pos_t, neg_t


def _validate_abstract(nv: int, arrows_th, pos, neg) -> None:
    """Dimer axioms on abstract face data: coverage, chaining, Euler."""
    n = len(arrows_th)
    for faces, label in ((pos, "forward"), (neg, "backward")):
        seen = [0] * n
        for c in faces:
            if len(c) < 3:
                raise InternalCheckError("short %s face %r" % (label, c))
            for a in c:
                seen[a] += 1
        if seen != [1] * n:
            raise InternalCheckError(
                "arrows not covered once per %s face" % label
            )
    for c in pos:
        for i, a in enumerate(c):
            b = c[(i + 1) % len(c)]
            if arrows_th[a][1] != arrows_th[b][0]:
                raise InternalCheckError("forward face does not chain")
    for c in neg:
        for i, a in enumerate(c):
            b = c[(i + 1) % len(c)]
            if arrows_th[a][0] != arrows_th[b][1]:
                raise InternalCheckError("backward face does not chain")
    if nv - n + len(pos) + len(neg) != 0:
        raise InternalCheckError("rewritten faces are not cellular")


def _abstract_struct(arrows_th, pos, neg):
    nd = 2 * len(arrows_th)
    fwd = [d % 2 == 0 for d in range(nd)]
    vertex_of = [
        arrows_th[d >> 1][0] if d % 2 == 0 else arrows_th[d >> 1][1]
        for d in range(nd)
    ]
    phi = [-1] * nd
    for cyc in pos:
        for i, a in enumerate(cyc):
            phi[2 * a] = 2 * cyc[(i + 1) % len(cyc)]
    for cyc in neg:
        for i, a in enumerate(cyc):
            phi[2 * a + 1] = 2 * cyc[(i + 1) % len(cyc)] + 1
    if -1 in phi:
        raise InternalCheckError("incomplete face data")
    rho = [phi[d ^ 1] for d in range(nd)]
    return phi, rho, vertex_of, fwd


def _abstract_isomorphic(a1, p1, n1, a2, p2, n2) -> bool:
    """Direction-preserving map isomorphism on abstract face data."""
    if len(a1) != len(a2):
        return False
    if (sorted(len(c) for c in p1) != sorted(len(c) for c in p2)
            or sorted(len(c) for c in n1) != sorted(len(c) for c in n2)):
        return False
    s1 = _abstract_struct(a1, p1, n1)
    s2 = _abstract_struct(a2, p2, n2)
    nd = 2 * len(a1)
    if nd == 0:
        return True
    d0 = 0
    prof = _dart_profile(s1, d0)
    for cand in range(nd):
        if _dart_profile(s2, cand) != prof:
            continue
        if _try_dart_map(s1, s2, nd, d0, cand):
            return True
    return False


def mutate_dimer(model: DimerModel, v: int) -> DimerModel:
    """Mutate at v; rebuild from modules and cross-check the face rewrite.

    The returned model is extracted from the rebuilt quiver (consistent
    embedding data); the rewritten face structure must agree with it as a
    combinatorial map, though the new vertex need not sit at the same spot.
    """
    q = model.quiver
    mutated = mutate(q.vertices, q, v)
    rebuilt = build_quiver(q.data, mutated)
    produced = extract_dimer(rebuilt)
    arrows_th, pos, neg = _rewrite_faces(model, v)
    arrows_th, pos, neg = _cancel_digons(arrows_th, pos, neg)
    _validate_abstract(len(q.vertices), arrows_th, pos, neg)
    if not _abstract_isomorphic(
        arrows_th,
        pos,
        neg,
        [(a.tail, a.head) for a in rebuilt.arrows],
        produced.faces_pos,
        produced.faces_neg,
    ):
        raise InternalCheckError(
            "face rewrite disagrees with the module mutation at vertex %d" % v
        )
    return produced


# ---------------------------------------------------------------------------
# the mutation graph


def mutation_graph(data: ToricData, mod_opposite: bool = True) -> MutationGraph:
    """Mutate every modifying set at every eligible vertex; report edges.

    Nodes are resolution classes (merged with opposites by default).  Every
    member set of a class is explored, so mutations at shifted copies of the
    zero class are covered through the shifted sets.  The mutated set is
    located by exact membership in the enumerated list.
    """
    raw, mod = nccr_classes(data)
    quivers = nccr_quivers(data)
    sets = enumerate_mm(data)
    set_to_set_index = {s: i for i, s in enumerate(sets)}
    set_index_to_class = [0] * len(sets)
    for ci, members in enumerate(raw):
        for qi in members:
            set_index_to_class[qi] = ci
    if mod_opposite:
        node_of_class = [0] * len(raw)
        node_count = len(mod)
        for ni, (members, _star) in enumerate(mod):
            for qi in members:
                node_of_class[set_index_to_class[qi]] = ni
    else:
        node_of_class = list(range(len(raw)))
        node_count = len(raw)
    edges: set[tuple[int, int, int]] = set()
    for qi, q in enumerate(quivers):
        src = node_of_class[set_index_to_class[qi]]
        for v in range(len(q.vertices)):
            try:
                result = mutate(sets[qi], q, v)
            except (MutatedZeroVertex, BadVertexDegree, LoopOrTwoCycle):
                continue
            ti = set_to_set_index.get(result)
            if ti is None:
                raise UnknownClass(
                    "mutation at vertex %d of set %d left the enumerated"
                    " list" % (v, qi)
                )
            edges.add((src, v, node_of_class[set_index_to_class[ti]]))
    adjacency: dict[int, set[int]] = {n: set() for n in range(node_count)}
    for a, _v, b in edges:
        adjacency[a].add(b)
        adjacency[b].add(a)
    reachable = [False] * node_count
    if node_count:
        reachable[0] = True
        frontier = deque([0])
        while frontier:
            x = frontier.popleft()
            for y in adjacency[x]:
                if not reachable[y]:
                    reachable[y] = True
                    frontier.append(y)
    return MutationGraph(
        tuple(range(node_count)),
        tuple(sorted(edges)),
        tuple(reachable),
        all(reachable),
    )


# ---------------------------------------------------------------------------
# structure of parallelogram-polygon dimers


def parallelogram_sides(data: ToricData):
    """The two side vectors (a,b), (c,d) if the polygon is a parallelogram."""
    if data.k != 4:
        return None
    p = data.points
    s = [(p[(i + 1) % 4][0] - p[i][0], p[(i + 1) % 4][1] - p[i][1])
         for i in range(4)]
    if s[0] != (-s[2][0], -s[2][1]) or s[1] != (-s[3][0], -s[3][1]):
        return None
    return s[0], s[1]


def parallelogram_structure(model: DimerModel):
    """Square count and signed diagonal homology of a parallelogram dimer.

    Straight arrows (one nonzero slack entry) must tile the torus into
    2·|det| squares with two arrows in and two out at every vertex; diagonal
    arrows (two cyclically consecutive nonzero slack entries) fall in at
    most two parallel families whose signed displacement sum vanishes.
    Returns (square count, homology 2-vector).
    """
    data = model.data
    sides = parallelogram_sides(data)
    if sides is None:
        raise InputError("polygon is not a parallelogram")
    (a, b), (c, d) = sides
    det = abs(a * d - b * c)
    q = model.quiver
    k = data.k
    straight = []
    diagonal = []
    for i, arrow in enumerate(q.arrows):
        nz = [j for j, s in enumerate(arrow.slack) if s]
        if len(nz) == 1:
            straight.append(i)
        elif len(nz) == 2 and (nz[1] - nz[0] == 1 or
                               (nz[0] == 0 and nz[1] == k - 1)):
            diagonal.append(i)
        else:
            raise InternalCheckError(
                "arrow %d is neither straight nor diagonal" % i
            )
    nv = len(q.vertices)
    if nv != 2 * det or len(straight) != 2 * nv:
        raise InternalCheckError(
            "straight arrows do not match a %d-square grid" % (2 * det)
        )
    sset = set(straight)
    for v in range(nv):
        deg = sum((q.arrows[i].head == v) + (q.arrows[i].tail == v)
                  for i in straight)
        if deg != 4:
            raise InternalCheckError(
                "vertex %d meets %d straight arrow ends, not 4" % (v, deg)
            )
    # trace the faces of the straight-arrow sub-drawing; all must be squares
    rot = _rotation_system(q)
    darts = [d for d in range(2 * len(q.arrows)) if (d >> 1) in sset]
    dset = set(darts)
    rrot: dict[int, int] = {}
    for d in darts:
        nxt = rot[d]
        while nxt not in dset:
            nxt = rot[nxt]
        rrot[d] = nxt
    rrot_prev = {nxt: d for d, nxt in rrot.items()}
    seen: set[int] = set()
    squares = 0
    for start in darts:
        if start in seen:
            continue
        n, dd = 0, start
        while True:
            seen.add(dd)
            n += 1
            dd = rrot_prev[dd ^ 1]
            if dd == start:
                break
        if n != 4:
            raise InternalCheckError("straight-arrow face of length %d" % n)
        squares += 1
    if squares != 2 * det:
        raise InternalCheckError(
            "straight arrows cut %d faces, not %d" % (squares, 2 * det)
        )
    # diagonal families by unoriented direction
    families: dict[tuple[int, int], list[int]] = {}
    for i in diagonal:
        lift = q.arrows[i].lift
        dx, dy = Fraction(lift[0]), Fraction(lift[1])
        den = dx.denominator * dy.denominator
        ix, iy = int(dx * den), int(dy * den)
        g = gcd(ix, iy)
        ix, iy = ix // g, iy // g
        if ix < 0 or (ix == 0 and iy < 0):
            ix, iy = -ix, -iy
        families.setdefault((ix, iy), []).append(i)
    if len(families) > 2:
        raise InternalCheckError(
            "diagonal directions fall in %d families" % len(families)
        )
    keys = sorted(families)
    hom = [Fraction(0), Fraction(0)]
    for pos_family, key in zip((True, False), keys):
        sign = 1 if pos_family else -1
        for i in families[key]:
            lift = q.arrows[i].lift
            hom[0] += sign * lift[0]
            hom[1] += sign * lift[1]
    if hom[0] != 0 or hom[1] != 0:
        raise InternalCheckError(
            "signed diagonal homology is %s, not zero" % (tuple(hom),)
        )
    return squares, (hom[0], hom[1])


def write_dot(graph: MutationGraph, labels: Sequence[str]) -> str:
    """DOT text with one node per class and one edge per mutation."""
    lines = ["graph mutations {"]
    for n in graph.nodes:
        lines.append('  n%d [label="%s"];' % (n, labels[n]))
    for a, v, b in graph.edges:
        lines.append('  n%d -- n%d [label="v%d"];' % (a, b, v))
    lines.append("}")
    return "\n".join(lines) + "\n"
