"""Maximal modifying sets of CM classes (Step 2).

Two classes are compatible when both normalized differences are again CM; a
maximal modifying set is a maximum clique through the zero class in that
compatibility graph.  The production enumerator is branch-and-bound clique
search; `enumerate_mm_by_generations` grows sets one index at a time and is
kept as an independent cross-check.
"""

from __future__ import annotations

from functools import lru_cache

from .cm import enumerate_cm
from .lattice import BVec, ToricData, normalize, vec_sub

ModifyingSet = tuple[BVec, ...]


@lru_cache(maxsize=None)
def compatibility_graph(data: ToricData) -> tuple[frozenset[int], ...]:
    """Adjacency over enumerate_cm(data) indices: edge iff both normalized
    differences are CM."""
    classes = enumerate_cm(data)
    cmset = set(classes)
    n = len(classes)
    adj: list[set[int]] = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if normalize(data, vec_sub(classes[i], classes[j]))[0] not in cmset:
                continue
            if normalize(data, vec_sub(classes[j], classes[i]))[0] not in cmset:
                continue
            adj[i].add(j)
            adj[j].add(i)
    return tuple(frozenset(s) for s in adj)


def _max_cliques(adj: tuple[frozenset[int], ...], verts: frozenset[int]):
    """All maximum-cardinality cliques of the induced subgraph on verts."""
    best: list[frozenset[int]] = []
    best_size = -1

    def grow(r: frozenset[int], p: frozenset[int], x: frozenset[int]) -> None:
        nonlocal best, best_size
        if not p and not x:
            if len(r) > best_size:
                best = [r]
                best_size = len(r)
            elif len(r) == best_size:
                best.append(r)
            return
        if len(r) + len(p) < best_size:
            return  # bound: cannot reach the current best size
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            grow(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    grow(frozenset(), verts, frozenset())
    return best


@lru_cache(maxsize=None)
def enumerate_mm(data: ToricData) -> tuple[ModifyingSet, ...]:
    """All maximal modifying sets, each sorted; the tuple itself sorted.

    Every modifying set contains the zero class and the zero class is
    adjacent to every member, so the answer is {0} joined with each
    maximum clique of the subgraph induced on the neighbours of 0.
    """
    classes = enumerate_cm(data)
    adj = compatibility_graph(data)
    z = classes.index((0,) * data.k)
    sets = []
    for clique in _max_cliques(adj, adj[z]):
        members = tuple(sorted(classes[i] for i in clique | {z}))
        sets.append(members)
    out = tuple(sorted(sets))
    sizes = {len(s) for s in out}
    assert len(sizes) == 1, "maximal modifying sets of unequal size"
    return out


def enumerate_mm_by_generations(data: ToricData) -> tuple[ModifyingSet, ...]:
    """Cross-check enumerator: grow (set, candidate pool) pairs one
    generation at a time, extending only by indices above the current
    maximum so every clique is built exactly once.

    Indexing puts the zero class first, then the rest lexicographically.
    """
    classes = enumerate_cm(data)
    zero = (0,) * data.k
    order = [zero] + sorted(c for c in classes if c != zero)
    pos = {c: i for i, c in enumerate(classes)}
    adj = compatibility_graph(data)

    def compatible(i: int, j: int) -> bool:
        return pos[order[j]] in adj[pos[order[i]]]

    n = len(order)
    gen = [((0,), tuple(j for j in range(1, n) if compatible(0, j)))]
    final = [s for s, t in gen]
    while True:
        nxt = []
        for s, t in gen:
            top = s[-1]
            for j in t:
                if j <= top:
                    continue
                t2 = tuple(c for c in t if c != j and compatible(j, c))
                nxt.append((s + (j,), t2))
        if not nxt:
            break
        gen = nxt
        final = [s for s, _ in gen]
    sets = [tuple(sorted(order[i] for i in s)) for s in final]
    return tuple(sorted(sets))
