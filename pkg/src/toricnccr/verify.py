"""Re-run every invariant suite on one input and report the results.

Each check re-derives its claim from scratch (independent oracles where they
exist) and reports pass/fail with a short detail line; the report is plain
data so the command line can print it as JSON.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Optional

from .cm import cm_interval, enumerate_cm, is_cm, is_cm_by_cells
from .dimer import (
    Infeasible,
    _assert_charge_identities,
    _charge_values,
    _check_dimer_axioms,
    class_dimers,
    extremal_matchings,
    find_rcharge,
    perfect_matchings,
    recovered_polygon,
)
from .lattice import (
    InputError,
    ToricData,
    ToricError,
    kappa,
    normalize,
    phi_t,
    validate_toric_data,
    vec_add,
)
from .modmax import enumerate_mm
from .mutation import mutation_graph, parallelogram_sides, parallelogram_structure
from .quiver import nccr_quivers


def _check_cm_oracle(data: ToricData, rng: random.Random, samples: int,
                     max_steps: int) -> str:
    k = data.k
    for _ in range(samples):
        b = tuple(rng.randint(-5, 5) for _ in range(k))
        w1 = is_cm(data, b)
        w2 = is_cm_by_cells(data, b)
        if (w1.cm, w1.witness, w1.signature) != (w2.cm, w2.witness,
                                                 w2.signature):
            raise AssertionError(
                "oracles disagree at %r: %r vs %r" % (b, w1, w2)
            )
    return "agreement on %d random vectors" % samples


def _check_cm_interval(data: ToricData, rng: random.Random, samples: int,
                       max_steps: int) -> str:
    if data.k <= 3:
        return "skipped: no ray to remove on a triangle"
    try:
        reduced = validate_toric_data(data.points[:-1])
    except ToricError as exc:
        return "skipped: reduced polygon invalid (%s)" % exc
    classes = enumerate_cm(reduced)
    cap = max_steps if max_steps > 0 else 10 ** 6
    trials = max(1, min(20, samples // 50))
    lo, hi = -20, 20
    for _ in range(trials):
        base = classes[rng.randrange(len(classes))]
        m = tuple(rng.randint(-2, 2) for _ in range(3))
        prefix = vec_add(base, phi_t(reduced, m))
        probe = rng.randint(-3, 3)
        got = cm_interval(data, prefix, probe, max_steps=cap)
        want = [z for z in range(lo, hi + 1)
                if is_cm(data, prefix + (z,)).cm]
        if want and want != list(range(want[0], want[-1] + 1)):
            raise AssertionError(
                "CM insertions at %r are not contiguous: %r" % (prefix, want)
            )
        if got is None:
            if want:
                raise AssertionError(
                    "interval at %r reported empty, scan found %r"
                    % (prefix, want)
                )
        else:
            clip = [z for z in range(max(got[0], lo), min(got[1], hi) + 1)]
            if clip != want:
                raise AssertionError(
                    "interval %r at %r disagrees with scan %r"
                    % (got, prefix, want)
                )
    return "%d random prefixes against exhaustive scans" % trials


def _check_mm_maximality(data: ToricData, rng: random.Random, samples: int,
                         max_steps: int) -> str:
    classes = enumerate_cm(data)
    sets = enumerate_mm(data)
    zero = (0,) * data.k
    for S in sets:
        if zero not in S:
            raise AssertionError("set %r misses the zero class" % (S,))
        for b in S:
            for c in S:
                if b == c:
                    continue
                diff = normalize(data, tuple(x - y for x, y in zip(b, c)))[0]
                if not is_cm(data, diff).cm:
                    raise AssertionError(
                        "difference %r - %r in %r is not CM" % (b, c, S)
                    )
        members = set(S)
        for z in classes:
            if z in members:
                continue
            ok = True
            for b in S:
                d1 = normalize(data, tuple(x - y for x, y in zip(z, b)))[0]
                d2 = normalize(data, tuple(y - x for x, y in zip(z, b)))[0]
                if not (is_cm(data, d1).cm and is_cm(data, d2).cm):
                    ok = False
                    break
            if ok:
                raise AssertionError(
                    "set %r is not maximal: %r extends it" % (S, z)
                )
    return "%d sets re-checked for closure and maximality" % len(sets)


def _check_arrows(data: ToricData, rng: random.Random, samples: int,
                  max_steps: int) -> str:
    quivers = nccr_quivers(data)
    k = data.k
    narrows = 0
    for q in quivers:
        for a in q.arrows:
            tail_b = q.vertices[a.tail]
            head_b = q.vertices[a.head]
            if normalize(data, tuple(x - s for x, s in
                                     zip(tail_b, a.slack)))[0] != head_b:
                raise AssertionError("arrow head is not normalize(tail-slack)")
            lhs = phi_t(data, a.monomial)
            for i in range(k):
                if lhs[i] != head_b[i] - tail_b[i] + a.slack[i]:
                    raise AssertionError("arrow monomial fails hom identity")
                if lhs[i] < head_b[i] - tail_b[i]:
                    raise AssertionError("arrow monomial not a valid hom")
            kt, kh = kappa(data, tail_b), kappa(data, head_b)
            for c in range(3):
                if a.lift[c] != kh[c] - kt[c] - a.monomial[c]:
                    raise AssertionError("arrow lift mismatch")
            if not 1 <= sum(a.slack) <= k - 2:
                raise AssertionError("arrow slack weight out of bounds")
        for v in range(len(q.vertices)):
            if q.in_degree(v) != q.out_degree(v):
                raise AssertionError("vertex %d in/out degrees differ" % v)
        narrows += len(q.arrows)
    return "%d arrows over %d quivers" % (narrows, len(quivers))


def _check_dimers(data: ToricData, rng: random.Random, samples: int,
                  max_steps: int) -> str:
    models = class_dimers(data)
    for model in models:
        _check_dimer_axioms(model)
        for cyc in model.faces():
            if len(cyc) < 3:
                raise AssertionError("face of length %d" % len(cyc))
    return "axioms re-checked on %d models" % len(models)


def _check_rcharges(data: ToricData, rng: random.Random, samples: int,
                    max_steps: int) -> str:
    models = class_dimers(data)
    notes = []
    for mi, model in enumerate(models):
        tried = 0
        attempts = 0
        while tried < 3 and attempts < 200:
            attempts += 1
            x = (Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4)),
                 Fraction(rng.randint(1, 5)))
            if any(x[0] * r[0] + x[1] * r[1] + x[2] * r[2] <= 0
                   for r in data.rays):
                continue
            _assert_charge_identities(model, _charge_values(model, x))
            tried += 1
        _assert_charge_identities(model,
                                  _charge_values(model, (Fraction(0),
                                                         Fraction(0),
                                                         Fraction(1))))
        try:
            find_rcharge(model)
        except Infeasible:
            notes.append("model %d: no positive linear charge" % mi)
    base = "identities on %d models, 4 covectors each" % len(models)
    if notes:
        return base + "; flagged: " + "; ".join(notes)
    return base


def _check_recovery(data: ToricData, rng: random.Random, samples: int,
                    max_steps: int) -> str:
    models = class_dimers(data)
    for model in models:
        got = recovered_polygon(model)
        if tuple(sorted(got)) != tuple(sorted(data.rays)):
            raise AssertionError(
                "recovered polygon %r differs from rays" % (got,)
            )
    return "input rays recovered from %d models" % len(models)


def _check_matchings(data: ToricData, rng: random.Random, samples: int,
                     max_steps: int) -> str:
    k = data.k
    total = 0
    for model in class_dimers(data):
        matchings = perfect_matchings(model)
        ext = extremal_matchings(model)
        ext_idx = sorted({i for _ray, idx in ext for i in idx})
        counts = [0] * len(model.quiver.arrows)
        for i in ext_idx:
            for a in matchings[i].arrows:
                counts[a] += 1
        for a, n in enumerate(counts):
            if not 1 <= n <= k - 2:
                raise AssertionError(
                    "arrow %d lies in %d extremal matchings" % (a, n)
                )
        for ri, (_ray, idx) in enumerate(ext):
            col = tuple(sorted(
                ai for ai, arr in enumerate(model.quiver.arrows)
                if arr.slack[ri]
            ))
            if not any(tuple(sorted(matchings[i].arrows)) == col
                       for i in idx):
                raise AssertionError(
                    "slack column %d is not an extremal matching" % ri
                )
        total += len(matchings)
    return "%d matchings, membership bounds and slack columns" % total


def _check_mutation(data: ToricData, rng: random.Random, samples: int,
                    max_steps: int) -> str:
    graph = mutation_graph(data, mod_opposite=True)
    return "closed over %d edges; %d nodes, connected=%s" % (
        len(graph.edges), len(graph.nodes), graph.connected)


def _check_parallelogram(data: ToricData, rng: random.Random, samples: int,
                         max_steps: int) -> str:
    if parallelogram_sides(data) is None:
        return "skipped: polygon is not a parallelogram"
    squares = None
    models = class_dimers(data)
    for model in models:
        squares, _hom = parallelogram_structure(model)
    return "%d models tile %s squares, zero diagonal homology" % (
        len(models), squares)


_CHECKS: tuple[tuple[str, Callable], ...] = (
    ("cm_oracle_agreement", _check_cm_oracle),
    ("cm_interval_contiguity", _check_cm_interval),
    ("mm_maximality", _check_mm_maximality),
    ("arrow_invariants", _check_arrows),
    ("dimer_axioms", _check_dimers),
    ("rcharge_identities", _check_rcharges),
    ("polygon_recovery", _check_recovery),
    ("matching_bounds", _check_matchings),
    ("mutation_closure", _check_mutation),
    ("parallelogram_structure", _check_parallelogram),
)


def run_checks(data: ToricData, samples: int = 1000, seed: int = 0,
               max_steps: int = 0,
               names: Optional[list[str]] = None) -> dict:
    """Run the invariant suites; report one pass/fail entry per check."""
    report = {"polygon": [list(p) for p in data.points], "checks": [],
              "passed": True}
    for name, fn in _CHECKS:
        if names is not None and name not in names:
            continue
        rng = random.Random("%d:%s" % (seed, name))
        try:
            detail = fn(data, rng, samples, max_steps)
            report["checks"].append(
                {"name": name, "status": "pass", "detail": detail})
        except (ToricError, AssertionError) as exc:
            report["passed"] = False
            report["checks"].append(
                {"name": name, "status": "fail",
                 "detail": "%s: %s" % (type(exc).__name__, exc)})
    return report


def first_failure(report: dict) -> Optional[str]:
    for entry in report["checks"]:
        if entry["status"] != "pass":
            return entry["name"]
    return None
