"""Command-line surface: one subcommand per pipeline stage.

All numeric output is exact — rationals are printed as "p/q" strings — so
repeated runs produce byte-identical files.  Exit codes: 0 success, 1 a
verification check failed (first failing check named on stderr), 2 invalid
input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .cm import enumerate_cm, is_cm
from .dimer import (
    Infeasible,
    NotReflexive,
    TiedHeights,
    census_rows,
    class_dimers,
    find_rcharge,
    perfect_matchings,
    polygon_type,
    render_svg,
    type_sequence,
)
from .lattice import (
    CheckFailure,
    InputError,
    ToricData,
    frac_str,
    quotient_cone,
    validate_toric_data,
)
from .modmax import enumerate_mm
from .mutation import mutate, mutation_graph, write_dot
from .quiver import nccr_classes, nccr_quivers
from .verify import first_failure, run_checks


def _load_polygon(path: str) -> ToricData:
    try:
        with open(path) as f:
            raw = json.load(f)
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise InputError("%s is not valid JSON: %s" % (path, exc))
    if not isinstance(raw, dict) or "points" not in raw:
        raise InputError('%s must be a JSON object with a "points" key'
                         % path)
    return validate_toric_data([tuple(p) for p in raw["points"]])


def _emit(doc, json_path: Optional[str]) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if json_path:
        Path(json_path).write_text(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str, expect: Optional[int] = None) -> tuple[int, ...]:
    try:
        vals = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise InputError("expected comma-separated integers, got %r" % text)
    if expect is not None and len(vals) != expect:
        raise InputError("expected %d integers, got %d" % (expect, len(vals)))
    return vals


def _fr(vec) -> list[str]:
    return [frac_str(x) for x in vec]


def _quiver_json(q) -> dict:
    return {
        "vertices": [
            {"b": list(b), "kappa": _fr(q.points[i])}
            for i, b in enumerate(q.vertices)
        ],
        "arrows": [
            {"tail": a.tail, "head": a.head, "slack": list(a.slack),
             "m": list(a.monomial), "lift": _fr(a.lift)}
            for a in q.arrows
        ],
    }


def _listing(data: ToricData, mod_opposite: bool):
    """Rows of the resolution listing: (class ids, star or None, model)."""
    models = class_dimers(data)
    if mod_opposite:
        return [(row.classes, row.star, models[row.classes[0]])
                for row in census_rows(data)]
    raw, _ = nccr_classes(data)
    return [((ci,), None, models[ci]) for ci in range(len(raw))]


def _row_label(data: ToricData, classes, star) -> str:
    model = class_dimers(data)[classes[0]]
    label = None
    try:
        label = polygon_type(type_sequence(model))
    except (NotReflexive, TiedHeights):
        pass
    if label is None:
        label = "c" + "+".join(str(c) for c in classes)
    return label + ("*" if star else "")


# ---------------------------------------------------------------------------
# subcommand handlers; each returns the process exit status


def _cmd_cm_list(data: ToricData, args, stem: str) -> int:
    if args.witness is not None:
        b = _int_list(args.witness, data.k)
        verdict = is_cm(data, b)
        _emit({
            "b": list(b),
            "cm": verdict.cm,
            "witness": list(verdict.witness) if verdict.witness else None,
            "signature": verdict.signature,
        }, args.json)
        return 0
    _emit({"classes": [list(b) for b in enumerate_cm(data)]}, args.json)
    return 0


def _cmd_mm_sets(data: ToricData, args, stem: str) -> int:
    sets = enumerate_mm(data)
    _emit({
        "size": len(sets[0]) if sets else 0,
        "sets": [[list(b) for b in s] for s in sets],
    }, args.json)
    return 0


def _cmd_nccrs(data: ToricData, args, stem: str) -> int:
    raw, _ = nccr_classes(data)
    quivers = nccr_quivers(data)
    rows = []
    for classes, star, _model in _listing(data, args.mod_opposite):
        entry = {
            "classes": list(classes),
            "sets": sorted(i for c in classes for i in raw[c]),
            "representative": _quiver_json(quivers[raw[classes[0]][0]]),
        }
        if star is not None:
            entry["asterisk"] = star
        rows.append(entry)
    _emit({
        "count_raw": len(raw),
        "count_mod_opposite": len(census_rows(data)),
        "classes": rows,
    }, args.json)
    return 0


def _cmd_dimers(data: ToricData, args, stem: str) -> int:
    xvec = _int_list(args.x, 3) if args.x is not None else None
    rows = []
    svg_dir = Path(args.svg) if args.svg else None
    if svg_dir:
        svg_dir.mkdir(parents=True, exist_ok=True)
    for i, (classes, star, model) in enumerate(
            _listing(data, args.mod_opposite)):
        entry = {
            "classes": list(classes),
            "vertices": _quiver_json(model.quiver)["vertices"],
            "arrows": _quiver_json(model.quiver)["arrows"],
            "faces": {
                "pos": [list(c) for c in model.faces_pos],
                "neg": [list(c) for c in model.faces_neg],
            },
            "matchings": [
                {"arrows": list(m.arrows), "nvec": list(m.nvec)}
                for m in perfect_matchings(model)
            ],
        }
        if star is not None:
            entry["asterisk"] = star
        if xvec is not None:
            charge = find_rcharge(model, xvec)
            entry["rcharge"] = {"x": _fr(charge.x),
                                "values": _fr(charge.values)}
        else:
            try:
                charge = find_rcharge(model)
                entry["rcharge"] = {"x": _fr(charge.x),
                                    "values": _fr(charge.values)}
            except Infeasible as exc:
                entry["rcharge"] = None
                entry["rcharge_note"] = str(exc)
        try:
            seq = type_sequence(model)
            entry["type"] = {"sequence": list(seq),
                             "label": polygon_type(seq)}
        except (NotReflexive, TiedHeights) as exc:
            entry["type"] = None
            entry["type_note"] = str(exc)
        if svg_dir:
            svg_path = svg_dir / ("%s-nccr%d.svg" % (stem, i))
            svg_path.write_text(render_svg(model))
            entry["svg"] = str(svg_path)
        rows.append(entry)
    _emit({"count": len(rows), "dimers": rows}, args.json)
    return 0


def _cmd_mutate(data: ToricData, args, stem: str) -> int:
    rows = _listing(data, args.mod_opposite)
    raw, _ = nccr_classes(data)
    quivers = nccr_quivers(data)
    sets = enumerate_mm(data)
    if not 0 <= args.nccr < len(rows):
        raise InputError(
            "--nccr %d out of range for %d classes" % (args.nccr, len(rows)))
    classes, _star, _model = rows[args.nccr]
    qi = raw[classes[0]][0]
    q = quivers[qi]
    result = mutate(sets[qi], q, args.vertex)
    ti = sets.index(result)
    tclass = next(ci for ci, cls in enumerate(raw) if ti in cls)
    trow = next(ri for ri, (cs, _s, _m) in enumerate(rows) if tclass in cs)
    _emit({
        "nccr": args.nccr,
        "vertex": args.vertex,
        "set": [list(b) for b in sets[qi]],
        "mutated_set": [list(b) for b in result],
        "mutated_class": tclass,
        "mutated_nccr": trow,
    }, args.json)
    return 0


def _cmd_mutation_graph(data: ToricData, args, stem: str) -> int:
    graph = mutation_graph(data, mod_opposite=args.mod_opposite)
    if args.mod_opposite:
        _raw, mod = nccr_classes(data)
        raw_to = {}
        for ni, (members, _star) in enumerate(mod):
            for qi in members:
                for ci, cls in enumerate(_raw):
                    if qi in cls:
                        raw_to.setdefault(ni, set()).add(ci)
        groups = [(tuple(sorted(raw_to[n])), mod[n][1]) for n in graph.nodes]
    else:
        groups = [((n,), None) for n in graph.nodes]
    labels = [_row_label(data, classes, star) for classes, star in groups]
    doc = {
        "nodes": [
            {"classes": list(classes), "label": labels[n]}
            for n, (classes, _star) in enumerate(groups)
        ],
        "edges": [list(e) for e in graph.edges],
        "reachable": list(graph.reachable),
        "connected": graph.connected,
    }
    _emit(doc, args.json)
    if args.dot:
        Path(args.dot).write_text(write_dot(graph, labels))
    return 0


def _cmd_verify(data: ToricData, args, stem: str) -> int:
    report = run_checks(data, samples=1000, seed=args.seed,
                        max_steps=args.max_steps)
    _emit(report, args.json)
    if not report["passed"]:
        sys.stderr.write("check failed: %s\n" % first_failure(report))
        return 1
    return 0


_COMMANDS = {
    "cm-list": _cmd_cm_list,
    "mm-sets": _cmd_mm_sets,
    "nccrs": _cmd_nccrs,
    "dimers": _cmd_dimers,
    "mutate": _cmd_mutate,
    "mutation-graph": _cmd_mutation_graph,
    "verify": _cmd_verify,
}


def _cmd_quotient(data: ToricData, args, stem: str) -> int:
    m = _int_list(args.matrix, 9)
    U = (m[0:3], m[3:6], m[6:9])
    derived = quotient_cone(U, data)
    if args.run is None:
        _emit({"points": [list(p) for p in derived.points]}, args.json)
        return 0
    return _COMMANDS[args.run](derived, args, stem)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="polygon JSON file")
    common.add_argument("--mod-opposite", action=argparse.BooleanOptionalAction,
                        default=True,
                        help="merge each class with its opposite (default on)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized re-checks")
    common.add_argument("--max-steps", type=int, default=0,
                        help="cap on witness-jump walks (0 = default)")
    common.add_argument("--x", default=None, metavar="a,b,c",
                        help="integer covector for charge assignment")
    common.add_argument("--json", default=None, metavar="FILE",
                        help="write the JSON report here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="toricnccr",
        description="toric crepant resolutions by dimer models")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cm-list", parents=[common],
                       help="normalized Cohen-Macaulay classes")
    p.add_argument("--witness", default=None, metavar="b1,...,bk",
                   help="report the CM verdict for one vector")
    sub.add_parser("mm-sets", parents=[common],
                   help="maximal modifying sets")
    sub.add_parser("nccrs", parents=[common],
                   help="resolution classes with their quivers")
    p = sub.add_parser("dimers", parents=[common],
                       help="dimer models with matchings and charges")
    p.add_argument("--svg", default=None, metavar="DIR",
                   help="write one SVG drawing per dimer here")
    p = sub.add_parser("mutate", parents=[common],
                       help="mutate one resolution at one vertex")
    p.add_argument("--nccr", type=int, required=True,
                   help="class index in the nccrs listing")
    p.add_argument("--vertex", type=int, required=True,
                   help="vertex index in the representative quiver")
    p = sub.add_parser("mutation-graph", parents=[common],
                       help="classes connected by mutations")
    p.add_argument("--dot", default=None, metavar="FILE",
                   help="write a DOT graph here")
    sub.add_parser("verify", parents=[common],
                   help="run every invariant suite")
    p = sub.add_parser("quotient", parents=[common],
                       help="rewrite the polygon by an index map, then run")
    p.add_argument("--matrix", required=True, metavar="a,b,c,d,e,f,g,h,i",
                   help="3x3 integer matrix, rows first, third row 0,0,1")
    p.add_argument("--run", default=None, choices=sorted(_COMMANDS),
                   help="command to run on the derived polygon")
    p.add_argument("--witness", default=None, metavar="b1,...,bk",
                   help="forwarded to cm-list")
    p.add_argument("--svg", default=None, metavar="DIR",
                   help="forwarded to dimers")
    p.add_argument("--dot", default=None, metavar="FILE",
                   help="forwarded to mutation-graph")
    p.add_argument("--nccr", type=int, default=None,
                   help="forwarded to mutate")
    p.add_argument("--vertex", type=int, default=None,
                   help="forwarded to mutate")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        data = _load_polygon(args.input)
        stem = Path(args.input).stem
        if args.command == "quotient":
            if args.run == "mutate" and (args.nccr is None
                                         or args.vertex is None):
                raise InputError("--run mutate needs --nccr and --vertex")
            return _cmd_quotient(data, args, stem)
        return _COMMANDS[args.command](data, args, stem)
    except InputError as exc:
        sys.stderr.write("input error: %s\n" % exc)
        return 2
    except CheckFailure as exc:
        sys.stderr.write("check failed: %s: %s\n" % (type(exc).__name__, exc))
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
