"""Command line interface and JSON documents.

Exit codes: 0 success, 1 domain failure, 2 input or parse failure.
Rationals are written as "p/q" strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from xml.sax.saxutils import escape

from .curve import (
    INF,
    AbstractGraph,
    BoundaryPoint,
    Edge,
    GraphPoint,
    MarkedCurve,
    PPTCurve,
    RealMarkedCurve,
    StructuralError,
    InvolutionError,
    check_structure,
    classify,
    validate_marks,
    validate_ppt,
)
from .duality import DualityError, ValuatedPolynomial, tropicalize
from .lattice import LatticePolygon, standard_triangle
from .position import Configuration, check_regular
from .report import ValidationReport

CURVE_SCHEMA = "tropicount/curve@1"
CONFIG_SCHEMA = "tropicount/config@1"
POLY_SCHEMA = "tropicount/polynomial@1"


class DocumentError(ValueError):
    pass


# -- exact values ----------------------------------------------------------------------


def q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def unq(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise DocumentError(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {s!r}") from exc


def _plain(obj):
    """Recursively convert to JSON-ready values (Fractions become "p/q")."""
    if isinstance(obj, Fraction):
        return q(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if obj is INF:
        return "inf"
    return obj


def dumps(doc) -> str:
    return json.dumps(_plain(doc), sort_keys=True, indent=2) + "\n"


# -- curve documents --------------------------------------------------------------


def _mt_out(t):
    return list(t) if isinstance(t, tuple) else t


def _mt_in(t):
    return tuple(t) if isinstance(t, list) else t


def curve_to_doc(obj) -> dict:
    real = obj if isinstance(obj, RealMarkedCurve) else None
    marked = real.base if real else obj if isinstance(obj, MarkedCurve) else None
    c = marked.curve if marked else obj
    g = c.graph
    doc = {
        "schema": CURVE_SCHEMA,
        "vertices": [{"id": v, "position": [q(x) for x in c.positions[v]]} for v in g.vertices],
        "edges": [
            {
                "id": e.id,
                "tail": e.tail,
                "head": None if e.is_end else e.head,
                "weight": e.weight,
                "direction": list(e.direction),
                "length": "inf" if e.is_end else q(e.length),
            }
            for e in g.edges
        ],
        "marks": [],
        "involution": None,
    }
    if marked:
        for i, (p, t) in enumerate(zip(marked.marks, marked.mt)):
            doc["marks"].append({
                "index": i,
                "vertex": p.vertex,
                "edge": p.edge,
                "offset": None if p.offset is None else q(p.offset),
                "mt": _mt_out(t),
                "tag": "im" if real and i in real.imag else "re",
            })
    if real:
        doc["involution"] = {
            "vertices": {v: real.cv(v) for v in g.vertices + g.infinite if real.cv(v) != v},
            "edges": {e.id: real.ce(e.id) for e in g.edges if real.ce(e.id) != e.id},
        }
    return doc


def _need(d, key, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise DocumentError(f"missing field {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise DocumentError(f"field {key!r} has the wrong type")
    return v


def doc_to_curve(doc):
    """Load a curve document; returns a PPTCurve, MarkedCurve or RealMarkedCurve."""
    if _need(doc, "schema") != CURVE_SCHEMA:
        raise DocumentError(f"unknown schema {doc.get('schema')!r}")
    pos, verts = {}, []
    for v in _need(doc, "vertices", list):
        vid = str(_need(v, "id"))
        p = _need(v, "position", list)
        if len(p) != 2:
            raise DocumentError(f"vertex {vid} needs two coordinates")
        pos[vid] = (unq(p[0]), unq(p[1]))
        verts.append(vid)
    edges, infinite = [], []
    for e in _need(doc, "edges", list):
        eid = str(_need(e, "id"))
        d = _need(e, "direction", list)
        if len(d) != 2 or not all(isinstance(x, int) for x in d):
            raise DocumentError(f"edge {eid} needs an integer direction")
        w = _need(e, "weight")
        if not isinstance(w, int):
            raise DocumentError(f"edge {eid} needs an integer weight")
        head = e.get("head")
        if head is None:
            infinite.append(f"{eid}@inf")
            edges.append(Edge(eid, str(_need(e, "tail")), f"{eid}@inf", INF, w, tuple(d)))
        else:
            edges.append(Edge(eid, str(_need(e, "tail")), str(head), unq(_need(e, "length")), w, tuple(d)))
    g = AbstractGraph(tuple(verts), tuple(infinite), tuple(edges))
    try:
        check_structure(g)
    except StructuralError as exc:
        raise DocumentError(str(exc)) from exc
    c = PPTCurve(g, pos)
    marks_doc = doc.get("marks") or []
    if not marks_doc:
        return c
    marks, mts, imag = [], [], set()
    for k, m in enumerate(sorted(marks_doc, key=lambda m: _need(m, "index"))):
        if m.get("vertex") is not None:
            p = GraphPoint.at_vertex(str(m["vertex"]))
        else:
            p = GraphPoint.on_edge(str(_need(m, "edge")), unq(_need(m, "offset")))
        marks.append(p)
        mts.append(_mt_in(m.get("mt")))
        if m.get("tag", "re") == "im":
            imag.add(k)
        elif m.get("tag", "re") != "re":
            raise DocumentError("mark tag must be 're' or 'im'")
    try:
        marked = MarkedCurve(c, tuple(marks), tuple(mts))
    except (StructuralError, KeyError, ValueError) as exc:
        raise DocumentError(f"bad marks: {exc}") from exc
    inv = doc.get("involution")
    if inv is None:
        if imag:
            raise DocumentError("imaginary marks need an involution")
        return marked
    vm = {v: v for v in g.vertices + g.infinite}
    vm.update({str(k): str(v) for k, v in (inv.get("vertices") or {}).items()})
    em = {e.id: e.id for e in g.edges}
    em.update({str(k): str(v) for k, v in (inv.get("edges") or {}).items()})
    return RealMarkedCurve(marked, vm, em, frozenset(imag))


# -- configuration documents ----------------------------------------------------------


def config_to_doc(cfg: Configuration, weights=None) -> dict:
    pts = []
    for p in cfg.points:
        if isinstance(p, BoundaryPoint):
            pts.append({"side": p.side, "parameter": q(p.parameter)})
        else:
            pts.append({"at": [q(p[0]), q(p[1])]})
    return {
        "schema": CONFIG_SCHEMA,
        "polygon": None if cfg.polygon is None else [list(v) for v in cfg.polygon.vertices],
        "points": pts,
        "weights": None if weights is None else list(weights),
        "direction": None if cfg.direction is None else [q(x) for x in cfg.direction],
        "seed": cfg.seed,
    }


def doc_to_config(doc) -> Configuration:
    if _need(doc, "schema") != CONFIG_SCHEMA:
        raise DocumentError(f"unknown schema {doc.get('schema')!r}")
    poly = doc.get("polygon")
    polygon = None if poly is None else LatticePolygon(tuple(tuple(v) for v in poly))
    pts = []
    for p in _need(doc, "points", list):
        if "side" in p:
            pts.append(BoundaryPoint(int(p["side"]), unq(_need(p, "parameter"))))
        else:
            a = _need(p, "at", list)
            pts.append((unq(a[0]), unq(a[1])))
    d = doc.get("direction")
    try:
        return Configuration(tuple(pts), polygon, None if d is None else tuple(unq(x) for x in d), doc.get("seed"))
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


# -- SVG ----------------------------------------------------------------------------------


def _bbox(points):
    xs = [float(p[0]) for p in points] or [0.0]
    ys = [float(p[1]) for p in points] or [0.0]
    return min(xs), min(ys), max(xs), max(ys)


def render_svg(curves, points=(), subdivisions=(), size: int = 1000) -> str:
    """One ``path`` per curve edge; points are circles, subdivisions polygons in insets."""
    anchors = [p for c in curves for p in c.positions.values()]
    anchors += [p for p in points if not isinstance(p, BoundaryPoint)]
    x0, y0, x1, y1 = _bbox(anchors)
    span = max(x1 - x0, y1 - y0, 1.0)
    reach = 0.2 * span
    x0, y0, x1, y1 = x0 - reach, y0 - reach, x1 + reach, y1 + reach
    span = max(x1 - x0, y1 - y0)

    def tx(p):
        return (float(p[0]) - x0) / span * size, size - (float(p[1]) - y0) / span * size

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    for k, c in enumerate(curves):
        out.append(f'<g class="curve" id="curve{k}">')
        for e in c.edges:
            a = c.positions[e.tail]
            if e.is_end:
                d = e.direction
                norm = max(abs(d[0]), abs(d[1]))
                b = (float(a[0]) + reach * d[0] / norm, float(a[1]) + reach * d[1] / norm)
            else:
                b = c.positions[e.head]
            (ax, ay), (bx, by) = tx(a), tx(b)
            out.append(f'<path d="M {ax:.3f} {ay:.3f} L {bx:.3f} {by:.3f}" stroke="black" '
                       f'stroke-width="{1 + e.weight}" fill="none"><title>{escape(e.id)} w={e.weight}</title></path>')
            if e.weight > 1:
                out.append(f'<text x="{(ax + bx) / 2:.3f}" y="{(ay + by) / 2:.3f}" font-size="12">{e.weight}</text>')
        out.append("</g>")
    for p in points:
        if isinstance(p, BoundaryPoint):
            continue
        x, y = tx(p)
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="red"/>')
    inset = 120
    for k, cells in enumerate(subdivisions):
        verts = [v for cell in cells for v in cell.vertices]
        bx0, by0, bx1, by1 = _bbox(verts)
        s = max(bx1 - bx0, by1 - by0, 1.0)
        ox, oy = 10 + (k % 7) * (inset + 10), 10 + (k // 7) * (inset + 10)
        out.append(f'<g class="subdivision" id="subdivision{k}">')
        for cell in cells:
            pts = " ".join(f"{ox + (v[0] - bx0) / s * inset:.3f},{oy + inset - (v[1] - by0) / s * inset:.3f}"
                           for v in cell.vertices)
            out.append(f'<polygon points="{pts}" fill="none" stroke="blue"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- commands ------------------------------------------------------------------------------


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc


def _emit(doc, out=None):
    (out or sys.stdout).write(dumps(doc))


def cmd_validate(args) -> int:
    obj = doc_to_curve(_load_json(args.file))
    real = obj if isinstance(obj, RealMarkedCurve) else None
    marked = real.base if real else obj if isinstance(obj, MarkedCurve) else None
    c = marked.curve if marked else obj
    reports = {"ppt": validate_ppt(c)}
    cls = classify(c)
    if marked is not None:
        from .patchdata import check_T

        reports["marks"] = validate_marks(marked)
        reg = ValidationReport()
        reg.check("regular")
        if not check_regular(marked):
            reg.add("regular", "curve", "some component of the complement of the marks is not a tree with one end")
        reports["regular"] = reg
        if reports["ppt"].ok:
            poly = None
            if args.generic:
                from .duality import newton_polygon

                poly = newton_polygon(c)
            reports["T"] = check_T(marked, poly, args.budget)
    if real is not None:
        from .patchdata import check_R

        try:
            reports["R"] = check_R(real)
        except InvolutionError as exc:
            bad = ValidationReport()
            bad.add("involution", "curve", str(exc))
            reports["R"] = bad
    ok = all(r.ok for r in reports.values())
    _emit({"ok": ok, "classification": cls.kind, "reports": {k: r.to_dict() for k, r in reports.items()}})
    return 0 if ok else 1


def _breakdown_doc(b) -> dict:
    return {"total": b.total, "factors": [f.to_dict() for f in b.factors]}


def cmd_weight(args) -> int:
    from .weights import HypothesisError, complex_weight, real_weight

    obj = doc_to_curve(_load_json(args.file))
    if isinstance(obj, PPTCurve):
        obj = MarkedCurve(obj, ())
    real = obj if isinstance(obj, RealMarkedCurve) else None
    marked = real.base if real else obj
    try:
        out = {"complex": _breakdown_doc(complex_weight(marked, seed=args.seed))}
        if args.real:
            rw = real_weight(real or RealMarkedCurve.identity(marked), seed=args.seed)
            out["real"] = dict(_breakdown_doc(rw), l1=rw.l1, l2=rw.l2)
    except HypothesisError as exc:
        _emit({"error": str(exc), "rule": exc.rule})
        return 1
    _emit(out)
    return 0


def _polygon_arg(args) -> LatticePolygon:
    if args.polygon:
        try:
            pts = json.loads(args.polygon)
            return LatticePolygon.hull([tuple(p) for p in pts])
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise DocumentError(f"bad polygon {args.polygon!r}") from exc
    if args.degree is None or args.degree < 1:
        raise DocumentError("give --degree d >= 1 or --polygon")
    return standard_triangle(args.degree)


def cmd_enumerate(args) -> int:
    from .enumerate import EnumerationError, EnumerationProblem, count_complex, count_real

    poly = _polygon_arg(args)
    prob = EnumerationProblem(poly, args.genus, seed=args.seed)
    try:
        res = count_real(prob) if args.real else count_complex(prob)
    except EnumerationError as exc:
        _emit({"error": str(exc)})
        return 1
    doc = {
        "polygon": [list(v) for v in poly.vertices],
        "genus": args.genus,
        "seed": args.seed,
        "seed_used": res.seed,
        "config": config_to_doc(res.config),
        "total_complex": res.total_complex,
        "total_real": res.total_real if args.real else None,
        "curves": [
            {
                "curve": curve_to_doc(c.curve),
                "weight": _breakdown_doc(c.weight),
                "real_weight": None if c.real is None else dict(_breakdown_doc(c.real), l1=c.real.l1, l2=c.real.l2),
                "subdivision": [{"kind": cell.kind, "points": [list(p) for p in cell.points]} for cell in c.subdivision.cells],
                "path": [list(p) for p in c.subdivision.path],
            }
            for c in res.curves
        ],
        "diagnostics": res.diagnostics,
    }
    _emit(doc)
    if args.render:
        svg = render_svg([c.curve.curve for c in res.curves], res.config.points,
                         [[LatticePolygon.hull(cell.points) for cell in c.subdivision.cells] for c in res.curves])
        with open(args.render, "w") as fh:
            fh.write(svg)
    return 0


def cmd_tropicalize(args) -> int:
    doc = _load_json(args.file)
    if _need(doc, "schema") != POLY_SCHEMA:
        raise DocumentError(f"unknown schema {doc.get('schema')!r}")
    val = {}
    for m in _need(doc, "monomials", list):
        e = _need(m, "exponent", list)
        if len(e) != 2 or not all(isinstance(x, int) for x in e):
            raise DocumentError("exponents must be integer pairs")
        val[tuple(e)] = unq(_need(m, "valuation"))
    if not val:
        _emit({"error": "empty support"})
        return 1
    try:
        t, s = tropicalize(ValuatedPolynomial(val))
    except DualityError as exc:
        _emit({"error": str(exc)})
        return 1
    out = {
        "curve": {
            "vertices": [[q(x) for x in v] for v in t.vertices],
            "edges": [
                {"start": [q(x) for x in e.start], "end": None if e.end is None else [q(x) for x in e.end],
                 "direction": list(e.direction), "weight": e.weight}
                for e in t.edges
            ],
        },
        "subdivision": {
            "polygon": [list(v) for v in s.polygon.vertices],
            "cells": sorted([list(v) for v in c.vertices] for c in s.cells),
        },
    }
    _emit(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tropicount", description="Plane tropical curves: validation, weights, counts.")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", help="validate a curve document")
    v.add_argument("file")
    v.add_argument("--generic", action="store_true", help="also run the bounded genericity check (T3)")
    v.add_argument("--budget", type=int, default=10000)
    v.set_defaults(func=cmd_validate)
    w = sub.add_parser("weight", help="complex (and real) weight of a marked curve")
    w.add_argument("file")
    w.add_argument("--real", action="store_true")
    w.add_argument("--seed", type=int, default=0)
    w.set_defaults(func=cmd_weight)
    e = sub.add_parser("enumerate", help="count curves through a stretched configuration")
    e.add_argument("--degree", type=int)
    e.add_argument("--polygon", help='vertex list as JSON, e.g. "[[0,0],[2,0],[0,2]]"')
    e.add_argument("--genus", type=int, default=0)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--real", action="store_true")
    e.add_argument("--render", metavar="OUT.svg")
    e.add_argument("--format", choices=["json"], default="json")
    e.add_argument("--budget", type=int, default=10000)
    e.set_defaults(func=cmd_enumerate)
    t = sub.add_parser("tropicalize", help="tropical curve and subdivision of a valuated polynomial")
    t.add_argument("file")
    t.set_defaults(func=cmd_tropicalize)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (DocumentError, InvolutionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
