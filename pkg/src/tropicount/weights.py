"""Complex and real weights of marked plane tropical curves.

Every factor is recorded with the rule that produced it so callers can
print an itemized breakdown.  Factors for conjugate pairs are stored once,
as the product over the pair.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, replace
from fractions import Fraction
from math import prod

from .curve import (
    MarkedCurve,
    PPTCurve,
    RealMarkedCurve,
    classify,
    double,
    genus,
    is_multiple_at,
    quotient_by_involution,
    validate_involution,
    validate_ppt,
)
from .lattice import LatticePolygon, lattice_points, lattice_volume, primitive_decompose, rot90_cw, scale
from .position import (
    Orientation,
    _nondegenerate,
    _tree_type,
    _trees,
    orient_components,
    solve_type_detailed,
)


class HypothesisError(ValueError):
    """A curve does not satisfy a condition the weight rules rely on."""

    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule


@dataclass(frozen=True)
class VertexTriangle:
    vertex: str
    polygon: LatticePolygon

    @property
    def volume(self) -> int:
        return lattice_volume(self.polygon)

    @property
    def interior_points(self) -> int:
        return len(lattice_points(self.polygon)[0])

    @property
    def boundary_points(self) -> int:
        return len(lattice_points(self.polygon)[1])


def vertex_triangle(c: PPTCurve, v: str) -> VertexTriangle:
    vecs = [rot90_cw(w) for _, w in c.outgoing(v)]
    return VertexTriangle(v, LatticePolygon.from_edge_vectors(vecs).canonical())


@dataclass(frozen=True)
class Factor:
    rule: str
    kind: str  # "vertex", "edge", "mark" or "pair"
    location: str
    value: Fraction

    def to_dict(self) -> dict:
        return {"rule": self.rule, "kind": self.kind, "location": self.location, "value": self.value}


@dataclass(frozen=True)
class WeightBreakdown:
    factors: tuple[Factor, ...]

    @property
    def total(self) -> Fraction:
        return prod((f.value for f in self.factors), start=Fraction(1))

    def by_kind(self, kind: str) -> list[Factor]:
        return [f for f in self.factors if f.kind == kind]


@dataclass(frozen=True)
class RealWeightBreakdown:
    l1: int
    l2: int
    factors: tuple[Factor, ...]

    @property
    def total(self) -> Fraction:
        return (-1) ** self.l1 * Fraction(2) ** self.l2 * prod((f.value for f in self.factors), start=Fraction(1))


# -- hypotheses ---------------------------------------------------------------------


def t_defects(m: MarkedCurve) -> list[tuple[str, str]]:
    """Violations of pseudo-simplicity, regularity and the first two T conditions."""
    from .position import regularity_defects

    out = []
    c = m.curve
    if classify(c).kind == "neither":
        out.append(("pseudo-simple", "some vertex is not pseudo-simple"))
    for d in regularity_defects(c.graph, m.marks):
        out.append(("regular", d))
    for e in c.graph.finite_edges():
        if is_multiple_at(c, e, e.tail) and is_multiple_at(c, e, e.head):
            out.append(("T1", f"edge {e.id} is multiple for both endpoints"))
    for i, p in enumerate(m.marks):
        if p.vertex is not None and p.vertex in c.graph.vertices and c.graph.valency(p.vertex) > 3:
            out.append(("T2", f"mark {i} sits at vertex {p.vertex} of valency {c.graph.valency(p.vertex)}"))
    return out


def _require(m: MarkedCurve):
    bad = t_defects(m)
    if bad:
        raise HypothesisError(*bad[0])


# -- complex weight --------------------------------------------------------------------


def _incoming_classes(c: PPTCurve, v: str, orient: Orientation):
    g = c.graph
    inc = [g.edge(eid) for eid in orient.incoming[v]]
    groups = defaultdict(list)
    for e in inc:
        groups[e.direction_from(v)].append(e)
    return groups


def complex_weight(m: MarkedCurve, seed: int = 0, orientation: Orientation | None = None) -> WeightBreakdown:
    _require(m)
    c = m.curve
    g = c.graph
    orient = orientation or orient_components(m)
    factors = []
    for e in g.finite_edges():
        factors.append(Factor("M1", "edge", e.id, Fraction(e.weight)))
    for i, p in enumerate(m.marks):
        if p.vertex is not None:
            factors.append(Factor("M2", "mark", str(i), Fraction(1)))
        else:
            factors.append(Factor("M2", "mark", str(i), Fraction(g.edge(p.edge).weight)))
    marked_v = set(m.marked_vertices())
    for v in g.vertices:
        vol = vertex_triangle(c, v).volume
        if v in marked_v:
            factors.append(Factor("M3", "vertex", v, Fraction(vol)))
        elif g.valency(v) == 3:
            e1, e2 = (g.edge(x) for x in orient.incoming[v])
            factors.append(Factor("M4", "vertex", v, Fraction(vol, e1.weight * e2.weight)))
        else:
            factors.append(Factor("M5", "vertex", v, Fraction(star_weight(c, v, orient, seed))))
    return WeightBreakdown(tuple(factors))


def simple_weight(m: MarkedCurve) -> int:
    c = m.curve
    g = c.graph
    if any(g.valency(v) != 3 for v in g.vertices):
        raise HypothesisError("simple", "curve has a vertex of valency other than 3")
    num = prod(vertex_triangle(c, v).volume for v in g.vertices)
    den = 1
    for i in m.g_infinity():
        den *= g.incident(m.marks[i].vertex)[0].weight
    val = Fraction(num, den)
    if val.denominator != 1:
        raise ArithmeticError(f"simple weight {val} is not an integer")
    return int(val)


# -- star deformations --------------------------------------------------------------


def _star_type(tree_edges, n, vectors):
    # every end but the last carries a mark
    t = _tree_type(tree_edges, n, vectors)
    if t is None:
        return None
    t = replace(t, marks=t.marks[:-1])
    return t if _nondegenerate(t) else None


class DegenerateConfiguration(RuntimeError):
    pass


def deform_star(vectors, classes, seed: int = 0, attempts: int = 8) -> list[MarkedCurve]:
    """Curves of degree ``vectors`` through points perturbed from two base points.

    ``vectors[-1]`` is the unmarked end.  ``classes[i]`` (0 or 1) tells which
    base point end ``i`` is pushed towards; the base points are one unit out
    along the class directions from the origin.
    """
    n = len(vectors)
    k = n - 1
    for attempt in range(attempts):
        rng = random.Random(seed * 1000003 + attempt)
        base = {}
        for i in range(k):
            if classes[i] not in base:
                base[classes[i]] = primitive_decompose(vectors[i]).primitive
        pts = []
        for i in range(k):
            b = base[classes[i]]
            mag = Fraction(1, 2 ** (i + 4))
            dx = Fraction(rng.randrange(-10**6, 10**6), 10**6 + 3) * mag
            dy = Fraction(rng.randrange(-10**6, 10**6), 10**6 + 33) * mag
            pts.append((b[0] + dx, b[1] + dy))
        try:
            return _solve_star(vectors, pts)
        except DegenerateConfiguration:
            continue
    raise DegenerateConfiguration("no generic perturbation found")


def _solve_star(vectors, pts) -> list[MarkedCurve]:
    n = len(vectors)
    found = []
    for tree in _trees(n):
        t = _star_type(tree, n, vectors)
        if t is None:
            continue
        curve, reason = solve_type_detailed(t, pts)
        if curve is None:
            if reason.startswith("solution is not unique"):
                raise DegenerateConfiguration(reason)
            continue
        if not validate_ppt(curve.curve).ok:
            continue
        found.append(curve)
    return found


def _star_data(c: PPTCurve, v: str, orient: Orientation):
    g = c.graph
    out = g.edge(orient.outgoing[v])
    groups = _incoming_classes(c, v, orient)
    if len(groups) != 2:
        raise HypothesisError("pseudo-simple", f"vertex {v} has {len(groups)} incoming directions")
    (d1, big), (d2, small) = sorted(groups.items(), key=lambda kv: (-len(kv[1]), kv[0]))
    if len(big) < 2:
        raise HypothesisError("pseudo-simple", f"vertex {v} has no multiple edge class")
    return out, (d1, big), (d2, small)


def star_deformations(c: PPTCurve, v: str, orient: Orientation, seed: int = 0) -> list[MarkedCurve]:
    out, (d1, big), (d2, small) = _star_data(c, v, orient)
    vectors = [scale(e.weight, d1) for e in big] + [scale(e.weight, d2) for e in small]
    classes = [0] * len(big) + [1] * len(small)
    vectors.append(scale(out.weight, out.direction_from(v)))
    return deform_star(vectors, classes, seed)


def star_weight(c: PPTCurve, v: str, orient: Orientation, seed: int = 0) -> Fraction:
    return sum((complex_weight(q).total for q in star_deformations(c, v, orient, seed)), Fraction(0))


# -- real weight ---------------------------------------------------------------------------


def real_structure_defects(r: RealMarkedCurve) -> list[tuple[str, str]]:
    """Violations of the five structural conditions on real curves."""
    out = []
    c = r.curve
    g = c.graph
    rv, re_ = r.real_vertices(), r.real_edges()
    # R1
    if not rv and not re_:
        out.append(("R1", "real part is empty"))
    for v in rv:
        if not any(e.id in re_ for e in g.incident(v)):
            out.append(("R1", f"vertex {v} is an isolated real point"))
    # R2
    for v in g.vertices:
        if v not in rv and g.valency(v) != 3:
            out.append(("R2", f"imaginary vertex {v} has valency {g.valency(v)}"))
    marks = r.base.marks
    for i, p in enumerate(marks):
        real_pt = r.point_is_real(p)
        if p.vertex is not None and p.vertex in g.vertices and not real_pt:
            out.append(("R3", f"mark {i} is a vertex of the imaginary part"))
        if i in r.imag and real_pt:
            if p.vertex is None or p.vertex not in g.vertices or g.valency(p.vertex) != 3:
                out.append(("R4", f"imaginary mark {i} on the real part is not a trivalent vertex"))
    # R5
    for comp_v, comp_e, closure_marks in _imaginary_pieces(r):
        if not any(i in r.imag for i in closure_marks):
            out.append(("R5", f"imaginary piece through edges {sorted(comp_e)} has no imaginary mark in its closure"))
    return out


def _imaginary_pieces(r: RealMarkedCurve):
    import networkx as nx

    c = r.curve
    g = c.graph
    rv, re_ = r.real_vertices(), r.real_edges()
    on_edge = defaultdict(list)
    at_vertex = defaultdict(list)
    for i, p in enumerate(r.base.marks):
        if p.vertex is not None:
            at_vertex[p.vertex].append(i)
        else:
            on_edge[p.edge].append((p.offset, i))
    G = nx.Graph()
    bounds = {}
    for e in g.edges:
        if e.id in re_:
            continue
        ms = sorted(on_edge[e.id])
        pieces = len(ms) + 1
        for k in range(pieces):
            node = ("p", e.id, k)
            G.add_node(node)
            cl = set()
            if k > 0:
                cl.add(ms[k - 1][1])
            if k < len(ms):
                cl.add(ms[k][1])
            bounds[node] = cl
        for k, x in ((0, e.tail), (len(ms), e.head)):
            node = ("p", e.id, k)
            if x in rv or x in at_vertex:
                bounds[node] |= set(at_vertex.get(x, []))
            else:
                G.add_edge(node, ("v", x))
    for comp in nx.connected_components(G):
        cv = {x[1] for x in comp if x[0] == "v"}
        ce = {x[1] for x in comp if x[0] == "p"}
        cl = set()
        for x in comp:
            if x[0] == "p":
                cl |= bounds[x]
        yield cv, ce, cl


def _pair_done(seen: set, a, b) -> bool:
    key = frozenset((a, b))
    if key in seen:
        return True
    seen.add(key)
    return False


def real_weight(r: RealMarkedCurve, seed: int = 0) -> RealWeightBreakdown:
    validate_involution(r)
    bad = real_structure_defects(r)
    if bad:
        raise HypothesisError(*bad[0])
    m = r.base
    _require(m)
    c = m.curve
    g = c.graph
    orient = orient_components(m)
    rv, re_ = r.real_vertices(), r.real_edges()
    marks = m.marks
    real_marks_on_imag = sum(1 for i, p in enumerate(marks) if i not in r.imag and not r.point_is_real(p))
    imag_marks_on_imag = sum(1 for i, p in enumerate(marks) if i in r.imag and not r.point_is_real(p))
    b0 = len(r.imaginary_components())
    if real_marks_on_imag % 2 or (imag_marks_on_imag - b0) % 2:
        raise HypothesisError("real-structure", "sign or power exponent is not an integer")
    l1 = real_marks_on_imag // 2
    l2 = (imag_marks_on_imag - b0) // 2
    factors = []
    seen = set()
    # edges
    for e in g.edges:
        if e.id in re_:
            factors.append(Factor("W1", "edge", e.id, Fraction(e.weight % 2)))
        elif e.is_end:
            factors.append(Factor("W1", "edge", e.id, Fraction(1)))
        elif not _pair_done(seen, ("e", e.id), ("e", r.ce(e.id))):
            factors.append(Factor("W1", "pair", f"{e.id}|{r.ce(e.id)}", Fraction(e.weight)))
    # marks in G_0
    for i, p in enumerate(marks):
        if m.is_infinite_mark(i):
            continue
        if r.point_is_real(p):
            if p.vertex is not None and i in r.imag:
                factors.append(Factor("W2", "mark", str(i), Fraction(vertex_triangle(c, p.vertex).volume)))
            else:
                factors.append(Factor("W2", "mark", str(i), Fraction(1)))
        else:
            j = r.mark_image(i)
            if not _pair_done(seen, ("m", i), ("m", j)):
                factors.append(Factor("W2", "pair", f"{i}|{j}", Fraction(g.edge(p.edge).weight)))
    # vertices
    for v in g.vertices:
        tri = vertex_triangle(c, v)
        if v not in rv:
            if _pair_done(seen, ("v", v), ("v", r.cv(v))):
                continue
            e1, e2 = (g.edge(x) for x in orient.incoming[v])
            mv = Fraction(tri.volume, e1.weight * e2.weight)
            factors.append(Factor("W3", "pair", f"{v}|{r.cv(v)}", (-1) ** tri.boundary_points * mv))
            continue
        val = g.valency(v)
        sign = (-1) ** tri.interior_points
        if val == 3:
            factors.append(Factor("W3", "vertex", v, Fraction(sign)))
            continue
        inc = g.incident(v)
        real_simple = [e for e in inc if e.id in re_ and not is_multiple_at(c, e, v)]
        imag_mult = [e for e in inc if e.id not in re_ and is_multiple_at(c, e, v)]
        if val == 4 and len(real_simple) == 2 and len(imag_mult) == 2:
            factors.append(Factor("W4", "vertex", v, Fraction(sign * tri.volume, 2 * imag_mult[0].weight)))
            continue
        factors.append(Factor("W5", "vertex", v, real_star_weight(r, v, orient, seed)))
    return RealWeightBreakdown(l1, l2, tuple(factors))


def real_star_weight(r: RealMarkedCurve, v: str, orient: Orientation, seed: int = 0) -> Fraction:
    """Sum of real weights over the real lifts of the deformed quotient star."""
    c = r.curve
    g = c.graph
    re_ = r.real_edges()
    e1 = g.edge(orient.outgoing[v])
    if e1.id not in re_ or is_multiple_at(c, e1, v):
        raise HypothesisError("W5", f"the outgoing edge at {v} is not a simple real edge")
    # quotient star: conjugate pairs merge into one end of doubled weight
    classes = defaultdict(lambda: [0, 0, []])  # direction -> [r, s, vectors]
    done = set()
    for e in g.incident(v):
        if e.id == e1.id:
            continue
        d = e.direction_from(v)
        entry = classes[d]
        if e.id in re_:
            entry[0] += 1
            entry[2].append((scale(e.weight, d), False))
        elif e.id not in done:
            done.update({e.id, r.ce(e.id)})
            entry[1] += 1
            entry[2].append((scale(2 * e.weight, d), True))
    if len(classes) != 2:
        raise HypothesisError("W5", f"vertex {v} needs exactly two incoming directions")
    ordered = sorted(classes.items(), key=lambda kv: (kv[1][0] + 2 * kv[1][1], kv[0]))
    (_, (r1, s1, v1)), (_, (r2, s2, v2)) = ordered
    if r2 + 2 * s2 < 2:
        raise HypothesisError("W5", "the second direction class is too small")
    vectors = [x for x, _ in v1] + [x for x, _ in v2]
    imag_flags = [f for _, f in v1] + [f for _, f in v2]
    cls = [0] * len(v1) + [1] * len(v2)
    vectors.append(scale(e1.weight, e1.direction_from(v)))
    total = Fraction(0)
    for q in deform_star(vectors, cls, seed):
        lift = _lift_real(q, imag_flags)
        # the free end swallowed by the imaginary part means it had even weight,
        # so the real edge e1 already kills the weight of the whole curve
        if lift is not None:
            total += real_weight(lift, seed).total
    return total


def _lift_real(q: MarkedCurve, imag_flags) -> RealMarkedCurve | None:
    orient = orient_components(q)
    I = {f"end{i}" for i, flag in enumerate(imag_flags) if flag}
    changed = True
    while changed:
        changed = False
        for p, ins in orient.incoming.items():
            if all(x in I for x in ins) and orient.outgoing[p] not in I:
                I.add(orient.outgoing[p])
                changed = True
    if f"end{len(imag_flags)}" in I:
        return None
    return double(q, I)


def closed_form_real_weight(r: RealMarkedCurve) -> Fraction:
    """Product formula for rational real curves with simple quotient.

    Requires no marks at univalent vertices, no real marks at vertices and
    no real marks on the imaginary part.
    """
    m = r.base
    c = m.curve
    if genus(c) != 0:
        raise HypothesisError("closed-form", "curve is not rational")
    marks = m.marks
    for i, p in enumerate(marks):
        if m.is_infinite_mark(i):
            raise HypothesisError("closed-form", "marks at univalent vertices")
        if i not in r.imag and (p.vertex is not None or not r.point_is_real(p)):
            raise HypothesisError("closed-form", f"real mark {i} is at a vertex or on the imaginary part")
    q = quotient_by_involution(r)
    qc = q.curve
    if any(qc.graph.valency(v) != 3 for v in qc.graph.vertices):
        raise HypothesisError("closed-form", "quotient is not simple")
    re_ = r.real_edges()
    if any(c.graph.edge(e).weight % 2 == 0 for e in re_):
        return Fraction(0)
    rv = r.real_vertices()
    # quotient vertices keep the ids of orbit representatives
    imag_q = {v for v in qc.graph.vertices if v not in rv}
    touching = set(imag_q)
    for e in qc.graph.edges:
        if e.id not in re_:
            for x in (e.tail, e.head):
                if x in qc.graph.vertices:
                    touching.add(x)
    a = sum(vertex_triangle(qc, v).interior_points for v in qc.graph.vertices)
    b = len(imag_q)
    val = Fraction((-1) ** (a + b))
    for i, p in enumerate(marks):
        if i in r.imag and p.vertex is not None:
            val *= vertex_triangle(c, p.vertex).volume
    for v in touching:
        val *= Fraction(vertex_triangle(qc, v).volume, 2)
    return val


def totally_real_weight(m: MarkedCurve) -> int:
    """Sign rule for simple curves with the identity involution and real marks."""
    c = m.curve
    if any(e.weight % 2 == 0 for e in c.edges):
        return 0
    return (-1) ** sum(vertex_triangle(c, v).interior_points for v in c.graph.vertices)
