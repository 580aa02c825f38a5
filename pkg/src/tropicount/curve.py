"""Plane parameterized tropical curves, marks and real structures.

A curve is a graph whose finite vertices carry exact rational positions.
Every edge stores a designated tail, a primitive direction pointing away
from the tail, a positive weight and a length.  Moving ``length`` along an
edge displaces the image by ``length * weight * direction``.  Ends always
have their finite vertex as tail and a univalent vertex as head; their
length is :data:`INF`.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

import networkx as nx

from .lattice import (
    LatticePolygon,
    RationalPoint,
    WeightedDirection,
    add,
    as_rational,
    cross,
    dot,
    primitive_decompose,
    rot90,
    scale,
    sub,
)
from .report import ValidationReport


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


class StructuralError(ValueError):
    """The input is not a well-formed graph (as opposed to failing a check)."""


class InvolutionError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: object  # Fraction or INF
    weight: int = 1
    direction: tuple[int, int] | None = None

    @property
    def is_end(self) -> bool:
        return self.length is INF

    @property
    def vector(self) -> tuple[int, int]:
        return (self.weight * self.direction[0], self.weight * self.direction[1])

    def other(self, v: str) -> str:
        return self.head if v == self.tail else self.tail

    def direction_from(self, v: str) -> tuple[int, int]:
        """Primitive direction pointing away from ``v``."""
        if v == self.tail:
            return self.direction
        return (-self.direction[0], -self.direction[1])


@dataclass(frozen=True)
class AbstractGraph:
    vertices: tuple[str, ...]
    infinite: tuple[str, ...]
    edges: tuple[Edge, ...]

    def edge(self, eid: str) -> Edge:
        return self._edge_map()[eid]

    def _edge_map(self) -> dict[str, Edge]:
        m = self.__dict__.get("_emap")
        if m is None:
            m = {e.id: e for e in self.edges}
            object.__setattr__(self, "_emap", m)
        return m

    def incident(self, v: str) -> list[Edge]:
        inc = self.__dict__.get("_inc")
        if inc is None:
            inc = defaultdict(list)
            for e in self.edges:
                inc[e.tail].append(e)
                if e.head != e.tail:
                    inc[e.head].append(e)
            object.__setattr__(self, "_inc", inc)
        return inc.get(v, [])

    def valency(self, v: str) -> int:
        return sum(2 if e.tail == e.head else 1 for e in self.incident(v))

    def finite_edges(self) -> list[Edge]:
        return [e for e in self.edges if not e.is_end]

    def ends(self) -> list[Edge]:
        return [e for e in self.edges if e.is_end]


def check_structure(g: AbstractGraph) -> None:
    """Raise :class:`StructuralError` unless ``g`` is a well-formed tropical curve graph."""
    fin, inf = set(g.vertices), set(g.infinite)
    if fin & inf:
        raise StructuralError("vertex listed as both finite and univalent")
    ids = [e.id for e in g.edges]
    if len(ids) != len(set(ids)):
        raise StructuralError("duplicate edge ids")
    for e in g.edges:
        if e.tail not in fin:
            raise StructuralError(f"edge {e.id}: tail {e.tail} is not a finite vertex")
        if e.head not in fin and e.head not in inf:
            raise StructuralError(f"edge {e.id}: unknown head {e.head}")
        if e.head in inf:
            if e.length is not INF:
                raise StructuralError(f"end {e.id} must have infinite length")
        else:
            if e.length is INF or not isinstance(e.length, (int, Fraction)) or e.length <= 0:
                raise StructuralError(f"finite edge {e.id} needs a positive rational length")
        if e.weight is not None and (int(e.weight) != e.weight or e.weight <= 0):
            raise StructuralError(f"edge {e.id}: weight must be a positive integer")
        if e.direction is not None:
            d = tuple(e.direction)
            if d == (0, 0) or primitive_decompose(d).weight != 1:
                raise StructuralError(f"edge {e.id}: direction {d} is not primitive")
    for v in inf:
        if g.valency(v) != 1:
            raise StructuralError(f"univalent vertex {v} lies on {g.valency(v)} edges")
    for v in fin:
        val = g.valency(v)
        if val == 0:
            raise StructuralError(f"isolated vertex {v}")
        if val == 2:
            raise StructuralError(f"divalent vertex {v}")


@dataclass(frozen=True)
class PPTCurve:
    graph: AbstractGraph
    positions: Mapping[str, RationalPoint]

    @classmethod
    def build(cls, positions: Mapping[str, Sequence], edges: Iterable[Sequence]) -> "PPTCurve":
        """Convenience constructor.

        ``edges`` are tuples ``(id, tail, head, weight)`` for finite edges,
        where direction and length are derived from the positions, or
        ``(id, tail, None, weight, direction)`` for ends (a univalent head
        named ``id + "@inf"`` is created).
        """
        pos = {k: as_rational(p) for k, p in positions.items()}
        out, infinite = [], []
        for spec in edges:
            eid, tail, head, weight = spec[0], spec[1], spec[2], int(spec[3])
            if head is None:
                d = primitive_decompose(spec[4])
                if d.weight != 1:
                    weight *= d.weight
                hid = f"{eid}@inf"
                infinite.append(hid)
                out.append(Edge(eid, tail, hid, INF, weight, d.primitive))
            else:
                delta = sub(pos[head], pos[tail])
                den = 1
                for c in delta:
                    den = den * Fraction(c).denominator // _gcd(den, Fraction(c).denominator)
                iv = (int(delta[0] * den), int(delta[1] * den))
                d = primitive_decompose(iv)
                length = Fraction(d.weight, den) / weight
                out.append(Edge(eid, tail, head, length, weight, d.primitive))
        graph = AbstractGraph(tuple(pos), tuple(infinite), tuple(out))
        return cls(graph, pos)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges

    def edge(self, eid: str) -> Edge:
        return self.graph.edge(eid)

    def outgoing(self, v: str) -> list[tuple[Edge, tuple[int, int]]]:
        """Edges at ``v`` with their weighted outgoing vectors ``dh_v(tau_v(e))``."""
        res = []
        for e in self.graph.incident(v):
            u = e.direction_from(v)
            res.append((e, (e.weight * u[0], e.weight * u[1])))
            if e.tail == e.head:
                res.append((e, (-e.weight * u[0], -e.weight * u[1])))
        return res

    def point_at(self, eid: str, offset) -> RationalPoint:
        e = self.edge(eid)
        p = self.positions[e.tail]
        return add(p, scale(Fraction(offset) * e.weight, e.direction))

    def translate(self, t: Sequence) -> "PPTCurve":
        t = as_rational(t)
        return PPTCurve(self.graph, {k: add(p, t) for k, p in self.positions.items()})


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- graph points and marks ------------------------------------------------


class GraphPoint(NamedTuple):
    """A point of the curve: a vertex, or an edge with an offset from the tail."""

    vertex: str | None = None
    edge: str | None = None
    offset: Fraction | None = None

    @classmethod
    def at_vertex(cls, v: str) -> "GraphPoint":
        return cls(vertex=v)

    @classmethod
    def on_edge(cls, eid: str, offset) -> "GraphPoint":
        return cls(edge=eid, offset=Fraction(offset))


def normalize_point(c: PPTCurve, p: GraphPoint) -> GraphPoint:
    """Replace edge addresses at offset 0 or at the far end by vertex aliases."""
    if p.vertex is not None:
        return p
    e = c.edge(p.edge)
    if p.offset is INF:
        return GraphPoint.at_vertex(e.head)
    if p.offset == 0:
        return GraphPoint.at_vertex(e.tail)
    if e.length is not INF and p.offset == e.length:
        return GraphPoint.at_vertex(e.head)
    if p.offset < 0 or (e.length is not INF and p.offset > e.length):
        raise StructuralError(f"offset {p.offset} outside edge {e.id}")
    return p


MT_VALUES = (1, (1, 0), (0, 1), (1, 1))


@dataclass(frozen=True)
class MarkedCurve:
    """A curve with an ordered tuple of distinct marks.

    ``mt`` holds the multiplicity tag of each mark: ``1`` for the simple
    class, a pair for the double class, ``None`` for marks at univalent
    vertices.
    """

    curve: PPTCurve
    marks: tuple[GraphPoint, ...]
    mt: tuple = ()

    def __post_init__(self):
        marks = tuple(normalize_point(self.curve, m) for m in self.marks)
        object.__setattr__(self, "marks", marks)
        if not self.mt:
            object.__setattr__(self, "mt", tuple(self._default_mt(m) for m in marks))
        if len(self.mt) != len(marks):
            raise StructuralError("one multiplicity tag per mark required")

    def _default_mt(self, m: GraphPoint):
        if m.vertex is None:
            return 1
        if m.vertex in self.curve.graph.infinite:
            return None
        return (1, 1)

    def image(self, i: int) -> RationalPoint | None:
        m = self.marks[i]
        if m.vertex is not None:
            return self.curve.positions.get(m.vertex)
        return self.curve.point_at(m.edge, m.offset)

    def is_infinite_mark(self, i: int) -> bool:
        m = self.marks[i]
        return m.vertex is not None and m.vertex in self.curve.graph.infinite

    def marks_on_edge(self, eid: str) -> list[int]:
        return [i for i, m in enumerate(self.marks) if m.edge == eid]

    def marked_vertices(self) -> dict[str, int]:
        return {m.vertex: i for i, m in enumerate(self.marks) if m.vertex is not None}

    def g0(self) -> list[int]:
        return [i for i in range(len(self.marks)) if not self.is_infinite_mark(i)]

    def g_infinity(self) -> list[int]:
        return [i for i in range(len(self.marks)) if self.is_infinite_mark(i)]


def validate_marks(m: MarkedCurve) -> ValidationReport:
    rep = ValidationReport()
    rep.check("marks-distinct")
    if len(set(m.marks)) != len(m.marks):
        rep.add("marks-distinct", "marks", "marks are not pairwise distinct")
    rep.check("mt")
    fin = set(m.curve.graph.vertices)
    simple_images, double_images = set(), set()
    for i, (p, t) in enumerate(zip(m.marks, m.mt)):
        if m.is_infinite_mark(i):
            if t is not None:
                rep.add("mt", f"mark {i}", "marks at univalent vertices carry no multiplicity")
            continue
        if t not in MT_VALUES:
            rep.add("mt", f"mark {i}", f"invalid multiplicity tag {t!r}")
            continue
        if t == 1:
            if p.vertex is not None and p.vertex in fin:
                rep.add("mt", f"mark {i}", "simple-class marks cannot sit at vertices")
            simple_images.add(m.image(i))
        else:
            double_images.add(m.image(i))
            if t == (1, 1) and (p.vertex is None or m.curve.graph.valency(p.vertex) != 3):
                rep.add("mt", f"mark {i}", "multiplicity (1,1) only at trivalent vertices")
            if t in ((1, 0), (0, 1)) and p.vertex is not None:
                rep.add("mt", f"mark {i}", "(1,0)/(0,1) marks cannot sit at vertices")
    if simple_images & double_images:
        rep.add("mt", "marks", "simple-class and double-class marks share an image point")
    return rep


# -- validation --------------------------------------------------------------


def genus(g: AbstractGraph | PPTCurve) -> int:
    """``b1 - b0 + 1`` of the finite part of the graph."""
    if isinstance(g, PPTCurve):
        g = g.graph
    uf = nx.utils.UnionFind(g.vertices)
    nfin = 0
    for e in g.finite_edges():
        uf.union(e.tail, e.head)
        nfin += 1
    b0 = len({uf[v] for v in g.vertices})
    b1 = nfin - len(g.vertices) + b0
    return b1 - b0 + 1


def validate_ppt(c: PPTCurve, end_points: Mapping[str, Sequence] | None = None) -> ValidationReport:
    """Check balancing, nondegeneracy and the two end relations.

    Raises :class:`StructuralError` for malformed graphs.  ``end_points``
    optionally maps end ids to chosen points on their images for the
    rotated moment relation; by default a point one step out on each end
    is used.
    """
    g = c.graph
    check_structure(g)
    rep = ValidationReport()
    for v in g.vertices:
        if v not in c.positions:
            raise StructuralError(f"vertex {v} has no position")
    for e in g.edges:
        if e.direction is None:
            raise StructuralError(f"edge {e.id} has no direction")
    rep.check("affine")
    for e in g.finite_edges():
        expect = scale(e.length * e.weight, e.direction)
        if sub(c.positions[e.head], c.positions[e.tail]) != expect:
            rep.add("affine", f"edge {e.id}", "endpoint positions disagree with length, weight and direction")
    rep.check("balancing")
    rep.check("nondegeneracy")
    for v in g.vertices:
        vecs = [w for _, w in c.outgoing(v)]
        s = (sum(x for x, _ in vecs), sum(y for _, y in vecs))
        if s != (0, 0):
            rep.add("balancing", f"vertex {v}", f"outgoing vectors sum to {s}")
        if all(cross(vecs[0], w) == 0 for w in vecs):
            rep.add("nondegeneracy", f"vertex {v}", "outgoing directions do not span the plane")
    rep.check("end-sum")
    total = (0, 0)
    for e in g.ends():
        total = add(total, e.vector)
    if total != (0, 0):
        rep.add("end-sum", "ends", f"end vectors sum to {total}")
    rep.check("end-moment")
    moment = Fraction(0)
    for e in g.ends():
        if end_points and e.id in end_points:
            x = as_rational(end_points[e.id])
            rel = sub(x, c.positions[e.tail])
            if cross(e.direction, rel) != 0 or dot(e.direction, rel) < 0:
                rep.add("end-moment", f"end {e.id}", "chosen point is not on the end image")
                continue
        else:
            x = add(c.positions[e.tail], e.vector)
        moment += dot(rot90(e.vector), x)
    if moment != 0:
        rep.add("end-moment", "ends", f"rotated end moments sum to {moment}")
    return rep


def degree(c: PPTCurve) -> list[WeightedDirection]:
    """Weighted end directions, pointing towards the univalent vertices, sorted."""
    return sorted(WeightedDirection(e.direction, e.weight) for e in c.graph.ends())


@dataclass(frozen=True)
class Classification:
    kind: str  # "simple", "pseudo_simple" or "neither"
    tags: dict  # vertex -> {edge id: "simple" | "multiple"} at vertices of valency > 3


def _pseudo_simple_at(dirs: list[tuple[int, int]]) -> bool:
    # some edge has a unique direction and the others use exactly two directions
    counts = Counter(dirs)
    for i, d in enumerate(dirs):
        if counts[d] != 1:
            continue
        rest = set(dirs[:i] + dirs[i + 1 :])
        if len(rest) == 2:
            return True
    return False


def classify(c: PPTCurve) -> Classification:
    g = c.graph
    simple = all(g.valency(v) == 3 for v in g.vertices)
    tags = {}
    pseudo = True
    for v in g.vertices:
        if g.valency(v) <= 3:
            continue
        out = c.outgoing(v)
        dirs = [e.direction_from(v) for e, _ in out]
        counts = Counter(dirs)
        tags[v] = {e.id: ("simple" if counts[e.direction_from(v)] == 1 else "multiple") for e, _ in out}
        if not _pseudo_simple_at(dirs):
            pseudo = False
    kind = "simple" if simple else ("pseudo_simple" if pseudo else "neither")
    return Classification(kind, tags)


def is_multiple_at(c: PPTCurve, e: Edge, v: str) -> bool:
    """True when another edge at ``v`` leaves in the same direction as ``e``."""
    if c.graph.valency(v) <= 3:
        return False
    d = e.direction_from(v)
    return sum(1 for f, _ in c.outgoing(v) if f.direction_from(v) == d) > 1


# -- embedded image ----------------------------------------------------------


@dataclass(frozen=True)
class EPTEdge:
    start: RationalPoint
    end: RationalPoint | None  # None for a ray
    direction: tuple[int, int]  # primitive, pointing from start
    weight: int

    @property
    def is_ray(self) -> bool:
        return self.end is None


@dataclass(frozen=True)
class EPTCurve:
    vertices: tuple[RationalPoint, ...]
    edges: tuple[EPTEdge, ...]

    def incident(self, v: RationalPoint) -> list[tuple[EPTEdge, tuple[int, int]]]:
        """Edges at ``v`` with weighted outgoing vectors."""
        out = []
        for e in self.edges:
            if e.start == v:
                out.append((e, scale(e.weight, e.direction)))
            elif e.end == v:
                out.append((e, scale(-e.weight, e.direction)))
        return out

    def unbalanced_vertices(self) -> list[RationalPoint]:
        bad = []
        for v in self.vertices:
            s = (0, 0)
            for _, w in self.incident(v):
                s = add(s, w)
            if s != (0, 0):
                bad.append(v)
        return bad

    def canonical(self) -> tuple:
        return (tuple(sorted(self.vertices)), tuple(sorted(self.edges, key=_ept_key)))

    def translate(self, t) -> "EPTCurve":
        t = as_rational(t)
        return EPTCurve(
            tuple(sorted(add(v, t) for v in self.vertices)),
            tuple(
                sorted(
                    (EPTEdge(add(e.start, t), None if e.end is None else add(e.end, t), e.direction, e.weight)
                     for e in self.edges),
                    key=_ept_key,
                )
            ),
        )


def _ept_key(e: EPTEdge):
    return (e.start, e.end is None, e.end or (0, 0), e.direction, e.weight)


def _param(p, start, u):
    return dot(sub(p, start), u) / Fraction(dot(u, u))


def push_forward(c: PPTCurve) -> EPTCurve:
    """Image graph with weights of overlapping edges summed."""
    segs = []  # (start, primitive u, param extent or None)
    for e in c.edges:
        start = c.positions[e.tail]
        extent = None if e.is_end else e.length * e.weight
        segs.append((start, e.direction, extent, e.weight))
    cuts = [{Fraction(0)} | ({s[2]} if s[2] is not None else set()) for s in segs]

    def inside(t, extent):
        return t >= 0 and (extent is None or t <= extent)

    for i in range(len(segs)):
        p1, u1, x1, _ = segs[i]
        for j in range(i + 1, len(segs)):
            p2, u2, x2, _ = segs[j]
            den = cross(u1, u2)
            d = sub(p2, p1)
            if den != 0:
                s = Fraction(cross(d, u2)) / den
                t = Fraction(cross(d, u1)) / den
                if inside(s, x1) and inside(t, x2):
                    cuts[i].add(s)
                    cuts[j].add(t)
            elif cross(d, u1) == 0:
                for q, ext, uu, target, (pp, ux, xx) in (
                    (p2, x2, u2, i, (p1, u1, x1)),
                    (p1, x1, u1, j, (p2, u2, x2)),
                ):
                    ends = [q] + ([add(q, scale(ext, uu))] if ext is not None else [])
                    for pt in ends:
                        t = _param(pt, pp, ux)
                        if inside(t, xx):
                            cuts[target].add(t)
    pieces: dict = defaultdict(int)
    for (p, u, ext, w), cs in zip(segs, cuts):
        ts = sorted(cs)
        for a, b in zip(ts, ts[1:]):
            A, B = add(p, scale(a, u)), add(p, scale(b, u))
            key = (A, B, u) if A < B else (B, A, (-u[0], -u[1]))
            pieces[key] += w
        if ext is None:
            pieces[(add(p, scale(ts[-1], u)), None, u)] += w
    edges = [EPTEdge(a, b, u, w) for (a, b, u), w in pieces.items()]
    edges = _merge_straight(edges)
    verts = set()
    for e in edges:
        verts.add(e.start)
        if e.end is not None:
            verts.add(e.end)
    return EPTCurve(tuple(sorted(verts)), tuple(sorted(edges, key=_ept_key)))


def _merge_straight(edges: list[EPTEdge]) -> list[EPTEdge]:
    # drop divalent vertices where an edge continues straight with equal weight
    changed = True
    while changed:
        changed = False
        at = defaultdict(list)
        for idx, e in enumerate(edges):
            at[e.start].append(idx)
            if e.end is not None:
                at[e.end].append(idx)
        for v, idxs in at.items():
            if len(idxs) != 2:
                continue
            a, b = (edges[k] for k in idxs)
            if a.weight != b.weight:
                continue
            # orient a to end at v and b to start at v
            if a.start == v and a.end is not None:
                a = EPTEdge(a.end, a.start, (-a.direction[0], -a.direction[1]), a.weight)
            if a.start == v:
                continue
            if b.end == v:
                b = EPTEdge(b.end, b.start, (-b.direction[0], -b.direction[1]), b.weight)
            if b.start != v or a.direction != b.direction:
                continue
            merged = EPTEdge(a.start, b.end, a.direction, a.weight)
            edges = [e for k, e in enumerate(edges) if k not in idxs] + [merged]
            changed = True
            break
    return edges


# -- compactification --------------------------------------------------------


class BoundaryPoint(NamedTuple):
    side: int
    parameter: Fraction


class CornerPoint(NamedTuple):
    vertex: int


def end_parameter(direction: Sequence[int], base: Sequence) -> Fraction:
    """Invariant of a line with the given direction: constant along the line."""
    return Fraction(cross(direction, base))


def compactify_end(c: PPTCurve, eid: str, polygon: LatticePolygon) -> BoundaryPoint | CornerPoint:
    """Where the end ``eid`` closes up in the toric compactification of ``polygon``."""
    e = c.edge(eid)
    if not e.is_end:
        raise ValueError(f"{eid} is not an end")
    side = polygon.side_with_normal(e.direction)
    if side is None:
        scores = [dot(v, e.direction) for v in polygon.vertices]
        return CornerPoint(scores.index(max(scores)))
    return BoundaryPoint(side, end_parameter(e.direction, c.positions[e.tail]))


# -- real structures -----------------------------------------------------------


@dataclass(frozen=True)
class RealMarkedCurve:
    """Marked curve with an involution ``c`` on vertices and edges.

    ``imag`` is the set of mark indices forming the imaginary part of the
    marks; the remaining marks are real.
    """

    base: MarkedCurve
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]
    imag: frozenset = frozenset()

    @classmethod
    def identity(cls, m: MarkedCurve) -> "RealMarkedCurve":
        g = m.curve.graph
        return cls(m, {v: v for v in g.vertices + g.infinite}, {e.id: e.id for e in g.edges}, frozenset())

    @property
    def curve(self) -> PPTCurve:
        return self.base.curve

    def cv(self, v: str) -> str:
        return self.vertex_map.get(v, v)

    def ce(self, e: str) -> str:
        return self.edge_map.get(e, e)

    def mark_image(self, i: int) -> int:
        """Index of the conjugate mark ``c(gamma_i)``."""
        p = self.base.marks[i]
        q = GraphPoint.at_vertex(self.cv(p.vertex)) if p.vertex is not None else GraphPoint.on_edge(self.ce(p.edge), p.offset)
        try:
            return self.base.marks.index(q)
        except ValueError:
            raise InvolutionError(f"image of mark {i} under the involution is not a mark") from None

    def real_vertices(self) -> set[str]:
        g = self.curve.graph
        return {v for v in g.vertices + g.infinite if self.cv(v) == v}

    def real_edges(self) -> set[str]:
        return {e.id for e in self.curve.edges if self.ce(e.id) == e.id}

    def point_is_real(self, p: GraphPoint) -> bool:
        if p.vertex is not None:
            return self.cv(p.vertex) == p.vertex
        return self.ce(p.edge) == p.edge

    def imaginary_components(self) -> list[tuple[set[str], set[str]]]:
        """Connected components of the non-fixed part as (vertices, edges)."""
        g = self.curve.graph
        rv, re_ = self.real_vertices(), self.real_edges()
        G = nx.Graph()
        for e in g.edges:
            if e.id in re_:
                continue
            G.add_node(("e", e.id))
            for v in (e.tail, e.head):
                if v not in rv:
                    G.add_edge(("e", e.id), ("v", v))
        for v in g.vertices + g.infinite:
            if v not in rv:
                G.add_node(("v", v))
        comps = []
        for comp in nx.connected_components(G):
            comps.append(({x for k, x in comp if k == "v"}, {x for k, x in comp if k == "e"}))
        return comps


def validate_involution(r: RealMarkedCurve) -> None:
    c = r.curve
    g = c.graph
    for v in g.vertices + g.infinite:
        w = r.cv(v)
        if r.cv(w) != v:
            raise InvolutionError(f"involution is not of order two at vertex {v}")
        if (v in g.infinite) != (w in g.infinite):
            raise InvolutionError(f"vertex {v} and its image differ in type")
        if v in c.positions and c.positions[v] != c.positions[w]:
            raise InvolutionError(f"vertex {v} and its image have different positions")
    for e in g.edges:
        f = g.edge(r.ce(e.id))
        if r.ce(f.id) != e.id:
            raise InvolutionError(f"involution is not of order two at edge {e.id}")
        if (r.cv(e.tail), r.cv(e.head)) != (f.tail, f.head):
            raise InvolutionError(f"involution does not map edge {e.id} compatibly with its endpoints")
        if (e.weight, e.direction, e.length) != (f.weight, f.direction, f.length):
            raise InvolutionError(f"involution does not commute with the map on edge {e.id}")
    for i in range(len(r.base.marks)):
        j = r.mark_image(i)
        if (i in r.imag) != (j in r.imag):
            raise InvolutionError("real/imaginary split of the marks is not invariant")


def quotient_by_involution(r: RealMarkedCurve) -> MarkedCurve:
    """Identify conjugate halves; merged edges get the summed (even) weight."""
    validate_involution(r)
    c = r.curve
    g = c.graph
    rep_v = {v: min(v, r.cv(v)) for v in g.vertices + g.infinite}
    edges = []
    seen = set()
    for e in g.edges:
        k = min(e.id, r.ce(e.id))
        if k in seen:
            continue
        seen.add(k)
        if k != e.id:
            e = g.edge(k)
        if r.ce(k) == k:
            edges.append(replace(e, tail=rep_v[e.tail], head=rep_v[e.head]))
        else:
            length = e.length if e.is_end else e.length / 2
            edges.append(replace(e, tail=rep_v[e.tail], head=rep_v[e.head], weight=2 * e.weight, length=length))
    verts = tuple(v for v in g.vertices if rep_v[v] == v)
    infs = tuple(v for v in g.infinite if rep_v[v] == v)
    qc = PPTCurve(AbstractGraph(verts, infs, tuple(edges)), {v: c.positions[v] for v in verts})
    marks, mts, used = [], [], set()
    for i, p in enumerate(r.base.marks):
        j = r.mark_image(i)
        if j in used or i in used:
            continue
        used.update({i, j})
        if p.vertex is not None:
            q = GraphPoint.at_vertex(rep_v[p.vertex])
        else:
            k = min(p.edge, r.ce(p.edge))
            e = g.edge(k)
            off = p.offset if (r.ce(k) == k or e.is_end) else p.offset / 2
            q = GraphPoint.on_edge(k, off)
        marks.append(q)
        mts.append(r.base.mt[i])
    return MarkedCurve(qc, tuple(marks), tuple(mts))


def double(m: MarkedCurve, even_edges: Iterable[str], imag: Iterable[int] | None = None) -> RealMarkedCurve:
    """Duplicate the even-weight edges in ``even_edges`` into conjugate halves.

    Duplicated edges carry half the weight.  Marks on the duplicated part
    are doubled; by default the doubled marks form the imaginary part.
    """
    c = m.curve
    g = c.graph
    I = set(even_edges)
    for eid in I:
        e = g.edge(eid)
        if e.weight % 2:
            raise ValueError(f"edge {eid} has odd weight {e.weight}")
    dup_v = set()
    for v in g.vertices + g.infinite:
        inc = g.incident(v)
        if inc and all(e.id in I for e in inc):
            dup_v.add(v)
    prime = lambda x: x + "'"  # noqa: E731
    vmap = {v: v for v in g.vertices + g.infinite}
    emap = {e.id: e.id for e in g.edges}
    new_edges = []
    for e in g.edges:
        if e.id not in I:
            new_edges.append(e)
            continue
        length = e.length if e.is_end else e.length * 2
        half = replace(e, weight=e.weight // 2, length=length)
        twin = replace(
            half,
            id=prime(e.id),
            tail=prime(e.tail) if e.tail in dup_v else e.tail,
            head=prime(e.head) if e.head in dup_v else e.head,
        )
        new_edges.extend([half, twin])
        emap[e.id], emap[twin.id] = twin.id, e.id
    for v in dup_v:
        vmap[v], vmap[prime(v)] = prime(v), v
    verts = tuple(g.vertices) + tuple(prime(v) for v in g.vertices if v in dup_v)
    infs = tuple(g.infinite) + tuple(prime(v) for v in g.infinite if v in dup_v)
    pos = dict(c.positions)
    for v in g.vertices:
        if v in dup_v:
            pos[prime(v)] = c.positions[v]
    nc = PPTCurve(AbstractGraph(verts, infs, tuple(new_edges)), pos)
    marks, mts, doubled = [], [], []
    for p, t in zip(m.marks, m.mt):
        if p.vertex is not None:
            marks.append(p)
            mts.append(t)
            if p.vertex in dup_v:
                doubled.append((len(marks) - 1, GraphPoint.at_vertex(prime(p.vertex)), t))
        else:
            e = g.edge(p.edge)
            off = p.offset if (p.edge not in I or e.is_end) else p.offset * 2
            marks.append(GraphPoint.on_edge(p.edge, off))
            mts.append(t)
            if p.edge in I:
                doubled.append((len(marks) - 1, GraphPoint.on_edge(prime(p.edge), off), t))
    pairs = []
    for i, q, t in doubled:
        marks.append(q)
        mts.append(_conjugate_mt(t))
        pairs.append((i, len(marks) - 1))
    if imag is None:
        imag_set = frozenset(k for pair in pairs for k in pair)
    else:
        imag_set = frozenset(imag)
    return RealMarkedCurve(MarkedCurve(nc, tuple(marks), tuple(mts)), vmap, emap, imag_set)


def _conjugate_mt(t):
    if t == (1, 0):
        return (0, 1)
    if t == (0, 1):
        return (1, 0)
    return t


# -- isomorphism ---------------------------------------------------------------


def _decorated_graph(m: MarkedCurve | PPTCurve) -> nx.MultiGraph:
    if isinstance(m, PPTCurve):
        m = MarkedCurve(m, ())
    c = m.curve
    g = c.graph
    origin = min(c.positions.values()) if c.positions else (Fraction(0), Fraction(0))
    rel = {v: sub(p, origin) for v, p in c.positions.items()}
    vmarks = defaultdict(list)
    emarks = defaultdict(list)
    for i, p in enumerate(m.marks):
        if p.vertex is not None:
            vmarks[p.vertex].append((i, m.mt[i]))
        else:
            emarks[p.edge].append((i, m.mt[i], sub(m.image(i), origin)))
    G = nx.MultiGraph()
    for v in g.vertices:
        G.add_node(v, label=("v", rel[v], tuple(sorted(vmarks[v]))))
    for v in g.infinite:
        e = g.incident(v)[0]
        G.add_node(v, label=("inf", e.direction, e.weight, tuple(sorted(vmarks[v]))))
    for e in g.edges:
        G.add_edge(e.tail, e.head, label=(e.weight, tuple(sorted(emarks[e.id]))))
    return G


def canonical_key(m: MarkedCurve | PPTCurve) -> tuple:
    """Isomorphism invariant used to bucket curves before exact comparison."""
    G = _decorated_graph(m)
    nodes = tuple(sorted(repr(d["label"]) for _, d in G.nodes(data=True)))
    edges = tuple(sorted(repr(d["label"]) for _, _, d in G.edges(data=True)))
    return (nodes, edges)


def isomorphic(a: MarkedCurve | PPTCurve, b: MarkedCurve | PPTCurve) -> bool:
    if canonical_key(a) != canonical_key(b):
        return False
    Ga, Gb = _decorated_graph(a), _decorated_graph(b)
    same = lambda x, y: x["label"] == y["label"]  # noqa: E731
    return nx.is_isomorphic(Ga, Gb, node_match=same, edge_match=lambda x, y: sorted(
        repr(d["label"]) for d in x.values()) == sorted(repr(d["label"]) for d in y.values()))


def deduplicate(items: Iterable, key=lambda x: x) -> list:
    """Keep the first of every isomorphism class (``key`` extracts the curve)."""
    buckets: dict = defaultdict(list)
    out = []
    for it in items:
        m = key(it)
        k = canonical_key(m)
        if any(isomorphic(m, key(o)) for o in buckets[k]):
            continue
        buckets[k].append(it)
        out.append(it)
    return out
