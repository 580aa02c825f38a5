"""Point configurations, the exact type solver, regularity and orientation."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Iterable, NamedTuple, Sequence

import networkx as nx

from .curve import (
    INF,
    AbstractGraph,
    BoundaryPoint,
    Edge,
    GraphPoint,
    MarkedCurve,
    PPTCurve,
    is_multiple_at,
)
from .lattice import (
    LatticePolygon,
    add,
    all_lattice_points,
    as_rational,
    cross,
    dot,
    primitive_decompose,
    rot90,
    scale,
    sub,
)


class NotRegularError(ValueError):
    pass


class OrientationError(ValueError):
    pass


# -- configurations --------------------------------------------------------------


@dataclass(frozen=True)
class Configuration:
    """Ordered points; each is a rational point or a :class:`BoundaryPoint`."""

    points: tuple
    polygon: LatticePolygon | None = None
    direction: tuple | None = None  # stretch direction, if generated
    seed: int | None = None

    def __post_init__(self):
        pts = tuple(p if isinstance(p, BoundaryPoint) else as_rational(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise ValueError("configuration points must be distinct")
        if self.polygon is not None:
            nsides = len(self.polygon.edges())
            for p in pts:
                if isinstance(p, BoundaryPoint) and not 0 <= p.side < nsides:
                    raise ValueError(f"boundary point refers to missing side {p.side}")

    def __len__(self):
        return len(self.points)

    def interior(self) -> list:
        return [p for p in self.points if not isinstance(p, BoundaryPoint)]

    def boundary(self) -> list:
        return [p for p in self.points if isinstance(p, BoundaryPoint)]


@dataclass(frozen=True)
class WeightedConfiguration:
    base: Configuration
    weights: tuple[int, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.base.points):
            raise ValueError("one weight per point")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")

    def is_sub(self, other: "WeightedConfiguration") -> bool:
        return self.base == other.base and all(a <= b for a, b in zip(self.weights, other.weights))


@dataclass(frozen=True)
class Layout:
    interior: int
    boundary: tuple[tuple[int, int], ...] = ()  # (side, count)


def stretch_parameters(polygon: LatticePolygon, seed: int):
    """Slope and gap ratio used by :func:`stretched_config`."""
    x0, y0, x1, y1 = polygon.bbox()
    span = max(x1 - x0, y1 - y0, 1)
    rng = random.Random(seed)
    eps = Fraction(1, 2 * span + 1 + seed)
    ratio = 2 ** (4 + rng.randrange(3))
    base = (Fraction(rng.randrange(-50, 50), 7), Fraction(rng.randrange(-50, 50), 11))
    return eps, ratio, base


def stretched_config(polygon: LatticePolygon, layout: Layout | int, seed: int = 0) -> Configuration:
    """Points on a line of direction (1, -eps) with rapidly growing gaps.

    Boundary points (one end each) are given by the line parameter of an
    end with the side's exterior normal, spaced like the interior points.
    """
    if isinstance(layout, int):
        layout = Layout(layout)
    eps, ratio, base = stretch_parameters(polygon, seed)
    d = (Fraction(1), -eps)
    rng = random.Random(seed * 7919 + 1)
    pts = []
    t = Fraction(0)
    gap = Fraction(1) + Fraction(rng.randrange(1, 100), 101)
    for _ in range(layout.interior):
        pts.append(add(base, scale(t, d)))
        t += gap
        gap *= ratio
    for side, count in layout.boundary:
        for k in range(count):
            pts.append(BoundaryPoint(side, Fraction(rng.randrange(-1000, 1000), 97) + 1000 * k))
    return Configuration(tuple(pts), polygon, d, seed)


# -- exact linear algebra ------------------------------------------------------


def solve_linear(rows: list[dict], rhs: list, n: int):
    """Exact Gaussian elimination on a sparse system ``rows . x = rhs``.

    Returns ``("unique", x)``, ``("inconsistent", None)`` or
    ``("underdetermined", x)`` with free variables set to zero.
    """
    A = [dict(r) for r in rows]
    b = [Fraction(v) for v in rhs]
    pivots = []
    used = [False] * len(A)
    where = {}
    for col in range(n):
        piv = None
        for i in range(len(A)):
            if not used[i] and A[i].get(col, 0) != 0:
                piv = i
                break
        if piv is None:
            continue
        used[piv] = True
        pv = Fraction(A[piv][col])
        if pv != 1:
            A[piv] = {k: Fraction(v) / pv for k, v in A[piv].items()}
            b[piv] /= pv
        for i in range(len(A)):
            if i != piv and A[i].get(col, 0) != 0:
                f = A[i][col]
                row = A[i]
                for k, v in A[piv].items():
                    nv = row.get(k, 0) - f * v
                    if nv == 0:
                        row.pop(k, None)
                    else:
                        row[k] = nv
                b[i] -= f * b[piv]
        where[col] = piv
        pivots.append(col)
    for i in range(len(A)):
        if not used[i] and b[i] != 0:
            return "inconsistent", None
    x = [Fraction(0)] * n
    for col, i in where.items():
        x[col] = b[i]
    return ("unique" if len(pivots) == n else "underdetermined"), x


# -- combinatorial types -----------------------------------------------------------


class MarkSlot(NamedTuple):
    """Where a mark sits in a type: inside an edge, or at a (possibly univalent) vertex."""

    kind: str  # "edge" or "vertex"
    ident: str


@dataclass(frozen=True)
class CombinatorialType:
    """Graph with weights and directions but no lengths or positions.

    Finite edges carry ``length=None``.
    """

    vertices: tuple[str, ...]
    infinite: tuple[str, ...]
    edges: tuple[Edge, ...]
    marks: tuple[MarkSlot, ...]

    @property
    def graph(self) -> AbstractGraph:
        return AbstractGraph(self.vertices, self.infinite, self.edges)

    def balanced(self) -> bool:
        g = self.graph
        for v in self.vertices:
            s = (0, 0)
            for e in g.incident(v):
                s = add(s, scale(e.weight, e.direction_from(v)))
            if s != (0, 0):
                return False
        return True

    def end_sum_zero(self) -> bool:
        s = (0, 0)
        for e in self.edges:
            if e.length is INF:
                s = add(s, e.vector)
        return s == (0, 0)

    @classmethod
    def of(cls, m: MarkedCurve) -> "CombinatorialType":
        g = m.curve.graph
        edges = tuple(Edge(e.id, e.tail, e.head, INF if e.is_end else None, e.weight, e.direction) for e in g.edges)
        slots = tuple(MarkSlot("vertex", p.vertex) if p.vertex is not None else MarkSlot("edge", p.edge) for p in m.marks)
        return cls(g.vertices, g.infinite, edges, slots)


def _pieces(g: AbstractGraph, marked_vertices: set, edge_marks: dict) -> nx.Graph:
    # nodes: unmarked vertices and pieces of edges cut by marks
    G = nx.Graph()
    for v in g.vertices + g.infinite:
        if v not in marked_vertices:
            G.add_node(("v", v))
    for e in g.edges:
        k = edge_marks.get(e.id, 0)
        ends = [e.tail, e.head]
        if k == 0:
            pieces = [("p", e.id, 0)]
            G.add_node(pieces[0])
            for x in ends:
                if x not in marked_vertices:
                    G.add_edge(pieces[0], ("v", x))
        else:
            for i in range(k + 1):
                G.add_node(("p", e.id, i))
            if e.tail not in marked_vertices:
                G.add_edge(("p", e.id, 0), ("v", e.tail))
            if e.head not in marked_vertices:
                G.add_edge(("p", e.id, k), ("v", e.head))
    return G


def regularity_defects(g: AbstractGraph, marks: Iterable[MarkSlot | GraphPoint]) -> list[str]:
    marked_v, emarks = set(), defaultdict(int)
    for m in marks:
        if isinstance(m, GraphPoint):
            if m.vertex is not None:
                marked_v.add(m.vertex)
            else:
                emarks[m.edge] += 1
        elif m.kind == "vertex":
            marked_v.add(m.ident)
        else:
            emarks[m.ident] += 1
    G = _pieces(g, marked_v, emarks)
    inf = set(g.infinite)
    problems = []
    for comp in nx.connected_components(G):
        sub_g = G.subgraph(comp)
        if sub_g.number_of_edges() != sub_g.number_of_nodes() - 1:
            problems.append(f"component {sorted(map(str, comp))[:3]} is not a tree")
        ends = [x for k, *x in comp if k == "v" and x[0] in inf]
        if len(ends) != 1:
            problems.append(f"component {sorted(map(str, comp))[:3]} has {len(ends)} unmarked ends")
    return problems


def check_regular(m: MarkedCurve) -> bool:
    """Every component of the curve minus its marks is a tree with exactly one unmarked end."""
    return not regularity_defects(m.curve.graph, m.marks)


def solve_type(t: CombinatorialType, cfg: Configuration | Sequence, order: Sequence[int] | None = None):
    """The unique marked curve of type ``t`` through ``cfg``, or ``None``.

    ``order`` permutes the equations before elimination; the answer does not
    depend on it.
    """
    curve, _ = solve_type_detailed(t, cfg, order)
    return curve


def solve_type_detailed(t: CombinatorialType, cfg, order=None):
    points = cfg.points if isinstance(cfg, Configuration) else tuple(
        p if isinstance(p, BoundaryPoint) else as_rational(p) for p in cfg)
    if len(points) != len(t.marks):
        raise ValueError(f"type has {len(t.marks)} marks but {len(points)} points were given")
    defects = regularity_defects(t.graph, t.marks)
    if defects:
        raise NotRegularError("; ".join(defects))
    g = t.graph
    idx = {}

    def var(key):
        if key not in idx:
            idx[key] = len(idx)
        return idx[key]

    for v in t.vertices:
        var(("x", v))
        var(("y", v))
    for e in t.edges:
        if e.length is not INF:
            var(("L", e.id))
    rows, rhs = [], []
    for e in t.edges:
        if e.length is INF:
            continue
        wx, wy = e.vector
        # head - tail - L * w * u = 0
        rows.append({var(("x", e.head)): 1, var(("x", e.tail)): -1, var(("L", e.id)): -wx})
        rhs.append(0)
        rows.append({var(("y", e.head)): 1, var(("y", e.tail)): -1, var(("L", e.id)): -wy})
        rhs.append(0)
    inf = set(t.infinite)
    for j, (slot, p) in enumerate(zip(t.marks, points)):
        if slot.kind == "vertex" and slot.ident in inf:
            if not isinstance(p, BoundaryPoint):
                return None, f"mark {j} is at a univalent vertex but point {j} is interior"
            e = g.incident(slot.ident)[0]
            # cross(u, tail) = param
            u = e.direction
            rows.append({var(("x", e.tail)): -u[1], var(("y", e.tail)): u[0]})
            rhs.append(p.parameter)
            continue
        if isinstance(p, BoundaryPoint):
            return None, f"point {j} is on the boundary but mark {j} is not at a univalent vertex"
        if slot.kind == "vertex":
            rows.append({var(("x", slot.ident)): 1})
            rhs.append(p[0])
            rows.append({var(("y", slot.ident)): 1})
            rhs.append(p[1])
        else:
            e = g.edge(slot.ident)
            wx, wy = e.vector
            tv = var(("t", j))
            rows.append({var(("x", e.tail)): 1, tv: wx})
            rhs.append(p[0])
            rows.append({var(("y", e.tail)): 1, tv: wy})
            rhs.append(p[1])
    if order is not None:
        perm = list(order)
        rows = [rows[i] for i in perm]
        rhs = [rhs[i] for i in perm]
    status, x = solve_linear(rows, rhs, len(idx))
    if status == "inconsistent":
        return None, "no solution"
    if status == "underdetermined":
        return None, "solution is not unique (degenerate configuration)"
    val = lambda key: x[idx[key]]  # noqa: E731
    lengths = {}
    for e in t.edges:
        if e.length is INF:
            continue
        L = val(("L", e.id))
        if L <= 0:
            return None, f"edge {e.id} gets length {L}"
        lengths[e.id] = L
    marks = []
    for j, slot in enumerate(t.marks):
        if slot.kind == "vertex":
            marks.append(GraphPoint.at_vertex(slot.ident))
            continue
        tj = val(("t", j))
        e = g.edge(slot.ident)
        if tj <= 0 or (e.length is not INF and tj >= lengths[e.id]):
            return None, f"mark {j} falls outside the interior of edge {e.id}"
        marks.append(GraphPoint.on_edge(e.id, tj))
    positions = {v: (val(("x", v)), val(("y", v))) for v in t.vertices}
    edges = tuple(e if e.length is INF else Edge(e.id, e.tail, e.head, lengths[e.id], e.weight, e.direction)
                  for e in t.edges)
    c = PPTCurve(AbstractGraph(t.vertices, t.infinite, edges), positions)
    return MarkedCurve(c, tuple(marks)), "ok"


def equation_count(t: CombinatorialType) -> int:
    n = 2 * sum(1 for e in t.edges if e.length is not INF)
    for slot in t.marks:
        n += 1 if (slot.kind == "vertex" and slot.ident in set(t.infinite)) else 2
    return n


# -- preimages -----------------------------------------------------------------------


def preimages(c: PPTCurve, x) -> list[GraphPoint]:
    """All points of the curve mapped to ``x`` (vertices and edge interiors)."""
    x = as_rational(x)
    out = []
    for v in c.graph.vertices:
        if c.positions[v] == x:
            out.append(GraphPoint.at_vertex(v))
    for e in c.edges:
        rel = sub(x, c.positions[e.tail])
        if cross(e.direction, rel) != 0:
            continue
        s = dot(rel, e.direction) / Fraction(dot(e.direction, e.direction) * e.weight)
        if s > 0 and (e.is_end or s < e.length):
            out.append(GraphPoint.on_edge(e.id, s))
    return out


def marks_exhaust_preimages(m: MarkedCurve, cfg: Configuration) -> bool:
    wanted = set(m.marks)
    for p in cfg.points:
        if isinstance(p, BoundaryPoint):
            continue
        for q in preimages(m.curve, p):
            if q not in wanted:
                return False
    return True


# -- orientation -------------------------------------------------------------------------


@dataclass(frozen=True)
class Orientation:
    outgoing: dict  # unmarked finite vertex -> edge id leading towards the unmarked end
    incoming: dict  # unmarked finite vertex -> tuple of the other edge ids

    def merging(self, v: str) -> tuple:
        return self.incoming[v]


def orient_components(m: MarkedCurve) -> Orientation:
    """Orient every component of the curve minus the marks away from the marks.

    The flood starts at the unmarked end: at each reached vertex the edge we
    came along is outgoing and all others are incoming.
    """
    defects = regularity_defects(m.curve.graph, m.marks)
    if defects:
        raise NotRegularError("; ".join(defects))
    g = m.curve.graph
    marked_v = {p.vertex for p in m.marks if p.vertex is not None}
    cut_edges = {p.edge for p in m.marks if p.edge is not None}
    outgoing, incoming = {}, {}
    for u in g.infinite:
        if u in marked_v:
            continue
        e = g.incident(u)[0]
        if e.id in cut_edges:
            continue
        stack = [(e.tail, e)]
        while stack:
            v, via = stack.pop()
            if v in marked_v or v in g.infinite:
                continue
            if v in outgoing:
                raise NotRegularError(f"vertex {v} reached twice")
            outgoing[v] = via.id
            others = [f for f in g.incident(v) if f.id != via.id]
            incoming[v] = tuple(f.id for f in others)
            for f in others:
                if f.id in cut_edges:
                    continue
                stack.append((f.other(v), f))
    c = m.curve
    for v, eid in outgoing.items():
        if is_multiple_at(c, g.edge(eid), v):
            raise OrientationError(f"edge {eid} leaving vertex {v} is multiple")
    missing = [v for v in g.vertices if v not in marked_v and v not in outgoing]
    if missing:
        raise NotRegularError(f"vertices {missing} are not reached from an unmarked end")
    return Orientation(outgoing, incoming)


# -- genericity ----------------------------------------------------------------------------


@dataclass(frozen=True)
class GenericityResult:
    status: str  # "generic", "witness" or "inconclusive"
    examined: int = 0
    witness: CombinatorialType | None = None
    points: tuple = ()


def segment_normals(polygon: LatticePolygon) -> list[tuple[int, int]]:
    """Primitive directions orthogonal to integral segments of the polygon."""
    pts = all_lattice_points(polygon)
    dirs = set()
    for a in pts:
        for b in pts:
            if a < b:
                p = primitive_decompose(sub(b, a)).primitive
                n = rot90(p)
                dirs.add(n)
                dirs.add((-n[0], -n[1]))
    return sorted(dirs)


def _trees(n: int):
    # unrooted trivalent trees with leaves 0..n-1, as lists of (a, b) edges;
    # internal nodes are numbered from n
    if n < 3:
        return
    base = [(0, n), (1, n), (2, n)]

    def grow(edges, k, nxt):
        if k == n:
            yield edges
            return
        for i, (a, b) in enumerate(edges):
            new = edges[:i] + edges[i + 1 :] + [(a, nxt), (b, nxt), (k, nxt)]
            yield from grow(new, k + 1, nxt + 1)

    yield from grow(base, 3, n + 1)


def _tree_type(tree_edges, n, vectors):
    """Turn a labelled tree plus end vectors into a type; None if some edge degenerates."""
    adj = defaultdict(list)
    for a, b in tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    leaves = range(n)

    def side_sum(a, b):
        # sum of end vectors (pointing outwards) of leaves on b's side of edge a-b
        total = (0, 0)
        stack, seen = [b], {a, b}
        while stack:
            x = stack.pop()
            if x < n:
                total = add(total, vectors[x])
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return total

    verts = tuple(f"n{x}" for x in sorted(adj) if x >= n)
    edges, infinite = [], []
    for k, (a, b) in enumerate(tree_edges):
        if a < n or b < n:
            leaf, inner = (a, b) if a < n else (b, a)
            d = primitive_decompose(vectors[leaf])
            infinite.append(f"l{leaf}")
            edges.append(Edge(f"end{leaf}", f"n{inner}", f"l{leaf}", INF, d.weight, d.primitive))
        else:
            v = side_sum(a, b)
            if v == (0, 0):
                return None
            d = primitive_decompose(v)
            edges.append(Edge(f"i{k}", f"n{a}", f"n{b}", None, d.weight, d.primitive))
    marks = tuple(MarkSlot("edge", f"end{i}") for i in leaves)
    return CombinatorialType(verts, tuple(infinite), tuple(edges), marks)


def _nondegenerate(t: CombinatorialType) -> bool:
    g = t.graph
    for v in t.vertices:
        dirs = [e.direction_from(v) for e in g.incident(v)]
        if all(cross(dirs[0], d) == 0 for d in dirs):
            return False
    return True


def check_delta_generic(cfg: WeightedConfiguration, polygon: LatticePolygon, budget: int = 10000) -> GenericityResult:
    """Bounded search for an end-marked rational curve through a subconfiguration.

    Two-ended "curves" are straight lines through two distinct points.  For
    three or more ends every labelled trivalent tree with end vectors from
    the admissible directions and weights is tried; degenerations (zero
    internal lengths) count as witnesses.  Only interior points are used.
    """
    interior = [i for i, p in enumerate(cfg.base.points) if not isinstance(p, BoundaryPoint)]
    pts = cfg.base.points
    dirs = segment_normals(polygon)
    maxw = max((primitive_decompose(sub(b, a)).weight for a, b in polygon.edges()), default=1)
    nb = sum(primitive_decompose(sub(b, a)).weight for a, b in polygon.edges()) if polygon.dim == 2 else 0
    mmax = max(nb, 2)
    examined = 0
    # lines
    for i in interior:
        for j in interior:
            if i < j and cfg.weights[i] >= 1 and cfg.weights[j] >= 1:
                examined += 1
                if examined > budget:
                    return GenericityResult("inconclusive", examined - 1)
                dv = sub(pts[j], pts[i])
                for u in dirs:
                    if cross(u, dv) == 0:
                        return GenericityResult("witness", examined, None, (pts[i], pts[j]))
    options = [scale(w, u) for u in dirs for w in range(1, maxw + 1)]
    for m in range(3, mmax + 1):
        for combo in combinations_with_replacement(interior, m):
            counts = defaultdict(int)
            for i in combo:
                counts[i] += 1
            if any(counts[i] > cfg.weights[i] for i in counts):
                continue
            for vecs in _zero_sum_tuples(options, m):
                for tree in _trees(m):
                    examined += 1
                    if examined > budget:
                        return GenericityResult("inconclusive", examined - 1)
                    t = _tree_type(tree, m, vecs)
                    if t is None or not _nondegenerate(t):
                        continue
                    hit = _witness_solve(t, [pts[i] for i in combo])
                    if hit is not None:
                        return GenericityResult("witness", examined, hit, tuple(pts[i] for i in combo))
    return GenericityResult("generic", examined)


def _zero_sum_tuples(options, m):
    if m == 0:
        return
    for head in product(options, repeat=m - 1):
        s = (0, 0)
        for v in head:
            s = add(s, v)
        last = (-s[0], -s[1])
        if last in options:
            yield head + (last,)


def _witness_solve(t: CombinatorialType, points):
    # like solve_type but zero internal lengths are allowed
    idx = {}

    def var(key):
        if key not in idx:
            idx[key] = len(idx)
        return idx[key]

    rows, rhs = [], []
    g = t.graph
    for v in t.vertices:
        var(("x", v)), var(("y", v))
    for e in t.edges:
        if e.length is INF:
            continue
        wx, wy = e.vector
        rows.append({var(("x", e.head)): 1, var(("x", e.tail)): -1, var(("L", e.id)): -wx})
        rhs.append(0)
        rows.append({var(("y", e.head)): 1, var(("y", e.tail)): -1, var(("L", e.id)): -wy})
        rhs.append(0)
    for j, (slot, p) in enumerate(zip(t.marks, points)):
        e = g.edge(slot.ident)
        wx, wy = e.vector
        tv = var(("t", j))
        rows.append({var(("x", e.tail)): 1, tv: wx})
        rhs.append(p[0])
        rows.append({var(("y", e.tail)): 1, tv: wy})
        rhs.append(p[1])
    status, x = solve_linear(rows, rhs, len(idx))
    if status != "unique":
        return None
    for key, i in idx.items():
        if key[0] == "L" and x[i] < 0:
            return None
        if key[0] == "t" and x[i] <= 0:
            return None
    return t
