"""Newton polygons, dual subdivisions and tropicalization.

Sign convention: the support function is f(x) = max_w(<w, x> + c_w) and
nu(w) = -c_w.  On the cell dual to a vertex V the function nu is affine
with gradient +V, i.e. nu(w) = <w, V> - f(V).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

import networkx as nx

from .curve import EPTCurve, EPTEdge, PPTCurve, push_forward
from .lattice import (
    LatticePolygon,
    add,
    as_rational,
    cross,
    dot,
    lattice_volume,
    minkowski_sum,
    primitive_decompose,
    rot90,
    scale,
    sort_by_angle,
    sub,
)
from .report import ValidationReport


class DualityError(ValueError):
    pass


@dataclass(frozen=True)
class PLFunction:
    carrier: LatticePolygon
    values: Mapping[tuple[int, int], Fraction]

    def __call__(self, w):
        return self.values[tuple(w)]


@dataclass(frozen=True)
class DualSubdivision:
    polygon: LatticePolygon
    cells: tuple[LatticePolygon, ...]
    nu: PLFunction
    # vertex of T dual to each cell, when known
    duals: tuple = field(default=(), compare=False)

    def canonical(self) -> tuple:
        return (self.polygon.vertices, tuple(sorted(c.vertices for c in self.cells)))


@dataclass(frozen=True)
class ValuatedPolynomial:
    valuation: Mapping[tuple[int, int], Fraction]  # the exponent nu(w) of the leading term
    initial: Mapping[tuple[int, int], tuple[Fraction, Fraction]] | None = None

    @property
    def support(self) -> list[tuple[int, int]]:
        return sorted(self.valuation)


def newton_polygon(c: PPTCurve) -> LatticePolygon:
    """Polygon whose sides are the rotated weighted end vectors, canonically translated."""
    vecs = [rot90(e.vector) for e in c.graph.ends()]
    if not vecs:
        raise DualityError("curve has no ends")
    return LatticePolygon.from_edge_vectors(vecs).canonical()


def _sectors(t: EPTCurve):
    # every vertex: incident edges sorted by angle, sector i lies between edge i and i+1
    around = {}
    for v in t.vertices:
        inc = t.incident(v)
        key = {}
        for e, w in inc:
            key.setdefault(primitive_decompose(w).primitive, (e, w))
        ordered = sort_by_angle(list(key))
        around[v] = [(d, key[d][0], key[d][1]) for d in ordered]
    return around


def _regions(t: EPTCurve):
    """Label plane regions by (vertex, sector index) and solve for their gradients."""
    if not t.vertices:
        raise DualityError("curve has no vertices")
    if t.unbalanced_vertices():
        raise DualityError(f"unbalanced vertices {t.unbalanced_vertices()}")
    around = _sectors(t)
    uf = nx.utils.UnionFind()
    nodes = [(v, i) for v in t.vertices for i in range(len(around[v]))]
    for n in nodes:
        uf[n]
    # sector i at v starts at edge i (ccw) and ends at edge i+1
    pos = {v: {d: i for i, (d, _, _) in enumerate(lst)} for v, lst in around.items()}
    for e in t.edges:
        if e.end is None:
            continue
        a, b, d = e.start, e.end, e.direction
        nd = (-d[0], -d[1])
        ia, ib = pos[a][d], pos[b][nd]
        na, nb = len(around[a]), len(around[b])
        # left of a->b: sector starting at d at a; sector ending at -d at b
        uf.union((a, ia), (b, (ib - 1) % nb))
        uf.union((b, ib), (a, (ia - 1) % na))
    # gradients: crossing edge d at v from sector i-1 into sector i adds w*rot90(d)
    grad: dict = {}
    adj = defaultdict(list)
    for v, lst in around.items():
        n = len(lst)
        for i, (d, _, w) in enumerate(lst):
            src, dst = uf[(v, (i - 1) % n)], uf[(v, i)]
            step = rot90(w)
            adj[src].append((dst, step))
            adj[dst].append((src, (-step[0], -step[1])))
    root = uf[nodes[0]]
    grad[root] = (0, 0)
    stack = [root]
    while stack:
        r = stack.pop()
        for s, step in adj[r]:
            g = add(grad[r], step)
            if s in grad:
                if grad[s] != g:
                    raise DualityError("inconsistent gradients; is the curve connected and balanced?")
            else:
                grad[s] = g
                stack.append(s)
    if len(grad) != len({uf[n] for n in nodes}):
        raise DualityError("curve image is disconnected")
    return around, uf, grad


def _support_values(t: EPTCurve, grad, uf, around):
    # f at vertices, propagated along finite edges
    f = {t.vertices[0]: Fraction(0)}
    region_at = {v: [uf[(v, i)] for i in range(len(around[v]))] for v in t.vertices}
    G = nx.Graph()
    G.add_nodes_from(t.vertices)
    for e in t.edges:
        if e.end is not None:
            G.add_edge(e.start, e.end)
    if not nx.is_connected(G):
        raise DualityError("curve image is disconnected")
    for a, b in nx.bfs_edges(G, t.vertices[0]):
        common = set(region_at[a]) & set(region_at[b])
        r = sorted(common, key=repr)[0]
        f[b] = f[a] + dot(grad[r], sub(b, a))
    return f, region_at


def dual_subdivision(t: EPTCurve) -> DualSubdivision:
    around, uf, grad = _regions(t)
    f, region_at = _support_values(t, grad, uf, around)
    raw_cells = []
    nu_raw = {}
    for v in t.vertices:
        pts = [grad[r] for r in region_at[v]]
        for r in region_at[v]:
            val = dot(grad[r], v) - f[v]
            w = grad[r]
            if w in nu_raw and nu_raw[w] != val:
                raise DualityError("support function is not single valued")
            nu_raw[w] = val
        raw_cells.append((v, LatticePolygon.hull(pts)))
    poly = LatticePolygon.hull(nu_raw)
    shift = (-poly.vertices[0][0], -poly.vertices[0][1])
    nu = {add(w, shift): val for w, val in nu_raw.items()}
    cells = tuple(c.translate(shift) for _, c in raw_cells)
    duals = tuple(v for v, _ in raw_cells)
    canon = poly.translate(shift)
    return DualSubdivision(canon, cells, PLFunction(canon, nu), duals)


def _argmax_set(nu: Mapping, x) -> list:
    best, arg = None, []
    for w, val in nu.items():
        s = dot(w, x) - val
        if best is None or s > best:
            best, arg = s, [w]
        elif s == best:
            arg.append(w)
    return arg


def _affine_through(cell: LatticePolygon, nu: Mapping):
    a, b, c = cell.vertices[:3]
    den = cross(sub(b, a), sub(c, a))
    za, zb, zc = nu[a], nu[b], nu[c]
    gx = (Fraction(zb - za) * (c[1] - a[1]) - Fraction(zc - za) * (b[1] - a[1])) / den
    gy = (Fraction(zc - za) * (b[0] - a[0]) - Fraction(zb - za) * (c[0] - a[0])) / den
    k = za - gx * a[0] - gy * a[1]
    return gx, gy, k


def verify_duality(t: EPTCurve, s: DualSubdivision) -> ValidationReport:
    rep = ValidationReport()
    nu = s.nu.values
    for r in ("face-bijection", "orthogonality", "weight-length", "convexity", "volume-sum"):
        rep.check(r)
    # each EPT curve is only defined up to translation relative to nu, so compare
    # via the gradient of nu on each cell
    cell_keys = {}
    for i, cell in enumerate(s.cells):
        if cell.dim != 2:
            rep.add("face-bijection", f"cell {i}", "cell is not two-dimensional")
            continue
        if any(v not in nu for v in cell.vertices):
            rep.add("convexity", f"cell {i}", "nu missing at a cell vertex")
            continue
        gx, gy, k = _affine_through(cell, nu)
        for v in cell.vertices:
            if gx * v[0] + gy * v[1] + k != nu[v]:
                rep.add("convexity", f"cell {i}", "nu is not affine on the cell")
        for w, val in nu.items():
            lin = gx * w[0] + gy * w[1] + k
            if val < lin or (val == lin and not cell.contains(w)):
                rep.add("convexity", f"cell {i}", f"nu is not strictly convex at {w}")
                break
        cell_keys.setdefault((gx, gy), []).append(i)
    # the gradient of nu on a cell is the dual vertex, up to one common translation
    vertex_cells = {}
    if t.vertices and cell_keys:
        offsets = None
        for (gx, gy) in cell_keys:
            off = sub(t.vertices[0], (gx, gy))
            ok = True
            for v in t.vertices:
                if sub(v, off) not in cell_keys:
                    ok = False
                    break
            if ok:
                offsets = off
                break
        if offsets is None:
            rep.add("face-bijection", "vertices", "vertices of the curve do not match cell gradients")
        else:
            for v in t.vertices:
                idx = cell_keys.get(sub(v, offsets), [])
                if len(idx) != 1:
                    rep.add("face-bijection", f"vertex {v}", f"{len(idx)} cells dual to the vertex")
                else:
                    vertex_cells[v] = idx[0]
            if len(t.vertices) != len(s.cells):
                rep.add("face-bijection", "cells", f"{len(s.cells)} cells for {len(t.vertices)} vertices")
            for e in t.edges:
                x = add(e.start, e.direction) if e.end is None else scale(Fraction(1, 2), add(e.start, e.end))
                arg = _argmax_set(nu, sub(x, offsets))
                seg = LatticePolygon.hull(arg)
                if seg.dim != 1:
                    rep.add("face-bijection", f"edge {e.start}->{e.end}", "no dual edge")
                    continue
                d = sub(seg.vertices[1], seg.vertices[0])
                if dot(d, e.direction) != 0:
                    rep.add("orthogonality", f"edge {e.start}->{e.end}", "dual edge is not orthogonal")
                if lattice_volume(seg) != e.weight:
                    rep.add("weight-length", f"edge {e.start}->{e.end}",
                            f"weight {e.weight} but dual lattice length {lattice_volume(seg)}")
    total = sum(lattice_volume(c) for c in s.cells)
    if total != lattice_volume(s.polygon):
        rep.add("volume-sum", "cells", f"cell volumes sum to {total}, polygon has {lattice_volume(s.polygon)}")
    return rep


def vertex_polygon(c: PPTCurve, v: str) -> LatticePolygon:
    """Polygon assembled from the rotated outgoing vectors at ``v``."""
    return LatticePolygon.from_edge_vectors([rot90(w) for _, w in c.outgoing(v)]).canonical()


def vertex_cell_decomposition(c: PPTCurve, V) -> list[LatticePolygon]:
    """Minkowski summands of the dual cell at the image point ``V``."""
    V = as_rational(V)
    parts = []
    for v in c.graph.vertices:
        if c.positions[v] == V:
            parts.append(vertex_polygon(c, v))
    for e in c.edges:
        a = c.positions[e.tail]
        rel = sub(V, a)
        if cross(e.direction, rel) != 0:
            continue
        t = dot(rel, e.direction) / Fraction(dot(e.direction, e.direction))
        limit = None if e.is_end else e.length * e.weight
        if t > 0 and (limit is None or t < limit):
            parts.append(LatticePolygon.hull([(0, 0), scale(e.weight, rot90(e.direction))]).canonical())
    if not parts:
        raise DualityError(f"{V} is not on the curve image")
    return parts


def dual_cell_at(c: PPTCurve, V) -> LatticePolygon:
    return minkowski_sum(vertex_cell_decomposition(c, V)).canonical()


def is_nodal(s: DualSubdivision) -> bool:
    return all(cell.is_triangle() or cell.is_parallelogram() for cell in s.cells)


def simple_lift(t: EPTCurve) -> PPTCurve:
    """Lift a nodal EPT curve: parallelogram vertices become transverse crossings."""
    from .curve import INF, AbstractGraph, Edge

    s = dual_subdivision(t)
    if not is_nodal(s):
        raise DualityError("subdivision is not nodal")
    crossing = {v for v, cell in zip(s.duals, s.cells) if cell.is_parallelogram()}
    names = {v: f"v{i}" for i, v in enumerate(sorted(v for v in t.vertices if v not in crossing))}
    used = set()
    edges, infinite = [], []
    # walk chains starting at trivalent vertices
    for start in sorted(names):
        for e, w in t.incident(start):
            if id(e) in used:
                continue
            d = primitive_decompose(w).primitive
            cur, total, edge = start, Fraction(0), e
            while True:
                used.add(id(edge))
                if edge.end is None:
                    hid = f"{names[start]}.{len(infinite)}@inf"
                    infinite.append(hid)
                    edges.append(Edge(f"e{len(edges)}", names[start], hid, INF, edge.weight, d))
                    break
                nxt = edge.end if edge.start == cur else edge.start
                total += dot(sub(nxt, cur), d) / Fraction(dot(d, d))
                if nxt in crossing:
                    cont = [f for f, fw in t.incident(nxt) if primitive_decompose(fw).primitive == d]
                    edge, cur = cont[0], nxt
                    continue
                edges.append(Edge(f"e{len(edges)}", names[start], names[nxt], total / edge.weight, edge.weight, d))
                used.add(id(edge))
                break
    # finite edges were walked from both ends; keep one copy
    seen, uniq = set(), []
    for e in edges:
        if e.length is INF:
            uniq.append(e)
            continue
        key = frozenset([(e.tail, e.direction), (e.head, (-e.direction[0], -e.direction[1]))])
        if key in seen:
            continue
        seen.add(key)
        uniq.append(e)
    uniq = [Edge(f"e{i}", e.tail, e.head, e.length, e.weight, e.direction) for i, e in enumerate(uniq)]
    g = AbstractGraph(tuple(names[v] for v in sorted(names)), tuple(infinite), tuple(uniq))
    return PPTCurve(g, {names[v]: v for v in names})


# -- tropicalization -----------------------------------------------------------


def _lower_faces(points: dict):
    pts = sorted(points)
    faces = {}
    for a, b, c in combinations(pts, 3):
        den = cross(sub(b, a), sub(c, a))
        if den == 0:
            continue
        cell = LatticePolygon.hull([a, b, c])
        gx, gy, k = _affine_through(cell, points)
        on = []
        ok = True
        for w in pts:
            lin = gx * w[0] + gy * w[1] + k
            if points[w] < lin:
                ok = False
                break
            if points[w] == lin:
                on.append(w)
        if ok:
            faces[(gx, gy)] = tuple(sorted(on))
    return faces


def tropicalize(p: ValuatedPolynomial) -> tuple[EPTCurve, DualSubdivision]:
    """Corner locus of max(<w, x> - nu(w)) with its regular subdivision."""
    nu = {tuple(w): Fraction(v) for w, v in p.valuation.items()}
    if len(nu) < 2:
        raise DualityError("curve is empty")
    poly = LatticePolygon.hull(nu)
    if poly.dim == 1:
        return _tropicalize_1d(nu, poly)
    faces = _lower_faces(nu)
    cells = {V: LatticePolygon.hull(on) for V, on in faces.items()}
    # edges of cells, shared or on the boundary
    edge_owner = defaultdict(list)
    for V, cell in cells.items():
        for a, b in cell.edges():
            edge_owner[frozenset((a, b))].append((V, (a, b)))
    edges = []
    for key, owners in edge_owner.items():
        (V, (a, b)) = owners[0]
        w = lattice_volume(LatticePolygon.hull([a, b]))
        if len(owners) == 2:
            W = owners[1][0]
            d = primitive_decompose_rational(sub(W, V))
            edges.append(EPTEdge(V, W, d, w) if V < W else EPTEdge(W, V, (-d[0], -d[1]), w))
        else:
            normal = primitive_decompose((b[1] - a[1], a[0] - b[0])).primitive
            edges.append(EPTEdge(V, None, normal, w))
    t = EPTCurve(tuple(sorted(cells)), tuple(sorted(edges, key=lambda e: (e.start, e.end is None, e.end or (0, 0), e.direction))))
    values = {w: v for w, v in nu.items()}
    shift = (-poly.vertices[0][0], -poly.vertices[0][1])
    s = DualSubdivision(
        poly.translate(shift),
        tuple(cells[V].translate(shift) for V in sorted(cells)),
        PLFunction(poly.translate(shift), {add(w, shift): v for w, v in values.items()}),
        tuple(sorted(cells)),
    )
    return t, s


def primitive_decompose_rational(v) -> tuple[int, int]:
    """Primitive integer direction of a nonzero rational vector."""
    x, y = Fraction(v[0]), Fraction(v[1])
    den = x.denominator * y.denominator
    return primitive_decompose((int(x * den), int(y * den))).primitive


def _tropicalize_1d(nu, poly):
    # parallel lines, each encoded as two opposite rays from a base point
    a, b = poly.vertices
    d = primitive_decompose(sub(b, a)).primitive
    pts = sorted(nu, key=lambda w: dot(sub(w, a), d))
    lower = []
    for w in pts:
        while len(lower) >= 2:
            p, q = lower[-2], lower[-1]
            tp, tq, tw = (dot(sub(x, a), d) for x in (p, q, w))
            if (nu[q] - nu[p]) * (tw - tp) >= (nu[w] - nu[p]) * (tq - tp):
                lower.pop()
            else:
                break
        lower.append(w)
    verts, edges, cells = [], [], []
    n = rot90(d)
    dd = dot(d, d)
    for p, q in zip(lower, lower[1:]):
        k = dot(sub(q, p), d) // dd
        # points x with <q-p, x> = nu(q) - nu(p)
        base = scale(Fraction(nu[q] - nu[p]) / (k * dd), d)
        base = as_rational(base)
        verts.append(base)
        w = primitive_decompose(sub(q, p)).weight
        edges.append(EPTEdge(base, None, n, w))
        edges.append(EPTEdge(base, None, (-n[0], -n[1]), w))
        cells.append(LatticePolygon.hull([p, q]))
    shift = (-poly.vertices[0][0], -poly.vertices[0][1])
    t = EPTCurve(tuple(sorted(verts)), tuple(edges))
    s = DualSubdivision(
        poly.translate(shift),
        tuple(c.translate(shift) for c in cells),
        PLFunction(poly.translate(shift), {add(w, shift): v for w, v in nu.items()}),
        tuple(verts),
    )
    return t, s


def curve_subdivision(c: PPTCurve) -> DualSubdivision:
    return dual_subdivision(push_forward(c))
