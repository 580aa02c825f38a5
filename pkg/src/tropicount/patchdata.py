"""Bookkeeping and hypothesis checks for patchworking data.

Covers multiplicity vectors, boundary tangency vectors, the point
multiplicity function of a configuration over the Puiseux field (modelled
by valuations plus exact initial coefficients), the Euler relation,
compatible tuples, special pairs and the T/R conditions.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .curve import (
    INF,
    BoundaryPoint,
    CornerPoint,
    GraphPoint,
    MarkedCurve,
    PPTCurve,
    RealMarkedCurve,
    compactify_end,
    validate_involution,
)
from .lattice import LatticePolygon, cross, dot, is_minkowski_summand, lattice_points, primitive_decompose, sub
from .position import Configuration, WeightedConfiguration, check_delta_generic
from .report import ValidationReport
from .weights import real_structure_defects, t_defects


class PatchDataError(ValueError):
    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule


# -- multiplicity vectors --------------------------------------------------------------


@dataclass(frozen=True)
class MultiplicityVector:
    """Finitely supported vector of nonnegative integers indexed from 1."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        clean = {}
        for i, a in self.entries:
            if i < 1 or a < 0:
                raise ValueError(f"bad entry ({i}, {a})")
            clean[i] = clean.get(i, 0) + a
        object.__setattr__(self, "entries", tuple(sorted((i, a) for i, a in clean.items() if a)))

    @classmethod
    def of(cls, counts: Mapping[int, int]) -> "MultiplicityVector":
        return cls(tuple(counts.items()))

    def __getitem__(self, i: int) -> int:
        return dict(self.entries).get(i, 0)

    def __le__(self, other: "MultiplicityVector") -> bool:
        return all(a <= other[i] for i, a in self.entries)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)


def norms(a: MultiplicityVector) -> tuple[int, int]:
    return sum(x for _, x in a.entries), sum(i * x for i, x in a.entries)


def boundary_vectors(c: PPTCurve, polygon: LatticePolygon) -> dict[int, MultiplicityVector]:
    """beta vectors: ends closing on each side, tallied by weight."""
    tally = defaultdict(Counter)
    for e in c.graph.ends():
        p = compactify_end(c, e.id, polygon)
        if isinstance(p, CornerPoint):
            raise PatchDataError("degree", f"end {e.id} does not point along a side normal")
        tally[p.side][e.weight] += 1
    return {s: MultiplicityVector.of(tally[s]) for s in range(len(polygon.edges()))}


# -- configurations over the Puiseux field ------------------------------------------------


@dataclass(frozen=True)
class KPoint:
    """A point known through its valuation and the initial coefficients.

    ``coeffs`` are the leading coefficients of the two coordinates, each a
    complex rational ``(re, im)``.  ``conj`` is the index of the conjugate
    point, or ``None`` for a real point.
    """

    valuation: object
    coeffs: tuple = ((Fraction(1), Fraction(0)), (Fraction(1), Fraction(0)))
    conj: int | None = None

    @property
    def on_boundary(self) -> bool:
        return isinstance(self.valuation, BoundaryPoint)


@dataclass(frozen=True)
class KConfiguration:
    points: tuple[KPoint, ...]
    psi: tuple[tuple[int, int], ...] = ()  # (point index, mark index) for boundary points

    def psi_map(self) -> dict[int, int]:
        return dict(self.psi)

    def interior(self) -> list[int]:
        return [i for i, p in enumerate(self.points) if not p.on_boundary]

    def boundary(self) -> list[int]:
        return [i for i, p in enumerate(self.points) if p.on_boundary]

    def conj_of(self, i: int) -> int:
        c = self.points[i].conj
        return i if c is None else c


def _conj(z):
    return (z[0], -z[1])


def _is_dm(t) -> bool:
    return t != 1


def _mark_valuation(m: MarkedCurve, i: int, polygon: LatticePolygon | None):
    if m.is_infinite_mark(i):
        if polygon is None:
            raise PatchDataError("A3", "a polygon is needed to place marks at infinity")
        e = m.curve.graph.incident(m.marks[i].vertex)[0]
        return compactify_end(m.curve, e.id, polygon)
    return m.image(i)


def _coeff(rng: random.Random):
    while True:
        re, im = Fraction(rng.randrange(-997, 998), 101), Fraction(rng.randrange(-997, 998), 103)
        if re or im:
            return re, im


def generate_kconfiguration(m: MarkedCurve, polygon: LatticePolygon | None = None, seed: int = 0,
                            real: RealMarkedCurve | None = None) -> KConfiguration:
    """A configuration satisfying the preimage and bijection conditions for ``m``.

    Coefficients are pseudo-random and pairwise distinct.  With ``real``
    given, the two points over an imaginary double image are conjugate, as
    are the points for conjugate marks at infinity; all others are real.
    """
    rng = random.Random(seed)
    used = set()

    def fresh(realpt):
        while True:
            a, b = _coeff(rng), _coeff(rng)
            if realpt:
                a, b = (a[0] or Fraction(1), Fraction(0)), (b[0] or Fraction(1), Fraction(0))
            if (a, b) not in used and (tuple(map(_conj, (a, b)))) not in used:
                used.add((a, b))
                return a, b

    def add_pair(val, imag):
        n = len(pts)
        if imag:
            a = fresh(False)
            pts.append(KPoint(val, a, n + 1))
            pts.append(KPoint(val, tuple(map(_conj, a)), n))
        else:
            pts.append(KPoint(val, fresh(True)))
            pts.append(KPoint(val, fresh(True)))

    groups = defaultdict(list)
    for i in m.g0():
        groups[m.image(i)].append(i)
    pts, psi = [], []
    for x in sorted(groups):
        idx = groups[x]
        imag = real is not None and all(i in real.imag for i in idx)
        if any(_is_dm(m.mt[i]) for i in idx):
            add_pair(x, imag)
        else:
            # a lone point over conjugate simple marks is its own conjugate, hence real
            pts.append(KPoint(x, fresh(True)))
    done = set()
    for i in m.g_infinity():
        if i in done:
            continue
        val = _mark_valuation(m, i, polygon)
        if real is not None and i in real.imag and real.mark_image(i) != i:
            j = real.mark_image(i)
            psi += [(len(pts), i), (len(pts) + 1, j)]
            add_pair(val, True)
            done.update({i, j})
        else:
            psi.append((len(pts), i))
            pts.append(KPoint(val, fresh(True)))
            done.add(i)
    return KConfiguration(tuple(pts), tuple(psi))


def multiplicity_function(m: MarkedCurve, k: KConfiguration, polygon: LatticePolygon | None = None) -> dict[int, int]:
    """Multiplicity of each interior point of ``k`` from the marks over it."""
    groups_m, groups_dm = defaultdict(list), defaultdict(list)
    for i in m.g0():
        (groups_dm if _is_dm(m.mt[i]) else groups_m)[m.image(i)].append(i)
    clash = set(groups_m) & set(groups_dm)
    if clash:
        raise PatchDataError("A1", f"images {sorted(clash)} carry both simple and double marks")
    over = defaultdict(list)
    for i in k.interior():
        over[k.points[i].valuation].append(i)
    for x in over:
        if x not in groups_m and x not in groups_dm:
            raise PatchDataError("A1", f"point over {x} is not the image of a mark")
    mu = {}
    for x, idx in groups_m.items():
        pts = over.get(x, [])
        if len(pts) != 1:
            raise PatchDataError("A1", f"{len(pts)} points over the simple image {x}")
        mu[pts[0]] = len(idx)
    for x, idx in groups_dm.items():
        pts = over.get(x, [])
        if len(pts) != 2:
            raise PatchDataError("A2", f"{len(pts)} points over the double image {x}")
        m1 = m2 = 0
        for i in idx:
            a, b = (1, 1) if m.mt[i] == (1, 1) else m.mt[i]
            m1, m2 = m1 + a, m2 + b
        if m1:
            mu[pts[0]] = m1
        if m2:
            mu[pts[1]] = m2
        if not (m1 and m2):
            raise PatchDataError("A2", f"a point over {x} gets multiplicity 0")
    _check_psi(m, k, polygon)
    return mu


def _check_psi(m: MarkedCurve, k: KConfiguration, polygon):
    psi = k.psi_map()
    if sorted(psi) != sorted(k.boundary()):
        raise PatchDataError("A3", "psi must be defined exactly on the boundary points")
    if sorted(psi.values()) != sorted(m.g_infinity()):
        raise PatchDataError("A3", "psi is not a bijection onto the marks at infinity")
    if polygon is None:
        return
    for p, i in psi.items():
        if k.points[p].valuation != _mark_valuation(m, i, polygon):
            raise PatchDataError("A3", f"point {p} and mark {i} have different valuations")


def check_euler(m: MarkedCurve, k: KConfiguration, g: int, mu: Mapping[int, int] | None = None) -> bool:
    if mu is None:
        mu = multiplicity_function(m, k)
    n_inf = len(m.curve.graph.infinite)
    return sum(mu.values()) + len(k.boundary()) - n_inf == g - 1


# -- compatible tuples -----------------------------------------------------------------


@dataclass(frozen=True)
class CompatibleTuple:
    polygon: LatticePolygon
    genus: int
    points: frozenset
    mu: tuple[tuple[int, int], ...]
    beta: tuple[tuple[int, MultiplicityVector], ...]

    def mu_map(self) -> dict[int, int]:
        return dict(self.mu)

    def beta_map(self) -> dict[int, MultiplicityVector]:
        return dict(self.beta)


@dataclass(frozen=True)
class PatchContext:
    """The full data a sub-tuple is measured against."""

    curve: MarkedCurve
    polygon: LatticePolygon
    genus: int
    config: KConfiguration
    mu: tuple[tuple[int, int], ...]
    beta: tuple[tuple[int, MultiplicityVector], ...]

    @classmethod
    def build(cls, m: MarkedCurve, polygon: LatticePolygon, g: int, k: KConfiguration) -> "PatchContext":
        mu = multiplicity_function(m, k, polygon)
        beta = boundary_vectors(m.curve, polygon)
        return cls(m, polygon, g, k, tuple(sorted(mu.items())), tuple(sorted(beta.items())))

    def full_tuple(self) -> CompatibleTuple:
        return CompatibleTuple(self.polygon, self.genus, frozenset(range(len(self.config.points))), self.mu, self.beta)


def face_length(p: LatticePolygon, normal) -> int:
    """Lattice length of the face of ``p`` maximizing the given normal (0 for a vertex)."""
    scores = [dot(v, normal) for v in p.vertices]
    top = max(scores)
    face = [v for v, s in zip(p.vertices, scores) if s == top]
    if len(face) < 2:
        return 0
    a = min(face)
    b = max(face)
    return primitive_decompose(sub(b, a)).weight


def check_compatible(t: CompatibleTuple, ctx: PatchContext) -> ValidationReport:
    if not is_minkowski_summand(t.polygon, ctx.polygon):
        raise PatchDataError("summand", "the polygon is not a Minkowski summand of the full polygon")
    rep = ValidationReport()
    full_mu = dict(ctx.mu)
    full_beta = dict(ctx.beta)
    mu = t.mu_map()
    beta = t.beta_map()
    rep.check("subtuple")
    for p, v in mu.items():
        if p not in t.points or v > full_mu.get(p, 0) or v < 1:
            rep.add("subtuple", p, f"multiplicity {v} not allowed at point {p}")
    for s, b in beta.items():
        if not b <= full_beta.get(s, MultiplicityVector()):
            rep.add("subtuple", f"side {s}", "beta exceeds the full beta vector")
    normals = ctx.polygon.outer_normals()
    rep.check("side-degree")
    for s, n in enumerate(normals):
        want = face_length(t.polygon, n.primitive)
        have = norms(beta.get(s, MultiplicityVector()))[1]
        if have != want:
            rep.add("side-degree", f"side {s}", f"total tangency {have} but the side degree is {want}")
    rep.check("tangency-bound")
    psi = ctx.config.psi_map()
    g = ctx.curve.curve.graph
    need = defaultdict(Counter)
    for p in t.points:
        if p in psi:
            side = ctx.config.points[p].valuation.side
            e = g.incident(ctx.curve.marks[psi[p]].vertex)[0]
            need[side][e.weight] += 1
    for s, cnt in need.items():
        b = beta.get(s, MultiplicityVector())
        for i, c in cnt.items():
            if b[i] < c:
                rep.add("tangency-bound", f"side {s}", f"beta_{i} = {b[i]} but {c} points need weight {i}")
    rep.check("genus-bound")
    interior = len(lattice_points(t.polygon)[0]) if t.polygon.dim == 2 else 0
    if t.genus > interior:
        rep.add("genus-bound", "genus", f"genus {t.genus} exceeds {interior} interior points")
    rep.check("euler")
    lhs = sum(mu.values()) + sum(1 for p in t.points if p in psi) - sum(norms(b)[0] for b in beta.values())
    if lhs != t.genus - 1:
        rep.add("euler", "tuple", f"count gives {lhs}, expected {t.genus - 1}")
    return rep


# -- special pairs ----------------------------------------------------------------------


@dataclass(frozen=True)
class SpecialData:
    point_pairs: tuple[tuple[int, int], ...]
    edge_pairs: tuple[tuple[str, str, str], ...]  # (vertex, edge, edge)
    vertices: frozenset
    regions: tuple = ()  # per edge pair: (marks in K, marks in K')


def _image_len(e, length):
    return INF if length is INF else length * e.weight


class _Region:
    """Maximal pair of regions hanging off two parallel edges on which h agrees."""

    def __init__(self, m: MarkedCurve, v: str, e, f):
        self.m = m
        self.c = m.curve
        self.v = v
        self.side = ({}, {})  # edge id -> (start vertex, image extent, far vertex included)
        self.verts = (set(), set())
        self._grow(e, f)

    def _grow(self, e, f):
        g = self.c.graph
        queue = [(self.v, e, self.v, f)]
        while queue:
            x, ea, y, eb = queue.pop()
            if ea.id in self.side[0] or eb.id in self.side[1] or ea.id == eb.id:
                continue
            if ea.id in self.side[1] or eb.id in self.side[0]:
                continue
            la = _image_len(ea, ea.length)
            lb = _image_len(eb, eb.length)
            common = la if (lb is INF or (la is not INF and la <= lb)) else lb
            xa, xb = ea.other(x), eb.other(y)
            grow = la == lb and la is not INF
            if grow:
                blocked = (xa == self.v or xb == self.v or xa == xb or xa in self.verts[1] or xb in self.verts[0]
                           or xa in self.verts[0] or xb in self.verts[1])
                if not blocked:
                    da = sorted(h.direction_from(xa) for h in g.incident(xa) if h.id != ea.id)
                    db = sorted(h.direction_from(xb) for h in g.incident(xb) if h.id != eb.id)
                    blocked = da != db
                grow = not blocked
            self.side[0][ea.id] = (x, common, grow)
            self.side[1][eb.id] = (y, common, grow)
            if grow:
                self.verts[0].add(xa)
                self.verts[1].add(xb)
                rest_a = sorted((h for h in g.incident(xa) if h.id != ea.id), key=lambda h: (h.direction_from(xa), h.id))
                rest_b = sorted((h for h in g.incident(xb) if h.id != eb.id), key=lambda h: (h.direction_from(xb), h.id))
                for ha, hb in zip(rest_a, rest_b):
                    queue.append((xa, ha, xb, hb))

    def contains(self, k: int, p: GraphPoint) -> bool:
        if p.vertex is not None:
            return p.vertex in self.verts[k]
        entry = self.side[k].get(p.edge)
        if entry is None:
            return False
        start, extent, far = entry
        e = self.c.graph.edge(p.edge)
        off = p.offset if start == e.tail else e.length - p.offset
        d = off * e.weight
        return d > 0 and (extent is INF or d < extent or (far and d == extent))


def detect_special(m: MarkedCurve) -> SpecialData:
    c = m.curve
    g = c.graph
    g0 = m.g0()
    pairs = tuple((i, j) for i, j in combinations(g0, 2) if m.image(i) == m.image(j) and m.mt[i] == m.mt[j])
    edge_pairs, regions, verts = [], [], set()
    for v in g.vertices:
        if g.valency(v) <= 3:
            continue
        inc = g.incident(v)
        for e, f in combinations(inc, 2):
            if e.direction_from(v) != f.direction_from(v) or e.id == f.id:
                continue
            reg = _Region(m, v, e, f)
            hit = False
            for i, j in pairs:
                for a, b in ((i, j), (j, i)):
                    if reg.contains(0, m.marks[a]) and reg.contains(1, m.marks[b]):
                        hit = True
            if hit:
                edge_pairs.append((v, e.id, f.id))
                inside = tuple(sorted(i for i in g0 if reg.contains(0, m.marks[i]) or reg.contains(1, m.marks[i])))
                regions.append(inside)
                verts.add(v)
    return SpecialData(pairs, tuple(edge_pairs), frozenset(verts), tuple(regions))


# -- T conditions -----------------------------------------------------------------------


def _dist_from(e, v, p: GraphPoint):
    return p.offset if v == e.tail else e.length - p.offset


def check_T(m: MarkedCurve, polygon: LatticePolygon | None = None, budget: int = 10000) -> ValidationReport:
    """Itemized T1-T7.  T3 is evaluated only when ``polygon`` is given."""
    rep = ValidationReport()
    c = m.curve
    g = c.graph
    for rule in ("T1", "T2"):
        rep.check(rule)
    for rule, msg in t_defects(m):
        if rule in ("T1", "T2"):
            rep.add(rule, "curve", msg)
    if polygon is not None:
        rep.check("T3")
        images = Counter(m.image(i) for i in m.g0())
        pts = tuple(sorted(images))
        wcfg = WeightedConfiguration(Configuration(pts), tuple(images[p] for p in pts))
        res = check_delta_generic(wcfg, polygon, budget)
        if res.status != "generic":
            rep.add("T3", "configuration", f"genericity check returned {res.status}")
    sp = detect_special(m)
    for rule in ("T4", "T5", "T6", "T7"):
        rep.check(rule)
    for (v, a, b), inside in zip(sp.edge_pairs, sp.regions):
        ea, eb = g.edge(a), g.edge(b)
        for e in (ea, eb):
            if e.weight != 1:
                rep.add("T4", e.id, f"edge {e.id} in a special pair has weight {e.weight}")
        n = sum(1 for i, j in sp.point_pairs if i in inside and j in inside)
        if n > 1:
            rep.add("T5", v, f"regions of the special pair {a},{b} hold {n} special pairs of points")
        if ea.is_end and eb.is_end:
            rep.add("T6", v, f"special pair {a},{b} consists of two ends")
        elif not ea.is_end and not eb.is_end:
            fa, fb = ea.other(v), eb.other(v)
            ma, mb = m.marked_vertices().get(fa), m.marked_vertices().get(fb)
            if ma is not None and mb is not None and m.image(ma) == m.image(mb) and m.mt[ma] == m.mt[mb] == (1, 1):
                rep.add("T6", v, f"special pair {a},{b} ends at a special pair of vertex marks")
    for v in sp.vertices:
        simple = [e for e in g.incident(v) if sum(1 for f in g.incident(v) if f.direction_from(v) == e.direction_from(v)) == 1]
        if simple and not any(e.weight == 1 for e in simple):
            rep.add("T4", v, "no simple edge of weight 1 at the special vertex")
        _check_t7(m, v, rep)
    return rep


def _check_t7(m: MarkedCurve, v: str, rep: ValidationReport):
    g = m.curve.graph
    groups = defaultdict(dict)  # (image, mt) -> edge id -> mark
    for i in m.g0():
        p = m.marks[i]
        if p.edge is None:
            continue
        e = g.edge(p.edge)
        if v not in (e.tail, e.head):
            continue
        key = (m.image(i), m.mt[i])
        prev = groups[key].get(e.id)
        if prev is None or _dist_from(e, v, m.marks[prev]) > _dist_from(e, v, p):
            groups[key][e.id] = i
    for key, chosen in groups.items():
        s = len(chosen)
        if s < 2:
            continue
        items = []
        for eid, i in chosen.items():
            e = g.edge(eid)
            far = INF if e.is_end else e.length
            d_in = _dist_from(e, v, m.marks[i])
            d_out = INF if e.is_end else e.length - d_in
            items.append((far, eid, d_in, d_out))
        items.sort(key=lambda t: (t[0] is INF, t[0] if t[0] is not INF else 0, t[1]))
        lhs = items[0][2]
        terms = [items[i][3] for i in range(s - 2)] + [items[s - 2][3]]
        # two or more ends among the first s-1 edges make the bound infinite
        rhs = INF if any(t is INF for t in terms) else sum(terms[:-1], Fraction(0)) + 2 * terms[-1]
        if rhs is INF or not lhs > rhs:
            rep.add("T7", v, f"distance {lhs} from the vertex does not exceed {rhs}")


# -- R conditions -----------------------------------------------------------------------


def check_R(r: RealMarkedCurve, k: KConfiguration | None = None, polygon: LatticePolygon | None = None) -> ValidationReport:
    """Itemized R1-R7.  R6 and the configuration parts of R7 need ``k``."""
    rep = ValidationReport()
    validate_involution(r)
    for rule in ("R1", "R2", "R3", "R4", "R5"):
        rep.check(rule)
    for rule, msg in real_structure_defects(r):
        rep.add(rule, "curve", msg)
    m = r.base
    g = m.curve.graph
    re_ = r.real_edges()
    rep.check("R7(iii)")
    rep.check("R7(iv)")
    rep.check("R7(v)")
    for i in m.g0():
        p = m.marks[i]
        if i not in r.imag and _is_dm(m.mt[i]) and not r.point_is_real(p):
            rep.add("R7(iii)", i, f"real double mark {i} lies on the imaginary part")
        if i in r.imag and not r.point_is_real(p) and m.mt[i] == (1, 0):
            j = r.mark_image(i)
            if m.mt[j] != (0, 1):
                rep.add("R7(iv)", i, f"mark {i} has (1,0) but its conjugate {j} has {m.mt[j]}")
    for e in g.ends():
        if e.id in re_ and e.weight % 2 == 0:
            rep.add("R7(v)", e.id, f"real end {e.id} has even weight {e.weight}")
    if k is None:
        return rep
    rep.check("R6")
    n = len(k.points)
    re_vals, im_vals = set(), set()
    for i, p in enumerate(k.points):
        j = k.conj_of(i)
        if not 0 <= j < n or k.conj_of(j) != i:
            rep.add("R6", i, "conjugation is not an involution on the points")
            continue
        q = k.points[j]
        if q.valuation != p.valuation or tuple(map(_conj, p.coeffs)) != q.coeffs:
            rep.add("R6", i, f"point {j} is not the conjugate of point {i}")
        (re_vals if j == i else im_vals).add(p.valuation)
    if re_vals & im_vals:
        rep.add("R6", "valuations", "real and imaginary points share a valuation")
    rep.check("R7(i)")
    for p, i in k.psi_map().items():
        point_real = k.conj_of(p) == p
        if point_real != (i not in r.imag):
            rep.add("R7(i)", i, f"mark {i} at infinity and point {p} differ in reality")
    rep.check("R7(ii)")
    for i in m.g0():
        x = m.image(i)
        if i not in r.imag and x not in re_vals:
            rep.add("R7(ii)", i, f"real mark {i} is not over a real point")
        if i in r.imag and m.marks[i].vertex is not None and x not in im_vals:
            rep.add("R7(ii)", i, f"imaginary vertex mark {i} is not over an imaginary point")
    return rep


# -- surface bounds (A5) -----------------------------------------------------------------------------


_REFERENCE = {
    ("P2", 0): [(0, 0), (1, 0), (0, 1)],
    ("P2_k", 1): [(0, 0), (2, 0), (1, 1), (0, 1)],
    ("P2_k", 2): [(0, 0), (2, 0), (2, 1), (1, 2), (0, 2)],
    ("P2_k", 3): [(1, 0), (2, 0), (2, 1), (1, 2), (0, 2), (0, 1)],
    ("P1xP1", 0): [(0, 0), (1, 0), (1, 1), (0, 1)],
}


def self_intersections(p: LatticePolygon) -> tuple[int, ...] | None:
    """Self-intersection of each toric divisor, or None if the surface is singular."""
    ns = [n.primitive for n in p.outer_normals()]
    k = len(ns)
    if p.dim != 2:
        return None
    out = []
    for i in range(k):
        a, b, c = ns[i - 1], ns[i], ns[(i + 1) % k]
        if abs(cross(a, b)) != 1:
            return None
        s = (a[0] + c[0], a[1] + c[1])
        if cross(s, b) != 0:
            return None
        lam = s[0] // b[0] if b[0] else s[1] // b[1]
        out.append(-lam)
    return tuple(out)


def _dihedral_equal(a, b) -> bool:
    if len(a) != len(b):
        return False
    n = len(a)
    for seq in (b, b[::-1]):
        for s in range(n):
            if tuple(seq[s:] + seq[:s]) == tuple(a):
                return True
    return False


@dataclass(frozen=True)
class Surface:
    kind: str  # "P2", "P2_k", "P1xP1" or "other"
    k: int
    self_intersections: tuple[int, ...] | None


def surface_of(p: LatticePolygon) -> Surface:
    si = self_intersections(p)
    if si is not None:
        for (kind, k), pts in _REFERENCE.items():
            ref = self_intersections(LatticePolygon.hull(pts))
            if _dihedral_equal(list(si), list(ref)):
                return Surface(kind, k, si)
    return Surface("other", 0, si)


def check_A5_criteria(surface: Surface, k: KConfiguration, mu: Mapping[int, int]) -> str:
    if all(v == 1 for v in mu.values()):
        return "holds"
    if surface.kind == "other" or surface.self_intersections is None:
        return "unknown"
    sides = {k.points[i].valuation.side for i in k.boundary()}
    if len(sides) > 1:
        return "unknown"
    candidates = sides or set(range(len(surface.self_intersections)))
    many = sum(1 for v in mu.values() if v > 1)
    for s in candidates:
        if surface.kind == "P2":
            bound = 4
        elif surface.kind == "P1xP1":
            bound = 3
        else:
            bound = 5 - surface.self_intersections[s] - surface.k
        if many <= bound:
            return "holds"
    return "unknown"
