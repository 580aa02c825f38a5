"""Enumeration of marked curves through stretched configurations.

Candidate types come from lambda-increasing lattice paths in the Newton
polygon: cutting corners of a path towards the two boundary arcs produces
subdivisions into triangles and parallelograms, and each subdivision is
turned into a combinatorial type.  Every type is then solved exactly
against the actual configuration and the solution is verified, so a wrong
candidate shows up as a failed solve rather than a wrong total.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import networkx as nx

from .curve import (
    INF,
    Edge,
    MarkedCurve,
    RealMarkedCurve,
    canonical_key,
    genus,
    validate_ppt,
)
from .duality import curve_subdivision
from .lattice import (
    LatticePolygon,
    all_lattice_points,
    cross,
    dot,
    lattice_points,
    primitive_decompose,
    sub,
)
from .patchdata import check_euler, generate_kconfiguration
from .position import (
    CombinatorialType,
    Configuration,
    Layout,
    MarkSlot,
    check_regular,
    marks_exhaust_preimages,
    solve_type_detailed,
    stretch_parameters,
    stretched_config,
)
from .weights import RealWeightBreakdown, WeightBreakdown, complex_weight, real_weight

MAX_RESEEDS = 8


class EnumerationError(RuntimeError):
    pass


# -- lattice paths ---------------------------------------------------------------------


def _lam(eps):
    return lambda w: Fraction(w[0]) - eps * w[1]


def boundary_arcs(polygon: LatticePolygon, eps) -> tuple[tuple, tuple]:
    """Lattice points of the two boundary arcs from argmin to argmax of lambda.

    The first arc runs clockwise (the upper arc for small ``eps``), the
    second counterclockwise.
    """
    lam = _lam(eps)
    ring = []
    for a, b in polygon.edges():
        d = primitive_decompose(sub(b, a))
        for k in range(d.weight):
            ring.append((a[0] + k * d.primitive[0], a[1] + k * d.primitive[1]))
    i = min(range(len(ring)), key=lambda k: lam(ring[k]))
    j = max(range(len(ring)), key=lambda k: lam(ring[k]))
    n = len(ring)
    ccw = [ring[(i + k) % n] for k in range((j - i) % n + 1)]
    cw = [ring[(i - k) % n] for k in range((i - j) % n + 1)]
    return tuple(cw), tuple(ccw)


def lattice_paths(polygon: LatticePolygon, steps: int, eps):
    """All lambda-increasing lattice paths with ``steps`` steps from argmin to argmax."""
    lam = _lam(eps)
    pts = sorted(all_lattice_points(polygon), key=lam)
    p, q = pts[0], pts[-1]
    inner = pts[1:-1]
    if steps < 1 or steps - 1 > len(inner):
        return
    for mid in combinations(inner, steps - 1):
        yield (p,) + mid + (q,)


def _turn(path, j):
    a, b, c = path[j - 1], path[j], path[j + 1]
    return cross(sub(b, a), sub(c, b))


@dataclass(frozen=True)
class Cell:
    kind: str  # "tri" or "par"
    points: tuple

    @property
    def volume(self) -> int:
        a, b, c = self.points[:3]
        v = abs(cross(sub(b, a), sub(c, a)))
        return v if self.kind == "tri" else v


def _cuts(polygon: LatticePolygon, target: tuple, sign: int):
    @lru_cache(maxsize=None)
    def go(path: tuple) -> tuple:
        if path == target:
            return ((),)
        j = next((k for k in range(1, len(path) - 1) if sign * _turn(path, k) > 0), None)
        if j is None:
            return ()
        out = []
        tri = Cell("tri", (path[j - 1], path[j], path[j + 1]))
        for rest in go(path[:j] + path[j + 1 :]):
            out.append((tri,) + rest)
        a, b, c = path[j - 1], path[j], path[j + 1]
        d = (a[0] + c[0] - b[0], a[1] + c[1] - b[1])
        if polygon.contains(d):
            par = Cell("par", (a, b, c, d))
            for rest in go(path[:j] + (d,) + path[j + 1 :]):
                out.append((par,) + rest)
        return tuple(out)

    return go


@dataclass(frozen=True)
class PathSubdivision:
    path: tuple
    cells: tuple[Cell, ...]

    @property
    def multiplicity(self) -> int:
        m = 1
        for c in self.cells:
            if c.kind == "tri":
                m *= c.volume
        return m

    def canonical(self) -> tuple:
        return tuple(sorted((c.kind, tuple(sorted(c.points))) for c in self.cells))


def path_subdivisions(polygon: LatticePolygon, g: int, eps):
    """Subdivisions attached to lambda-increasing paths, in deterministic order."""
    upper, lower = boundary_arcs(polygon, eps)
    nb = len(lattice_points(polygon)[1])
    steps = nb + g - 1
    plus = _cuts(polygon, upper, +1)
    minus = _cuts(polygon, lower, -1)
    for path in lattice_paths(polygon, steps, eps):
        for a in plus(path):
            for b in minus(path):
                yield PathSubdivision(path, a + b)


# -- types from subdivisions ------------------------------------------------------------------


def _seg(a, b):
    return (a, b) if a <= b else (b, a)


def _outward(side, third):
    a, b = side
    d = primitive_decompose(sub(b, a))
    n = (d.primitive[1], -d.primitive[0])
    if dot(n, sub(third, a)) > 0:
        n = (-n[0], -n[1])
    return n, d.weight


def subdivision_type(sd: PathSubdivision, polygon: LatticePolygon):
    """Combinatorial type dual to a path subdivision, or ``(None, reason)``."""
    tris = sorted((c for c in sd.cells if c.kind == "tri"), key=lambda c: tuple(sorted(c.points)))
    tid = {c: f"t{k}" for k, c in enumerate(tris)}
    uf = nx.utils.UnionFind()
    term = {}  # segment -> list of (vertex id, outward normal, weight)
    for c in sd.cells:
        pts = c.points
        if c.kind == "tri":
            for k in range(3):
                a, b, third = pts[k], pts[(k + 1) % 3], pts[(k + 2) % 3]
                s = _seg(a, b)
                uf[s]
                n, w = _outward((a, b), third)
                term.setdefault(s, []).append((tid[c], n, w))
        else:
            a, b, cc, d = pts
            uf.union(_seg(a, b), _seg(cc, d))
            uf.union(_seg(b, cc), _seg(d, a))
    on_boundary = set()
    for a, b in polygon.edges():
        for s in list(uf.parents):
            if cross(sub(b, a), sub(s[0], a)) == 0 and cross(sub(b, a), sub(s[1], a)) == 0:
                on_boundary.add(s)
    chains = {}
    for s in uf.parents:
        chains.setdefault(uf[s], []).append(s)
    edges, infinite = [], []
    seg_edge = {}
    for k, segs in enumerate(sorted(sorted(v) for v in chains.values())):
        ends = [t for s in segs for t in term.get(s, [])]
        nbound = sum(1 for s in segs if s in on_boundary)
        eid = f"e{k}"
        for s in segs:
            seg_edge[s] = eid
        if len(ends) == 2 and nbound == 0:
            (va, na, w), (vb, nb_, _) = ends
            if nb_ != (-na[0], -na[1]):
                return None, "inconsistent normals across a chain"
            edges.append(Edge(eid, va, vb, None, w, na))
        elif len(ends) == 1 and nbound == 1:
            va, na, w = ends[0]
            infinite.append(f"{eid}@inf")
            edges.append(Edge(eid, va, f"{eid}@inf", INF, w, na))
        elif not ends:
            return None, "reducible: a chain crosses the polygon"
        else:
            return None, "malformed chain"
    marks = []
    for j in range(1, len(sd.path)):
        s = _seg(sd.path[j - 1], sd.path[j])
        if s not in seg_edge:
            return None, f"path step {j} is not a side of any cell"
        marks.append(MarkSlot("edge", seg_edge[s]))
    t = CombinatorialType(tuple(tid[c] for c in tris), tuple(infinite), tuple(edges), tuple(marks))
    if not nx.is_connected(_graph_of(t)):
        return None, "reducible: disconnected type"
    return t, "ok"


def _graph_of(t: CombinatorialType) -> nx.MultiGraph:
    G = nx.MultiGraph()
    G.add_nodes_from(t.vertices)
    G.add_nodes_from(t.infinite)
    for e in t.edges:
        G.add_edge(e.tail, e.head, key=e.id)
    return G


# -- problems and results ----------------------------------------------------------------


@dataclass(frozen=True)
class EnumerationProblem:
    polygon: LatticePolygon
    genus: int = 0
    config: Configuration | None = None
    seed: int = 0
    layout: Layout | None = None
    real_tags: tuple | None = None  # per point: None for real, or the index of the conjugate point

    def mark_count(self) -> int:
        return len(lattice_points(self.polygon)[1]) + self.genus - 1

    def resolved_layout(self) -> Layout:
        return self.layout or Layout(self.mark_count())


@dataclass
class EnumeratedCurve:
    curve: MarkedCurve
    weight: WeightBreakdown
    real: RealWeightBreakdown | None
    subdivision: PathSubdivision
    type: CombinatorialType


@dataclass
class EnumerationResult:
    problem: EnumerationProblem
    config: Configuration
    seed: int
    curves: list[EnumeratedCurve]
    diagnostics: dict = field(default_factory=dict)

    @property
    def total_complex(self) -> int:
        return int(sum(c.weight.total for c in self.curves))

    @property
    def total_real(self) -> int | None:
        if any(c.real is None for c in self.curves):
            return None
        return int(sum(c.real.total for c in self.curves))


def enumerate_types(polygon: LatticePolygon, g: int, layout: Layout | int | None = None, seed: int = 0):
    """Candidate types for the stretched configuration of ``seed``, deduplicated."""
    if isinstance(layout, int):
        layout = Layout(layout)
    if layout is not None and layout.boundary:
        raise EnumerationError("only layouts without boundary marks are supported")
    eps, _, _ = stretch_parameters(polygon, seed)
    seen = set()
    for sd in path_subdivisions(polygon, g, eps):
        t, _ = subdivision_type(sd, polygon)
        if t is None:
            continue
        if layout is not None and len(t.marks) != layout.interior:
            continue
        key = (sd.canonical(), t.marks)
        if key in seen:
            continue
        seen.add(key)
        yield t


def _check_problem(p: EnumerationProblem):
    if p.polygon.dim != 2:
        raise EnumerationError("the polygon must be two-dimensional")
    lay = p.resolved_layout()
    if lay.boundary:
        raise EnumerationError("only layouts without boundary marks are supported")
    if lay.interior != p.mark_count():
        raise EnumerationError(f"a regular layout needs {p.mark_count()} marks, got {lay.interior}")
    if p.config is not None and p.config.direction is None:
        raise EnumerationError("enumeration needs a stretched configuration")


class _Degenerate(Exception):
    pass


def _solve_one(sd: PathSubdivision, polygon: LatticePolygon, cfg: Configuration, g: int, real: bool):
    t, why = subdivision_type(sd, polygon)
    if t is None:
        return None, why
    curve, why = solve_type_detailed(t, cfg)
    if curve is None:
        if why.startswith("solution is not unique"):
            raise _Degenerate(why)
        return None, why
    if not validate_ppt(curve.curve).ok:
        return None, "solution is not a valid curve"
    if genus(curve.curve) != g:
        return None, f"genus {genus(curve.curve)}"
    if not check_regular(curve):
        return None, "solution is not regular"
    if not marks_exhaust_preimages(curve, cfg):
        raise _Degenerate("configuration point has extra preimages")
    # crossings are not part of the type: the parallelograms may sit elsewhere and
    # push the vertex triangles around, so triangles are compared up to translation
    want = sorted(_tri_shape(c) for c in curve_subdivision(curve.curve).canonical()[1] if len(c) == 3)
    have = sorted(_tri_shape(c.points) for c in sd.cells if len(c.points) == 3)
    if want != have:
        return None, "dual subdivision does not match the path subdivision"
    w = complex_weight(curve)
    rw = real_weight(RealMarkedCurve.identity(curve)) if real else None
    return EnumeratedCurve(curve, w, rw, sd, t), "ok"


def _tri_shape(points) -> tuple:
    pts = sorted(points)
    return tuple(sub(p, pts[0]) for p in pts)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TROPICOUNT_THREADS", "1")))
    except ValueError:
        return 1


def _run(p: EnumerationProblem, real: bool) -> EnumerationResult:
    _check_problem(p)
    attempts = 1 if p.config is not None else MAX_RESEEDS
    failures = []
    for k in range(attempts):
        seed = p.seed + 1000 * k
        cfg = p.config or stretched_config(p.polygon, p.resolved_layout(), seed)
        eps = -cfg.direction[1]
        try:
            return _run_config(p, cfg, seed, eps, real)
        except _Degenerate as exc:
            failures.append(f"seed {seed}: {exc}")
    raise EnumerationError("no generic configuration found: " + "; ".join(failures))


def _run_config(p, cfg, seed, eps, real) -> EnumerationResult:
    subs = list(path_subdivisions(p.polygon, p.genus, eps))
    reasons = Counter()
    nthreads = _threads()
    if nthreads > 1:
        with ThreadPoolExecutor(nthreads) as ex:
            outs = list(ex.map(lambda sd: _solve_one(sd, p.polygon, cfg, p.genus, real), subs))
    else:
        outs = [_solve_one(sd, p.polygon, cfg, p.genus, real) for sd in subs]
    found = []
    for item, why in outs:
        reasons[why] += 1
        if item is not None:
            found.append(item)
    keys = Counter(canonical_key(c.curve) for c in found)
    if any(v > 1 for v in keys.values()):
        raise _Degenerate("two subdivisions produced the same curve")
    found.sort(key=lambda c: (c.subdivision.canonical(), tuple(e.weight for e in c.curve.curve.edges)))
    euler_ok = 0
    for c in found:
        k = generate_kconfiguration(c.curve, seed=seed)
        euler_ok += check_euler(c.curve, k, p.genus)
    diag = {
        "paths": len({sd.path for sd in subs}),
        "subdivisions": len(subs),
        "path_multiplicity": sum(sd.multiplicity for sd in subs),
        "outcomes": dict(sorted(reasons.items())),
        "euler_ok": euler_ok,
        "stretch_eps": eps,
    }
    res = EnumerationResult(p, cfg, seed, found, diag)
    if real and res.total_real is not None:
        diag["parity_ok"] = (res.total_real - res.total_complex) % 2 == 0
    return res


def count_complex(p: EnumerationProblem) -> EnumerationResult:
    return _run(p, real=False)


def count_real(p: EnumerationProblem) -> EnumerationResult:
    """Real count for a totally real configuration (identity real structure)."""
    tags = p.real_tags
    if tags is not None:
        n = len(tags)
        for i, t in enumerate(tags):
            if t is not None and (not 0 <= t < n or tags[t] != i or t == i):
                raise EnumerationError(f"real tags are inconsistent at point {i}")
        if any(t is not None for t in tags):
            raise EnumerationError("only totally real configurations are supported")
    return _run(p, real=True)


def invariance_details(polygon: LatticePolygon, g: int, seeds, real: bool = False) -> dict[int, tuple]:
    out = {}
    for s in seeds:
        prob = EnumerationProblem(polygon, g, seed=s)
        r = count_real(prob) if real else count_complex(prob)
        out[s] = (r.total_complex, r.total_real)
    return out


def invariance_check(polygon: LatticePolygon, g: int, seeds, real: bool = False) -> bool:
    seeds = list(seeds)
    if len(seeds) < 2:
        raise ValueError("need at least two seeds")
    return len(set(invariance_details(polygon, g, seeds, real).values())) == 1
