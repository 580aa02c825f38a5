"""Hand-built validator fixtures, shared by the patchdata tests and the acceptance run.

Each fixture names the rule it targets, whether that rule should pass, and a
function returning the report (or verdict) to inspect.
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

from builders import line_through_two, star, tripod
from tropicount.curve import BoundaryPoint, GraphPoint, MarkedCurve, PPTCurve, RealMarkedCurve, double
from tropicount.enumerate import EnumerationProblem, count_complex
from tropicount.lattice import LatticePolygon, standard_triangle
from tropicount.patchdata import (
    CompatibleTuple,
    KConfiguration,
    KPoint,
    MultiplicityVector,
    PatchContext,
    check_A5_criteria,
    check_compatible,
    check_R,
    check_T,
    generate_kconfiguration,
    surface_of,
)

UNIT = standard_triangle(1)
SQUARE = LatticePolygon.hull([(0, 0), (1, 0), (1, 1), (0, 1)])


@dataclass(frozen=True)
class Fixture:
    name: str
    group: str  # "T", "R", "compatible" or "A5"
    rule: str
    expect_pass: bool
    run: Callable

    def observed_pass(self) -> bool:
        out = self.run()
        if isinstance(out, str):
            return out == "holds"
        return self.rule not in out.failed_rules() and self.rule in out.checked

    def behaves(self) -> bool:
        return self.observed_pass() == self.expect_pass


FIXTURES: list[Fixture] = []


def fixture(group, rule, expect_pass):
    def deco(fn):
        FIXTURES.append(Fixture(fn.__name__, group, rule, expect_pass, fn))
        return fn

    return deco


# -- shared curves ------------------------------------------------------------------------


def special_curve(weight=1, length=Fraction(2), offset=Fraction(9, 5), offsets_ab=(1, 2), vertex_marks=False):
    """A four-valent vertex v with two parallel finite edges to a and b, which sit at the same point.

    The pair of marks on the parallel edges has equal image and tag, so it is
    special; a and b carry identical hanging trees.
    """
    L = Fraction(length)
    pos = {"v": (0, 0), "a": (-L * weight, 0), "b": (-L * weight, 0)}
    if weight == 1:
        hang = [(0, 1), (-1, -1)]
        vert = [(0, -1), (2, 1)]
    else:
        hang = [(-1, 1), (-1, -1)]
        vert = [(0, -1), (4, 1)]
    edges = [("ea", "v", "a", weight), ("eb", "v", "b", weight),
             ("y", "v", None, 1, vert[0]), ("z", "v", None, 1, vert[1]),
             ("a0", "a", None, 1, hang[0]), ("a1", "a", None, 1, hang[1]),
             ("b0", "b", None, 1, hang[0]), ("b1", "b", None, 1, hang[1])]
    c = PPTCurve.build(pos, edges)
    if vertex_marks:
        marks = (GraphPoint.at_vertex("a"), GraphPoint.at_vertex("b"), GraphPoint.on_edge("y", 1))
        return MarkedCurve(c, marks)
    marks = (GraphPoint.on_edge("ea", offset), GraphPoint.on_edge("eb", offset),
             GraphPoint.on_edge("a0", offsets_ab[0]), GraphPoint.on_edge("b0", offsets_ab[1]),
             GraphPoint.on_edge("y", 1))
    return MarkedCurve(c, marks)


def end_pair_curve():
    c = star([(-1, 0), (-1, 0), (0, -1), (2, 1)], marks=False)
    return MarkedCurve(c, (GraphPoint.on_edge("x0", 1), GraphPoint.on_edge("x1", 1), GraphPoint.on_edge("x2", 1)))


_CUBICS = []


def cubic():
    if not _CUBICS:
        _CUBICS.extend(r.curve for r in count_complex(EnumerationProblem(standard_triangle(3), 0)).curves)
    return _CUBICS[0]


# -- T1 ---------------------------------------------------------------------------------------------


@fixture("T", "T1", True)
def t1_simple_cubic():
    return check_T(cubic())


@fixture("T", "T1", False)
def t1_double_edge_cycle():
    pos = {"u": (0, 0), "w": (1, 0)}
    edges = [("f", "u", "w", 1), ("g", "u", "w", 1), ("a", "u", None, 1, (-1, -1)), ("b", "u", None, 1, (-1, 1)),
             ("c", "w", None, 1, (1, 1)), ("d", "w", None, 1, (1, -1))]
    c = PPTCurve.build(pos, edges)
    return check_T(MarkedCurve(c, (GraphPoint.on_edge("a", 1), GraphPoint.on_edge("f", Fraction(1, 2)))))


@fixture("T", "T1", False)
def t1_overlapping_ends():
    # f is parallel to an end at both of its endpoints
    pos = {"u": (0, 0), "w": (1, 0)}
    edges = [("f", "u", "w", 1), ("p", "u", None, 1, (1, 0)), ("a", "u", None, 1, (-1, 1)),
             ("b", "u", None, 1, (-1, -1)), ("q", "w", None, 1, (-1, 0)), ("c", "w", None, 1, (1, 1)),
             ("d", "w", None, 1, (1, -1))]
    c = PPTCurve.build(pos, edges)
    return check_T(MarkedCurve(c, tuple(GraphPoint.on_edge(e, 1) for e in "abcd")))


# -- T2 -------------------------------------------------------------------------------------------


@fixture("T", "T2", True)
def t2_mark_at_trivalent_vertex():
    c = tripod()
    return check_T(MarkedCurve(c, (GraphPoint.at_vertex("v"), GraphPoint.on_edge("a", 1))))


@fixture("T", "T2", False)
def t2_mark_at_four_valent_vertex():
    c = star([(-1, 0), (-1, 0), (0, -1), (2, 1)], marks=False)
    return check_T(MarkedCurve(c, (GraphPoint.at_vertex("v"), GraphPoint.on_edge("x2", 1)), ((1, 1), 1)))


@fixture("T", "T2", False)
def t2_mark_at_five_valent_vertex():
    c = star([(-1, 0), (-1, 0), (0, -1), (0, -1), (2, 2)], marks=False)
    return check_T(MarkedCurve(c, (GraphPoint.at_vertex("v"),), ((1, 1),)))


# -- T3 ---------------------------------------------------------------------------------------------


@fixture("T", "T3", True)
def t3_skew_images():
    # images (-1, 0) and (0, -2): the connecting direction (1, -2) is normal to no unit-triangle segment
    return check_T(line_through_two(), UNIT)


@fixture("T", "T3", False)
def t3_horizontal_images():
    m = MarkedCurve(tripod(), (GraphPoint.on_edge("a", 1), GraphPoint.on_edge("a", 3)))
    return check_T(m, UNIT)


@fixture("T", "T3", False)
def t3_vertical_images():
    m = MarkedCurve(tripod(), (GraphPoint.on_edge("b", 1), GraphPoint.on_edge("b", 2)))
    return check_T(m, UNIT)


# -- T4 -----------------------------------------------------------------------------------------


@fixture("T", "T4", True)
def t4_weight_one_pair():
    return check_T(special_curve())


@fixture("T", "T4", False)
def t4_weight_two_pair():
    return check_T(special_curve(weight=2))


@fixture("T", "T4", False)
def t4_weight_two_pair_short():
    return check_T(special_curve(weight=2, length=3, offset=Fraction(5, 2)))


# -- T5 -----------------------------------------------------------------------------------------


@fixture("T", "T5", True)
def t5_one_special_pair():
    return check_T(special_curve())


@fixture("T", "T5", False)
def t5_two_special_pairs():
    # the marks on the hanging ends a0, b0 now also share an image
    return check_T(special_curve(offsets_ab=(1, 1)))


@fixture("T", "T5", False)
def t5_two_special_pairs_far():
    return check_T(special_curve(offsets_ab=(3, 3)))


# -- T6 ------------------------------------------------------------------------------------------


@fixture("T", "T6", True)
def t6_finite_pair():
    return check_T(special_curve())


@fixture("T", "T6", False)
def t6_pair_of_ends():
    return check_T(end_pair_curve())


@fixture("T", "T6", False)
def t6_pair_ending_at_vertex_marks():
    return check_T(special_curve(vertex_marks=True))


# -- T7 -------------------------------------------------------------------------------------------


@fixture("T", "T7", True)
def t7_marks_near_far_end():
    # 9/5 > 2 * (2 - 9/5)
    return check_T(special_curve(offset=Fraction(9, 5)))


@fixture("T", "T7", False)
def t7_marks_in_the_middle():
    return check_T(special_curve(offset=Fraction(1)))


@fixture("T", "T7", False)
def t7_equality_is_not_enough():
    # 4/3 == 2 * (2 - 4/3)
    return check_T(special_curve(offset=Fraction(4, 3)))


# -- R fixtures -------------------------------------------------------------------------------------


def even_tail_curve(cross=False):
    """A real vertex v joined by a weight-2 edge to a four-valent vertex u whose edges all have weight 2."""
    pos = {"v": (0, 0), "u": (2, 0)}
    if cross:
        rest = [("g", "u", None, 2, (0, 1)), ("h", "u", None, 2, (0, -1)), ("k", "u", None, 2, (1, 0))]
    else:
        rest = [("g", "u", None, 2, (1, 1)), ("h", "u", None, 2, (1, -1)), ("k", "u", None, 2, (-1, 0))]
    edges = [("f", "v", "u", 2), ("a", "v", None, 1, (-1, -1)), ("b", "v", None, 1, (-1, 1))] + rest
    return PPTCurve.build(pos, edges)


def paired_star(vectors):
    """Star whose ends come in consecutive conjugate pairs."""
    c = star(vectors, marks=False)
    vmap = {v: v for v in c.graph.vertices + c.graph.infinite}
    emap = {}
    for k in range(0, len(vectors), 2):
        a, b = f"x{k}", f"x{k + 1}"
        emap[a], emap[b] = b, a
        vmap[a + "@inf"], vmap[b + "@inf"] = b + "@inf", a + "@inf"
    return RealMarkedCurve(MarkedCurve(c, ()), vmap, emap, frozenset())


def conj_end_curve(mts=None, imag=None, marks_on_pair=True):
    c = star([(-2, 0), (0, -1), (2, 1)], marks=False)
    marks = (GraphPoint.on_edge("x0", 1), GraphPoint.on_edge("x1", 1)) if marks_on_pair else (
        GraphPoint.on_edge("x1", 1), GraphPoint.on_edge("x2", 1))
    m = MarkedCurve(c, marks, ((1, 0), 1) if mts else ())
    r = double(m, ["x0"], imag=imag)
    if mts is not None:
        r = replace(r, base=replace(r.base, mt=mts))
    return r


@fixture("R", "R1", True)
def r1_identity():
    return check_R(RealMarkedCurve.identity(cubic()))


@fixture("R", "R1", False)
def r1_isolated_real_vertex():
    return check_R(paired_star([(-1, 0), (-1, 0), (1, 0), (1, 0)]))


@fixture("R", "R1", False)
def r1_isolated_real_vertex_six():
    return check_R(paired_star([(-1, 0), (-1, 0), (0, -1), (0, -1), (1, 1), (1, 1)]))


@fixture("R", "R2", True)
def r2_trivalent_imaginary():
    return check_R(conj_end_curve())


@fixture("R", "R2", False)
def r2_four_valent_imaginary():
    m = MarkedCurve(even_tail_curve(), ())
    return check_R(double(m, ["f", "g", "h", "k"]))


@fixture("R", "R2", False)
def r2_four_valent_imaginary_cross():
    m = MarkedCurve(even_tail_curve(cross=True), ())
    return check_R(double(m, ["f", "g", "h", "k"]))


@fixture("R", "R3", True)
def r3_vertex_mark_on_real_part():
    return check_R(RealMarkedCurve.identity(MarkedCurve(tripod(), (GraphPoint.at_vertex("v"),))))


@fixture("R", "R3", False)
def r3_vertex_mark_on_imaginary_vertex():
    m = MarkedCurve(even_tail_curve(), (GraphPoint.at_vertex("u"),), ((1, 1),))
    return check_R(double(m, ["f", "g", "h", "k"]))


@fixture("R", "R3", False)
def r3_vertex_mark_on_imaginary_tripod():
    c = star([(-2, 0), (0, -2), (2, 2)], marks=False)
    return check_R(double(MarkedCurve(c, (GraphPoint.at_vertex("v"),)), ["x0", "x1", "x2"]))


@fixture("R", "R4", True)
def r4_imaginary_mark_at_real_trivalent_vertex():
    m = MarkedCurve(tripod(), (GraphPoint.at_vertex("v"),))
    return check_R(replace(RealMarkedCurve.identity(m), imag=frozenset({0})))


@fixture("R", "R4", False)
def r4_imaginary_mark_on_real_edge():
    m = MarkedCurve(tripod(), (GraphPoint.on_edge("a", 1),))
    return check_R(replace(RealMarkedCurve.identity(m), imag=frozenset({0})))


@fixture("R", "R4", False)
def r4_imaginary_mark_at_real_four_valent_vertex():
    c = star([(-1, 0), (-1, 0), (0, -1), (2, 1)], marks=False)
    m = MarkedCurve(c, (GraphPoint.at_vertex("v"),), ((1, 1),))
    return check_R(replace(RealMarkedCurve.identity(m), imag=frozenset({0})))


@fixture("R", "R5", True)
def r5_imaginary_marks_on_pair():
    return check_R(conj_end_curve())


@fixture("R", "R5", False)
def r5_unmarked_imaginary_pair():
    return check_R(conj_end_curve(marks_on_pair=False))


@fixture("R", "R5", False)
def r5_pair_marks_declared_real():
    return check_R(conj_end_curve(imag=()))


def real_config(r, polygon=None, corrupt=None):
    k = generate_kconfiguration(r.base, polygon, seed=3, real=r)
    if corrupt == "coeffs":
        pts = list(k.points)
        i = next(i for i, p in enumerate(pts) if p.conj is not None)
        a, b = pts[i].coeffs
        pts[i] = replace(pts[i], coeffs=((a[0] + 1, a[1]), b))
        k = replace(k, points=tuple(pts))
    elif corrupt == "shared":
        pts = list(k.points)
        i = next(i for i, p in enumerate(pts) if p.conj is not None)
        pts.append(KPoint(pts[i].valuation))
        k = replace(k, points=tuple(pts))
    return k


DM_PAIR = ((1, 0), 1, (0, 1))


@fixture("R", "R6", True)
def r6_generated_configuration():
    r = conj_end_curve(mts=DM_PAIR)
    return check_R(r, real_config(r))


@fixture("R", "R6", True)
def r6_lone_point_over_conjugate_simple_marks():
    r = conj_end_curve()
    return check_R(r, real_config(r))


@fixture("R", "R6", False)
def r6_coefficients_not_conjugate():
    r = conj_end_curve(mts=DM_PAIR)
    return check_R(r, real_config(r, corrupt="coeffs"))


@fixture("R", "R6", False)
def r6_real_and_imaginary_share_valuation():
    r = conj_end_curve(mts=DM_PAIR)
    return check_R(r, real_config(r, corrupt="shared"))


@fixture("R", "R7(iv)", True)
def r7iv_swapped_tags():
    return check_R(conj_end_curve(mts=((1, 0), 1, (0, 1))))


@fixture("R", "R7(iv)", False)
def r7iv_equal_tags():
    return check_R(conj_end_curve(mts=((1, 0), 1, (1, 0))))


@fixture("R", "R7(iii)", True)
def r7iii_imaginary_double_marks():
    return check_R(conj_end_curve(mts=DM_PAIR))


@fixture("R", "R7(iii)", False)
def r7iii_real_double_marks_reversed():
    return check_R(conj_end_curve(mts=((0, 1), 1, (1, 0)), imag=()))


@fixture("R", "R7(iii)", False)
def r7iii_real_double_mark_on_imaginary_part():
    return check_R(conj_end_curve(mts=((1, 0), 1, (0, 1)), imag=()))


@fixture("R", "R7(v)", True)
def r7v_odd_real_ends():
    return check_R(RealMarkedCurve.identity(cubic()))


@fixture("R", "R7(v)", False)
def r7v_even_real_end():
    c = star([(-2, 0), (0, -1), (2, 1)], marks=False)
    return check_R(RealMarkedCurve.identity(MarkedCurve(c, (GraphPoint.on_edge("x1", 1),))))


@fixture("R", "R7(v)", False)
def r7v_even_real_end_heavy():
    c = star([(-2, 0), (0, -2), (2, 2)], marks=False)
    return check_R(RealMarkedCurve.identity(MarkedCurve(c, (GraphPoint.on_edge("x1", 1),))))


@fixture("R", "R7(ii)", True)
def r7ii_real_marks_over_real_points():
    r = RealMarkedCurve.identity(cubic())
    return check_R(r, generate_kconfiguration(r.base, seed=1, real=r))


@fixture("R", "R7(ii)", False)
def r7ii_real_mark_over_imaginary_point():
    r = RealMarkedCurve.identity(line_through_two())
    k = generate_kconfiguration(r.base, seed=1, real=r)
    p0 = k.points[0]
    a = ((Fraction(1), Fraction(1)), (Fraction(2), Fraction(1)))
    pts = (KPoint(p0.valuation, a, 2),) + k.points[1:] + (KPoint(p0.valuation, tuple((x, -y) for x, y in a), 0),)
    return check_R(r, KConfiguration(pts, k.psi))


def infinity_curve():
    c = tripod()
    return MarkedCurve(c, (GraphPoint.at_vertex("a@inf"), GraphPoint.on_edge("b", 1)))


@fixture("R", "R7(i)", True)
def r7i_real_mark_at_infinity():
    r = RealMarkedCurve.identity(infinity_curve())
    return check_R(r, generate_kconfiguration(r.base, UNIT, seed=2, real=r))


@fixture("R", "R7(i)", False)
def r7i_real_mark_over_imaginary_boundary_point():
    r = RealMarkedCurve.identity(infinity_curve())
    k = generate_kconfiguration(r.base, UNIT, seed=2, real=r)
    (p, _), = k.psi
    bp = k.points[p]
    a = ((Fraction(1), Fraction(3)), (Fraction(1), Fraction(0)))
    pts = list(k.points)
    pts[p] = KPoint(bp.valuation, a, len(pts))
    pts.append(KPoint(bp.valuation, tuple((x, -y) for x, y in a), p))
    return check_R(r, KConfiguration(tuple(pts), k.psi))


# -- compatible tuples ---------------------------------------------------------------------------


def cubic_context():
    m = cubic()
    k = generate_kconfiguration(m, standard_triangle(3), seed=0)
    return PatchContext.build(m, standard_triangle(3), 0, k)


def _with_beta(t: CompatibleTuple, side, vec):
    beta = dict(t.beta)
    beta[side] = vec
    return replace(t, beta=tuple(sorted(beta.items())))


@fixture("compatible", "side-degree", True)
def compat_full_tuple():
    ctx = cubic_context()
    return check_compatible(ctx.full_tuple(), ctx)


@fixture("compatible", "side-degree", False)
def compat_side_degree_off_by_one():
    ctx = cubic_context()
    return check_compatible(_with_beta(ctx.full_tuple(), 0, MultiplicityVector.of({1: 2})), ctx)


@fixture("compatible", "side-degree", False)
def compat_side_degree_wrong_weight():
    ctx = cubic_context()
    t = replace(ctx.full_tuple(), beta=tuple((s, MultiplicityVector.of({1: 2})) for s, _ in ctx.beta))
    return check_compatible(t, ctx)


@fixture("compatible", "genus-bound", True)
def compat_genus_at_bound():
    ctx = cubic_context()
    return check_compatible(replace(ctx.full_tuple(), genus=1), ctx)


@fixture("compatible", "genus-bound", False)
def compat_genus_above_bound():
    ctx = cubic_context()
    return check_compatible(replace(ctx.full_tuple(), genus=2), ctx)


@fixture("compatible", "genus-bound", False)
def compat_line_with_genus():
    ctx = cubic_context()
    line = replace(ctx.full_tuple(), polygon=UNIT, genus=1, points=frozenset(), mu=(),
                   beta=tuple((s, MultiplicityVector.of({1: 1})) for s in range(3)))
    return check_compatible(line, ctx)


@fixture("compatible", "euler", True)
def compat_euler_full():
    ctx = cubic_context()
    return check_compatible(ctx.full_tuple(), ctx)


@fixture("compatible", "euler", False)
def compat_euler_point_dropped():
    ctx = cubic_context()
    t = ctx.full_tuple()
    drop = min(t.points)
    return check_compatible(replace(t, points=t.points - {drop}, mu=tuple(x for x in t.mu if x[0] != drop)), ctx)


@fixture("compatible", "euler", False)
def compat_euler_genus_shift():
    # genus 1 still fits the polygon but breaks the point count
    ctx = cubic_context()
    return check_compatible(replace(ctx.full_tuple(), genus=1), ctx)


@fixture("compatible", "subtuple", True)
def compat_subtuple_full():
    ctx = cubic_context()
    return check_compatible(ctx.full_tuple(), ctx)


@fixture("compatible", "subtuple", False)
def compat_subtuple_raised_multiplicity():
    ctx = cubic_context()
    t = ctx.full_tuple()
    return check_compatible(replace(t, mu=tuple((p, v + 1) for p, v in t.mu)), ctx)


@fixture("compatible", "subtuple", False)
def compat_subtuple_beta_too_big():
    ctx = cubic_context()
    return check_compatible(_with_beta(ctx.full_tuple(), 1, MultiplicityVector.of({1: 4})), ctx)


def boundary_square_context():
    """P1 x P1 curve of bidegree (1, 1) with a mark at infinity, for the tangency bound."""
    c = PPTCurve.build({"u": (0, 0), "w": (1, 1)}, [
        ("f", "u", "w", 1), ("a", "u", None, 1, (-1, 0)), ("b", "u", None, 1, (0, -1)),
        ("c", "w", None, 1, (1, 0)), ("d", "w", None, 1, (0, 1))])
    m = MarkedCurve(c, (GraphPoint.at_vertex("a@inf"), GraphPoint.on_edge("b", 1), GraphPoint.on_edge("c", 1)))
    k = generate_kconfiguration(m, SQUARE, seed=0)
    return PatchContext.build(m, SQUARE, 0, k)


@fixture("compatible", "tangency-bound", True)
def compat_tangency_full():
    ctx = boundary_square_context()
    return check_compatible(ctx.full_tuple(), ctx)


@fixture("compatible", "tangency-bound", False)
def compat_tangency_missing_weight():
    ctx = boundary_square_context()
    t = ctx.full_tuple()
    (p, _), = ctx.config.psi
    side = ctx.config.points[p].valuation.side
    return check_compatible(_with_beta(t, side, MultiplicityVector()), ctx)


@fixture("compatible", "tangency-bound", False)
def compat_tangency_wrong_weight():
    ctx = boundary_square_context()
    t = ctx.full_tuple()
    (p, _), = ctx.config.psi
    side = ctx.config.points[p].valuation.side
    return check_compatible(_with_beta(t, side, MultiplicityVector.of({2: 1})), ctx)


# -- surface bounds (A5) ------------------------------------------------------------------------------------------


def interior_config(n):
    return KConfiguration(tuple(KPoint((Fraction(i), Fraction(i * i))) for i in range(n)))


def boundary_config(n, sides):
    pts = [KPoint((Fraction(i), Fraction(i * i))) for i in range(n)]
    pts += [KPoint(BoundaryPoint(s, Fraction(k))) for k, s in enumerate(sides)]
    return KConfiguration(tuple(pts))


@fixture("A5", "all-simple", True)
def a5_all_simple_plane():
    return check_A5_criteria(surface_of(standard_triangle(3)), interior_config(8), {i: 1 for i in range(8)})


@fixture("A5", "all-simple", True)
def a5_all_simple_other_surface():
    hexagon = LatticePolygon.hull([(0, 0), (2, 0), (3, 1), (3, 2), (1, 2), (0, 1)])
    return check_A5_criteria(surface_of(hexagon), interior_config(3), {0: 1, 1: 1, 2: 1})


@fixture("A5", "all-simple", False)
def a5_double_point_unbounded_surface():
    # a single multiplicity-2 point and no surface bound to fall back on
    thin = LatticePolygon.hull([(0, 0), (2, 0), (0, 1)])
    return check_A5_criteria(surface_of(thin), interior_config(3), {0: 2, 1: 1, 2: 1})


@fixture("A5", "plane-bound", True)
def a5_plane_four_multiple():
    return check_A5_criteria(surface_of(standard_triangle(4)), interior_config(5), {0: 2, 1: 2, 2: 3, 3: 2, 4: 1})


@fixture("A5", "plane-bound", False)
def a5_plane_five_multiple():
    return check_A5_criteria(surface_of(standard_triangle(4)), interior_config(5), {i: 2 for i in range(5)})


@fixture("A5", "quadric-bound", True)
def a5_quadric_three_multiple_one_divisor():
    big = LatticePolygon.hull([(0, 0), (3, 0), (3, 3), (0, 3)])
    return check_A5_criteria(surface_of(big), boundary_config(3, [0, 0]), {0: 2, 1: 2, 2: 2})


@fixture("A5", "quadric-bound", False)
def a5_quadric_four_multiple():
    big = LatticePolygon.hull([(0, 0), (3, 0), (3, 3), (0, 3)])
    return check_A5_criteria(surface_of(big), interior_config(4), {i: 2 for i in range(4)})


@fixture("A5", "quadric-bound", False)
def a5_quadric_two_divisors():
    big = LatticePolygon.hull([(0, 0), (3, 0), (3, 3), (0, 3)])
    return check_A5_criteria(surface_of(big), boundary_config(2, [0, 1]), {0: 2, 1: 2})


@fixture("A5", "blowup-bound", True)
def a5_blowup_within_bound():
    # one blown-up point: the exceptional side has self-intersection -1, so the bound is 5 + 1 - 1 = 5
    trap = LatticePolygon.hull([(0, 0), (2, 0), (1, 1), (0, 1)])
    return check_A5_criteria(surface_of(trap), interior_config(5), {i: 2 for i in range(5)})


@fixture("A5", "blowup-bound", False)
def a5_blowup_over_bound():
    trap = LatticePolygon.hull([(0, 0), (2, 0), (1, 1), (0, 1)])
    return check_A5_criteria(surface_of(trap), interior_config(7), {i: 2 for i in range(7)})
