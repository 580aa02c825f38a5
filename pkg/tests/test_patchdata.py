import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import random_tree_curve, star, tripod
from patch_fixtures import FIXTURES, cubic, end_pair_curve, special_curve
from tropicount.curve import GraphPoint, MarkedCurve, PPTCurve
from tropicount.enumerate import EnumerationProblem, count_complex
from tropicount.lattice import LatticePolygon, lattice_volume, standard_triangle
from tropicount.duality import newton_polygon
from tropicount.patchdata import (
    KConfiguration,
    KPoint,
    MultiplicityVector,
    PatchContext,
    PatchDataError,
    boundary_vectors,
    check_compatible,
    check_euler,
    detect_special,
    face_length,
    generate_kconfiguration,
    multiplicity_function,
    norms,
    surface_of,
)


# -- norms and beta vectors -----------------------------------------------------------------------


@pytest.mark.parametrize("entries,want", [({1: 2, 3: 1}, (3, 5)), ({}, (0, 0)), ({2: 4}, (4, 8))])
def test_norms(entries, want):
    assert norms(MultiplicityVector.of(entries)) == want


def test_multiplicity_vector_rejects_negative():
    with pytest.raises(ValueError):
        MultiplicityVector.of({1: -1})


@pytest.mark.parametrize("d", [1, 2, 3])
def test_beta_degree_d(d):
    m = count_complex(EnumerationProblem(standard_triangle(d), 0)).curves[0].curve
    beta = boundary_vectors(m.curve, standard_triangle(d))
    assert all(b.as_dict() == {1: d} for b in beta.values())


def test_beta_weight_two_end():
    c = star([(-2, 0), (0, -2), (2, 2)], marks=False)
    beta = boundary_vectors(c, standard_triangle(2))
    assert [b.as_dict() for b in beta.values()] == [{2: 1}] * 3
    assert all(norms(b)[1] == 2 for b in beta.values())


def test_beta_mixed_weights():
    # a length-4 left side hit by ends of weights 1, 1 and 2
    pos = {"u": (0, 0), "w": (0, 5)}
    edges = [("f", "u", "w", 1), ("a", "u", None, 1, (-1, 0)), ("b", "u", None, 1, (1, -1)),
             ("c", "w", None, 1, (-1, 0)), ("d", "w", None, 2, (-1, 0)), ("e", "w", None, 1, (3, 1))]
    c = PPTCurve.build(pos, edges)
    P = newton_polygon(c)
    beta = boundary_vectors(c, P)
    left = next(b for b in beta.values() if b.as_dict().get(2))
    assert left.as_dict() == {1: 2, 2: 1} and norms(left)[1] == 4


# -- multiplicity function and Euler relation ------------------------------------------------


def test_single_mark_multiplicity_one():
    m = MarkedCurve(tripod(), (GraphPoint.on_edge("a", 1), GraphPoint.on_edge("b", 1)))
    k = generate_kconfiguration(m)
    assert sorted(multiplicity_function(m, k).values()) == [1, 1]


def test_double_marks_split_components():
    c = star([(-1, 0), (-1, 0), (-1, 0), (0, -1), (3, 1)], marks=False)
    marks = tuple(GraphPoint.on_edge(f"x{i}", 1) for i in range(3))
    m = MarkedCurve(c, marks, ((1, 0), (1, 0), (0, 1)))
    k = generate_kconfiguration(m)
    mu = multiplicity_function(m, k)
    assert sorted(mu.values()) == [1, 2]
    x = m.image(0)
    over = [i for i in k.interior() if k.points[i].valuation == x]
    assert [mu[i] for i in over] == [2, 1]


def test_trivalent_vertex_mark_counts_both():
    m = MarkedCurve(tripod(), (GraphPoint.at_vertex("v"),))
    k = generate_kconfiguration(m)
    assert multiplicity_function(m, k) == {0: 1, 1: 1}


def test_missing_point_names_condition():
    m = MarkedCurve(tripod(), (GraphPoint.at_vertex("v"),))
    k = generate_kconfiguration(m)
    with pytest.raises(PatchDataError) as err:
        multiplicity_function(m, KConfiguration(k.points[:1]))
    assert err.value.rule == "A2"
    m2 = MarkedCurve(tripod(), (GraphPoint.on_edge("a", 1),))
    with pytest.raises(PatchDataError) as err:
        multiplicity_function(m2, KConfiguration((KPoint((Fraction(5), Fraction(5))),)))
    assert err.value.rule == "A1"


def test_euler_rational_cubic():
    m = cubic()
    k = generate_kconfiguration(m, standard_triangle(3))
    mu = multiplicity_function(m, k)
    assert sum(mu.values()) == 8 and len(m.curve.graph.infinite) == 9
    assert check_euler(m, k, 0)
    assert not check_euler(m, k, 1)


def test_euler_boundary_point():
    # moving a mark to infinity trades one multiplicity for one boundary point
    c = tripod()
    m = MarkedCurve(c, (GraphPoint.at_vertex("a@inf"), GraphPoint.on_edge("b", 1)))
    k = generate_kconfiguration(m, standard_triangle(1))
    mu = multiplicity_function(m, k, standard_triangle(1))
    assert sum(mu.values()) == 1 and len(k.boundary()) == 1
    assert check_euler(m, k, 0, mu)


def test_euler_elliptic_cubic():
    r = count_complex(EnumerationProblem(standard_triangle(3), 1)).curves[0]
    k = generate_kconfiguration(r.curve, standard_triangle(3))
    assert sum(multiplicity_function(r.curve, k).values()) == 9
    assert check_euler(r.curve, k, 1)


# -- compatible tuples --------------------------------------------------------------------------


def test_face_length():
    T = standard_triangle(3)
    assert face_length(T, (0, -1)) == 3 and face_length(T, (1, 1)) == 3 and face_length(T, (1, -1)) == 0


def test_non_summand_rejected():
    m = cubic()
    k = generate_kconfiguration(m, standard_triangle(3))
    ctx = PatchContext.build(m, standard_triangle(3), 0, k)
    sq = LatticePolygon.hull([(0, 0), (1, 0), (1, 1), (0, 1)])
    with pytest.raises(PatchDataError):
        check_compatible(ctx.full_tuple().__class__(sq, 0, frozenset(), (), ()), ctx)


def test_full_tuple_compatible_for_enumerated_curves():
    for d, g in ((2, 0), (3, 0), (3, 1)):
        for r in count_complex(EnumerationProblem(standard_triangle(d), g)).curves:
            k = generate_kconfiguration(r.curve, standard_triangle(d))
            ctx = PatchContext.build(r.curve, standard_triangle(d), g, k)
            assert check_compatible(ctx.full_tuple(), ctx).ok


# -- special pairs -------------------------------------------------------------------------------


def test_special_pattern_detected():
    sp = detect_special(special_curve())
    assert sp.point_pairs == ((0, 1),)
    assert sp.edge_pairs == (("v", "ea", "eb"),)
    assert sp.vertices == {"v"}


def test_end_pair_detected():
    sp = detect_special(end_pair_curve())
    assert sp.edge_pairs == (("v", "x0", "x1"),)


def test_distinct_images_no_special():
    sp = detect_special(cubic())
    assert sp.point_pairs == () and sp.edge_pairs == () and not sp.vertices


def test_mismatched_trees_not_special():
    # like the special pattern, but b carries a four-valent hanging tree
    L = Fraction(2)
    pos = {"v": (0, 0), "a": (-L, 0), "b": (-L, 0)}
    edges = [("ea", "v", "a", 1), ("eb", "v", "b", 1), ("y", "v", None, 1, (0, -1)), ("z", "v", None, 1, (2, 1)),
             ("a0", "a", None, 1, (0, 1)), ("a1", "a", None, 1, (-1, -1)),
             ("b0", "b", None, 1, (0, 1)), ("b1", "b", None, 1, (-1, 0)), ("b2", "b", None, 1, (0, -1))]
    c = PPTCurve.build(pos, edges)
    # the marks beyond a and b share an image, but the trees hanging there differ
    m = MarkedCurve(c, (GraphPoint.on_edge("a0", 1), GraphPoint.on_edge("b0", 1), GraphPoint.on_edge("y", 1)))
    sp = detect_special(m)
    assert sp.point_pairs == ((0, 1),)
    assert sp.edge_pairs == ()


# -- surfaces -----------------------------------------------------------------------------------


def test_surface_identification():
    assert surface_of(standard_triangle(5)).kind == "P2"
    assert surface_of(LatticePolygon.hull([(0, 0), (2, 0), (2, 3), (0, 3)])).kind == "P1xP1"
    trap = surface_of(LatticePolygon.hull([(0, 0), (3, 0), (1, 2), (0, 2)]))
    assert (trap.kind, trap.k) == ("P2_k", 1)
    assert surface_of(LatticePolygon.hull([(0, 0), (2, 0), (0, 1)])).kind == "other"


# -- validator fixtures --------------------------------------------------------------------------


@pytest.mark.parametrize("fx", FIXTURES, ids=[f.name for f in FIXTURES])
def test_validator_fixture(fx):
    assert fx.observed_pass() == fx.expect_pass


# -- properties ----------------------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_beta_side_degree_identity(seed):
    c = random_tree_curve(random.Random(seed))
    P = newton_polygon(c)
    beta = boundary_vectors(c, P)
    sides = P.edges()
    for s, (a, b) in enumerate(sides):
        assert norms(beta[s])[1] == lattice_volume(LatticePolygon.hull([a, b]))
    assert sum(norms(b)[0] for b in beta.values()) == len(c.graph.infinite)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.permutations(range(4)))
def test_special_detection_symmetric(seed, perm):
    m = special_curve(offsets_ab=(1, 1) if seed % 2 else (1, 2))
    shuffled = MarkedCurve(m.curve, tuple(m.marks[i] for i in perm) + m.marks[4:], tuple(m.mt[i] for i in perm) + m.mt[4:])
    a, b = detect_special(m), detect_special(shuffled)
    pairs = lambda sp, marks: {frozenset((marks[i], marks[j])) for i, j in sp.point_pairs}  # noqa: E731
    assert pairs(a, m.marks) == pairs(b, shuffled.marks)
    assert {frozenset(p[1:]) for p in a.edge_pairs} == {frozenset(p[1:]) for p in b.edge_pairs}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_injective_marks_have_no_special_pairs(seed):
    rng = random.Random(seed)
    c = random_tree_curve(rng)
    ends = [e.id for e in c.graph.ends()]
    m = MarkedCurve(c, tuple(GraphPoint.on_edge(e, k + 1) for k, e in enumerate(ends[:-1])))
    if len({m.image(i) for i in range(len(m.marks))}) == len(m.marks):
        sp = detect_special(m)
        assert sp.point_pairs == () and sp.edge_pairs == ()
