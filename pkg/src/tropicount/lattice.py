"""Exact lattice geometry in the plane.

Points are plain ``(x, y)`` tuples of ``int`` (lattice points) or
``Fraction`` (rational points).  Polygons are stored counterclockwise,
starting at the lexicographically smallest vertex, so two polygons are
equal exactly when their vertex tuples are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Iterable, NamedTuple, Sequence

LatticePoint = tuple[int, int]
RationalPoint = tuple[Fraction, Fraction]


class WeightedDirection(NamedTuple):
    """A nonzero integer vector written as ``weight * primitive``."""

    primitive: LatticePoint
    weight: int

    @property
    def vector(self) -> LatticePoint:
        return (self.weight * self.primitive[0], self.weight * self.primitive[1])


def primitive_decompose(v: Sequence[int]) -> WeightedDirection:
    """Split an integer vector into its primitive direction and lattice length.

    >>> primitive_decompose((6, -9))
    WeightedDirection(primitive=(2, -3), weight=3)
    """
    x, y = int(v[0]), int(v[1])
    if x == 0 and y == 0:
        raise ValueError("zero direction")
    k = gcd(abs(x), abs(y))
    return WeightedDirection((x // k, y // k), k)


def as_rational(p: Sequence) -> RationalPoint:
    return (Fraction(p[0]), Fraction(p[1]))


def cross(a: Sequence, b: Sequence):
    return a[0] * b[1] - a[1] * b[0]


def dot(a: Sequence, b: Sequence):
    return a[0] * b[0] + a[1] * b[1]


def sub(a: Sequence, b: Sequence):
    return (a[0] - b[0], a[1] - b[1])


def add(a: Sequence, b: Sequence):
    return (a[0] + b[0], a[1] + b[1])


def scale(k, a: Sequence):
    return (k * a[0], k * a[1])


def rot90(v: Sequence):
    """Counterclockwise rotation by a right angle."""
    return (-v[1], v[0])


def rot90_cw(v: Sequence):
    """Clockwise rotation by a right angle."""
    return (v[1], -v[0])


def _half(v) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def angle_cmp(a: Sequence, b: Sequence) -> int:
    """Exact comparison of the polar angles of two nonzero vectors."""
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return -1 if ha < hb else 1
    c = cross(a, b)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def sort_by_angle(vectors: Iterable[Sequence]) -> list:
    return sorted(vectors, key=cmp_to_key(angle_cmp))


def convex_hull(points: Iterable[Sequence]) -> list:
    """Strictly convex hull, counterclockwise, starting at the lexicographic minimum.

    Degenerate inputs give one vertex (a point) or two (a segment).
    """
    pts = sorted(set((p[0], p[1]) for p in points))
    if len(pts) <= 1:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(sub(lower[-1], lower[-2]), sub(p, lower[-1])) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(sub(upper[-1], upper[-2]), sub(p, upper[-1])) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


@dataclass(frozen=True)
class LatticePolygon:
    """Convex lattice polygon, possibly degenerate (segment or point)."""

    vertices: tuple[LatticePoint, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("empty polygon")

    @classmethod
    def hull(cls, points: Iterable[Sequence[int]]) -> "LatticePolygon":
        verts = convex_hull((int(p[0]), int(p[1])) for p in points)
        if not verts:
            raise ValueError("empty polygon")
        return cls(tuple(verts))

    @classmethod
    def from_edge_vectors(cls, vectors: Iterable[Sequence[int]], start=(0, 0)) -> "LatticePolygon":
        """Assemble a polygon from edge vectors that sum to zero (any order)."""
        vecs = [tuple(v) for v in vectors if tuple(v) != (0, 0)]
        total = (sum(v[0] for v in vecs), sum(v[1] for v in vecs))
        if total != (0, 0):
            raise ValueError(f"edge vectors do not close up (sum {total})")
        pts = [tuple(start)]
        for v in sort_by_angle(vecs):
            pts.append(add(pts[-1], v))
        return cls.hull(pts)

    @property
    def dim(self) -> int:
        return min(len(self.vertices), 3) - 1

    def canonical(self) -> "LatticePolygon":
        """Translate so the lexicographically smallest vertex sits at the origin."""
        o = self.vertices[0]
        return LatticePolygon(tuple(sub(v, o) for v in self.vertices))

    def translate(self, t: Sequence[int]) -> "LatticePolygon":
        return LatticePolygon(tuple(add(v, t) for v in self.vertices))

    def edges(self) -> list[tuple[LatticePoint, LatticePoint]]:
        """Sides as counterclockwise vertex pairs; a segment has its two orientations."""
        n = len(self.vertices)
        if n == 1:
            return []
        if n == 2:
            a, b = self.vertices
            return [(a, b), (b, a)]
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def edge_vectors(self) -> list[LatticePoint]:
        return [sub(b, a) for a, b in self.edges()]

    def outer_normals(self) -> list[WeightedDirection]:
        """Primitive exterior normal and lattice length of each side, in side order."""
        return [primitive_decompose(rot90_cw(sub(b, a))) for a, b in self.edges()]

    def side_with_normal(self, u: Sequence[int]) -> int | None:
        u = tuple(u)
        for i, n in enumerate(self.outer_normals()):
            if n.primitive == u:
                return i
        return None

    def side_length(self, u: Sequence[int]) -> int:
        """Lattice length of the side with primitive exterior normal ``u`` (0 if none)."""
        i = self.side_with_normal(u)
        return 0 if i is None else self.outer_normals()[i].weight

    def contains(self, p: Sequence, strict: bool = False) -> bool:
        verts = self.vertices
        if len(verts) == 1:
            return not strict and tuple(p) == verts[0]
        if len(verts) == 2:
            a, b = verts
            if cross(sub(b, a), sub(p, a)) != 0:
                return False
            t = dot(sub(p, a), sub(b, a))
            return (0 < t < dot(sub(b, a), sub(b, a))) if strict else (0 <= t <= dot(sub(b, a), sub(b, a)))
        for a, b in self.edges():
            c = cross(sub(b, a), sub(p, a))
            if c < 0 or (strict and c == 0):
                return False
        return True

    def bbox(self) -> tuple[int, int, int, int]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def is_triangle(self) -> bool:
        return len(self.vertices) == 3

    def is_parallelogram(self) -> bool:
        if len(self.vertices) != 4:
            return False
        a, b, c, d = self.vertices
        return add(a, c) == add(b, d)

    def __repr__(self) -> str:
        return f"LatticePolygon({list(self.vertices)})"


def lattice_volume(p: LatticePolygon | Iterable[Sequence[int]]) -> int:
    """Normalized lattice volume.

    Twice the Euclidean area for two-dimensional polygons, lattice length
    for segments, 0 for points.  A bare iterable of points is treated as a
    finite point set and its cardinality is returned.
    """
    if not isinstance(p, LatticePolygon):
        return len(set(tuple(q) for q in p))
    verts = p.vertices
    if len(verts) == 1:
        return 0
    if len(verts) == 2:
        return primitive_decompose(sub(verts[1], verts[0])).weight
    twice_area = 0
    for a, b in p.edges():
        twice_area += cross(a, b)
    return abs(twice_area)


def lattice_points(p: LatticePolygon) -> tuple[list[LatticePoint], list[LatticePoint]]:
    """Interior and boundary lattice points of ``p``, each sorted."""
    x0, y0, x1, y1 = p.bbox()
    interior, boundary = [], []
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            if not p.contains((x, y)):
                continue
            if p.dim == 2 and p.contains((x, y), strict=True):
                interior.append((x, y))
            else:
                boundary.append((x, y))
    return interior, boundary


def all_lattice_points(p: LatticePolygon) -> list[LatticePoint]:
    inner, bd = lattice_points(p)
    return sorted(inner + bd)


def minkowski_sum(parts: Sequence[LatticePolygon]) -> LatticePolygon:
    if not parts:
        raise ValueError("minkowski_sum of an empty list")
    pts = list(parts[0].vertices)
    for q in parts[1:]:
        pts = convex_hull(add(a, b) for a in pts for b in q.vertices)
    return LatticePolygon.hull(pts)


def is_minkowski_summand(small: LatticePolygon, big: LatticePolygon) -> bool:
    """True iff ``big = small + other`` for some lattice polygon, segment or point."""
    if small.dim == 0:
        return True
    big_lengths = {n.primitive: n.weight for n in big.outer_normals()}
    for n in small.outer_normals():
        if big_lengths.get(n.primitive, 0) < n.weight:
            return False
    return True


def standard_triangle(d: int) -> LatticePolygon:
    return LatticePolygon.hull([(0, 0), (d, 0), (0, d)])
