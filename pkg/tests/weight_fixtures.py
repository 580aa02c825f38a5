"""Star and real-lift fixtures shared by the weight tests and the acceptance run."""

import itertools
import math

from tropicount.lattice import LatticePolygon
from tropicount.weights import _lift_real, deform_star


def star_polygon(vectors):
    """Polygon with the given end vectors as outer normals (test-side construction)."""
    sides = sorted(((-v[1], v[0]) for v in vectors), key=lambda s: math.atan2(s[1], s[0]))
    pts = [(0, 0)]
    for s in sides[:-1]:
        pts.append((pts[-1][0] + s[0], pts[-1][1] + s[1]))
    return list(LatticePolygon.hull(pts).vertices)


def m5_cases():
    """Stars (multiple class, other class); the free end closes the balance."""
    out = []
    d1s = [(-1, 0), (0, -1), (-1, -1), (1, -1), (-1, 1)]
    d2s = [(0, -1), (-1, 0), (1, -1), (-1, -2), (-2, -1), (1, 1), (-1, 1)]
    for d1, d2 in itertools.product(d1s, d2s):
        if d1[0] * d2[1] - d1[1] * d2[0] == 0:
            continue
        for s, r in ((2, 1), (3, 1), (2, 2)):
            vecs = [d1] * s + [d2] * r
            sx, sy = sum(v[0] for v in vecs), sum(v[1] for v in vecs)
            out.append((vecs, (-sx, -sy), s, r))
    return out


def primitive(v):
    return math.gcd(abs(v[0]), abs(v[1])) == 1


M5 = m5_cases()


def real_lifts():
    """Real curves obtained by lifting deformed stars with some even ends made imaginary."""
    out = []
    dirs = [((-1, 0), (0, -1)), ((-1, 0), (1, -1)), ((0, -1), (-1, 1)), ((-2, -1), (0, -1))]
    for d1, d2 in dirs:
        for ws1, ws2 in itertools.product([(2,), (2, 1), (2, 2), (4,)], [(1,), (2,), (1, 1)]):
            if len(ws1) + len(ws2) > 3:
                continue
            vecs = [(w * d1[0], w * d1[1]) for w in ws1] + [(w * d2[0], w * d2[1]) for w in ws2]
            free = (-sum(v[0] for v in vecs), -sum(v[1] for v in vecs))
            ws = list(ws1) + list(ws2)
            cls = [0] * len(ws1) + [1] * len(ws2)
            for flags in itertools.product([False, True], repeat=len(vecs)):
                if not any(flags) or any(f and w % 2 for f, w in zip(flags, ws)):
                    continue
                for q in deform_star(vecs + [free], cls, 0):
                    lift = _lift_real(q, list(flags))
                    if lift is not None:
                        out.append(lift)
    return out


LIFTS = real_lifts()
