"""Shared helpers for randomized geometry tests."""

import random
from fractions import Fraction

from viscount.exact import SimplePolygon, pt


def lpoly():
    return SimplePolygon([pt(0, 0), pt(4, 0), pt(4, 2), pt(2, 2), pt(2, 4), pt(0, 4)])


def comb():
    """Three towers over a bottom strip; the gaps block sight between towers."""
    coords = [(0, 0), (10, 0), (10, 6), (8, 6), (8, 2), (6, 2), (6, 6),
              (4, 6), (4, 2), (2, 2), (2, 6), (0, 6)]
    return SimplePolygon([pt(x, y) for x, y in coords])


def interior_points(poly, k, seed, den=7):
    """k random rational points strictly inside the polygon."""
    rng = random.Random(seed)
    xmin, ymin, xmax, ymax = poly.bbox()
    out = []
    while len(out) < k:
        p = pt(Fraction(rng.randint(int(xmin) * den, int(xmax) * den), den),
               Fraction(rng.randint(int(ymin) * den, int(ymax) * den), den))
        if poly.locate(p) > 0:
            out.append(p)
    return out


def interior_int_point(poly, rng):
    xmin, ymin, xmax, ymax = poly.bbox()
    while True:
        p = pt(rng.randint(int(xmin), int(xmax)), rng.randint(int(ymin), int(ymax)))
        if poly.locate(p) > 0:
            return p
