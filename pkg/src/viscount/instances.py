"""Instance generation and the exact instance-file format.

Polygons come from a random point set untangled into a simple tour by 2-opt
uncrossing; every uncrossing strictly shortens the tour, so the loop always
terminates.  All coordinates are integers, and the full point set (polygon
vertices plus object and query endpoints) is kept in general position: no
two points coincide and no three are collinear.  Everything is deterministic
in the seed.
"""

import random
from fractions import Fraction
from math import gcd, isqrt

from .exact import SimplePolygon, orient, pt, pt_xy, segment_inside_polygon
from .visibility import is_point


def _slope_key(a, b):
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    g = gcd(abs(dx), abs(dy))
    dx //= g
    dy //= g
    if dx < 0 or (dx == 0 and dy < 0):
        dx, dy = -dx, -dy
    return (dx, dy)


class _GeneralPosition:
    """Incremental no-duplicate / no-three-collinear bookkeeping."""

    def __init__(self):
        self.points = []
        self.slopes = []  # per point: set of direction keys to later points

    def ok(self, q):
        for i, p in enumerate(self.points):
            if p == q:
                return False
            if _slope_key(p, q) in self.slopes[i]:
                return False
        return True

    def add(self, q):
        for i, p in enumerate(self.points):
            self.slopes[i].add(_slope_key(p, q))
        self.points.append(q)
        self.slopes.append(set())

    def pop(self):
        # undo the most recent add; keys added for it are necessarily new
        q = self.points.pop()
        self.slopes.pop()
        for i, p in enumerate(self.points):
            self.slopes[i].discard(_slope_key(p, q))


def _uncross(pts, order):
    """2-opt uncrossing of the tour ``order`` over integer points ``pts``."""
    n = len(order)

    def vert(i):
        return pts[order[i]]

    changed = True
    while changed:
        changed = False
        i = 0
        while i < n:
            a = vert(i)
            b = vert((i + 1) % n)
            j = i + 1
            while j < n:
                if j == i or (j + 1) % n == i:
                    j += 1
                    continue
                c = vert(j)
                d = vert((j + 1) % n)
                o1 = orient(a, b, c)
                o2 = orient(a, b, d)
                if o1 == o2 or o1 == 0 or o2 == 0:
                    j += 1
                    continue
                o3 = orient(c, d, a)
                o4 = orient(c, d, b)
                if o3 == o4 or o3 == 0 or o4 == 0:
                    j += 1
                    continue
                # edges (i,i+1) and (j,j+1) properly cross: reverse i+1..j
                lo, hi = i + 1, j
                while lo < hi:
                    order[lo], order[hi] = order[hi], order[lo]
                    lo += 1
                    hi -= 1
                changed = True
                a = vert(i)
                b = vert((i + 1) % n)
                j = i + 1
            i += 1
    return order


def gen_polygon(n, seed):
    """Deterministic random simple polygon on n integer vertices."""
    if n < 3:
        raise ValueError("need n >= 3")
    rng = random.Random(("poly", seed, n).__repr__())
    grid = max(64, 4 * n * isqrt(max(n, 4)))
    for _attempt in range(64):
        gp = _GeneralPosition()
        tries = 0
        while len(gp.points) < n and tries < 50 * n + 200:
            q = (rng.randint(0, grid), rng.randint(0, grid))
            tries += 1
            if gp.ok(q):
                gp.add(q)
        if len(gp.points) < n:
            continue
        pts = [pt(x, y) for x, y in gp.points]
        order = list(range(n))
        rng.shuffle(order)
        _uncross(pts, order)
        verts = [pts[i] for i in order]
        try:
            poly = SimplePolygon(verts)
        except ValueError:
            continue
        return poly
    raise RuntimeError("polygon generation failed")


def _collect_gp(poly, extra=()):
    gp = _GeneralPosition()
    for v in poly.verts:
        gp.add((v[0], v[1]))
    for p in extra:
        gp.add((p[0], p[1]))
    return gp


def gen_objects(poly, m, kind, seed):
    """Rejection-sample m objects inside the polygon, general position kept."""
    rng = random.Random(("objects", seed, m, kind).__repr__())
    xmin, ymin, xmax, ymax = poly.bbox()
    lo_x, hi_x = int(xmin), int(xmax)
    lo_y, hi_y = int(ymin), int(ymax)
    gp = _collect_gp(poly)
    out = []

    def sample_point():
        for _ in range(4000):
            q = (rng.randint(lo_x, hi_x), rng.randint(lo_y, hi_y))
            if not gp.ok(q):
                continue
            p = pt(*q)
            if poly.locate(p) > 0:
                return p, q
        raise RuntimeError("object sampling failed")

    for _ in range(m):
        if kind == 'point':
            p, q = sample_point()
            gp.add(q)
            out.append(p)
        else:
            for _ in range(400):
                p1, q1 = sample_point()
                gp.add(q1)
                p2, _q2 = sample_point()
                if segment_inside_polygon(poly, p1, p2):
                    gp.add(_q2)
                    out.append((p1, p2))
                    break
                gp.pop()
            else:
                raise RuntimeError("segment sampling failed")
    return out


def gen_queries(poly, k, kind, seed, objects=()):
    """Random query points/segments inside the polygon, general position
    against the polygon vertices and all object endpoints."""
    rng = random.Random(("queries", seed, k, kind).__repr__())
    xmin, ymin, xmax, ymax = poly.bbox()
    lo_x, hi_x = int(xmin), int(xmax)
    lo_y, hi_y = int(ymin), int(ymax)
    extra = []
    for o in objects:
        if is_point(o):
            extra.append(o)
        else:
            extra.extend(o)
    gp = _collect_gp(poly, extra)
    out = []

    def sample_point():
        for _ in range(4000):
            q = (rng.randint(lo_x, hi_x), rng.randint(lo_y, hi_y))
            if not gp.ok(q):
                continue
            p = pt(*q)
            if poly.locate(p) > 0:
                return p, q
        raise RuntimeError("query sampling failed")

    for _ in range(k):
        if kind == 'point':
            p, q = sample_point()
            gp.add(q)
            out.append(p)
        else:
            for _ in range(400):
                p1, q1 = sample_point()
                gp.add(q1)
                p2, q2 = sample_point()
                if segment_inside_polygon(poly, p1, p2):
                    gp.add(q2)
                    out.append((p1, p2))
                    break
                gp.pop()
            else:
                raise RuntimeError("query sampling failed")
    return out


# ---------------------------------------------------------------------------
# instance files

class Instance:
    __slots__ = ('polygon', 'objects', 'queries', 'meta')

    def __init__(self, polygon, objects, queries, meta):
        self.polygon = polygon
        self.objects = objects
        self.queries = queries
        self.meta = meta


def _fmt_coord(fr):
    fr = Fraction(fr)
    if fr.denominator == 1:
        return str(fr.numerator)
    return f"{fr.numerator}/{fr.denominator}"


def _fmt_point(p):
    x, y = pt_xy(p)
    return f"{_fmt_coord(x)} {_fmt_coord(y)}"


def serialize(inst):
    lines = ["meta"]
    for k in sorted(inst.meta):
        lines.append(f"{k}={inst.meta[k]}")
    lines.append("polygon")
    for v in inst.polygon.verts:
        lines.append(_fmt_point(v))
    lines.append("objects")
    for o in inst.objects:
        if is_point(o):
            lines.append(f"point {_fmt_point(o)}")
        else:
            lines.append(f"segment {_fmt_point(o[0])} {_fmt_point(o[1])}")
    lines.append("queries")
    for q in inst.queries:
        if is_point(q):
            lines.append(f"point {_fmt_point(q)}")
        else:
            lines.append(f"segment {_fmt_point(q[0])} {_fmt_point(q[1])}")
    return "\n".join(lines) + "\n"


class ParseError(ValueError):
    pass


def parse(text):
    section = None
    meta = {}
    verts = []
    objects = []
    queries = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if line in ('meta', 'polygon', 'objects', 'queries'):
            section = line
            continue
        if section == 'meta':
            if '=' not in line:
                raise ParseError(f"line {ln}: expected key=value in meta")
            k, v = line.split('=', 1)
            meta[k] = v
        elif section == 'polygon':
            verts.append(_parse_point(line.split(), ln))
        elif section in ('objects', 'queries'):
            parts = line.split()
            tgt = objects if section == 'objects' else queries
            if parts[0] == 'point' and len(parts) == 3:
                tgt.append(_parse_point(parts[1:], ln))
            elif parts[0] == 'segment' and len(parts) == 5:
                tgt.append((_parse_point(parts[1:3], ln),
                            _parse_point(parts[3:5], ln)))
            else:
                raise ParseError(f"line {ln}: bad {section} entry")
        else:
            raise ParseError(f"line {ln}: content before any section")
    if len(verts) < 3:
        raise ParseError("polygon: needs at least 3 vertices")
    try:
        poly = SimplePolygon(verts)
    except ValueError as e:
        raise ParseError(f"polygon: {e}") from e
    for o in objects:
        a, b = (o, o) if is_point(o) else o
        if not segment_inside_polygon(poly, a, b):
            raise ParseError("objects: object not inside polygon")
    for q in queries:
        a, b = (q, q) if is_point(q) else q
        if not segment_inside_polygon(poly, a, b):
            raise ParseError("queries: query not inside polygon")
    return Instance(poly, objects, queries, meta)


def _parse_point(parts, ln):
    if len(parts) != 2:
        raise ParseError(f"line {ln}: expected two coordinates")
    try:
        return pt(Fraction(parts[0]), Fraction(parts[1]))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"line {ln}: bad coordinate ({e})") from e
