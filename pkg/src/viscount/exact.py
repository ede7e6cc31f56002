"""Exact planar primitives and predicates.

All geometry in this package is decided with exact integer arithmetic.  A
point is a homogeneous triple ``(xn, yn, w)`` of Python ints with ``w > 0``,
representing the cartesian point ``(xn/w, yn/w)``.  Keeping a shared
denominator per point avoids per-operation gcd normalisation; triples are
reduced only when stored or hashed.  Coordinates surface as
``fractions.Fraction`` at the API boundary.

Conventions used throughout the package:

* visibility is closed: a sight segment may graze the polygon boundary
  (including reflex vertices) and still count,
* a line ``(a, b, c)`` denotes ``a*x + b*y = c`` with gcd(a, b, c) reduced
  and sign normalised so that ``b > 0`` or (``b == 0`` and ``a > 0``);
  ``line_side > 0`` then means "above" (for vertical lines: right), which
  is the symbolic rotation that removes vertical/slope ties,
* polygons are counterclockwise.
"""

from fractions import Fraction
from math import gcd

LEFT = 1
RIGHT = -1
COLLINEAR = 0


# ---------------------------------------------------------------------------
# points

def pt(x, y):
    """Build a point from ints, Fractions, or (num, den) friendly values."""
    fx, fy = Fraction(x), Fraction(y)
    w = fx.denominator * fy.denominator // gcd(fx.denominator, fy.denominator)
    return (fx.numerator * (w // fx.denominator),
            fy.numerator * (w // fy.denominator), w)


def pt_xy(p):
    """Cartesian coordinates of a point as a Fraction pair."""
    return Fraction(p[0], p[2]), Fraction(p[1], p[2])


def pt_norm(p):
    """Canonical reduced triple; use for hashing and equality keys."""
    x, y, w = p
    g = gcd(gcd(abs(x), abs(y)), w)
    return (x // g, y // g, w // g) if g > 1 else p


def pt_eq(p, q):
    if p is q:
        return True
    px, py, pw = p
    qx, qy, qw = q
    return px * qw == qx * pw and py * qw == qy * pw


def pt_sub_dir(p, q):
    """Integer direction vector of q - p (not normalised)."""
    px, py, pw = p
    qx, qy, qw = q
    return (qx * pw - px * qw, qy * pw - py * qw)


def orient(a, b, c):
    """Sign of the exact cross product (b-a) x (c-a): LEFT/RIGHT/COLLINEAR."""
    ax, ay, aw = a
    bx, by, bw = b
    cx, cy, cw = c
    if aw == 1 and bw == 1 and cw == 1:
        v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    else:
        v = ((bx * aw - ax * bw) * (cy * aw - ay * cw)
             - (by * aw - ay * bw) * (cx * aw - ax * cw))
    return (v > 0) - (v < 0)


def cross_dir(u, v):
    """Sign of the cross product of two direction vectors."""
    s = u[0] * v[1] - u[1] * v[0]
    return (s > 0) - (s < 0)


def dot_dir(u, v):
    s = u[0] * v[0] + u[1] * v[1]
    return (s > 0) - (s < 0)


def on_segment(p, a, b):
    """True iff p lies on the closed segment ab (a == b allowed)."""
    if pt_eq(a, b):
        return pt_eq(p, a)
    if orient(a, b, p) != 0:
        return False
    # between the endpoints: (p-a).(p-b) <= 0
    u = pt_sub_dir(p, a)
    v = pt_sub_dir(p, b)
    return u[0] * v[0] + u[1] * v[1] <= 0


def seg_param_cmp(a, b, p, q):
    """Order of p and q along the directed line of segment ab: -1/0/1."""
    d = pt_sub_dir(a, b)
    u = pt_sub_dir(a, p)
    v = pt_sub_dir(a, q)
    sp = d[0] * u[0] + d[1] * u[1]
    sq = d[0] * v[0] + d[1] * v[1]
    # compare sp/pw' vs sq/qw': dot products carry the point denominators
    lhs = sp * q[2]
    rhs = sq * p[2]
    return (lhs > rhs) - (lhs < rhs)


def seg_intersect(a, b, c, d):
    """Exact intersection of closed segments ab and cd.

    Returns None, ('point', p), or ('overlap', (p, q)) with q != p.
    Degenerate inputs (a == b) are permitted.
    """
    deg_ab = pt_eq(a, b)
    deg_cd = pt_eq(c, d)
    if deg_ab and deg_cd:
        return ('point', a) if pt_eq(a, c) else None
    if deg_ab:
        return ('point', a) if on_segment(a, c, d) else None
    if deg_cd:
        return ('point', c) if on_segment(c, a, b) else None
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        if (o1 > 0) != (o2 > 0) and (o3 > 0) != (o4 > 0):
            return ('point', _line_intersect_points(a, b, c, d))
        return None
    # an endpoint lies on the other supporting line: touching or collinear
    pts = []
    for p, (u, v) in ((c, (a, b)), (d, (a, b)), (a, (c, d)), (b, (c, d))):
        if on_segment(p, u, v) and not any(pt_eq(p, q) for q in pts):
            pts.append(p)
    if not pts:
        return None
    if len(pts) == 1:
        return ('point', pts[0])
    pts.sort(key=lambda p: (Fraction(p[0], p[2]), Fraction(p[1], p[2])))
    p, q = pts[0], pts[-1]
    if pt_eq(p, q):
        return ('point', p)
    return ('overlap', (p, q))


def _line_intersect_points(a, b, c, d):
    """Intersection of line(a,b) and line(c,d); lines must not be parallel."""
    p = line_intersect(line_through(a, b), line_through(c, d))
    assert p is not None
    return p


# ---------------------------------------------------------------------------
# lines

def line_through(p, q):
    """Normalised integer line (a, b, c) through two distinct points."""
    px, py, pw = p
    qx, qy, qw = q
    # expand | x y w ; px py pw ; qx qy qw | = 0 into a*x + b*y - c*w = 0
    a = py * qw - qy * pw
    b = qx * pw - px * qw
    c = py * qx - px * qy
    return line_norm(a, b, c)


def line_norm(a, b, c):
    g = gcd(gcd(abs(a), abs(b)), abs(c))
    if g > 1:
        a //= g
        b //= g
        c //= g
    if b < 0 or (b == 0 and a < 0):
        a, b, c = -a, -b, -c
    if a == 0 and b == 0:
        raise ValueError("degenerate line")
    return (a, b, c)


def line_side(line, p):
    """Sign of a*px + b*py - c*pw: +1 above (right for vertical), -1 below."""
    a, b, c = line
    v = a * p[0] + b * p[1] - c * p[2]
    return (v > 0) - (v < 0)


def line_intersect(l1, l2):
    """Intersection point of two lines, or None if parallel."""
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    den = a1 * b2 - a2 * b1
    if den == 0:
        return None
    x = c1 * b2 - c2 * b1
    y = a1 * c2 - a2 * c1
    if den < 0:
        x, y, den = -x, -y, -den
    return (x, y, den)


def line_seg_intersect(line, a, b):
    """Intersection of a line with closed segment ab: None, point, or segment."""
    sa = line_side(line, a)
    sb = line_side(line, b)
    if sa == 0 and sb == 0:
        return ('overlap', (a, b))
    if sa == 0:
        return ('point', a)
    if sb == 0:
        return ('point', b)
    if sa == sb:
        return None
    lab = line_through(a, b)
    return ('point', line_intersect(line, lab))


# ---------------------------------------------------------------------------
# rays and cones

class Ray:
    """Half-line from apex in integer direction d (dx, dy) != (0, 0)."""

    __slots__ = ('apex', 'd')

    def __init__(self, apex, d):
        if d == (0, 0):
            raise ValueError("ray needs a direction")
        g = gcd(abs(d[0]), abs(d[1]))
        self.apex = apex
        self.d = (d[0] // g, d[1] // g)

    def line(self):
        a = self.apex
        return line_through(a, (a[0] + self.d[0] * a[2],
                                a[1] + self.d[1] * a[2], a[2]))

    def contains(self, p):
        if orient(self.apex, (self.apex[0] + self.d[0] * self.apex[2],
                              self.apex[1] + self.d[1] * self.apex[2],
                              self.apex[2]), p) != 0:
            return False
        v = pt_sub_dir(self.apex, p)
        return v == (0, 0) or dot_dir(v, self.d) >= 0

    def __repr__(self):
        return f"Ray({pt_xy(self.apex)}, d={self.d})"


class Cone:
    """Visibility cone: Empty, Degenerate(ray), Strip, or a proper wedge.

    A proper wedge is the set of rays from ``apex`` sweeping counterclockwise
    from ``right`` to ``left`` with angular extent strictly inside (0, pi).
    Membership is closed (boundary rays included).  The Strip variant covers
    the glass-cone construction when the extreme sight lines are parallel:
    the closed band between two parallel lines.
    """

    __slots__ = ('kind', 'apex', 'right', 'left', 'lo', 'hi')

    def __init__(self, kind, apex=None, right=None, left=None, lo=None, hi=None):
        self.kind = kind          # 'empty' | 'degenerate' | 'proper' | 'strip'
        self.apex = apex
        self.right = right        # Ray (proper: right boundary)
        self.left = left
        self.lo = lo              # strip: the two parallel boundary lines
        self.hi = hi

    @staticmethod
    def empty():
        return Cone('empty')

    @staticmethod
    def degenerate(ray):
        return Cone('degenerate', apex=ray.apex, right=ray, left=ray)

    @staticmethod
    def proper(apex, right_dir, left_dir):
        if cross_dir(right_dir, left_dir) <= 0:
            raise ValueError("cone extent must be in (0, pi), CCW right->left")
        return Cone('proper', apex=apex,
                    right=Ray(apex, right_dir), left=Ray(apex, left_dir))

    @staticmethod
    def strip(lo, hi):
        return Cone('strip', lo=lo, hi=hi)

    def is_empty(self):
        return self.kind == 'empty'

    def contains_point(self, p):
        """Closed-cone membership."""
        k = self.kind
        if k == 'empty':
            return False
        if k == 'degenerate':
            return self.right.contains(p)
        if k == 'strip':
            return line_side(self.lo, p) >= 0 and line_side(self.hi, p) <= 0
        v = pt_sub_dir(self.apex, p)
        if v == (0, 0):
            return True
        return cross_dir(self.right.d, v) >= 0 and cross_dir(v, self.left.d) >= 0

    def intersects_segment(self, a, b):
        """True iff the closed cone and closed segment ab share a point."""
        k = self.kind
        if k == 'empty':
            return False
        if self.contains_point(a) or self.contains_point(b):
            return True
        if k == 'degenerate':
            return _ray_hits_segment(self.right, a, b)
        if k == 'strip':
            sa = line_side(self.lo, a)
            sb = line_side(self.lo, b)
            return (sa >= 0 or sb >= 0) and \
                (line_side(self.hi, a) <= 0 or line_side(self.hi, b) <= 0) and \
                not (sa < 0 and sb < 0)
        return (_ray_hits_segment(self.right, a, b)
                or _ray_hits_segment(self.left, a, b))

    def boundary_lines(self):
        """(lower-ish, upper-ish) supporting lines; proper/degenerate only."""
        if self.kind == 'strip':
            return self.lo, self.hi
        return self.right.line(), self.left.line()

    def __repr__(self):
        if self.kind == 'proper':
            return f"Cone(apex={pt_xy(self.apex)}, right={self.right.d}, left={self.left.d})"
        return f"Cone({self.kind})"


def _ray_hits_segment(ray, a, b):
    apex = ray.apex
    far = (apex[0] + ray.d[0] * apex[2], apex[1] + ray.d[1] * apex[2], apex[2])
    oa = orient(apex, far, a)
    ob = orient(apex, far, b)
    if oa == 0 and on_ray(ray, a):
        return True
    if ob == 0 and on_ray(ray, b):
        return True
    if oa == ob:
        return False
    if oa == 0 or ob == 0:
        return False
    # segment crosses the supporting line; the crossing is on the ray iff it
    # is not behind the apex
    p = _line_intersect_points(apex, far, a, b)
    return on_ray(ray, p)


def on_ray(ray, p):
    v = pt_sub_dir(ray.apex, p)
    return v == (0, 0) or (cross_dir(v, ray.d) == 0 and dot_dir(v, ray.d) > 0)


# ---------------------------------------------------------------------------
# polygons

class SimplePolygon:
    """A simple polygon, vertices counterclockwise, no repeated vertices."""

    __slots__ = ('verts', 'n', '_bbox', '_tri')

    def __init__(self, verts, validate=True, force_ccw=True):
        verts = [v if isinstance(v, tuple) and len(v) == 3 else pt(*v)
                 for v in verts]
        if force_ccw and _signed_area2(verts) < 0:
            verts = verts[::-1]
        self.verts = verts
        self.n = len(verts)
        self._bbox = None
        self._tri = None
        if validate:
            self.validate()

    def validate(self):
        v = self.verts
        n = self.n
        if n < 3:
            raise ValueError("polygon needs at least 3 vertices")
        keys = {pt_norm(p) for p in v}
        if len(keys) != n:
            raise ValueError("repeated vertices")
        if _signed_area2(v) <= 0:
            raise ValueError("polygon not counterclockwise or degenerate")
        for i in range(n):
            a, b = v[i], v[(i + 1) % n]
            for j in range(i + 1, n):
                c, d = v[j], v[(j + 1) % n]
                adjacent = (j == i + 1) or (i == 0 and j == n - 1)
                hit = seg_intersect(a, b, c, d)
                if hit is None:
                    continue
                if adjacent:
                    if hit[0] != 'point':
                        raise ValueError("adjacent edges overlap")
                    shared = b if j == i + 1 else a
                    if not pt_eq(hit[1], shared):
                        raise ValueError("adjacent edges touch off-endpoint")
                else:
                    raise ValueError("non-adjacent edges intersect")

    def edges(self):
        v = self.verts
        n = self.n
        return [(v[i], v[(i + 1) % n]) for i in range(n)]

    def area2(self):
        """Twice the signed area, as a Fraction (positive for CCW)."""
        return _signed_area2_frac(self.verts)

    def bbox(self):
        if self._bbox is None:
            xs = [Fraction(p[0], p[2]) for p in self.verts]
            ys = [Fraction(p[1], p[2]) for p in self.verts]
            self._bbox = (min(xs), min(ys), max(xs), max(ys))
        return self._bbox

    def locate(self, p):
        """1 interior, 0 boundary, -1 exterior (exact crossing number)."""
        return locate_in_ring(self.verts, p)

    def __repr__(self):
        return f"SimplePolygon(n={self.n})"


def _signed_area2(verts):
    s = 0
    fr = Fraction(0)
    ints = all(v[2] == 1 for v in verts)
    if ints:
        for i in range(len(verts)):
            x1, y1, _ = verts[i]
            x2, y2, _ = verts[(i + 1) % len(verts)]
            s += x1 * y2 - x2 * y1
        return (s > 0) - (s < 0)
    return 1 if _signed_area2_frac(verts) > 0 else -1


def _signed_area2_frac(verts):
    s = Fraction(0)
    for i in range(len(verts)):
        x1, y1 = pt_xy(verts[i])
        x2, y2 = pt_xy(verts[(i + 1) % len(verts)])
        s += x1 * y2 - x2 * y1
    return s


def locate_in_ring(verts, p):
    """Ring membership: 1 interior, 0 boundary, -1 exterior."""
    n = len(verts)
    px, py, pw = p
    inside = False
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        ax, ay, aw = a
        bx, by, bw = b
        # boundary check first
        if orient(a, b, p) == 0:
            if (min(ax * pw * bw, bx * pw * aw) <= px * aw * bw <= max(ax * pw * bw, bx * pw * aw)) and \
               (min(ay * pw * bw, by * pw * aw) <= py * aw * bw <= max(ay * pw * bw, by * pw * aw)):
                return 0
        # crossing-number ray cast to +x; compare y's exactly
        ay_lt = ay * pw < py * aw
        by_lt = by * pw < py * bw
        if ay_lt != by_lt:
            o = orient(a, b, p)
            if by_lt:  # edge goes downward across the ray
                if o > 0:
                    inside = not inside
            else:
                if o < 0:
                    inside = not inside
    return 1 if inside else -1


def point_in_polygon(poly, p):
    """Classification against the closed polygon region (spec surface)."""
    r = poly.locate(p)
    return 'interior' if r > 0 else ('boundary' if r == 0 else 'exterior')


def segment_inside_polygon(poly, a, b):
    """Ground-truth closed visibility: is segment ab inside the closed polygon?

    Splits ab at every boundary intersection and classifies the midpoint of
    each piece; exact, O(n) intersections plus O(pieces * n) membership tests.
    Degenerate segments (a == b) are allowed.
    """
    la = poly.locate(a)
    if la < 0:
        return False
    if pt_eq(a, b):
        return True
    lb = poly.locate(b)
    if lb < 0:
        return False
    cuts = []
    for e0, e1 in poly.edges():
        hit = seg_intersect(a, b, e0, e1)
        if hit is None:
            continue
        if hit[0] == 'point':
            cuts.append(hit[1])
        else:
            cuts.extend(hit[1])
    # order cut points along ab, dedupe, test midpoints of open pieces
    axf, ayf = pt_xy(a)
    bxf, byf = pt_xy(b)
    dxf, dyf = bxf - axf, byf - ayf

    def key(p):
        x, y = pt_xy(p)
        return (x - axf) * dxf + (y - ayf) * dyf

    pts = [a, b] + cuts
    pts.sort(key=key)
    prev = pts[0]
    for cur in pts[1:]:
        if pt_eq(prev, cur):
            continue
        mid = midpoint(prev, cur)
        if poly.locate(mid) < 0:
            return False
        prev = cur
    return True


def midpoint(p, q):
    px, py, pw = p
    qx, qy, qw = q
    return (px * qw + qx * pw, py * qw + qy * pw, 2 * pw * qw)


def convex_combination(p, q, t):
    """Point p + t*(q - p) for a Fraction t in [0, 1]."""
    tn, td = t.numerator, t.denominator
    px, py, pw = p
    qx, qy, qw = q
    return (px * qw * (td - tn) + qx * pw * tn,
            py * qw * (td - tn) + qy * pw * tn,
            pw * qw * td)


def scale_point(p, s):
    """Scale cartesian coordinates by a positive rational s."""
    sn, sd = Fraction(s).numerator, Fraction(s).denominator
    return (p[0] * sn, p[1] * sn, p[2] * sd)
