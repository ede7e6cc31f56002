"""Visibility polygons, weak visibility, cones through chords, one-shot counts.

The workhorse is a beam flood over the triangulation.  A beam carries the two
hourglass chains between the source (a point or a segment piece) and its
current portal edge; the sight lines through the portal are exactly the lines
weakly separating the right chain from the left chain.  Clipping each far
edge of the next triangle against the extreme members of that family yields
exact visible intervals on boundary edges, and exact visibility-glass data on
a capture chord.

Sight through a single grazing ray (zero-width "antenna" spurs) is dropped
when region polygons are assembled; predicates that need closed grazing
visibility (cones, the segment-inside oracle) handle it explicitly.
"""

from fractions import Fraction

from .errors import ObjectOutside, PointOnDiagonal, PointOutside, SegmentOutside
from .exact import (
    Cone, Ray, SimplePolygon, convex_combination, line_intersect, line_through,
    midpoint, on_segment, orient, pt_eq, pt_sub_dir, pt_xy, seg_intersect,
    segment_inside_polygon,
)
from .tri import triangulation_of

ZERO = Fraction(0)
ONE = Fraction(1)


class VisibilityRegion:
    """A visibility region: closed polygon plus its source object."""

    __slots__ = ('polygon', 'source')

    def __init__(self, polygon, source):
        self.polygon = polygon
        self.source = source

    def contains(self, p):
        return self.polygon.locate(p) >= 0

    def intersects_segment(self, a, b):
        """Closed test: does segment ab meet the region?"""
        if self.contains(a) or self.contains(b):
            return True
        for e0, e1 in self.polygon.edges():
            if seg_intersect(a, b, e0, e1) is not None:
                return True
        return False


# ---------------------------------------------------------------------------
# the beam flood

def _chain_add(chain, w, right):
    c = list(chain)
    if right:
        while len(c) >= 2 and orient(c[-2], c[-1], w) >= 0:
            c.pop()
    else:
        while len(c) >= 2 and orient(c[-2], c[-1], w) <= 0:
            c.pop()
    c.append(w)
    return c


def _separating_candidates(CR, CL, S_R, S_L):
    """Sight-line candidates for a beam: lines through chain-vertex pairs that
    weakly separate chain CR from chain CL and cross the entry gate S_R-S_L
    (the visible interval on the previous portal, with S_R on CR's side).

    The gate filter is what makes narrowing monotone: sight can never widen
    again after a pinch, even when hull pops forget interior wall vertices.
    The beam's sight lines sweep exactly between the extreme members of the
    returned family.
    """
    out = []
    pairs = [(u, v) for u in CR for v in CL]
    pairs += [(CR[i], CR[i + 1]) for i in range(len(CR) - 1)]
    pairs += [(CL[i], CL[i + 1]) for i in range(len(CL) - 1)]
    for u, v in pairs:
        if pt_eq(u, v):
            continue
        lo = hi = 0
        ok = True
        for x in CR:
            o = orient(u, v, x)
            if o < lo:
                lo = o
            elif o > hi:
                hi = o
            if lo < 0 < hi:
                ok = False
                break
        if not ok:
            continue
        r_sign = lo + hi
        lo2 = hi2 = 0
        for x in CL:
            o = orient(u, v, x)
            if o < lo2:
                lo2 = o
            elif o > hi2:
                hi2 = o
            if lo2 < 0 < hi2:
                ok = False
                break
        if not ok:
            continue
        l_sign = lo2 + hi2
        if r_sign == 0 and l_sign == 0:
            continue
        if r_sign != 0 and l_sign != 0 and (r_sign > 0) == (l_sign > 0):
            continue
        sig = 1 if r_sign > 0 else (-1 if r_sign < 0 else -l_sign)
        if orient(u, v, S_R) * sig < 0 or orient(u, v, S_L) * sig > 0:
            continue
        out.append((u, v))
    return out


def _crossings(cands, fa, fb):
    """Crossing params of candidate lines with segment fa->fb (skip parallel)."""
    lf = line_through(fa, fb)
    ax, ay = pt_xy(fa)
    bx, by = pt_xy(fb)
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    res = []
    for u, v in cands:
        p = line_intersect(line_through(u, v), lf)
        if p is None:
            continue
        px, py = pt_xy(p)
        t = ((px - ax) * dx + (py - ay) * dy) / den
        res.append((t, (u, v)))
    return res


class FloodResult:
    __slots__ = ('emit', 'captured')

    def __init__(self):
        self.emit = {}        # boundary edge index -> [(t0, t1)]
        self.captured = []    # (t0, line0, t1, line1) on the capture edge


def flood(poly, src0, src1, capture_key=None):
    """Beam flood from a source segment (src0 == src1 for a point source).

    Returns a FloodResult with exact weakly-visible parameter intervals per
    boundary edge.  If ``capture_key`` names a triangulation edge, beams
    reaching it are recorded with their extreme sight lines and do not flood
    past it.
    """
    tri = triangulation_of(poly)
    verts = poly.verts
    n = poly.n
    res = FloodResult()
    point_mode = pt_eq(src0, src1)
    stack = []

    def boundary_index(i, j):
        if (i + 1) % n == j:
            return i
        return j

    def dispatch(cur_tri, ia, ib, CR, CL, S_R, S_L):
        """Clip the right->left far edge (ia, ib); emit, capture or recurse.

        S_R and S_L gate the beam: sight must cross the segment S_R-S_L (the
        visible interval on the entry portal, or the source piece at start).
        """
        key = (ia, ib) if ia < ib else (ib, ia)
        fa, fb = verts[ia], verts[ib]
        cands = _separating_candidates(CR, CL, S_R, S_L)
        if not cands:
            return
        crossings = _crossings(cands, fa, fb)
        if not crossings:
            return
        tmin = min(crossings)
        tmax = max(crossings)
        t0 = max(tmin[0], ZERO)
        t1 = min(tmax[0], ONE)
        if t0 >= t1:
            return
        if capture_key is not None and key == capture_key:
            if key[0] == ia:
                res.captured.append((t0, tmin[1], t1, tmax[1]))
            else:
                res.captured.append((1 - t1, tmax[1], 1 - t0, tmin[1]))
            return
        ts = tri.edge_tris[key]
        if len(ts) == 1:
            bi = boundary_index(ia, ib)
            if bi == ia:
                res.emit.setdefault(bi, []).append((t0, t1))
            else:
                res.emit.setdefault(bi, []).append((1 - t1, 1 - t0))
            return
        nxt = ts[0] if ts[0] != cur_tri else ts[1]
        nS_R = fa if t0 == 0 else convex_combination(fa, fb, t0)
        nS_L = fb if t1 == 1 else convex_combination(fa, fb, t1)
        stack.append((nxt, ia, ib, CR, CL, nS_R, nS_L))

    # start triangles and their source pieces
    if point_mode:
        start = {t: (src0, src0) for t in tri.locate_all(src0)}
        if not start:
            raise PointOutside("source point outside polygon")
    else:
        start = {}
        for t in range(len(tri.tris)):
            piece = _tri_seg_piece(tri, t, src0, src1)
            if piece is not None:
                start[t] = piece
        if not start:
            raise SegmentOutside("source segment outside polygon")

    for t, (x0, x1) in start.items():
        i, j, k = tri.tris[t]
        for iu, iv in ((i, j), (j, k), (k, i)):
            key = (iu, iv) if iu < iv else (iv, iu)
            is_capture = capture_key is not None and key == capture_key
            boundary = len(tri.edge_tris[key]) == 1
            if boundary and not is_capture:
                bi = boundary_index(iu, iv)
                res.emit.setdefault(bi, []).append((ZERO, ONE))
                continue
            # chains from the source piece toward this edge; a sight line may
            # have either source endpoint on its right, so spawn one beam per
            # orientation (they coincide for a point source)
            o0 = orient(x0, verts[iu], verts[iv])
            o1 = orient(x1, verts[iu], verts[iv])
            o = o0 if o0 != 0 else o1
            if o == 0:
                continue  # piece lies on the edge line: no sight across
            ia, ib = (iu, iv) if o > 0 else (iv, iu)
            pairings = ((x0, x1),) if pt_eq(x0, x1) else ((x0, x1), (x1, x0))
            for sr, sl in pairings:
                CR = [sr] if pt_eq(sr, verts[ia]) else [sr, verts[ia]]
                CL = [sl] if pt_eq(sl, verts[ib]) else [sl, verts[ib]]
                if is_capture:
                    dispatch(t, ia, ib, CR, CL, sr, sl)
                    continue
                other = [x for x in tri.edge_tris[key] if x != t][0]
                if point_mode and other in start:
                    continue
                cands = _separating_candidates(CR, CL, sr, sl)
                if not cands:
                    continue
                crossings = _crossings(cands, verts[ia], verts[ib])
                if not crossings:
                    continue
                t0 = max(min(c[0] for c in crossings), ZERO)
                t1 = min(max(c[0] for c in crossings), ONE)
                if t0 >= t1:
                    continue
                fa, fb = verts[ia], verts[ib]
                nS_R = fa if t0 == 0 else convex_combination(fa, fb, t0)
                nS_L = fb if t1 == 1 else convex_combination(fa, fb, t1)
                stack.append((other, ia, ib, CR, CL, nS_R, nS_L))

    while stack:
        cur, ia, ib, CR, CL, S_R, S_L = stack.pop()
        iw = next(v for v in tri.tris[cur] if v != ia and v != ib)
        w = verts[iw]
        dispatch(cur, ia, iw, CR, _chain_add(CL, w, right=False), S_R, S_L)
        dispatch(cur, iw, ib, _chain_add(CR, w, right=True), CL, S_R, S_L)

    return res


def _tri_seg_piece(tri, t, a, b):
    """Closed intersection of segment ab with triangle t, as a point pair."""
    pa, pb, pc = tri.tri_points(t)
    pts = []
    for p in (a, b):
        if orient(pa, pb, p) >= 0 and orient(pb, pc, p) >= 0 \
                and orient(pc, pa, p) >= 0:
            pts.append(p)
    if len(pts) < 2:
        for e0, e1 in ((pa, pb), (pb, pc), (pc, pa)):
            hit = seg_intersect(a, b, e0, e1)
            if hit is None:
                continue
            if hit[0] == 'point':
                pts.append(hit[1])
            else:
                pts.extend(hit[1])
    if not pts:
        return None
    if len(pts) == 1:
        return (pts[0], pts[0])
    ax, ay = pt_xy(a)
    bx, by = pt_xy(b)
    dx, dy = bx - ax, by - ay

    def keyf(p):
        x, y = pt_xy(p)
        return (x - ax) * dx + (y - ay) * dy

    pts.sort(key=keyf)
    return (pts[0], pts[-1])


# ---------------------------------------------------------------------------
# region assembly

def region_from_flood(poly, res):
    """Assemble the closed region polygon from per-edge visible intervals."""
    n = poly.n
    verts = poly.verts
    arcs = []
    for bi in range(n):
        items = res.emit.get(bi)
        if not items:
            continue
        items.sort()
        merged = []
        for t0, t1 in items:
            if merged and t0 <= merged[-1][1]:
                if t1 > merged[-1][1]:
                    merged[-1] = (merged[-1][0], t1)
            else:
                merged.append((t0, t1))
        a = verts[bi]
        b = verts[(bi + 1) % n]
        for t0, t1 in merged:
            p0 = a if t0 == 0 else (b if t0 == 1 else convex_combination(a, b, t0))
            p1 = b if t1 == 1 else (a if t1 == 0 else convex_combination(a, b, t1))
            arcs.append((p0, p1))
    if not arcs:
        raise ValueError("empty visibility region")
    # group arcs into runs joined at shared points; jumps between runs are
    # window chords
    runs = [[arcs[0]]]
    for arc in arcs[1:]:
        if pt_eq(runs[-1][-1][1], arc[0]):
            runs[-1].append(arc)
        else:
            runs.append([arc])
    if len(runs) > 1 and pt_eq(runs[-1][-1][1], runs[0][0][0]):
        runs[0] = runs[-1] + runs[0]
        runs.pop()
    pts = []
    for run in runs:
        for p0, p1 in run:
            if not pts or not pt_eq(pts[-1], p0):
                pts.append(p0)
            if not pt_eq(pts[-1], p1):
                pts.append(p1)
    if len(pts) > 1 and pt_eq(pts[0], pts[-1]):
        pts.pop()
    if len(pts) < 3:
        raise ValueError("degenerate visibility region")
    return SimplePolygon(pts, validate=False, force_ccw=False)


# ---------------------------------------------------------------------------
# public operations

def visibility_polygon(poly, p):
    """The visibility region V(p): every point seeing p inside the polygon."""
    if poly.locate(p) < 0:
        raise PointOutside("query point outside polygon")
    res = flood(poly, p, p)
    return VisibilityRegion(region_from_flood(poly, res), (p, p))


def weak_visibility_polygon(poly, a, b):
    """The weak visibility region of segment ab (union of V(x) over x in ab)."""
    if not segment_inside_polygon(poly, a, b):
        raise SegmentOutside("source segment not inside polygon")
    if pt_eq(a, b):
        return visibility_polygon(poly, a)
    res = flood(poly, a, b)
    return VisibilityRegion(region_from_flood(poly, res), (a, b))


def vis_interval(poly, p, ra, rb):
    """V(p) intersected with segment ra-rb: None or an exact point pair.

    Deliberately independent of the flood: the segment is split at every line
    through p and a polygon vertex, and piece midpoints are classified with
    the segment-inside oracle.  For a point source the visible set on a
    segment is a single (possibly degenerate) interval.
    """
    if poly.locate(p) < 0:
        raise PointOutside("query point outside polygon")
    if pt_eq(ra, rb):
        return (ra, ra) if segment_inside_polygon(poly, p, ra) else None
    cuts = [ra, rb]
    lrs = line_through(ra, rb)
    for v in poly.verts:
        if pt_eq(v, p):
            continue
        q = line_intersect(line_through(p, v), lrs)
        if q is not None and on_segment(q, ra, rb):
            cuts.append(q)
    ax, ay = pt_xy(ra)
    bx, by = pt_xy(rb)
    dx, dy = bx - ax, by - ay

    def keyf(q):
        x, y = pt_xy(q)
        return (x - ax) * dx + (y - ay) * dy

    cuts.sort(key=keyf)
    lo = hi = None
    prev = cuts[0]
    for cur in cuts[1:]:
        if pt_eq(prev, cur):
            continue
        mid = midpoint(prev, cur)
        if segment_inside_polygon(poly, p, mid):
            if lo is None:
                lo = prev
            hi = cur
        prev = cur
    if lo is None:
        for q in cuts:
            if segment_inside_polygon(poly, p, q):
                return (q, q)
        return None
    return (lo, hi)


def vis_cone_direct(p_side, p, d0, d1):
    """Visibility cone of p through the chord d0-d1 of polygon p_side.

    The chord must be an edge of p_side (p's side of the split); computed by
    a flood from p, independent of the decomposition machinery, so it serves
    as that module's oracle.
    """
    if on_segment(p, d0, d1):
        raise PointOnDiagonal("apex lies on the chord")
    if p_side.locate(p) < 0:
        raise PointOutside("apex outside the side polygon")
    key = _edge_key_of(p_side, d0, d1)
    res = flood(p_side, p, p, capture_key=key)
    if not res.captured:
        ray = _grazing_ray(p_side, p, d0, d1)
        return Cone.degenerate(ray) if ray is not None else Cone.empty()
    ca = p_side.verts[key[0]]
    cb = p_side.verts[key[1]]
    t0 = min(r[0] for r in res.captured)
    t1 = max(r[2] for r in res.captured)
    q0 = ca if t0 == 0 else (cb if t0 == 1 else convex_combination(ca, cb, t0))
    q1 = cb if t1 == 1 else (ca if t1 == 0 else convex_combination(ca, cb, t1))
    if pt_eq(q0, q1) or orient(p, q0, q1) == 0:
        ray = _grazing_ray(p_side, p, d0, d1)
        return Cone.degenerate(ray) if ray is not None else Cone.empty()
    if orient(p, q0, q1) < 0:
        q0, q1 = q1, q0
    return Cone.proper(p, pt_sub_dir(p, q0), pt_sub_dir(p, q1))


def _edge_key_of(poly, d0, d1):
    tri = triangulation_of(poly)
    i = j = None
    for k, v in enumerate(poly.verts):
        if i is None and pt_eq(v, d0):
            i = k
        if j is None and pt_eq(v, d1):
            j = k
    if i is None or j is None:
        raise ValueError("chord endpoints are not polygon vertices")
    key = (i, j) if i < j else (j, i)
    if key not in tri.edge_tris:
        raise ValueError("chord is not a triangulation edge of the polygon")
    return key


def _grazing_ray(p_side, p, d0, d1):
    """Single closed-visibility sight ray from p to chord d0-d1, if any."""
    ld = line_through(d0, d1)
    for v in p_side.verts:
        if pt_eq(v, p):
            continue
        q = line_intersect(line_through(p, v), ld)
        if q is None or not on_segment(q, d0, d1):
            continue
        vp = pt_sub_dir(p, v)
        vq = pt_sub_dir(p, q)
        if vp[0] * vq[0] + vp[1] * vq[1] <= 0:
            continue
        if segment_inside_polygon(p_side, p, q):
            return Ray(p, pt_sub_dir(p, q))
    for d in (d0, d1):
        if segment_inside_polygon(p_side, p, d):
            return Ray(p, pt_sub_dir(p, d))
    return None


def count_oneshot(poly, objects, query, method='naive'):
    """Count the objects visible from a point or segment query.

    Objects and the query are point triples or pairs of point triples.
    ``naive`` runs an independent per-object test (for a segment query over
    segment objects it builds the weak visibility region of the query once);
    ``vispoly`` is the visibility-region membership variant.  Both methods
    return identical counts.
    """
    qa, qb = (query, query) if is_point(query) else query
    if not segment_inside_polygon(poly, qa, qb):
        raise ObjectOutside("query not inside polygon")
    region = None
    need_region = method == 'vispoly' or (
        not pt_eq(qa, qb) and any(not is_point(o) for o in objects))
    if need_region:
        region = weak_visibility_polygon(poly, qa, qb) if not pt_eq(qa, qb) \
            else visibility_polygon(poly, qa)
    count = 0
    for obj in objects:
        oa, ob = (obj, obj) if is_point(obj) else obj
        if not segment_inside_polygon(poly, oa, ob):
            raise ObjectOutside("object not inside polygon")
        if method == 'vispoly':
            vis = region.contains(oa) or (not pt_eq(oa, ob)
                                          and region.intersects_segment(oa, ob))
        elif pt_eq(oa, ob):
            if pt_eq(qa, qb):
                vis = segment_inside_polygon(poly, qa, oa)
            else:
                vis = vis_interval(poly, oa, qa, qb) is not None
        elif pt_eq(qa, qb):
            vis = vis_interval(poly, qa, oa, ob) is not None
        else:
            vis = region.intersects_segment(oa, ob)
        if vis:
            count += 1
    return count


def is_point(obj):
    return isinstance(obj, tuple) and len(obj) == 3 and isinstance(obj[0], int)
