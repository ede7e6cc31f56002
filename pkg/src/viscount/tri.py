"""Polygon triangulation by ear clipping, with the dual adjacency tree.

The triangulation is the shared substrate for the visibility flood, the
balanced decomposition, and geodesic walks.  Input polygons are assumed to
be in general position (no three collinear vertices), which the instance
generator guarantees and the decomposition validates.
"""

from .exact import orient, pt_eq


def _in_tri_closed(a, b, c, p):
    return orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0


class Triangulation:
    """Ear-clipping triangulation of a simple polygon.

    Attributes:
        poly: the source SimplePolygon
        tris: list of CCW vertex-index triples
        neighbors: per triangle, list of (other_tri, shared_edge_key)
        edge_tris: map from edge key (i, j) with i < j to triangle ids
    """

    def __init__(self, poly):
        self.poly = poly
        self.tris = ear_clip(poly)
        self.edge_tris = {}
        for t, (i, j, k) in enumerate(self.tris):
            for u, v in ((i, j), (j, k), (k, i)):
                key = (u, v) if u < v else (v, u)
                self.edge_tris.setdefault(key, []).append(t)
        self.neighbors = [[] for _ in self.tris]
        for key, ts in self.edge_tris.items():
            if len(ts) == 2:
                a, b = ts
                self.neighbors[a].append((b, key))
                self.neighbors[b].append((a, key))
        self.vert_tri = {}
        for t, (i, j, k) in enumerate(self.tris):
            for u in (i, j, k):
                self.vert_tri.setdefault(u, t)
        from .exact import pt_norm
        self.vert_index = {pt_norm(v): i for i, v in enumerate(poly.verts)}

    def is_diagonal(self, key):
        return len(self.edge_tris[key]) == 2

    def tri_points(self, t):
        v = self.poly.verts
        i, j, k = self.tris[t]
        return v[i], v[j], v[k]

    def locate(self, p):
        """Lowest-id triangle whose closed region contains p, or None."""
        for t in range(len(self.tris)):
            a, b, c = self.tri_points(t)
            if _in_tri_closed(a, b, c, p):
                return t
        return None

    def locate_all(self, p):
        out = []
        for t in range(len(self.tris)):
            a, b, c = self.tri_points(t)
            if _in_tri_closed(a, b, c, p):
                out.append(t)
        return out

    def dual_path(self, s, t):
        """Triangle-id path from s to t in the dual tree."""
        if s == t:
            return [s]
        parent = {s: None}
        stack = [s]
        while stack:
            cur = stack.pop()
            if cur == t:
                break
            for nb, _ in self.neighbors[cur]:
                if nb not in parent:
                    parent[nb] = cur
                    stack.append(nb)
        path = [t]
        while path[-1] != s:
            path.append(parent[path[-1]])
        path.reverse()
        return path


def triangulation_of(poly):
    """Triangulation of a polygon, cached on the polygon object."""
    if poly._tri is None:
        poly._tri = Triangulation(poly)
    return poly._tri


def ear_clip(poly):
    """Triangulate a simple polygon; returns CCW index triples."""
    verts = poly.verts
    n = poly.n
    if n == 3:
        return [(0, 1, 2)]
    ring = list(range(n))
    tris = []

    def is_convex(kpos):
        m = len(ring)
        a = verts[ring[(kpos - 1) % m]]
        b = verts[ring[kpos]]
        c = verts[ring[(kpos + 1) % m]]
        return orient(a, b, c) > 0

    while len(ring) > 3:
        m = len(ring)
        clipped = False
        for k in range(m):
            ip, ic, inx = ring[(k - 1) % m], ring[k], ring[(k + 1) % m]
            a, b, c = verts[ip], verts[ic], verts[inx]
            if orient(a, b, c) <= 0:
                continue
            blocked = False
            for j in ring:
                if j in (ip, ic, inx):
                    continue
                if _in_tri_closed(a, b, c, verts[j]):
                    blocked = True
                    break
            if not blocked:
                tris.append((ip, ic, inx))
                del ring[k]
                clipped = True
                break
        if not clipped:
            raise ValueError("ear clipping failed; polygon degenerate?")
    tris.append((ring[0], ring[1], ring[2]))
    return tris


def triangulation_checks(tri):
    """Exact sanity facts used by tests: area sum and edge provenance."""
    poly = tri.poly
    total = poly.area2()
    s = 0
    for t in range(len(tri.tris)):
        a, b, c = tri.tri_points(t)
        from fractions import Fraction
        ax, ay = Fraction(a[0], a[2]), Fraction(a[1], a[2])
        bx, by = Fraction(b[0], b[2]), Fraction(b[1], b[2])
        cx, cy = Fraction(c[0], c[2]), Fraction(c[1], c[2])
        s += (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return s == total
