"""Balanced polygon decomposition and geodesic query machinery.

The polygon is triangulated, and the triangulation's dual tree is split
recursively at the edge (a diagonal) that balances the two sides best, giving
a decomposition tree of logarithmic depth.  On top of it live the geodesic
operations: exact shortest paths via the funnel algorithm over the sleeve of
triangles, visibility cones through diagonals, hourglasses between diagonals,
segment location returning a polygon cover, and shortest path maps rooted at
diagonal endpoints.

Geodesics between points of a sub-region never leave that region (an excursion
through a bounding chord could be shortcut along the chord), so all paths are
computed in the full polygon.
"""

from fractions import Fraction

from .errors import (
    NotRelatedDiagonals, PointOnDiagonal, PointOutside, SegmentOutside,
)
from .exact import (
    Cone, SimplePolygon, convex_combination, on_segment, orient, pt_eq,
    pt_norm, pt_sub_dir, pt_xy, seg_intersect, segment_inside_polygon,
)
from .tri import triangulation_of

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# the decomposition tree

class DecompNode:
    __slots__ = ('id', 'tris', 'diag', 'left', 'right', 'parent', 'depth',
                 'leaf_tri', '_hourglass_to_parent')

    def __init__(self, nid, tris):
        self.id = nid
        self.tris = tris              # frozenset of triangle ids
        self.diag = None              # splitting diagonal key (i, j), i < j
        self.left = None
        self.right = None
        self.parent = None
        self.depth = 0
        self.leaf_tri = None
        self._hourglass_to_parent = None

    def is_leaf(self):
        return self.diag is None


class DecompTree:
    def __init__(self, poly):
        self.poly = poly
        self.tri = triangulation_of(poly)
        self.nodes = []
        self.root = self._build(frozenset(range(len(self.tri.tris))), None)
        self.leaf_of_tri = {}
        for node in self.nodes:
            if node.is_leaf():
                self.leaf_of_tri[node.leaf_tri] = node
        self._geo_cache = {}
        self._hour_cache = {}

    # -- construction

    def _build(self, tris, parent):
        node = DecompNode(len(self.nodes), tris)
        node.parent = parent
        node.depth = parent.depth + 1 if parent else 0
        self.nodes.append(node)
        if len(tris) == 1:
            node.leaf_tri = next(iter(tris))
            return node
        diag, side_a, side_b = self._best_split(tris)
        node.diag = diag
        left_side = side_a if self._is_left_side(diag, side_a) else side_b
        right_side = side_b if left_side is side_a else side_a
        node.left = self._build(frozenset(left_side), node)
        node.right = self._build(frozenset(right_side), node)
        return node

    def _best_split(self, tris):
        # internal dual edges of this region, with the split sizes they induce
        best = None
        adj = {t: [(o, k) for o, k in self.tri.neighbors[t] if o in tris]
               for t in tris}
        for t in sorted(tris):
            for other, key in adj[t]:
                if other < t:
                    continue
                side = self._component(adj, t, other)
                a, b = len(side), len(tris) - len(side)
                score = (max(a, b), key)
                if best is None or score < best[0]:
                    best = (score, key, side)
        score, key, side = best
        other_side = set(tris) - side
        return key, side, other_side

    @staticmethod
    def _component(adj, start, banned):
        seen = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            for other, _ in adj[cur]:
                if other == banned or other in seen:
                    continue
                seen.add(other)
                stack.append(other)
        return seen

    def _is_left_side(self, diag, side):
        # the left side of directed diagonal verts[i] -> verts[j]
        i, j = diag
        vi, vj = self.poly.verts[i], self.poly.verts[j]
        for t in self.tri.edge_tris[diag]:
            if t in side:
                w = next(v for v in self.tri.tris[t] if v != i and v != j)
                return orient(vi, vj, self.poly.verts[w]) > 0
        raise AssertionError("split side not adjacent to its diagonal")

    # -- point location

    def locate_leaf(self, p):
        """Leaf node whose triangle contains p; on-diagonal points go to the
        left side of that diagonal (symbolic perturbation rule)."""
        hits = self.tri.locate_all(p)
        if not hits:
            raise PointOutside("point outside polygon")
        if len(hits) == 1:
            return self.leaf_of_tri[hits[0]]
        # on a shared edge or vertex: prefer the left side of the shared edge
        if len(hits) == 2:
            a, b = hits
            key = self._shared_edge(a, b)
            if key is not None:
                i, j = key
                t_left = self._left_tri_of(key)
                if t_left in (a, b):
                    return self.leaf_of_tri[t_left]
        return self.leaf_of_tri[min(hits)]

    def _shared_edge(self, a, b):
        for other, key in self.tri.neighbors[a]:
            if other == b:
                return key
        return None

    def _left_tri_of(self, key):
        i, j = key
        vi, vj = self.poly.verts[i], self.poly.verts[j]
        for t in self.tri.edge_tris[key]:
            w = next(v for v in self.tri.tris[t] if v != i and v != j)
            if orient(vi, vj, self.poly.verts[w]) > 0:
                return t
        return self.tri.edge_tris[key][0]

    # -- geodesics

    def shortest_path(self, p, q):
        """Exact geodesic between two points as a vertex polyline."""
        kp, kq = pt_norm(p), pt_norm(q)
        ck = (kp, kq)
        hit = self._geo_cache.get(ck)
        if hit is not None:
            return hit
        vi = self.tri.vert_index
        tp = self.tri.vert_tri[vi[kp]] if kp in vi else self.tri.locate(p)
        tq = self.tri.vert_tri[vi[kq]] if kq in vi else self.tri.locate(q)
        if tp is None or tq is None:
            raise PointOutside("geodesic endpoint outside polygon")
        path = _funnel_path(self.poly, self.tri, p, q, tp, tq)
        if len(self._geo_cache) < 200000:
            self._geo_cache[ck] = path
        return path

    def funnel(self, q, key):
        """Funnel from q to diagonal ``key``: (root, chain0, chain1) with
        chain0 the geodesic to verts[key[0]] and chain1 to verts[key[1]]."""
        i, j = key
        return (q, self.shortest_path(q, self.poly.verts[i]),
                self.shortest_path(q, self.poly.verts[j]))

    def cone_query(self, s, key_or_pts):
        """Visibility cone from s through a diagonal, via the funnel."""
        if isinstance(key_or_pts, tuple) and isinstance(key_or_pts[0], int):
            i, j = key_or_pts
            d0, d1 = self.poly.verts[i], self.poly.verts[j]
        else:
            d0, d1 = key_or_pts
        if on_segment(s, d0, d1):
            raise PointOnDiagonal("cone apex on the diagonal")
        p0 = self.shortest_path(s, d0)
        p1 = self.shortest_path(s, d1)
        u = p0[1]
        v = p1[1]
        if not pt_eq(u, v):
            o = orient(s, u, v)
            if o > 0:
                return Cone.proper(s, pt_sub_dir(s, u), pt_sub_dir(s, v))
            if o < 0:
                return Cone.proper(s, pt_sub_dir(s, v), pt_sub_dir(s, u))
            # collinear opposite-side first links cannot happen for a funnel
            return self._degenerate_cone(s, d0, d1)
        return self._degenerate_cone(s, d0, d1)

    def _degenerate_cone(self, s, d0, d1):
        """Empty-or-grazing cone when the funnel pinches immediately."""
        from .exact import Ray, line_intersect, line_through
        ld = line_through(d0, d1)
        for path in (self.shortest_path(s, d0), self.shortest_path(s, d1)):
            if len(path) < 2:
                continue
            v = path[1]
            q = line_intersect(line_through(s, v), ld)
            if q is None or not on_segment(q, d0, d1):
                continue
            vp = pt_sub_dir(s, v)
            vq = pt_sub_dir(s, q)
            if vp[0] * vq[0] + vp[1] * vq[1] <= 0:
                continue
            if segment_inside_polygon(self.poly, s, q):
                return Cone.degenerate(Ray(s, pt_sub_dir(s, q)))
        return Cone.empty()

    # -- hourglasses

    def hourglass_direct(self, key_in, key_out):
        """Hourglass between two diagonals, by its four endpoint geodesics."""
        ck = (key_in, key_out)
        hit = self._hour_cache.get(ck)
        if hit is not None:
            return hit
        h = _hourglass(self, key_in, key_out)
        self._hour_cache[ck] = h
        return h

    def hourglass_between(self, key_in, key_out):
        """Spec surface: requires the diagonals to lie on one root path."""
        n_in = self._node_of_diag(key_in)
        n_out = self._node_of_diag(key_out)
        if n_in is None or n_out is None:
            raise NotRelatedDiagonals("not decomposition diagonals")
        if not (self._is_ancestor(n_in, n_out) or self._is_ancestor(n_out, n_in)):
            raise NotRelatedDiagonals("diagonals not on one root path")
        return self.hourglass_direct(key_in, key_out)

    def _node_of_diag(self, key):
        for node in self.nodes:
            if node.diag == key:
                return node
        return None

    @staticmethod
    def _is_ancestor(a, b):
        cur = b
        while cur is not None:
            if cur is a:
                return True
            cur = cur.parent
        return False

    def node_hourglass(self, node):
        """The stored hourglass between a node's diagonal and its parent's."""
        if node.parent is None or node.is_leaf():
            return None
        if node._hourglass_to_parent is None:
            node._hourglass_to_parent = self.hourglass_direct(
                node.parent.diag, node.diag)
        return node._hourglass_to_parent

    # -- segment location

    def segment_location(self, a, b):
        """Polygon cover of segment ab: leaf triangles plus open hourglasses."""
        if not segment_inside_polygon(self.poly, a, b):
            raise SegmentOutside("query segment not inside polygon")
        leaf_a = self.locate_leaf(a)
        leaf_b = self.locate_leaf(b)
        if leaf_a is leaf_b or pt_eq(a, b):
            return PolygonCover(self, a, b, [('tri', leaf_a, ZERO, ONE)])
        pieces = self._cover_node(self.root, a, b, ZERO, ONE)
        return PolygonCover(self, a, b, pieces)

    def _chord_cross_param(self, a, b, key, lo, hi):
        i, j = key
        hit = seg_intersect(a, b, self.poly.verts[i], self.poly.verts[j])
        if hit is None or hit[0] != 'point':
            return None
        t = _param_along(a, b, hit[1])
        if lo < t < hi:
            return t
        return None

    def _cover_node(self, node, a, b, lo, hi):
        """Cover of the portion ab[lo..hi], fully inside node's region."""
        if node.is_leaf():
            return [('tri', node, lo, hi)]
        t = self._chord_cross_param(a, b, node.diag, lo, hi)
        if t is None:
            child = self._child_containing(node, a, b, lo, hi)
            return self._cover_node(child, a, b, lo, hi)
        near = self._cover_exit(self._child_containing(node, a, b, lo, t),
                                a, b, lo, t, node.diag, forward=True)
        far = self._cover_exit(self._child_containing(node, a, b, t, hi),
                               a, b, t, hi, node.diag, forward=False)
        return near + far

    def _cover_exit(self, node, a, b, lo, hi, exit_key, forward):
        """Cover of ab[lo..hi] inside node's region, exiting via exit_key.

        With ``forward`` the portion runs toward the exit (lo side is an
        original endpoint); otherwise it runs away from it.
        """
        if node.is_leaf():
            return [('tri', node, lo, hi)]
        t = self._chord_cross_param(a, b, node.diag, lo, hi)
        if t is None:
            child = self._child_containing(node, a, b, lo, hi)
            return self._cover_exit(child, a, b, lo, hi, exit_key, forward)
        if forward:
            inner = self._cover_exit(self._child_containing(node, a, b, lo, t),
                                     a, b, lo, t, node.diag, True)
            span_child = self._child_containing(node, a, b, t, hi)
            return inner + [self._span(span_child, node.diag, exit_key, t, hi)]
        inner = self._cover_exit(self._child_containing(node, a, b, t, hi),
                                 a, b, t, hi, node.diag, False)
        span_child = self._child_containing(node, a, b, lo, t)
        return [self._span(span_child, exit_key, node.diag, lo, t)] + inner

    def _span(self, node, key_a, key_b, lo, hi):
        """Piece for a portion crossing node's whole region between two
        boundary diagonals (entry nearer the segment start)."""
        if node.is_leaf():
            return ('tri', node, lo, hi)
        return ('hour', node, key_a, key_b, lo, hi)

    def _child_containing(self, node, a, b, lo, hi):
        # membership must be by region, not by line side: a child region can
        # wrap around a diagonal endpoint onto the other side of its line
        mid = convex_combination(a, b, (lo + hi) / 2)
        t = self.tri.locate(mid)
        return node.left if t in node.left.tris else node.right

    # -- shortest path maps

    def hang_polygon(self, key, away_tris):
        """The subpolygon beyond diagonal ``key``, on the side not containing
        ``away_tris`` (a set of triangle ids)."""
        i, j = key
        t_hang = next(t for t in self.tri.edge_tris[key] if t not in away_tris)
        return self._hang_from_tri(key, t_hang)

    def _hang_from_tri(self, key, t_hang):
        i, j = key
        w = next(v for v in self.tri.tris[t_hang] if v != i and v != j)
        n = self.poly.n
        # boundary arc from j to i (or i to j) containing w
        arc = [i]
        k = i
        while k != j:
            k = (k + 1) % n
            arc.append(k)
        if w in arc[1:-1]:
            idxs = arc
        else:
            idxs = [j]
            k = j
            while k != i:
                k = (k + 1) % n
                idxs.append(k)
        return idxs

    def shortest_path_map(self, key, root_idx, away_tris):
        """Shortest path map over the hang of ``key`` rooted at a diagonal
        endpoint: per-vertex anchor tree plus annotation slots."""
        idxs = self.hang_polygon(key, away_tris)
        root = self.poly.verts[root_idx]
        parent = {}
        order = []
        for vi in idxs:
            if vi == root_idx:
                continue
            path = self.shortest_path(root, self.poly.verts[vi])
            anchor = path[-2] if len(path) >= 2 else root
            parent[vi] = anchor
            order.append(vi)
        return ShortestPathMap(self, key, root_idx, idxs, parent, order)

    def depth_bound_ok(self, c=2):
        import math
        limit = c * math.log2(max(self.poly.n, 2)) + 2
        return max(n.depth for n in self.nodes) <= limit


class ShortestPathMap:
    """Anchor tree of geodesics from a root vertex across a subpolygon.

    The geodesic from the root to any target point equals the stored tree
    path to the target's anchor vertex plus one final straight segment.
    ``slots`` is the per-vertex annotation used by counting structures.
    """

    __slots__ = ('tree', 'key', 'root_idx', 'idxs', 'parent', 'order', 'slots')

    def __init__(self, tree, key, root_idx, idxs, parent, order):
        self.tree = tree
        self.key = key
        self.root_idx = root_idx
        self.idxs = idxs
        self.parent = parent
        self.order = order
        self.slots = {}

    def root_point(self):
        return self.tree.poly.verts[self.root_idx]

    def anchor_of(self, q):
        """Last map vertex on the geodesic root -> q (the root for direct)."""
        path = self.tree.shortest_path(self.root_point(), q)
        return path[-2] if len(path) >= 2 else path[-1]


# ---------------------------------------------------------------------------
# hourglasses

class Hourglass:
    """Union of geodesics between two diagonals, bounded by two chains."""

    __slots__ = ('key_in', 'key_out', 'chains', 'open')

    def __init__(self, key_in, key_out, chain_a, chain_b):
        self.key_in = key_in
        self.key_out = key_out
        self.chains = (chain_a, chain_b)
        ka = {pt_norm(p) for p in chain_a}
        kb = {pt_norm(p) for p in chain_b}
        self.open = not (ka & kb)

    def chain_points(self):
        return self.chains


def _hourglass(tree, key_in, key_out):
    poly = tree.poly
    i1, j1 = key_in
    i2, j2 = key_out
    # pair endpoints by boundary arcs: nested index intervals pair min-min /
    # max-max, disjoint intervals pair inner-inner / outer-outer
    lo1, hi1 = min(i1, j1), max(i1, j1)
    lo2, hi2 = min(i2, j2), max(i2, j2)
    if lo1 <= lo2 and hi2 <= hi1 or lo2 <= lo1 and hi1 <= hi2:
        pairs = ((lo1, lo2), (hi1, hi2))
    else:
        if hi1 <= lo2:
            pairs = ((hi1, lo2), (lo1, hi2))
        else:
            pairs = ((hi2, lo1), (lo2, hi1))
    chain_a = tree.shortest_path(poly.verts[pairs[0][0]], poly.verts[pairs[0][1]])
    chain_b = tree.shortest_path(poly.verts[pairs[1][0]], poly.verts[pairs[1][1]])
    return Hourglass(key_in, key_out, chain_a, chain_b)


def compose_hourglasses(tree, h1, h2):
    """Concatenate hourglasses sharing a middle diagonal.

    Open-open compositions splice each wall pair with a tangent bridge
    (convexifying around the junction); pinched or ambiguous junctions fall
    back to the endpoint-geodesic computation.
    """
    if h1.key_out != h2.key_in:
        raise NotRelatedDiagonals("hourglasses do not share a diagonal")
    if not (h1.open and h2.open):
        return _hourglass(tree, h1.key_in, h2.key_out)
    chains = []
    for c1 in h1.chains:
        end = pt_norm(c1[-1])
        match = [c2 for c2 in h2.chains if pt_norm(c2[0]) == end]
        if len(match) != 1:
            chains = None
            break
        spliced = _splice(c1, match[0])
        if spliced is None:
            chains = None
            break
        chains.append(spliced)
    if chains is None:
        return _hourglass(tree, h1.key_in, h2.key_out)
    h = Hourglass(h1.key_in, h2.key_out, chains[0], chains[1])
    if not h.open:
        return _hourglass(tree, h1.key_in, h2.key_out)
    return h


def _splice(c1, c2):
    """Tangent splice of two same-wall chains sharing c1[-1] == c2[0].

    Both inputs bend toward the same side (away from the corridor); interior
    vertices whose turn disagrees with that side are shortcut away.  Returns
    None when the bend side cannot be inferred, so the caller recomputes.
    """
    path = list(c1) + list(c2[1:])
    sign = 0
    for c in (c1, c2):
        for k in range(len(c) - 2):
            s = orient(c[k], c[k + 1], c[k + 2])
            if s != 0:
                sign = s
                break
        if sign:
            break
    if sign == 0:
        if len(path) == 3 and orient(path[0], path[1], path[2]) == 0:
            path = [path[0], path[2]]
        elif len(path) > 2:
            return None
    else:
        changed = True
        while changed:
            changed = False
            k = 1
            while k < len(path) - 1:
                s = orient(path[k - 1], path[k], path[k + 1])
                if s != sign:
                    del path[k]
                    changed = True
                else:
                    k += 1
    out = [path[0]]
    for x in path[1:]:
        if not pt_eq(out[-1], x):
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# the polygon cover

class PolygonCover:
    """Ordered cover pieces of a query segment: leaf triangles and open
    hourglasses between decomposition diagonals."""

    __slots__ = ('tree', 'a', 'b', 'pieces', '_hours')

    def __init__(self, tree, a, b, pieces):
        self.tree = tree
        self.a = a
        self.b = b
        self.pieces = pieces
        self._hours = None

    def hourglasses(self):
        if self._hours is None:
            self._hours = [
                (p[1], p[2], p[3], self.tree.hourglass_direct(p[2], p[3]))
                for p in self.pieces if p[0] == 'hour'
            ]
        return self._hours

    def triangles(self):
        return [p[1] for p in self.pieces if p[0] == 'tri']

    def piece_count(self):
        return len(self.pieces)

    def contains_point(self, q):
        """Closed membership of q in the union of the cover pieces."""
        for p in self.pieces:
            if p[0] == 'tri':
                t = p[1].leaf_tri
                pa, pb, pc = self.tree.tri.tri_points(t)
                if orient(pa, pb, q) >= 0 and orient(pb, pc, q) >= 0 \
                        and orient(pc, pa, q) >= 0:
                    return True
            else:
                if _hourglass_region_contains(self.tree, p[1], p[2], p[3], q):
                    return True
        return False


def hourglass_region_ring(h):
    """The hourglass region as a simple ring: one chain, the far diagonal
    piece, the other chain reversed, and the near diagonal piece."""
    ca, cb = h.chains
    ring = list(ca) + list(reversed(cb))
    out = []
    for p in ring:
        if not out or not pt_eq(out[-1], p):
            out.append(p)
    if len(out) > 1 and pt_eq(out[0], out[-1]):
        out.pop()
    return out


def _hourglass_region_contains(tree, node, key_in, key_out, q):
    h = tree.hourglass_direct(key_in, key_out)
    if not h.open:
        return False
    ring = hourglass_region_ring(h)
    if len(ring) < 3:
        return False
    from .exact import locate_in_ring
    return locate_in_ring(ring, q) >= 0


# ---------------------------------------------------------------------------
# the funnel algorithm

def _param_along(a, b, p):
    ax, ay = pt_xy(a)
    bx, by = pt_xy(b)
    px, py = pt_xy(p)
    dx, dy = bx - ax, by - ay
    return ((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy)


def _funnel_path(poly, tri, p, q, tp, tq):
    if pt_eq(p, q):
        return [p]
    if tp == tq:
        return [p, q]
    tri_path = tri.dual_path(tp, tq)
    verts = poly.verts
    # portal index pairs along the sleeve
    portal_keys = []
    for t1, t2 in zip(tri_path, tri_path[1:]):
        key = next(k for o, k in tri.neighbors[t1] if o == t2)
        portal_keys.append(key)
    # orient the first portal (right, left) as seen from p; subsequent
    # portals keep the shared vertex on its side.  Portals through p itself
    # carry no constraint and are dropped.
    while portal_keys:
        u, v = portal_keys[0]
        o = orient(p, verts[u], verts[v])
        if o != 0:
            break
        portal_keys.pop(0)
    if not portal_keys:
        return [p, q]
    right_i, left_i = (u, v) if o > 0 else (v, u)
    oriented = [(right_i, left_i)]
    for key in portal_keys[1:]:
        u, v = key
        pr, pl = oriented[-1]
        if u == pr or v == pr:
            keep_r = pr
            new_l = v if u == pr else u
            oriented.append((keep_r, new_l))
        else:
            keep_l = pl
            new_r = v if u == pl else u
            oriented.append((new_r, keep_l))
    tail = [p]
    right = [p]
    left = [p]

    def add(side_right, x):
        chain = right if side_right else left
        other = left if side_right else right
        sign = 1 if side_right else -1
        while len(chain) >= 2 and sign * orient(chain[-2], chain[-1], x) >= 0:
            chain.pop()
        if len(chain) == 1:
            # cusp: the apex may advance along the other chain
            while len(other) >= 2 and sign * orient(other[0], other[1], x) > 0:
                tail.append(other[1])
                other.pop(0)
                chain[0] = other[0]
        chain.append(x)

    prev_r, prev_l = None, None
    for ri, li in oriented:
        if ri != prev_r:
            add(True, verts[ri])
            prev_r = ri
        if li != prev_l:
            add(False, verts[li])
            prev_l = li
    add(True, q)
    path = tail + right[1:]
    # drop collinear doubling (grazing through a vertex keeps the vertex)
    out = [path[0]]
    for x in path[1:]:
        if not pt_eq(out[-1], x):
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# validation

def validate_general_position(poly, extra_points=()):
    """No repeated points and no three collinear among vertices + extras."""
    pts = [pt_norm(v) for v in poly.verts] + [pt_norm(p) for p in extra_points]
    seen = set()
    for p in pts:
        if p in seen:
            from .errors import GeneralPositionViolation
            raise GeneralPositionViolation("repeated point")
        seen.add(p)
    by_anchor = {}
    for i, a in enumerate(pts):
        slopes = set()
        for j, b in enumerate(pts):
            if j <= i:
                continue
            dx = b[0] * a[2] - a[0] * b[2]
            dy = b[1] * a[2] - a[1] * b[2]
            from math import gcd
            g = gcd(abs(dx), abs(dy))
            dx //= g
            dy //= g
            if dx < 0 or (dx == 0 and dy < 0):
                dx, dy = -dx, -dy
            if (dx, dy) in slopes:
                from .errors import GeneralPositionViolation
                raise GeneralPositionViolation("three collinear points")
            slopes.add((dx, dy))
        by_anchor[i] = slopes


def build_decomp(poly):
    return DecompTree(poly)


def triangulate(poly):
    """Triangulation surface: triangles plus the dual adjacency."""
    t = triangulation_of(poly)
    return t
