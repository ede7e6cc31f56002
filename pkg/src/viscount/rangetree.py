"""Multilevel cutting trees: line-side, half-plane, mutual-cone,
separated-cone and segment-stab counting.

One engine serves all five structures.  Items carry one oriented line per
level; a node of a level draws a random sample of its lines, builds the
sample's arrangement clipped to a bounding box that provably contains every
pairwise intersection of the stored lines, triangulates the bounded faces,
and verifies the (1/r)-cutting property (each cell crossed by at most
ceil(m/r) lines), resampling until it holds.  Lines entirely on one side of
a cell form that cell's canonical subsets; crossing lines recurse.  Next
levels are built over canonical subsets on the sides a caller declares.

Exactness: all arithmetic is integer/rational.  Canonical resolution assumes
query points do not lie on stored lines (general position); leaf scans are
exact unconditionally.  Query points outside the bounding box fall back to a
scan, which keeps answers exact for degenerate callers.
"""

import random
from array import array

from .errors import ArityMismatch, SegmentNotSeparated
from .exact import line_intersect, line_through, orient, pt_eq

DEFAULT_R = 4
SAMPLE_FACTOR = 2          # sample size = SAMPLE_FACTOR * r
LEAF_MAX = 64
RESAMPLE_TRIES = 24


class Stats:
    """Per-structure instrumentation: query-time node visits and predicates."""

    __slots__ = ('nodes', 'preds')

    def __init__(self):
        self.nodes = 0
        self.preds = 0

    def reset(self):
        self.nodes = 0
        self.preds = 0


def _side(line, p):
    a, b, c = line
    v = a * p[0] + b * p[1] - c * p[2]
    return (v > 0) - (v < 0)


class _Leaf:
    __slots__ = ('ids',)

    def __init__(self, ids):
        self.ids = ids


class _Node:
    __slots__ = ('sample', 'cells', 'face_of_sign', 'ids')

    def __init__(self, sample, cells, face_of_sign, ids):
        self.sample = sample
        self.cells = cells            # list of _Cell
        self.face_of_sign = face_of_sign
        self.ids = ids


class _Cell:
    __slots__ = ('tri', 'face', 'crossing', 'above_ids', 'below_ids',
                 'above_sub', 'below_sub')

    def __init__(self, tri, face):
        self.tri = tri                # triangle vertex triple (points)
        self.face = face              # sign-vector key of the parent face
        self.crossing = None          # child structure (same level)
        self.above_ids = None         # array of item ids with line above cell
        self.below_ids = None
        self.above_sub = None         # next-level structure or None
        self.below_sub = None


class MultilevelTree:
    """k-level cutting tree over items carrying one oriented line per level.

    ``level_sides`` declares, per level transition, which canonical sides
    need next-level structures: 'above', 'below' or 'both'.
    """

    def __init__(self, level_lines, k, level_sides=None, r=DEFAULT_R, seed=0):
        if level_sides is None:
            level_sides = ['both'] * k
        self.k = k
        self.r = r
        self.level_lines = level_lines      # per item: tuple of k lines
        self.level_sides = level_sides
        self.stats = Stats()
        self.m = len(level_lines)
        self._rng = random.Random(("cutting", seed, self.m, k).__repr__())
        self._bound = self._box_bound()
        ids = array('i', range(self.m))
        self.root = self._build(ids, 0)

    # -- construction

    def _box_bound(self):
        # a box that generously covers the region where the stored lines live;
        # canonical resolution is valid for any query inside the box, and
        # queries outside it take the exact fallback scan
        big = 4
        for lines in self.level_lines:
            for a, b, c in lines:
                big = max(big, -(-abs(c) // max(abs(a), abs(b))))
        return 8 * big + 8

    def _build(self, ids, level):
        line_of = self.level_lines
        if len(ids) <= LEAF_MAX:
            return _Leaf(ids)
        node = self._try_cutting(ids, level)
        if node is None:
            return _Leaf(ids)
        return node

    def _try_cutting(self, ids, level):
        m = len(ids)
        r = self.r
        limit = -(-m // r)  # ceil
        s = min(SAMPLE_FACTOR * r, m)
        for _attempt in range(RESAMPLE_TRIES):
            sample_ids = self._rng.sample(list(ids), s)
            sample = []
            seen = set()
            for i in sample_ids:
                ln = self.level_lines[i][level]
                if ln not in seen:
                    seen.add(ln)
                    sample.append(ln)
            cells, face_of_sign = self._cells_from_sample(sample)
            if cells is None:
                continue
            classified = self._classify(ids, level, cells)
            # refine cells that exceed the (1/r) bound by splitting them with
            # one of their own crossing lines until every cell verifies
            final = []
            queue = list(zip(cells, classified))
            steps = 0
            while queue:
                cell, (crossing, above, below) = queue.pop()
                if len(crossing) <= limit:
                    final.append((cell, crossing, above, below))
                    continue
                steps += 1
                if steps > 8 * m:
                    final = None
                    break
                ln = self.level_lines[crossing[len(crossing) // 2]][level]
                pieces = _split_triangle(cell.tri, ln)
                if len(pieces) == 1:
                    # grazing split is useless; try another crossing line
                    ln = self.level_lines[crossing[0]][level]
                    pieces = _split_triangle(cell.tri, ln)
                    if len(pieces) == 1:
                        final = None
                        break
                subs = []
                for tri_pts in pieces:
                    sub = _Cell(tri_pts, cell.face)
                    face_of_sign.setdefault(cell.face, []).append(sub)
                    subs.append(sub)
                if cell in face_of_sign.get(cell.face, ()):
                    face_of_sign[cell.face].remove(cell)
                sub_class = self._classify_subset(crossing, level,
                                                  [s.tri for s in subs])
                for sub, (cr2, ab2, be2) in zip(subs, sub_class):
                    queue.append((sub, (cr2, above + ab2, below + be2)))
            if final is None:
                continue
            node = _Node(sample, [c for c, _, _, _ in final], face_of_sign, ids)
            want = self.level_sides[level]
            for cell, crossing, above, below in final:
                cell.crossing = self._build(array('i', crossing), level)
                cell.above_ids = array('i', above)
                cell.below_ids = array('i', below)
                if level + 1 < self.k:
                    # a +1 constraint at this level resolves the below set
                    if want in ('neg', 'both'):
                        cell.above_sub = self._build(cell.above_ids, level + 1)
                    if want in ('pos', 'both'):
                        cell.below_sub = self._build(cell.below_ids, level + 1)
            return node
        return None

    def _classify(self, ids, level, cells):
        vid = {}
        verts = []
        tri_idx = []
        for cell in cells:
            idxs = []
            for p in cell.tri:
                k = id(p)
                t = vid.get(k)
                if t is None:
                    t = len(verts)
                    vid[k] = t
                    verts.append(p)
                idxs.append(t)
            tri_idx.append(idxs)
        out = [([], [], []) for _ in cells]  # crossing, above, below
        ncells = len(cells)
        for i in ids:
            a, b, c = self.level_lines[i][level]
            row = []
            for x, y, w in verts:
                v = a * x + b * y - c * w
                row.append(1 if v > 0 else (-1 if v < 0 else 0))
            for ci in range(ncells):
                i0, i1, i2 = tri_idx[ci]
                s0 = row[i0]
                s1 = row[i1]
                s2 = row[i2]
                if s0 >= 0 and s1 >= 0 and s2 >= 0:
                    out[ci][2].append(i)   # line below cell
                elif s0 <= 0 and s1 <= 0 and s2 <= 0:
                    out[ci][1].append(i)   # line above cell
                else:
                    out[ci][0].append(i)
        return out

    def _classify_subset(self, ids, level, tris):
        cells = [_Cell(t, None) for t in tris]
        return self._classify(ids, level, cells)

    def _cells_from_sample(self, sample):
        M = self._bound
        box = [(-M, -M, 1), (M, -M, 1), (M, M, 1), (-M, M, 1)]
        faces = [box]
        for ln in sample:
            new_faces = []
            for face in faces:
                lo = hi = 0
                sides = []
                for p in face:
                    v = _side(ln, p)
                    sides.append(v)
                    if v < lo:
                        lo = v
                    elif v > hi:
                        hi = v
                if lo >= 0 or hi <= 0:
                    new_faces.append(face)
                    continue
                neg, pos = _split_convex(face, sides, ln)
                if len(neg) >= 3:
                    new_faces.append(neg)
                if len(pos) >= 3:
                    new_faces.append(pos)
            faces = new_faces
        cells = []
        face_of_sign = {}
        for face in faces:
            sign = tuple(_face_sign(ln, face) for ln in sample)
            tris = []
            for t in range(1, len(face) - 1):
                cell = _Cell((face[0], face[t], face[t + 1]), sign)
                tris.append(cell)
                cells.append(cell)
            face_of_sign.setdefault(sign, []).extend(tris)
        if not cells:
            return None, None
        return cells, face_of_sign

    # -- queries

    def count(self, constraints, collect=None):
        """Count items satisfying all k constraints (point, side, strict).

        ``side`` is +1 for the oriented-above side of the item's line at that
        level; ``strict`` excludes items whose line passes through the point.
        With ``collect`` a list, canonical (count, ids) pairs are appended.
        """
        if len(constraints) != self.k:
            raise ArityMismatch("expected %d constraints" % self.k)
        for qpt, side, strict in constraints:
            if abs(qpt[0]) >= self._bound * qpt[2] or \
                    abs(qpt[1]) >= self._bound * qpt[2]:
                return self._scan_all(constraints, collect)
        return self._count(self.root, 0, constraints, collect)

    def _scan_all(self, constraints, collect):
        ids = array('i', range(self.m))
        return self._scan(ids, 0, constraints, collect)

    def _scan(self, ids, level, constraints, collect):
        self.stats.nodes += 1
        cnt = 0
        hits = [] if collect is not None else None
        for i in ids:
            ok = True
            lines = self.level_lines[i]
            for lv in range(level, self.k):
                qpt, side, strict = constraints[lv]
                v = _side(lines[lv], qpt)
                self.stats.preds += 1
                if strict:
                    if v * side <= 0:
                        ok = False
                        break
                elif v * side < 0:
                    ok = False
                    break
            if ok:
                cnt += 1
                if hits is not None:
                    hits.append(i)
        if collect is not None and cnt:
            collect.append((cnt, hits))
        return cnt

    def _count(self, structure, level, constraints, collect):
        if isinstance(structure, _Leaf):
            return self._scan(structure.ids, level, constraints, collect)
        self.stats.nodes += 1
        qpt, side, strict = constraints[level]
        cell = self._locate(structure, qpt)
        if cell is None:
            return self._scan(structure.ids, level, constraints, collect)
        total = 0
        # side +1 wants lines passing weakly below the point: lines entirely
        # below the cell qualify; symmetrically for -1
        resolved_ids = cell.below_ids if side > 0 else cell.above_ids
        sub = cell.below_sub if side > 0 else cell.above_sub
        if level + 1 < self.k:
            if sub is None:
                total += self._scan(resolved_ids, level + 1, constraints, collect)
            else:
                total += self._count(sub, level + 1, constraints, collect)
        else:
            total += len(resolved_ids)
            if collect is not None and len(resolved_ids):
                collect.append((len(resolved_ids), list(resolved_ids)))
        total += self._count(cell.crossing, level, constraints, collect)
        return total

    def _locate(self, node, qpt):
        sign = tuple(_side(ln, qpt) for ln in node.sample)
        self.stats.preds += len(node.sample)
        tris = node.face_of_sign.get(sign)
        if tris is None:
            # on a sample line or outside known faces: scan the cells
            for cell in node.cells:
                if _tri_contains(cell.tri, qpt):
                    self.stats.preds += 3
                    return cell
            return node.cells[0] if node.cells else None
        for cell in tris:
            self.stats.preds += 3
            if _tri_contains(cell.tri, qpt):
                return cell
        return tris[0]

    # -- invariants (used by tests)

    def check_cutting_property(self):
        """Every internal node's cells are crossed by at most ceil(m/r) of
        that node's lines, and canonical subsets resolve disjointly."""
        ok = True
        stack = [self.root]
        while stack:
            st = stack.pop()
            if isinstance(st, _Leaf):
                continue
            limit = -(-len(st.ids) // self.r)
            for cell in st.cells:
                cross = cell.crossing
                size = len(cross.ids) if isinstance(cross, _Leaf) else len(cross.ids)
                if size > limit:
                    ok = False
                total = size + len(cell.above_ids) + len(cell.below_ids)
                if total != len(st.ids):
                    ok = False
                stack.append(cross)
                for sub in (cell.above_sub, cell.below_sub):
                    if sub is not None:
                        stack.append(sub)
        return ok


def _split_convex(face, sides, ln):
    neg = []
    pos = []
    n = len(face)
    for i in range(n):
        p = face[i]
        sp = sides[i]
        q = face[(i + 1) % n]
        sq = sides[(i + 1) % n]
        if sp <= 0:
            neg.append(p)
        if sp >= 0:
            pos.append(p)
        if sp * sq < 0:
            x = line_intersect(ln, line_through(p, q))
            neg.append(x)
            pos.append(x)
    return neg, pos


def _split_triangle(tri_pts, ln):
    """Split a triangle by a line into fan triangles of its two halves."""
    face = list(tri_pts)
    sides = [_side(ln, p) for p in face]
    lo = min(sides)
    hi = max(sides)
    if lo >= 0 or hi <= 0:
        return [tri_pts]
    neg, pos = _split_convex(face, sides, ln)
    out = []
    for piece in (neg, pos):
        for t in range(1, len(piece) - 1):
            a, b, c = piece[0], piece[t], piece[t + 1]
            if orient(a, b, c) != 0:
                out.append((a, b, c))
    return out if len(out) >= 2 else [tri_pts]


def _face_sign(ln, face):
    for p in face:
        v = _side(ln, p)
        if v:
            return v
    return 0


def _tri_contains(tri, p):
    a, b, c = tri
    return orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0


# ---------------------------------------------------------------------------
# the five structure surfaces

def build_lineside(lines, k, seed=0):
    """Lemma-2.4 style structure: count stored lines by point-side constraints."""
    norm = [tuple(_norm_line(ln) for _ in range(k)) for ln in lines]
    return MultilevelTree(norm, k, seed=seed)


def query_lineside(tree, constraints):
    """Constraints: list of (point, 'above'|'below', strict) or
    ('vray', point, up: bool) vertical-ray entries."""
    conv = []
    for con in constraints:
        if con[0] == 'vray':
            _, p, up = con
            conv.append((p, -1 if up else 1, False))
        else:
            p, side, strict = con
            conv.append((p, 1 if side == 'above' else -1, strict))
    return tree.count(conv)


def _norm_line(ln):
    a, b, c = ln
    if b < 0 or (b == 0 and a < 0):
        return (-a, -b, -c)
    return (a, b, c)


def build_halfplane(points, k, seed=0):
    """Lemma-2.5 structure over points, dualised to lines."""
    duals = []
    for p in points:
        x, y, w = p
        # dual of (x/w, y/w): the line y' = (x/w) x' - (y/w): w*y' - x*x' + y = 0
        ln = (-x, w, -y)
        duals.append(tuple(_norm_line(ln) for _ in range(k)))
    t = MultilevelTree(duals, k, seed=seed)
    t.points = list(points)
    return t


def query_halfplane(tree, halfplanes):
    """halfplanes: list of (a, b, c, closed) meaning a*x + b*y <= c."""
    constraints = []
    for a, b, c, closed in halfplanes:
        if a == 0 and b == 0:
            if c >= 0:
                constraints.append(None)  # whole plane
                continue
            return 0
        if b == 0:
            return _halfplane_scan(tree, halfplanes)
        if b < 0:
            a, b, c = -a, -b, -c
            side = 1    # inequality flips to >=
        else:
            side = -1
        # dual point of the boundary line y = (-a/b) x + c/b is (-a/b, -c/b);
        # evaluating p's dual line there reproduces a*px + b*py - c*w exactly,
        # so the wanted side carries over unchanged
        qpt = (-a, -c, b)
        constraints.append((qpt, side, not closed))
    if any(c is None for c in constraints):
        return _halfplane_scan(tree, halfplanes)
    return tree.count(constraints)


def _halfplane_scan(tree, halfplanes):
    cnt = 0
    for p in tree.points:
        ok = True
        for a, b, c, closed in halfplanes:
            v = a * p[0] + b * p[1] - c * p[2]
            tree.stats.preds += 1
            if closed:
                if v > 0:
                    ok = False
                    break
            elif v >= 0:
                ok = False
                break
        if ok:
            cnt += 1
    return cnt


def _oriented_cone_lines(cone):
    """(lower-oriented, upper-oriented) lines with + meaning inside the cone."""
    if cone.kind == 'strip':
        lo, hi = cone.lo, cone.hi
        return lo, (-hi[0], -hi[1], -hi[2])
    r_line = cone.right.line()
    l_line = cone.left.line()
    if cone.kind == 'degenerate':
        return r_line, (-l_line[0], -l_line[1], -l_line[2])
    apex = cone.apex
    inside = (apex[0] + (cone.right.d[0] + cone.left.d[0]) * apex[2],
              apex[1] + (cone.right.d[1] + cone.left.d[1]) * apex[2],
              apex[2])
    out = []
    for ln in (r_line, l_line):
        s = _side(ln, inside)
        if s < 0:
            ln = (-ln[0], -ln[1], -ln[2])
        out.append(ln)
    return out[0], out[1]


def build_mutual_cone(items, seed=0):
    """Lemma-2.6 structure over (apex, cone) items; four levels."""
    levels = []
    for apex, cone in items:
        x, y, w = apex
        dual = _norm_line((-x, w, -y))
        lo, hi = _oriented_cone_lines(cone)
        levels.append((dual, dual, lo, hi))
    t = MultilevelTree(levels, 4, level_sides=['both', 'both', 'pos', 'pos'],
                       seed=seed)
    t.items = list(items)
    return t


def query_mutual_cone(tree, q, cone_q):
    """Count stored (apex, cone) pairs with apex in cone_q and q in cone."""
    if cone_q.is_empty():
        return 0
    lo, hi = _oriented_cone_lines(cone_q)
    cons = []
    for ln in (lo, hi):
        # apex weakly inside cone_q w.r.t. this boundary: a*x+b*y >= c.
        # p above-or-on primal line <=> dual line of p weakly below the
        # line's dual point (alpha, beta) = (-a, -c, b) after b>0 normalise
        a, b, c = ln
        if b == 0:
            return _mutual_scan(tree, q, cone_q)
        if b < 0:
            a, b, c = -a, -b, -c
            side = -1   # original >= becomes <=: p weakly below
        else:
            side = 1
        qpt = (-a, -c, b)
        cons.append((qpt, side, False))
    cons.append((q, 1, False))
    cons.append((q, 1, False))
    return tree.count(cons)


def _mutual_scan(tree, q, cone_q):
    cnt = 0
    for apex, cone in tree.items:
        tree.stats.preds += 2
        if cone_q.contains_point(apex) and cone.contains_point(q):
            cnt += 1
    return cnt


class SeparatedConeDS:
    """Lemma-2.7 structure: cones with apexes beyond an oriented line, query
    segments on the near side; counts cones meeting the closed segment."""

    def __init__(self, cones, sep_line, seed=0):
        self.sep = sep_line
        self.total = len(cones)
        lowers = []
        uppers = []
        for cone in cones:
            if cone.is_empty():
                raise ValueError("empty cones are not storable")
            if cone.kind != 'strip':
                if _side(sep_line, cone.apex) >= 0:
                    raise SegmentNotSeparated("cone apex not beyond the line")
            lo, hi = _oriented_cone_lines(cone)
            # outside-below means strictly below the lower boundary: orient
            # the stored line so + is the outside
            lowers.append(((-lo[0], -lo[1], -lo[2]),) * 2)
            uppers.append(((-hi[0], -hi[1], -hi[2]),) * 2)
        self.lower_tree = MultilevelTree(lowers, 2, level_sides=['pos', 'pos'],
                                         seed=seed)
        self.upper_tree = MultilevelTree(uppers, 2, level_sides=['pos', 'pos'],
                                         seed=seed + 1)
        self.stats = Stats()

    def count_meeting(self, p, q):
        """Cones whose closed region meets closed segment pq."""
        for x in (p, q):
            if _side(self.sep, x) < 0:
                raise SegmentNotSeparated("query endpoint beyond the line")
        cons_p_q = [(p, 1, True), (q, 1, True)]
        below = self.lower_tree.count(cons_p_q)
        above = self.upper_tree.count(cons_p_q)
        self.stats.nodes = self.lower_tree.stats.nodes + self.upper_tree.stats.nodes
        self.stats.preds = self.lower_tree.stats.preds + self.upper_tree.stats.preds
        return self.total - below - above

    def count_outside(self, p, q, which):
        """Segments strictly outside one boundary: 'lower' or 'upper'."""
        cons = [(p, 1, True), (q, 1, True)]
        tree = self.lower_tree if which == 'lower' else self.upper_tree
        return tree.count(cons)


def build_separated_cone(cones, sep_line, seed=0):
    return SeparatedConeDS(cones, sep_line, seed=seed)


def query_separated_cone(ds, p, q):
    return ds.count_meeting(p, q)


class SegmentStabDS:
    """Lemma-2.8 structure: count stored lines met by a closed query segment."""

    def __init__(self, lines, seed=0):
        self.total = len(lines)
        norm = [( _norm_line(ln), _norm_line(ln) ) for ln in lines]
        self.tree = MultilevelTree(norm, 2, seed=seed)
        self.stats = self.tree.stats

    def count_stabbed(self, p, q):
        above = self.tree.count([(p, 1, True), (q, 1, True)])
        below = self.tree.count([(p, -1, True), (q, -1, True)])
        return self.total - above - below


def build_segment_stab(lines, seed=0):
    return SegmentStabDS(lines, seed=seed)


def query_segment_stab(ds, p, q):
    return ds.count_stabbed(p, q)
