import random

from viscount.exact import Cone, line_through, pt
from viscount.rangetree import (
    SeparatedConeDS, build_halfplane, build_lineside, build_mutual_cone,
    build_segment_stab, query_halfplane, query_lineside, query_mutual_cone,
)


def rand_line(rng, span=60):
    while True:
        p = pt(rng.randint(-span, span), rng.randint(-span, span))
        q = pt(rng.randint(-span, span), rng.randint(-span, span))
        if p != q:
            return line_through(p, q)


def line_val(ln, p):
    a, b, c = ln
    return a * p[0] + b * p[1] - c * p[2]


def test_lineside_trivial_and_scan():
    rng = random.Random(1)
    lines = [rand_line(rng) for _ in range(64)]
    t = build_lineside(lines, 2, seed=5)
    # a point far above all lines with Below counts everything
    far = pt(0, 10 ** 9)
    assert query_lineside(t, [(far, 'below', False), (far, 'below', False)]) == 64
    # contradictory constraints at a non-incident point count nothing
    p = pt(3, 7)
    if all(line_val(ln, p) != 0 for ln in lines):
        assert query_lineside(t, [(p, 'above', True), (p, 'below', True)]) == 0


def test_lineside_random_matches_scan():
    rng = random.Random(2)
    for trial in range(30):
        m = rng.randint(4, 96)
        lines = [rand_line(rng) for _ in range(m)]
        t = build_lineside(lines, 2, seed=trial)
        assert t.check_cutting_property()
        for _ in range(20):
            p = pt(rng.randint(-70, 70), rng.randint(-70, 70))
            q = pt(rng.randint(-70, 70), rng.randint(-70, 70))
            s1 = rng.choice(('above', 'below'))
            s2 = rng.choice(('above', 'below'))
            want = 0
            for ln in lines:
                v1 = line_val(ln, p)
                v2 = line_val(ln, q)
                ok1 = v1 >= 0 if s1 == 'above' else v1 <= 0
                ok2 = v2 >= 0 if s2 == 'above' else v2 <= 0
                if ok1 and ok2:
                    want += 1
            got = query_lineside(t, [(p, s1, False), (q, s2, False)])
            assert got == want


def test_lineside_vertical_ray_constraint():
    rng = random.Random(3)
    lines = [rand_line(rng) for _ in range(40)]
    t = build_lineside(lines, 1, seed=9)
    p = pt(5, -3)
    # upward ray from p hits every line weakly above p
    want = sum(1 for ln in lines if line_val(ln, p) >= 0)
    assert query_lineside(t, [('vray', p, True)]) == want


def test_halfplane_random_matches_scan():
    rng = random.Random(4)
    for trial in range(25):
        m = rng.randint(4, 96)
        points = [pt(rng.randint(-50, 50), rng.randint(-50, 50)) for _ in range(m)]
        t = build_halfplane(points, 3, seed=trial)
        for _ in range(15):
            hps = []
            for _ in range(3):
                a = rng.randint(-9, 9)
                b = rng.randint(-9, 9)
                if a == 0 and b == 0:
                    a = 1
                c = rng.randint(-200, 200)
                hps.append((a, b, c, True))
            want = 0
            for p in points:
                if all(a * p[0] + b * p[1] - c * p[2] <= 0 for a, b, c, _ in hps):
                    want += 1
            assert query_halfplane(t, hps) == want


def test_halfplane_whole_plane_and_empty():
    rng = random.Random(5)
    points = [pt(rng.randint(-20, 20), rng.randint(-20, 20)) for _ in range(30)]
    t = build_halfplane(points, 2, seed=1)
    assert query_halfplane(t, [(0, 0, 5, True), (0, 0, 7, True)]) == 30
    # x <= -100 and x >= 100: empty
    assert query_halfplane(t, [(1, 0, -100, True), (-1, 0, -100, True)]) == 0


def rand_cone(rng, span=40):
    while True:
        apex = pt(rng.randint(-span, span), rng.randint(-span, span))
        d1 = (rng.randint(-8, 8), rng.randint(-8, 8))
        d2 = (rng.randint(-8, 8), rng.randint(-8, 8))
        if d1 == (0, 0) or d2 == (0, 0):
            continue
        cr = d1[0] * d2[1] - d1[1] * d2[0]
        if cr > 0:
            return Cone.proper(apex, d1, d2)
        if cr < 0:
            return Cone.proper(apex, d2, d1)


def test_mutual_cone_examples_and_scan():
    # two full-quadrant cones facing each other
    a = (pt(0, 0), Cone.proper(pt(0, 0), (1, 0), (0, 1)))
    b = (pt(5, 5), Cone.proper(pt(5, 5), (-1, 0), (0, -1)))
    t = build_mutual_cone([a, b], seed=2)
    got = query_mutual_cone(t, b[0], b[1])
    assert got == 1
    assert query_mutual_cone(t, pt(9, 9), Cone.empty()) == 0
    rng = random.Random(6)
    for trial in range(20):
        m = rng.randint(4, 64)
        items = [(None, rand_cone(rng)) for _ in range(m)]
        items = [(c.apex, c) for _, c in items]
        t = build_mutual_cone(items, seed=trial)
        for _ in range(12):
            qc = rand_cone(rng)
            q = qc.apex
            want = sum(1 for apex, c in items
                       if qc.contains_point(apex) and c.contains_point(q))
            got = query_mutual_cone(t, q, qc)
            assert got == want, (trial, got, want)


def test_separated_cone_matches_scan():
    rng = random.Random(7)
    sep = line_through(pt(0, -100), pt(0, 100))  # the y-axis, above = x > 0
    for trial in range(20):
        m = rng.randint(4, 64)
        cones = []
        while len(cones) < m:
            apex = pt(rng.randint(-60, -5), rng.randint(-40, 40))
            y1 = rng.randint(-60, 60)
            y2 = rng.randint(-60, 60)
            p1 = pt(0, y1)
            p2 = pt(0, y2)
            from viscount.exact import pt_sub_dir, orient
            if orient(apex, p1, p2) == 0:
                continue
            d1 = pt_sub_dir(apex, p1)
            d2 = pt_sub_dir(apex, p2)
            if orient(apex, p1, p2) < 0:
                d1, d2 = d2, d1
            cones.append(Cone.proper(apex, d1, d2))
        ds = SeparatedConeDS(cones, sep, seed=trial)
        for _ in range(12):
            p = pt(rng.randint(1, 70), rng.randint(-70, 70))
            q = pt(rng.randint(1, 70), rng.randint(-70, 70))
            want = sum(1 for c in cones if c.intersects_segment(p, q))
            got = ds.count_meeting(p, q)
            assert got == want, (trial, got, want)


def test_separated_cone_examples():
    sep = line_through(pt(0, -10), pt(0, 10))
    wide = Cone.proper(pt(-5, 0), (2, -1), (2, 1))
    ds = SeparatedConeDS([wide] * 7, sep, seed=0)
    assert ds.count_meeting(pt(3, 0), pt(4, 0)) == 7
    assert ds.count_meeting(pt(1, 10 ** 6), pt(2, 10 ** 6)) == 0


def test_segment_stab_matches_scan():
    rng = random.Random(8)
    for trial in range(25):
        m = rng.randint(4, 96)
        lines = [rand_line(rng) for _ in range(m)]
        ds = build_segment_stab(lines, seed=trial)
        for _ in range(15):
            p = pt(rng.randint(-70, 70), rng.randint(-70, 70))
            q = pt(rng.randint(-70, 70), rng.randint(-70, 70))
            want = 0
            for ln in lines:
                v1 = line_val(ln, p)
                v2 = line_val(ln, q)
                if not (v1 > 0 and v2 > 0) and not (v1 < 0 and v2 < 0):
                    want += 1
            assert ds.count_stabbed(p, q) == want


def test_segment_stab_examples():
    lines = [line_through(pt(0, i), pt(10, i + 5)) for i in range(8)]
    ds = build_segment_stab(lines, seed=3)
    p = pt(2, 10 ** 6)
    assert ds.count_stabbed(p, p) == 0
    mid = pt(4, 4)
    through = [line_through(pt(0, 0), mid), line_through(pt(1, 0), mid),
               line_through(pt(0, 1), mid)]
    ds2 = build_segment_stab(through, seed=4)
    assert ds2.count_stabbed(pt(3, 2), pt(5, 6)) == 3


def test_visited_nodes_sublinear():
    rng = random.Random(9)
    medians = []
    for m in (512, 1024):
        lines = [rand_line(rng, span=4000) for _ in range(m)]
        t = build_lineside(lines, 1, seed=m)
        visits = []
        for _ in range(40):
            p = pt(rng.randint(-4200, 4200), rng.randint(-4200, 4200))
            t.stats.reset()
            query_lineside(t, [(p, 'below', False)])
            visits.append(t.stats.nodes)
        visits.sort()
        medians.append(visits[len(visits) // 2])
    assert medians[1] < 1.6 * medians[0], medians


def test_canonical_subsets_disjoint_and_sum():
    rng = random.Random(10)
    lines = [rand_line(rng) for _ in range(80)]
    t = build_lineside(lines, 2, seed=11)
    p = pt(3, 11)
    q = pt(-7, 2)
    out = []
    want = t.count([(p, 1, False), (q, -1, False)], collect=out)
    ids = [i for _, chunk in out for i in chunk]
    assert len(ids) == len(set(ids)) == want == sum(c for c, _ in out)
