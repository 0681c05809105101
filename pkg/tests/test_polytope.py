from fractions import Fraction as F

from shadow_obstruct.polytope import (
    extreme_points,
    in_convex_hull,
    lattice_points_in_half_hull,
    lattice_points_in_hull,
)


def test_hull_membership_basics():
    tri = [(0, 0), (2, 0), (0, 2)]
    assert in_convex_hull((1, 1), tri)       # edge midpoint
    assert in_convex_hull((0, 0), tri)       # vertex
    assert in_convex_hull((F(1, 2), F(1, 2)), tri)
    assert not in_convex_hull((2, 2), tri)
    assert not in_convex_hull((-1, 0), tri)


def test_segment_lattice_points():
    seg = [(0,), (2,)]
    assert lattice_points_in_hull(seg) == [(0,), (1,), (2,)]
    assert lattice_points_in_half_hull(seg) == [(0,), (1,)]


def test_half_hull_excludes_origin_for_offset_segment():
    # half of conv{(2,0),(0,2)} is the segment from (1,0) to (0,1)
    assert lattice_points_in_half_hull([(2, 0), (0, 2)]) == [(0, 1), (1, 0)]


def test_motzkin_half_hull():
    support = [(0, 0, 6), (2, 2, 2), (2, 4, 0), (4, 2, 0)]
    t2 = lattice_points_in_half_hull(support)
    assert set(t2) == {(0, 0, 3), (1, 1, 1), (1, 2, 0), (2, 1, 0)}


def test_extreme_points_of_degree_two_simplex():
    pts = []
    for i in range(5):
        for j in range(i, 5):
            e = [0] * 5
            e[i] += 1
            e[j] += 1
            pts.append(tuple(e))
    verts = extreme_points(pts)
    expected = set()
    for i in range(5):
        e = [0] * 5
        e[i] = 2
        expected.add(tuple(e))
    assert set(verts) == expected


def test_odd_total_degree_has_empty_half_hull():
    assert lattice_points_in_half_hull([(1, 0), (0, 1)]) == []
