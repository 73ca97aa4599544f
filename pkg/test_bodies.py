#!/usr/bin/env python3
"""
Tests for body types, representation conversion and support/gauge queries
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bodies import (
    AffineMap,
    BallHull,
    Ellipsoid,
    HPolytope,
    KEllipsoid,
    Subspace,
    VPolytope,
    circumradius,
    contains,
    diameter_pair,
    gauge,
    h_to_v,
    hausdorff_distance,
    icosphere,
    origin_is_interior,
    polar,
    project,
    support,
    support_point,
    supports,
    v_to_h,
)
from errors import DegenerateInput, DimensionTooLarge, EmptyInterior, OriginNotInterior, UnboundedBody

SQUARE = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]])


@st.composite
def unit_directions(draw, n=3):
    raw = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=n, max_size=n))
    v = np.array(raw)
    if np.linalg.norm(v) < 1e-3:
        v = np.eye(n)[0]
    return v / np.linalg.norm(v)


class TestConstruction:
    def test_vertices_deduplicated(self):
        P = VPolytope(np.vstack([SQUARE, SQUARE[:1] + 1e-14]))
        assert P.vertices.shape == (4, 2)

    def test_flat_vertex_set_rejected(self):
        with pytest.raises(DegenerateInput):
            VPolytope([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])

    def test_unbounded_hpolytope(self):
        with pytest.raises(UnboundedBody):
            HPolytope([[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0])

    def test_empty_interior(self):
        with pytest.raises(EmptyInterior):
            HPolytope([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [0.0, 0.0, 1.0, 1.0])

    def test_ballhull_drops_inner_apexes(self):
        K = BallHull(np.zeros(2), 1.0, [[0.5, 0.0], [3.0, 0.0]])
        assert K.apexes.shape == (1, 2)

    def test_singular_map_rejected(self):
        with pytest.raises(DegenerateInput):
            AffineMap([[1.0, 2.0], [2.0, 4.0]], [0.0, 0.0])


class TestConversion:
    def test_square_round_trip(self):
        P = VPolytope(SQUARE)
        H = v_to_h(P)
        assert H.A.shape[0] == 4
        V = h_to_v(HPolytope(H.A, H.b))
        assert sorted(map(tuple, np.round(V.vertices, 9))) == sorted(map(tuple, SQUARE))

    def test_cross_polytope_facets(self):
        P = VPolytope(np.vstack([np.eye(3), -np.eye(3)]))
        A, b = P.facets()
        assert A.shape[0] == 8
        assert b == pytest.approx(np.full(8, 1 / np.sqrt(3)))

    def test_enumeration_limit(self):
        n = 7
        H = HPolytope(np.vstack([np.eye(n), -np.eye(n)]), np.ones(2 * n))
        with pytest.raises(DimensionTooLarge):
            H.vertices()


class TestQueries:
    def test_support_of_square(self):
        P = VPolytope(SQUARE)
        assert support(P, [1.0, 1.0]) == pytest.approx(2.0)
        assert support_point(P, [1.0, 1.0]) == pytest.approx([1.0, 1.0])

    def test_ballhull_support_uses_apex(self):
        K = BallHull(np.zeros(2), 1.0, [[3.0, 0.0]])
        assert supports(K, [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]]) == pytest.approx([3.0, 1.0, 1.0])

    def test_zero_direction(self):
        with pytest.raises(ValueError):
            support(VPolytope(SQUARE), [0.0, 0.0])

    def test_gauge_of_square(self):
        assert gauge(VPolytope(SQUARE), [2.0, 0.5]) == pytest.approx(2.0)
        H = HPolytope([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], np.ones(4))
        assert gauge(H, [0.5, -1.5]) == pytest.approx(1.5)

    def test_gauge_off_center_ball(self):
        K = BallHull([0.5, 0.0], 1.0)
        assert gauge(K, [1.5, 0.0]) == pytest.approx(1.0)
        assert gauge(K, [-0.5, 0.0]) == pytest.approx(1.0)

    def test_gauge_of_ballhull_apex(self):
        K = BallHull(np.zeros(2), 1.0, [[3.0, 0.0]])
        assert gauge(K, [3.0, 0.0]) == pytest.approx(1.0, abs=1e-6)
        assert gauge(K, [0.0, 2.0]) == pytest.approx(2.0, abs=1e-5)

    def test_gauge_needs_interior_origin(self):
        with pytest.raises(OriginNotInterior):
            gauge(VPolytope(SQUARE + 2.0), [1.0, 0.0])

    def test_contains(self):
        K = BallHull(np.zeros(2), 1.0, [[3.0, 0.0]])
        assert contains(K, [2.0, 0.0])
        assert contains(K, [0.0, -1.0])
        assert not contains(K, [0.0, 1.2])
        assert origin_is_interior(K)

    def test_polar_of_square_is_cross(self):
        Q = polar(VPolytope(SQUARE))
        assert sorted(map(tuple, np.round(Q.vertices(), 9))) == [(-1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (1.0, 0.0)]

    def test_projection_of_cube(self):
        cube = VPolytope(np.array(np.meshgrid([-1, 1], [-1, 1], [-1, 1])).reshape(3, -1).T)
        shadow = project(cube, Subspace.coordinate(3, [0, 1]))
        assert shadow.vertices.shape == (4, 2)
        segment = project(cube, Subspace(np.ones(3) / np.sqrt(3)))
        assert segment.vertices[:, 0] == pytest.approx([-np.sqrt(3), np.sqrt(3)])

    def test_circumradius_and_diameter(self):
        K = BallHull(np.zeros(2), 1.0, [[3.0, 0.0]])
        assert circumradius(K) == pytest.approx(3.0)
        D, x, y = diameter_pair(K)
        assert D == pytest.approx(4.0)
        assert np.linalg.norm(x - y) == pytest.approx(4.0)
        assert diameter_pair(VPolytope(SQUARE))[0] == pytest.approx(2 * np.sqrt(2))

    def test_hausdorff_of_nested_squares(self):
        assert hausdorff_distance(VPolytope(SQUARE), VPolytope(2 * SQUARE)) == pytest.approx(np.sqrt(2), rel=1e-4)


class TestValueTypes:
    def test_ellipsoid_unit_ball_map(self):
        E = Ellipsoid([1.0, 2.0], np.diag([1 / 4.0, 1.0]))
        T = E.to_unit_ball_map()
        assert np.linalg.norm(T([3.0, 2.0])) == pytest.approx(1.0)
        assert E.volume_ratio() == pytest.approx(2.0)
        assert E.contains([[1.0, 2.9]])[0]

    def test_kellipsoid_ball(self):
        E = KEllipsoid.ball(np.zeros(3), np.eye(3)[:, :2], 2.0)
        assert E.k == 2
        assert E.is_ball
        assert E.radius == pytest.approx(2.0)
        pts = E.boundary_points(50)
        assert np.linalg.norm(pts, axis=1) == pytest.approx(np.full(50, 2.0))
        assert pts[:, 2] == pytest.approx(np.zeros(50))

    def test_nonorthonormal_carrier(self):
        with pytest.raises(DegenerateInput):
            KEllipsoid(np.zeros(2), [[1.0], [1.0]], [[1.0]])

    def test_subspace_complement(self):
        F = Subspace.coordinate(3, [0])
        G = F.complement()
        assert G.k == 2
        assert np.abs(F.basis.T @ G.basis).max() < 1e-12

    def test_affine_compose_inverse(self):
        T = AffineMap([[2.0, 1.0], [0.0, 1.0]], [1.0, -1.0])
        I = T.compose(T.inverse())
        assert I.linear == pytest.approx(np.eye(2))
        assert I.translation == pytest.approx(np.zeros(2), abs=1e-12)

    def test_icosphere_is_unit(self):
        pts = icosphere(2)
        assert len(pts) == 162
        assert np.linalg.norm(pts, axis=1) == pytest.approx(np.ones(162))


@settings(max_examples=40, deadline=None)
@given(unit_directions())
def test_hpolytope_support_matches_vertices(a):
    cube = HPolytope(np.vstack([np.eye(3), -np.eye(3)]), np.ones(6))
    lp_value = supports(HPolytope(cube.A, cube.b), a[None, :])[0]
    assert lp_value == pytest.approx(np.abs(a).sum(), abs=1e-8)
    assert support(h_to_v(cube), a) == pytest.approx(lp_value, abs=1e-8)
