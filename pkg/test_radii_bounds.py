#!/usr/bin/env python3
"""
Tests for k-radii, the bound reports built on them and the inequality oracles
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bodies import KEllipsoid, Subspace
from constructions import D_s, high_asym_body, mid_asym_body, outer_family, regular_body, small_asym_body
from ellipsoid_engine import john_decomposition
from errors import ContainmentViolated, DomainError, WrongDimension
from radii_bounds import (
    inner_bound_report,
    min_enclosing_ball,
    oracle_ball_lemma,
    oracle_ellip_support,
    oracle_john_vectors,
    outer_kradius,
    outer_kradius_search,
    planar_diameter_report,
    search_inner_kball,
    simplex_width,
)
from random_bodies import random_john_body


class TestEnclosingBall:
    def test_segment(self):
        ball = min_enclosing_ball([[1.0, 0.0], [-1.0, 0.0]])
        assert np.linalg.norm(ball.center) < 1e-12
        assert ball.radius == pytest.approx(1.0)
        assert ball.certified

    def test_square_with_interior_points(self):
        pts = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0], [0.2, 0.3], [0.0, 0.0]])
        ball = min_enclosing_ball(pts)
        assert ball.radius == pytest.approx(np.sqrt(2), rel=1e-9)
        assert set(ball.support) == {0, 1, 2, 3}

    def test_single_point(self):
        ball = min_enclosing_ball([[2.0, 3.0]])
        assert ball.radius == 0.0
        assert ball.center == pytest.approx([2.0, 3.0])

    def test_obtuse_triangle_uses_long_side(self):
        ball = min_enclosing_ball([[-1.0, 0.0], [1.0, 0.0], [0.0, 0.2]])
        assert ball.radius == pytest.approx(1.0, rel=1e-9)
        assert ball.center == pytest.approx([0.0, 0.0], abs=1e-9)


class TestOuterKRadius:
    def test_outer_family_equality(self):
        report = outer_kradius(outer_family(3, 0.5), Subspace.coordinate(3, [0]))
        assert report.measured >= np.sqrt(1 / 3) - 1e-9
        assert report.measured == pytest.approx(np.sqrt(1 / 3), abs=1e-7)
        assert report.passed
        assert report.equality_certificate["equality"]

    def test_cube_plane(self):
        cube = regular_body("cube", 3, "loewner")
        report = outer_kradius(cube, Subspace.coordinate(3, [0, 2]))
        assert report.measured == pytest.approx(np.sqrt(2 / 3), abs=1e-9)
        assert report.bound == pytest.approx(np.sqrt(2 / 3))

    def test_cross_polytope_strict(self):
        cross = regular_body("cross-polytope", 3, "loewner")
        report = outer_kradius(cross, Subspace.coordinate(3, [1]))
        assert report.measured == pytest.approx(1.0)
        assert report.slack > 0.4
        assert not report.equality_certificate["equality"]

    def test_even_simplex_search(self):
        simplex = regular_body("simplex", 2, "loewner")
        found = outer_kradius_search(simplex, 1, restarts=4, seed=3)
        assert found.radius == pytest.approx(0.75, abs=1e-7)
        assert simplex_width(simplex.vertices) / 2 == pytest.approx(0.75)

    def test_simplex_width_needs_simplex(self):
        with pytest.raises(WrongDimension):
            simplex_width(np.eye(3))


class TestInnerBound:
    def test_high_family_equality(self):
        K, E = high_asym_body(3, 1, 3.0)
        report = inner_bound_report(K, 3.0, E, john_decomposition(K))
        assert report.bound == pytest.approx(np.sqrt(6))
        assert report.measured == pytest.approx(np.sqrt(6))
        cert = report.equality_certificate
        assert cert["equality"]
        assert cert["contact_targets"] == pytest.approx([1.0, -1.0])

    def test_mid_family_equality(self):
        n, k, s = 4, 2, 1.6
        K, E = mid_asym_body(n, k, s)
        report = inner_bound_report(K, s, E, john_decomposition(K))
        assert report.measured == pytest.approx(np.sqrt(n * (s + 1) / (2 * k)))
        assert report.passed
        cert = report.equality_certificate
        assert cert["center_norm_sq"] == pytest.approx(n * (s - 1) / 2)
        assert cert["contact_targets"] == pytest.approx([1.0, (1 - s) / 2])
        assert cert["equality"]

    def test_small_family_within_bound(self):
        K, E = small_asym_body(3, 1, 1.4)
        report = inner_bound_report(K, 1.4, E)
        assert report.passed
        assert report.details["containment"] == "carrier-polytope"

    def test_small_ball_is_strict(self):
        cube = regular_body("cube", 3)
        E = KEllipsoid.ball(np.zeros(3), np.eye(3)[:, :2], 0.5)
        report = inner_bound_report(cube, 1.0, E)
        assert report.passed
        assert report.slack > 0.5
        assert report.equality_certificate is None
        assert report.details["symmetric_bound"] == pytest.approx(np.sqrt(1.5))

    def test_escaping_ball(self):
        cube = regular_body("cube", 3)
        E = KEllipsoid.ball(np.zeros(3), np.eye(3)[:, :1], 2.0)
        with pytest.raises(ContainmentViolated):
            inner_bound_report(cube, 1.0, E)

    def test_search_on_cube(self):
        cube = regular_body("cube", 3)
        E = search_inner_kball(cube, 1, restarts=4, seed=1)
        assert E.radius == pytest.approx(np.sqrt(3), abs=1e-3)
        assert inner_bound_report(cube, 1.0, E).passed


class TestPlanarDiameter:
    @pytest.mark.parametrize("s", [1.0, 1.4, 2.0])
    def test_small_family_equality(self, s):
        K, _ = small_asym_body(2, 1, s)
        report = planar_diameter_report(K, s)
        assert report.measured == pytest.approx(D_s(s), abs=1e-8)
        assert report.passed
        assert report.equality_certificate["equality"]

    def test_square(self):
        report = planar_diameter_report(regular_body("cube", 2))
        assert report.measured == pytest.approx(2 * np.sqrt(2))
        assert report.bound == pytest.approx(D_s(1.0))

    def test_needs_plane(self):
        with pytest.raises(WrongDimension):
            planar_diameter_report(regular_body("cube", 3))

    @settings(max_examples=8, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_random_bodies(self, seed):
        report = planar_diameter_report(random_john_body(2, complexity=4, seed=seed))
        assert report.measured <= report.bound + 1e-9


class TestEllipsoidSupport:
    def test_orthogonal_direction(self):
        E = KEllipsoid.ball([0.0, 0.0, 1.0], np.eye(3)[:, :1], 2.0)
        value, x = oracle_ellip_support(E, [0.0, 0.0, 1.0])
        assert value == pytest.approx(1.0)
        assert x == pytest.approx(E.center)

    def test_unit_disc(self):
        E = KEllipsoid.ball(np.zeros(3), np.eye(3)[:, :2], 1.0)
        value, x = oracle_ellip_support(E, [3.0, 4.0, 0.0])
        assert value == pytest.approx(5.0)
        assert x == pytest.approx([0.6, 0.8, 0.0])

    def test_matches_sampling(self):
        rng = np.random.default_rng(11)
        V = np.linalg.qr(rng.standard_normal((4, 2)))[0]
        G = rng.standard_normal((2, 2))
        E = KEllipsoid(rng.standard_normal(4), V, G @ G.T + 0.2 * np.eye(2))
        b = rng.standard_normal(4)
        value, _ = oracle_ellip_support(E, b)
        sampled = np.max(E.boundary_points(100000) @ b)
        assert sampled <= value + 1e-9
        assert sampled == pytest.approx(value, abs=1e-5)


@st.composite
def centered_points(draw):
    n = draw(st.integers(2, 5))
    m = draw(st.integers(2, 7))
    seed = draw(st.integers(0, 2**31 - 1))
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((m, n))
    U = rng.standard_normal((m, n))
    return X - X.mean(axis=0), U / np.linalg.norm(U, axis=1)[:, None]


class TestBallLemma:
    def test_zero_points(self):
        rep = oracle_ball_lemma(np.zeros((3, 2)), np.eye(2)[[0, 1, 0]])
        assert rep.lhs == 0.0 and rep.gamma == 0.0
        assert rep.holds and rep.characterization_ok

    @settings(max_examples=200, deadline=None)
    @given(centered_points())
    def test_random_inputs(self, data):
        X, U = data
        assert oracle_ball_lemma(X, U).holds

    def test_equality_instance(self):
        t = 0.6
        a = np.sqrt(1 - t * t)
        rep = oracle_ball_lemma([[1.0, 0.0], [-1.0, 0.0]], [[t, a], [-t, a]])
        assert rep.gamma == pytest.approx(4 * t * t)
        assert rep.lhs == pytest.approx(4 * t * t)
        assert rep.near_equality
        assert rep.characterization_ok

    def test_points_must_balance(self):
        with pytest.raises(DomainError):
            oracle_ball_lemma([[1.0, 0.0], [0.0, 1.0]], [[1.0, 0.0], [0.0, 1.0]])


class TestJohnVectors:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_simplex_vertices(self, n):
        S = regular_body("simplex", n)
        X = S.vertices
        rep = oracle_john_vectors(john_decomposition(S), X[0], X[1], S)
        assert rep.inner_product == pytest.approx(-n)
        assert rep.equality_iii and rep.equality_iii_ok
        assert rep.equality_i and rep.equality_i_ok
        assert rep.holds_i and rep.holds_ii and rep.holds_iii

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_cube_diagonal(self, n):
        cube = regular_body("cube", n)
        ones = np.ones(n)
        rep = oracle_john_vectors(john_decomposition(cube), ones, -ones)
        assert rep.inner_product == pytest.approx(-n)
        assert rep.equality_i and rep.equality_i_ok
        assert rep.distance == pytest.approx(2 * np.sqrt(n))
        assert not rep.equality_iii

    def test_equality_i_needs_every_contact_touched(self):
        # (2,0) and (-1,0) lie outside the square; the contacts +-e2 touch neither
        cube = regular_body("cube", 2)
        rep = oracle_john_vectors(john_decomposition(cube), [2.0, 0.0], [-1.0, 0.0])
        assert rep.equality_i
        assert not rep.equality_i_ok

    def test_same_point(self):
        cube = regular_body("cube", 3)
        x = np.array([0.5, -0.2, 1.0])
        rep = oracle_john_vectors(john_decomposition(cube), x, x)
        assert rep.holds_i and rep.distance == 0.0

    def test_point_outside(self):
        cube = regular_body("cube", 2)
        with pytest.raises(ContainmentViolated):
            oracle_john_vectors(john_decomposition(cube), [3.0, 0.0], [0.0, 0.0], cube)
