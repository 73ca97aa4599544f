#!/usr/bin/env python3
"""
Tests for the extremal constructions and the scalar functions they use
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asymmetry import john_asymmetry
from bodies import circumradius, diameter_pair, hausdorff_distance, vertex_form
from constructions import (
    D_s,
    aligned_regulars,
    asym_body,
    construct,
    construction_polytope,
    f_s,
    high_asym_body,
    mid_asym_body,
    mu,
    outer_family,
    regular_body,
    rounding_body,
    s_threshold,
    small_asym_body,
    spike_body,
    tau,
    xi_star,
    zeta,
)
from ellipsoid_engine import mvee
from errors import DomainError, ParameterOutOfRange


class TestRegularBodies:
    def test_cube_john(self):
        V = regular_body("cube", 3).vertices
        assert np.abs(V) == pytest.approx(np.ones((8, 3)))

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_simplex_john(self, n):
        X = regular_body("simplex", n).vertices
        G = X @ X.T
        assert np.diag(G) == pytest.approx(np.full(n + 1, n * n))
        off = G[~np.eye(n + 1, dtype=bool)]
        assert off == pytest.approx(np.full(off.size, -n))

    def test_cross_loewner(self):
        V = regular_body("cross-polytope", 3, "loewner").vertices
        assert sorted(map(tuple, V)) == sorted(map(tuple, np.vstack([np.eye(3), -np.eye(3)])))

    def test_unknown_kind(self):
        with pytest.raises(ParameterOutOfRange):
            regular_body("dodecahedron", 3)


class TestOuterFamily:
    def test_endpoints(self):
        n = 3
        assert outer_family(n, 0.0).vertices.shape[0] == 2 * n
        assert outer_family(n, 1.0).vertices.shape[0] == 2 ** n
        assert outer_family(n, 2.0).vertices.shape[0] == n + 1

    @pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 1.5, 2.0])
    def test_loewner_ball(self, t):
        body = outer_family(3, t)
        assert circumradius(body) == pytest.approx(1.0)
        E = mvee(body.vertices)
        assert E.semiaxes == pytest.approx(np.ones(3), abs=1e-6)

    def test_continuity(self):
        ts = np.linspace(0.0, 2.0 - 1e-3, 21)
        gaps = [hausdorff_distance(outer_family(3, t), outer_family(3, t + 1e-3)) for t in ts]
        assert max(gaps) <= 4e-3

    def test_even_simplex_unavailable(self):
        with pytest.raises(ParameterOutOfRange):
            outer_family(4, 1.5, k=1)
        aligned_regulars(4, 2)

    def test_out_of_range(self):
        with pytest.raises(ParameterOutOfRange):
            outer_family(3, 2.5)


class TestConstructionPolytope:
    def test_tau_one(self):
        n = 3
        P = construction_polytope(range(n - 1), 1.0, n)
        U, w = P.certificate.contacts, P.certificate.weights
        assert np.linalg.norm(w @ U) < 1e-12
        assert np.einsum("i,ij,ik->jk", w, U, U) == pytest.approx(np.eye(n), abs=1e-12)

    def test_unit_contacts(self):
        P = construction_polytope([1], 0.8, 3)
        assert np.linalg.norm(P.certificate.contacts, axis=1) == pytest.approx(
            np.ones(P.certificate.contacts.shape[0]), abs=1e-12)

    def test_tau_below_range(self):
        with pytest.raises(ParameterOutOfRange):
            construction_polytope([0], 0.1, 3)


class TestAsymmetricFamilies:
    @pytest.mark.parametrize("n,k", [(3, 1), (4, 2)])
    def test_high_at_n(self, n, k):
        K, E = high_asym_body(n, k, float(n))
        assert E.radius == pytest.approx(np.sqrt(n * (n + 1) / (k * (k + 1))))

    def test_high_touches_at_threshold(self):
        n, k = 3, 1
        s = s_threshold(n, k)
        K, E = high_asym_body(n, k, s)
        A, b = K.facets()
        reach = A @ E.center + np.abs(A @ E.basis[:, 0]) * E.semiaxes[0]
        assert np.max(reach - b) == pytest.approx(0.0, abs=1e-9)
        assert np.sum(np.abs(reach - b)[n + 1:] <= 1e-9) >= 1

    @pytest.mark.parametrize("s", [2.5, 3.0])
    def test_high_john_asymmetry(self, s):
        K, _ = high_asym_body(3, 2, s)
        assert john_asymmetry(K).value == pytest.approx(s, abs=1e-7)

    def test_mid_radius(self):
        _, E = mid_asym_body(4, 2, 1.5)
        assert E.radius == pytest.approx(np.sqrt(2.5))
        assert E.center @ E.center == pytest.approx(1.0)

    def test_mid_john_asymmetry(self):
        K, _ = mid_asym_body(3, 1, 1.8)
        assert john_asymmetry(K).value == pytest.approx(1.8, abs=1e-7)

    @pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (4, 3)])
    def test_small_endpoints(self, n, k):
        K, E = small_asym_body(n, k, 1.0)
        assert np.linalg.norm(E.center) == pytest.approx(0.0, abs=1e-12)
        assert E.radius == pytest.approx(np.sqrt(n / k))
        K, E = small_asym_body(n, k, 1 + 2 / n)
        assert mu(n, k, 1 + 2 / n) == pytest.approx(n + 1, abs=1e-12)
        assert E.radius * np.sqrt(k) == pytest.approx(np.sqrt(n + 1))

    @pytest.mark.parametrize("s", [1.0, 1.3, 1.7, 2.0])
    def test_planar_diameter(self, s):
        K, _ = small_asym_body(2, 1, s)
        assert diameter_pair(K)[0] == pytest.approx(D_s(s), abs=1e-8)

    def test_dispatch(self):
        assert asym_body(3, 1, 1.2)[0].certificate.params["family"] == "small-asym"
        assert asym_body(3, 1, 1 + 2 / 3)[0].certificate.params["family"] == "small-asym"
        assert asym_body(3, 2, 2.5)[0].certificate.params["family"] == "high-asym"
        assert asym_body(3, 1, 2.5)[0].certificate.params["family"] == "mid-asym"
        assert asym_body(4, 1, 2.0)[0].certificate.params["family"] == "mid-asym"


class TestRoundingAndSpike:
    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("s", [1.0, 1.5, 2.0])
    def test_farthest_point(self, n, s):
        assert circumradius(rounding_body(n, s)) == pytest.approx(np.sqrt(n * s), abs=1e-8)

    def test_symmetric_spindle(self):
        K = rounding_body(3, 1.0)
        assert sorted(K.apexes[:, 2]) == pytest.approx([-np.sqrt(3), np.sqrt(3)])

    def test_apex_at_n(self):
        assert circumradius(rounding_body(3, 3.0)) == pytest.approx(3.0)

    def test_spike(self):
        K = spike_body(3, 2.0)
        assert circumradius(K) == pytest.approx(2.0)
        assert john_asymmetry(K).value == pytest.approx(2.0, abs=1e-7)


class TestScalars:
    def test_D_s_endpoints(self):
        assert D_s(1.0) == pytest.approx(np.sqrt(8))
        assert D_s(2.0) == pytest.approx(np.sqrt(12))

    @pytest.mark.parametrize("s", [1.2, 1.5, 1.9])
    def test_f_at_xi_star(self, s):
        assert f_s(s, xi_star(s)) == pytest.approx(D_s(s) ** 2 - 5, abs=1e-10)

    def test_domains(self):
        with pytest.raises(DomainError):
            D_s(2.5)
        with pytest.raises(DomainError):
            f_s(1.5, 1.2)
        with pytest.raises(DomainError):
            zeta(3, 1, 2.0)

    @pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (3, 2), (5, 2)])
    def test_tau_endpoints(self, n, k):
        assert tau(n, k, n) == pytest.approx(np.sqrt((n - k) / n), abs=1e-12)
        assert tau(n, k, n + 1) == pytest.approx(1.0, abs=1e-12)
        assert mu(n, k, 1.0) == pytest.approx(n, abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1),
                                                          st.floats(0, 1))))
    def test_tau_identity(self, params):
        n, k, frac = params
        s = 1 + frac * 2 / n
        m = mu(n, k, s)
        assert (s - 1) * tau(n, k, m) == pytest.approx(2 / n * np.sqrt(max(m - n, 0.0)), abs=1e-10)

    @pytest.mark.parametrize("n,k", [(3, 1), (4, 2)])
    def test_mu_increasing(self, n, k):
        values = [mu(n, k, s) for s in np.linspace(1, 1 + 2 / n, 200)]
        assert np.all(np.diff(values) > 0)


def test_construct_entry_point():
    body = construct("construction-polytope", 3, tau_value=0.9, J=(0,))
    assert body.certificate.params["tau"] == pytest.approx(0.9)
    assert vertex_form(construct("cube", 2)).shape == (4, 2)
    with pytest.raises(ParameterOutOfRange):
        construct("torus", 3)
