#!/usr/bin/env python3
"""
Tests for Minkowski and John asymmetry, Minkowski-center checks and the gap scan
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asymmetry import (
    asymmetry_gap_scan,
    john_asymmetry,
    minkowski_asymmetry,
    rounding_report,
    sampled_minkowski_asymmetry,
    verify_minkowski_center,
)
from bodies import VPolytope
from constructions import mid_asym_body, regular_body, rounding_body
from errors import NotInJohnPosition
from random_bodies import random_john_body


class TestMinkowski:
    @pytest.mark.parametrize("kind", ["cube", "cross-polytope"])
    def test_symmetric_bodies(self, kind):
        report = minkowski_asymmetry(regular_body(kind, 3))
        assert report.value == pytest.approx(1.0, abs=1e-9)
        assert np.linalg.norm(report.witness_center) < 1e-9

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_simplex(self, n):
        report = minkowski_asymmetry(regular_body("simplex", n))
        assert report.value == pytest.approx(float(n), abs=1e-9)
        assert report.method == "exact-LP"

    def test_translation_invariant(self):
        S = regular_body("simplex", 3)
        moved = VPolytope(S.vertices + np.array([5.0, -2.0, 1.0]))
        assert minkowski_asymmetry(moved).value == pytest.approx(3.0, abs=1e-9)

    @pytest.mark.parametrize("n,s", [(4, 3.0), (3, 2.0), (2, 1.5)])
    def test_rounding_body(self, n, s):
        report = minkowski_asymmetry(rounding_body(n, s))
        assert report.value == pytest.approx(2 * s / (s + 1), abs=1e-9)
        assert report.method == "certificate"

    def test_sampled_is_lower_bound(self):
        S = regular_body("simplex", 3)
        sampled = sampled_minkowski_asymmetry(S).value
        assert 1.0 <= sampled <= 3.0 + 1e-9


class TestJohn:
    def test_cube(self):
        assert john_asymmetry(regular_body("cube", 3)).value == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_simplex(self, n):
        assert john_asymmetry(regular_body("simplex", n)).value == pytest.approx(float(n), abs=1e-9)

    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("s", [1.5, 2.0, "n"])
    def test_rounding_body(self, n, s):
        s = float(n) if s == "n" else s
        assert john_asymmetry(rounding_body(n, s)).value == pytest.approx(s, abs=1e-6)

    def test_mid_family(self):
        K, _ = mid_asym_body(4, 2, 1.75)
        assert john_asymmetry(K).value == pytest.approx(1.75, abs=1e-7)

    def test_not_in_john_position(self):
        cube = regular_body("cube", 2)
        with pytest.raises(NotInJohnPosition):
            john_asymmetry(VPolytope(cube.vertices + 0.5))


class TestMinkowskiCenter:
    def test_rounding_center_passes(self):
        n, s = 3, 2.0
        K = rounding_body(n, s)
        v = np.eye(n)[n - 1]
        c = -np.sqrt(n * s) * (s - 1) / (3 * s + 1) * v
        check = verify_minkowski_center(K, c, 2 * s / (s + 1))
        assert check.passed
        assert check.positively_spanning

    def test_origin_fails(self):
        K = rounding_body(3, 2.0)
        check = verify_minkowski_center(K, np.zeros(3), 4 / 3)
        assert not check.passed
        assert check.max_violation > 0.1

    def test_cube_center(self):
        check = verify_minkowski_center(regular_body("cube", 3), np.zeros(3), 1.0)
        assert check.passed


class TestGapScan:
    def test_ratios(self):
        df = asymmetry_gap_scan(4, [1.0, 2.0, 4.0])
        assert df["ratio"].tolist() == pytest.approx([1.0, 1.5, 2.5], abs=1e-6)
        assert df.attrs["max_ratio"] == pytest.approx(2.5, abs=1e-6)
        assert np.all(df["s_mink_sampled"] <= df["s_mink"] + 1e-7)

    def test_three_dimensions(self):
        df = asymmetry_gap_scan(3, [2.0])
        assert df["ratio"].iloc[0] == pytest.approx(1.5, abs=1e-6)
        assert df["expected_ratio"].iloc[0] == pytest.approx(1.5)


def test_rounding_report_sandwich():
    report = rounding_report(rounding_body(3, 2.0))
    assert report.rho == pytest.approx(np.sqrt(6))
    assert report.lower == pytest.approx(2.0, abs=1e-6)
    assert report.upper == pytest.approx(np.sqrt(6), abs=1e-5)
    assert report.passed


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from([2, 3]))
def test_minkowski_below_john(seed, n):
    K = random_john_body(n, complexity=3, seed=seed)
    s = minkowski_asymmetry(K).value
    s_J = john_asymmetry(K).value
    assert 1.0 - 1e-9 <= s <= s_J + 1e-6
    assert s_J <= n + 1e-6
