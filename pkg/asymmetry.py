#!/usr/bin/env python3
"""
Minkowski asymmetry s(K), John asymmetry s_J(K), Minkowski-center
certificates and the s_J / s gap scan over the rounding family.
"""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

import config
from bodies import (
    BallHull,
    VPolytope,
    circumradius,
    facet_form,
    gauge,
    solve_lp,
    sphere_directions,
    supports,
)
from constructions import rounding_body
from ellipsoid_engine import john_decomposition, john_verify
from errors import DimensionTooLarge, GeometryError, NotInJohnPosition, RepresentationUnavailable

log = config.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class AsymmetryReport:
    value: float
    witness_center: np.ndarray
    binding_directions: np.ndarray
    method: str
    details: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class MinkowskiCheck:
    passed: bool
    max_violation: float
    equality_directions: np.ndarray
    positively_spanning: bool


@dataclass(frozen=True)
class RoundingReport:
    rho: float
    s_J: float
    lower: float
    upper: float
    passed: bool


def _sweep(n):
    if n <= 3:
        return sphere_directions(n)
    return np.zeros((0, n))


def _certificate_directions(body):
    cert = body.certificate
    if cert is None:
        return np.zeros((0, body.dim))
    dirs = []
    if cert.contacts is not None:
        dirs += [cert.contacts, -cert.contacts]
    if cert.minkowski_directions is not None:
        dirs += [cert.minkowski_directions, -cert.minkowski_directions]
    return np.vstack(dirs) if dirs else np.zeros((0, body.dim))


def minkowski_asymmetry(K):
    """s(K) = min rho with K - c inside rho (c - K) for some c"""
    if isinstance(K, BallHull):
        cert = K.certificate
        if cert is not None and cert.minkowski_value is not None:
            check = verify_minkowski_center(K, cert.minkowski_center, cert.minkowski_value)
            if check.passed:
                return AsymmetryReport(float(cert.minkowski_value), np.array(cert.minkowski_center),
                                       check.equality_directions, "certificate",
                                       {"max_violation": check.max_violation})
            log.warning("attached Minkowski certificate failed (violation %.2e)", check.max_violation)
        return sampled_minkowski_asymmetry(K)
    try:
        A, b = facet_form(K)
        h_neg = supports(K, -A)
    except DimensionTooLarge as e:
        raise RepresentationUnavailable(str(e)) from e
    n = K.dim
    # -K + c inside rho K, one inequality per facet of K
    cost = np.zeros(n + 1)
    cost[-1] = 1.0
    res = solve_lp(cost, A_ub=np.hstack([A, -b[:, None]]), b_ub=-h_neg,
                   bounds=[(None, None)] * n + [(0, None)])
    c, rho = res.x[:n], float(res.x[-1])
    slack = -h_neg - (A @ c - rho * b)
    return AsymmetryReport(rho, c / (1 + rho), A[slack <= 1e-9], "exact-LP")


def sampled_minkowski_asymmetry(K, directions=None):
    """Lower bound on s(K) from the containment restricted to finitely many directions"""
    n = K.dim
    D = sphere_directions(n) if directions is None else np.asarray(directions, float)
    D = np.vstack([D, _certificate_directions(K)])
    h_pos, h_neg = supports(K, D), supports(K, -D)
    cost = np.zeros(n + 1)
    cost[-1] = 1.0
    res = solve_lp(cost, A_ub=np.hstack([D, -h_pos[:, None]]), b_ub=-h_neg,
                   bounds=[(None, None)] * n + [(0, None)])
    c, rho = res.x[:n], float(res.x[-1])
    slack = -h_neg - (D @ c - rho * h_pos)
    return AsymmetryReport(rho, c / (1 + rho), D[slack <= 1e-9], "sampled-lower-bound",
                           {"directions": int(D.shape[0])})


def john_asymmetry(K):
    """s_J(K) for K in John position: min rho with K inside rho(-K)"""
    decomp = john_decomposition(K)
    report = john_verify(decomp, K)
    if not report.passed:
        raise NotInJohnPosition(f"John certificate residuals too large: {report}")
    n = K.dim
    origin = np.zeros(n)
    if isinstance(K, BallHull):
        dirs = np.vstack([decomp.contacts, -decomp.contacts, _certificate_directions(K)])
        ratios = supports(K, dirs) / supports(K, -dirs)
        value = float(np.max(ratios))
        binding = dirs[ratios >= value - 1e-9]
        details = {"certificate_value": value}
        if np.linalg.norm(K.center) <= 1e-12 and K.apexes.shape[0]:
            apex_value = max(1.0, max(gauge(K, -p) for p in K.apexes))
            details["apex_gauge_value"] = apex_value
            if apex_value > value + 1e-7:
                log.warning("apex gauges exceed the certificate ratio (%.9g > %.9g)", apex_value, value)
                value = apex_value
        sweep = _sweep(n)
        method = "certificate"
        if sweep.shape[0]:
            details["sweep_value"] = float(np.max(supports(K, sweep) / supports(K, -sweep)))
        else:
            method = "certificate-only"
        return AsymmetryReport(value, origin, binding, method, details)
    A, b = facet_form(K)
    if isinstance(K, VPolytope):
        # gauge of -v for every vertex, read off the facet form
        table = (-K.vertices @ A.T) / b
        value = float(np.max(table))
        rows = np.unique(np.argwhere(table >= value - 1e-9)[:, 1])
    else:
        table = supports(K, -A) / b
        value = float(np.max(table))
        rows = np.flatnonzero(table >= value - 1e-9)
    return AsymmetryReport(value, origin, A[rows], "exact-LP")


def _positively_spanning(directions, eps=1e-6):
    """Origin interior to conv(directions): every +-eps e_j lies in the hull"""
    m, n = directions.shape
    if m < n + 1:
        return False
    A_eq = np.vstack([directions.T, np.ones((1, m))])
    for j in range(n):
        for sign in (1.0, -1.0):
            target = np.zeros(n + 1)
            target[j] = sign * eps
            target[-1] = 1.0
            try:
                solve_lp(np.zeros(m), A_eq=A_eq, b_eq=target, bounds=(0, None))
            except GeometryError:
                return False
    return True


def verify_minkowski_center(K, c, s, directions=None, tol=1e-9):
    """h_{K-c}(a) <= s h_{K-c}(-a) on the sample, equality directions spanning"""
    n = K.dim
    c = np.asarray(c, float)
    D = sphere_directions(n) if directions is None else np.asarray(directions, float)
    D = np.vstack([D, _certificate_directions(K)])
    D = D / np.linalg.norm(D, axis=1)[:, None]
    h_pos = supports(K, D) - D @ c
    h_neg = supports(K, -D) + D @ c
    violation = h_pos - s * h_neg
    worst = float(np.max(violation))
    equal = D[violation >= -1e-7]
    spanning = _positively_spanning(equal) if equal.shape[0] else False
    return MinkowskiCheck(worst <= tol and spanning, worst, equal, spanning)


def rounding_report(K, s_J=None):
    """Smallest rho with K in rho B^n against [s_J, sqrt(n s_J)]"""
    if s_J is None:
        s_J = john_asymmetry(K).value
    rho = circumradius(K)
    lower, upper = s_J, np.sqrt(K.dim * s_J)
    return RoundingReport(rho, s_J, lower, upper,
                          lower - config.BOUND_TOL <= rho <= upper + config.BOUND_TOL)


def asymmetry_gap_scan(n, s_grid):
    """s_J / s(K) across the rounding family"""
    if n > config.MAX_ENUM_DIM:
        raise RepresentationUnavailable(f"gap scan limited to n <= {config.MAX_ENUM_DIM}")
    rows = []
    for s in s_grid:
        K = rounding_body(n, float(s))
        s_j = john_asymmetry(K).value
        mink = minkowski_asymmetry(K)
        sampled = sampled_minkowski_asymmetry(K).value
        rows.append({
            "n": n, "s": float(s), "s_J": s_j, "s_mink": mink.value,
            "s_mink_sampled": sampled, "method": mink.method,
            "ratio": s_j / mink.value, "expected_ratio": (float(s) + 1) / 2,
        })
    df = pd.DataFrame(rows)
    df.attrs["max_ratio"] = float(df["ratio"].max()) if len(df) else float("nan")
    return df
