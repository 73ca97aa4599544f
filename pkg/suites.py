#!/usr/bin/env python3
"""
Verification suites: each suite expands a SuiteConfig into independent
cases, runs them in a thread pool and returns flat report rows.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

import config
from affine_ratios import (
    dr_corollary_bounds,
    general_lower_bound,
    grunbaum_upper_bound,
    jung_bound,
    maximize_wR_affine,
    minimize_Dr_affine,
    radial_profile,
    shear_inflation_report,
    wr_corollary_bounds,
)
from asymmetry import (
    asymmetry_gap_scan,
    john_asymmetry,
    minkowski_asymmetry,
    rounding_report,
)
from bodies import BallHull, KEllipsoid, Subspace, VPolytope, circumradius, hausdorff_distance, vertex_form
from constructions import (
    D_s,
    asym_body,
    construction_polytope,
    f_s,
    mid_asym_body,
    mu,
    outer_family,
    regular_body,
    rounding_body,
    s_threshold,
    small_asym_body,
    spike_body,
    tau,
    tau_lower,
    xi_star,
)
from ellipsoid_engine import john_decomposition, john_verify, normalize_loewner
from errors import GeometryError, ParameterOutOfRange
from radii_bounds import (
    inner_bound_report,
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

log = config.get_logger(__name__)

SUITES = ("john-identities", "outer-bound", "inner-bound", "planar-diameter",
          "scalar-lemmas", "rounding", "affine-ratios", "oracles")
BODY_SUITES = ("john-identities", "planar-diameter")
OUTER_T_COUNT = 50


@dataclass(frozen=True)
class SuiteConfig:
    name: str
    n_range: tuple = (2, 3, 4)
    k_range: Optional[tuple] = None
    s_grid: Optional[tuple] = None
    samples: int = 20
    seed: int = config.DEFAULT_SEED
    tolerance: float = config.BOUND_TOL
    output: Optional[str] = None
    restarts: int = 6
    bodies: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.name not in SUITES:
            raise ParameterOutOfRange(f"unknown suite {self.name!r}; choose from {', '.join(SUITES)}")
        if self.samples < 0:
            raise ParameterOutOfRange("samples must be nonnegative")
        if self.bodies and self.name not in BODY_SUITES:
            raise ParameterOutOfRange(f"input bodies are only read by {', '.join(BODY_SUITES)}")

    def ks(self, n):
        pool = range(1, n) if self.k_range is None else self.k_range
        return [k for k in pool if 1 <= k <= n - 1]


@dataclass(frozen=True)
class Case:
    label: str
    run: object
    seed: int


# === Step 1: row helpers ===
def _row(cfg, case, quantity, measured, bound, side="upper", tol=None, method="",
         n=None, k=None, s=None, t=None):
    tol = cfg.tolerance if tol is None else tol
    if side == "upper":
        slack = bound - measured
    elif side == "lower":
        slack = measured - bound
    else:
        slack = -abs(measured - bound)
    return {"suite": cfg.name, "case_id": case.label, "n": n, "k": k, "s": s, "t": t,
            "quantity": quantity, "measured": float(measured), "bound": float(bound),
            "slack": float(slack), "pass": bool(slack >= -tol), "method": method, "seed": case.seed}


def _flag(cfg, case, quantity, ok, method="", **params):
    """Boolean check as a row: measured 1 for pass, bound 1"""
    return _row(cfg, case, quantity, 1.0 if ok else 0.0, 1.0, "lower", 0.0, method, **params)


def _not_applicable(cfg, case, quantity, reason, n=None, k=None, s=None, t=None):
    """Placeholder row for a grid point whose body does not exist; counts as passed"""
    return {"suite": cfg.name, "case_id": case.label, "n": n, "k": k, "s": s, "t": t,
            "quantity": quantity, "measured": float("nan"), "bound": float("nan"),
            "slack": float("nan"), "pass": True, "method": f"not-applicable: {reason}", "seed": case.seed}


def _seeds(seed, count):
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(count)]


def _grid(lo, hi, count):
    return [float(x) for x in np.linspace(lo, hi, count)]


# === Step 2: suites ===
def _john_identity_cases(cfg):
    def check(body, **params):
        def run(case):
            decomp = john_decomposition(body)
            report = john_verify(decomp, body)
            worst = max(report.sum_residual, report.identity_residual, report.support_residual,
                        report.norm_residual, report.trace_residual)
            return [_row(cfg, case, "john_residual", worst, config.JOHN_RESIDUAL_TOL, "upper", 0.0,
                         "certificate" if body.certificate is not None else "facets", **params)]
        return run

    def lazy(factory, **params):
        def run(case):
            return check(factory(), **params)(case)
        return run

    cases = []
    for i, body in enumerate(cfg.bodies):
        cases.append(Case(f"input-{i:03d}", check(body, n=body.dim), cfg.seed))
    if cfg.bodies:
        return cases
    for n in cfg.n_range:
        for kind in ("simplex", "cube", "cross-polytope"):
            cases.append(Case(f"n{n}-{kind}", lazy(lambda kind=kind, n=n: regular_body(kind, n)), cfg.seed))
        for size in range(n):
            J = tuple(range(size))
            for tv in _grid(tau_lower(size, n), 1.0, 5):
                cases.append(Case(f"n{n}-P-{size}-{tv:.6f}",
                                  lazy(lambda J=J, tv=tv, n=n: construction_polytope(J, tv, n), n=n), cfg.seed))
        for k in cfg.ks(n):
            for s in (cfg.s_grid or _grid(1.0, n, 9)):
                if 1 <= s <= n:
                    cases.append(Case(f"n{n}-k{k}-asym-{s:.6f}",
                                      lazy(lambda n=n, k=k, s=s: asym_body(n, k, s)[0], n=n, k=k, s=s),
                                      cfg.seed))
        for s in _grid(1.0, n, 5):
            cases.append(Case(f"n{n}-rounding-{s:.6f}", lazy(lambda n=n, s=s: rounding_body(n, s), n=n, s=s), cfg.seed))
            cases.append(Case(f"n{n}-spike-{s:.6f}", lazy(lambda n=n, s=s: spike_body(n, s), n=n, s=s), cfg.seed))
        for j, seed in enumerate(_seeds(cfg.seed + n, cfg.samples)):
            gen = ("vpolytope", "construction")[j % 2]
            cases.append(Case(f"n{n}-random-{j:04d}",
                              lazy(lambda n=n, seed=seed, gen=gen: random_john_body(n, 3, seed, gen), n=n), seed))
    return cases


def _outer_bound_cases(cfg):
    cases = []
    for n in cfg.n_range:
        for k in cfg.ks(n):
            F = Subspace.coordinate(n, range(k))
            for t in _grid(0.0, 2.0, OUTER_T_COUNT):
                def run(case, n=n, k=k, t=t, F=F):
                    try:
                        body = outer_family(n, t, k)
                    except ParameterOutOfRange as e:
                        reason = "even n, t>1" if n % 2 == 0 and t > 1 else str(e)
                        return [_not_applicable(cfg, case, "outer_kradius", reason, n=n, k=k, t=t)]
                    report = outer_kradius(body, F)
                    return [_row(cfg, case, "outer_kradius", report.measured, report.bound, "equal", 1e-6,
                                 report.method, n=n, k=k, t=t)]
                cases.append(Case(f"n{n}-k{k}-t{t:.6f}", run, cfg.seed))
        if n % 2 == 0:
            simplex = regular_body("simplex", n, "loewner")
            targets = {1: (n + 1) / (n * np.sqrt(n + 2)), n - 1: (2 * n - 1) / (2 * n)}
            for k, value in targets.items():
                def run(case, n=n, k=k, value=value, simplex=simplex):
                    found = outer_kradius_search(simplex, k, restarts=max(cfg.restarts, 10), seed=case.seed)
                    rows = [_row(cfg, case, "simplex_kradius", found.radius, value, "equal", 1e-6,
                                 found.method, n=n, k=k)]
                    if k == 1:
                        rows.append(_row(cfg, case, "simplex_half_width", simplex_width(simplex.vertices) / 2,
                                         value, "equal", 1e-9, "partitions", n=n, k=k))
                    return rows
                cases.append(Case(f"n{n}-k{k}-simplex", run, cfg.seed))
        for j, seed in enumerate(_seeds(cfg.seed + 100 + n, cfg.samples)):
            def run(case, n=n):
                rng = np.random.default_rng(case.seed)
                body, _ = normalize_loewner(VPolytope(rng.standard_normal((n + 4, n))))
                rows = []
                for k in cfg.ks(n):
                    F = Subspace(np.linalg.qr(rng.standard_normal((n, k)))[0])
                    report = outer_kradius(body, F)
                    rows.append(_row(cfg, case, "outer_kradius", report.measured, report.bound, "lower",
                                     method=report.method, n=n, k=k))
                return rows
            cases.append(Case(f"n{n}-random-{j:04d}", run, seed))
    return cases


def _inner_bound_cases(cfg):
    cases = []
    for n in cfg.n_range:
        for k in cfg.ks(n):
            grid = cfg.s_grid or sorted(set(_grid(1.0, 1 + 2 / n, 3) + _grid(1 + 2 / n, s_threshold(n, k), 3)
                                            + _grid(s_threshold(n, k), n, 3)))
            for s in grid:
                if not 1 <= s <= n:
                    continue

                def run(case, n=n, k=k, s=s):
                    K, E = asym_body(n, k, s)
                    s_J = john_asymmetry(K).value
                    report = inner_bound_report(K, s_J, E, john_decomposition(K))
                    tight = not (1 + 1e-9 < s < 1 + 2 / n - 1e-9)
                    rows = [_row(cfg, case, "inner_kball_radius", report.measured, report.bound,
                                 "equal" if tight else "upper", 1e-7 if tight else None,
                                 report.method, n=n, k=k, s=s)]
                    if tight:
                        cert = report.equality_certificate or {}
                        rows.append(_flag(cfg, case, "inner_equality_certificate", cert.get("equality", False),
                                          report.method, n=n, k=k, s=s))
                    return rows
                cases.append(Case(f"n{n}-k{k}-s{s:.6f}", run, cfg.seed))

            def seam(case, n=n, k=k):
                s = 1 + 2 / n
                gap = hausdorff_distance(small_asym_body(n, k, s)[0], mid_asym_body(n, k, s)[0])
                return [_row(cfg, case, "small_mid_hausdorff", gap, 0.0, "upper", 1e-9, "support", n=n, k=k, s=s)]
            cases.append(Case(f"n{n}-k{k}-seam", seam, cfg.seed))
        for j, seed in enumerate(_seeds(cfg.seed + 200 + n, cfg.samples)):
            def run(case, n=n, j=j):
                gen = ("vpolytope", "construction")[j % 2]
                K = random_john_body(n, 3, case.seed, gen)
                s_J = john_asymmetry(K).value
                rows = []
                for k in cfg.ks(n):
                    E = search_inner_kball(K, k, restarts=cfg.restarts, seed=case.seed)
                    report = inner_bound_report(K, s_J, E)
                    rows.append(_row(cfg, case, "inner_kball_radius", report.measured, report.bound,
                                     method=report.method, n=n, k=k, s=s_J))
                return rows
            cases.append(Case(f"n{n}-random-{j:04d}", run, seed))
    return cases


def _planar_cases(cfg):
    cases = []

    def check(body, s=None, tight=False):
        def run(case):
            report = planar_diameter_report(body)
            rows = [_row(cfg, case, "diameter", report.measured, report.bound,
                         "equal" if tight else "upper", 1e-8, report.method, n=2, k=1,
                         s=report.details["s_J"] if s is None else s)]
            if tight:
                cert = report.equality_certificate or {}
                rows.append(_flag(cfg, case, "diameter_equality_certificate", cert.get("equality", False),
                                  report.method, n=2, s=s))
            return rows
        return run

    for i, body in enumerate(cfg.bodies):
        cases.append(Case(f"input-{i:03d}", check(body), cfg.seed))
    if cfg.bodies:
        return cases
    for s in (cfg.s_grid or _grid(1.0, 2.0, 21)):
        cases.append(Case(f"small-{s:.6f}", check(small_asym_body(2, 1, s)[0], s, True), cfg.seed))
    for j, seed in enumerate(_seeds(cfg.seed + 300, cfg.samples)):
        def run(case, j=j):
            K = random_john_body(2, 2 + j % 5, case.seed, ("vpolytope", "construction")[j % 2])
            return check(K)(case)
        cases.append(Case(f"random-{j:04d}", run, seed))
    return cases


def _scalar_cases(cfg):
    cases = []
    for n in cfg.n_range:
        for k in cfg.ks(n):
            def run(case, n=n, k=k):
                rows = [
                    _row(cfg, case, "mu_at_1", mu(n, k, 1.0), n, "equal", 1e-12, n=n, k=k, s=1.0),
                    _row(cfg, case, "mu_at_1+2/n", mu(n, k, 1 + 2 / n), n + 1, "equal", 1e-12, n=n, k=k),
                    _row(cfg, case, "tau_at_n", tau(n, k, n), np.sqrt((n - k) / n), "equal", 1e-12, n=n, k=k),
                    _row(cfg, case, "tau_at_n+1", tau(n, k, n + 1), 1.0, "equal", 1e-12, n=n, k=k),
                ]
                grid = _grid(1.0, 1 + 2 / n, 1000)
                values = np.array([mu(n, k, s) for s in grid])
                rows.append(_flag(cfg, case, "mu_increasing", bool(np.all(np.diff(values) > 0)), n=n, k=k))
                root_res, other_max, ident = 0.0, -np.inf, 0.0
                for s, m in zip(grid, values):
                    t = tau(n, k, m)
                    e = np.sqrt(max(m - n, 0.0))
                    root_res = max(root_res, abs((t * e - 1) ** 2 - m * (1 - t ** 2) / k))
                    other_max = max(other_max, (1 - m / k) / ((e ** 2 + m / k) * t))
                    ident = max(ident, abs((s - 1) * t - 2 / n * e))
                rows.append(_row(cfg, case, "tau_root_residual", root_res, 1e-10, "upper", 0.0, n=n, k=k))
                rows.append(_row(cfg, case, "tau_other_root", other_max, 0.0, "upper", 0.0, n=n, k=k))
                rows.append(_row(cfg, case, "tau_identity_residual", ident, 1e-10, "upper", 0.0, n=n, k=k))
                return rows
            cases.append(Case(f"n{n}-k{k}", run, cfg.seed))
    for s in _grid(1.1, 1.9, 9):
        def run(case, s=s):
            xi = xi_star(s)
            peak = f_s(s, xi)
            rows = [_row(cfg, case, "f_at_xi_star", peak, D_s(s) ** 2 - 5, "equal", 1e-10, s=s)]
            others = [f_s(s, x) for x in np.linspace(xi, np.sqrt(2 * s), 1001)[1:]]
            rows.append(_row(cfg, case, "f_beyond_xi_star", max(others), peak, "upper", 0.0, s=s))
            return rows
        cases.append(Case(f"f-{s:.6f}", run, cfg.seed))
    return cases


def _rounding_cases(cfg):
    cases = []
    for n in [n for n in cfg.n_range if n <= 4]:
        for s in (cfg.s_grid or _grid(1.0, n, 9)):
            if not 1 <= s <= n:
                continue

            def run(case, n=n, s=s):
                K = rounding_body(n, s)
                s_J = john_asymmetry(K).value
                mink = minkowski_asymmetry(K)
                rep = rounding_report(K, s_J)
                spike = spike_body(n, s)
                return [
                    _row(cfg, case, "rounding_circumradius", circumradius(K), np.sqrt(n * s), "equal", 1e-8, n=n, s=s),
                    _row(cfg, case, "rounding_john_asymmetry", s_J, s, "equal", 1e-7, n=n, s=s),
                    _row(cfg, case, "rounding_minkowski_asymmetry", mink.value, 2 * s / (s + 1), "equal", 1e-6,
                         mink.method, n=n, s=s),
                    _flag(cfg, case, "rounding_sandwich", rep.passed, n=n, s=s),
                    _row(cfg, case, "spike_circumradius", circumradius(spike), s, "equal", 1e-8, n=n, s=s),
                    _row(cfg, case, "spike_john_asymmetry", john_asymmetry(spike).value, s, "equal", 1e-7, n=n, s=s),
                ]
            cases.append(Case(f"n{n}-s{s:.6f}", run, cfg.seed))

        def gap(case, n=n):
            df = asymmetry_gap_scan(n, [float(n)])
            K = rounding_body(n, float(n))
            center = minkowski_asymmetry(K).witness_center
            return [
                _row(cfg, case, "gap_ratio", df.attrs["max_ratio"], (n + 1) / 2, "equal", 1e-6, n=n, s=float(n)),
                _row(cfg, case, "minkowski_center_norm", np.linalg.norm(center), n * (n - 1) / (3 * n + 1),
                     "equal", 1e-8, n=n, s=float(n)),
            ]
        cases.append(Case(f"n{n}-gap", gap, cfg.seed))
    return cases


def _difference_body(C, lam):
    V = vertex_form(C)
    return VPolytope((V[:, None, :] - lam * V[None, :, :]).reshape(-1, V.shape[1]))


def _affine_cases(cfg):
    cases = []
    restarts = cfg.restarts
    for n in [n for n in cfg.n_range if n <= 3]:
        def simplex_run(case, n=n):
            K = regular_body("simplex", n)
            result = minimize_Dr_affine(K, restarts=restarts, seed=case.seed)
            low, high = dr_corollary_bounds(n, n, n)
            return [
                _row(cfg, case, "simplex_min_D_over_2r", result.best_ratio, np.sqrt(n * (n + 1) / 2),
                     "equal", 1e-5, result.method, n=n, s=float(n)),
                _row(cfg, case, "dr_corollary_lower", result.best_ratio, low, "lower", 1e-5, n=n),
                _row(cfg, case, "dr_corollary_upper", result.best_ratio, high, "upper", 1e-5, n=n),
                _row(cfg, case, "jung", result.jung_max, jung_bound(n), "upper", 1e-9, n=n),
            ]
        cases.append(Case(f"n{n}-simplex-Dr", simplex_run, cfg.seed))
        for kind in ("cube", "cross-polytope"):
            def wr_run(case, n=n, kind=kind):
                result = maximize_wR_affine(regular_body(kind, n), restarts=restarts, seed=case.seed)
                low, high = wr_corollary_bounds(1.0, n)
                return [
                    _row(cfg, case, f"{kind}_max_w_over_2R", result.best_ratio, 1 / np.sqrt(n), "equal", 1e-5,
                         result.method, n=n, s=1.0),
                    _row(cfg, case, "wr_corollary_upper", result.best_ratio, high, "upper", 1e-6, n=n),
                    _row(cfg, case, "jung", result.jung_max, jung_bound(n), "upper", 1e-9, n=n),
                ]
            cases.append(Case(f"n{n}-{kind}-wR", wr_run, cfg.seed))
    triangle = regular_body("simplex", 2)
    s_C = minkowski_asymmetry(triangle).value
    for lam in _grid(0.1, 0.9, 5):
        def lam_run(case, lam=lam):
            K = _difference_body(triangle, lam)
            s_K = minkowski_asymmetry(K).value
            result = minimize_Dr_affine(K, triangle, restarts=restarts, seed=case.seed)
            return [_row(cfg, case, "difference_body_min_D_over_2r", result.best_ratio,
                         general_lower_bound(s_K, s_C), "equal", 1e-5, result.method, n=2, s=s_K, t=lam)]
        cases.append(Case(f"lambda-{lam:.3f}", lam_run, cfg.seed))
    for j, seed in enumerate(_seeds(cfg.seed + 400, cfg.samples)):
        def pair_run(case):
            rng = np.random.default_rng(case.seed)
            K = VPolytope(rng.standard_normal((3 + rng.integers(0, 4), 2)))
            C = VPolytope(rng.standard_normal((3 + rng.integers(0, 4), 2)))
            sandwich = grunbaum_upper_bound(K, C, restarts=restarts, seed=case.seed)
            result = minimize_Dr_affine(K, C, restarts=restarts, seed=case.seed, starts=[sandwich.linear])
            low = general_lower_bound(minkowski_asymmetry(K).value, minkowski_asymmetry(C).value)
            return [
                _row(cfg, case, "pair_min_D_over_2r_lower", result.best_ratio, max(low, 1.0), "lower", 1e-6,
                     result.method, n=2),
                _row(cfg, case, "pair_min_D_over_2r_upper", result.best_ratio, sandwich.rho, "upper", 1e-6,
                     result.method, n=2),
                _row(cfg, case, "pair_min_D_over_2r_absolute", result.best_ratio, 2.0, "upper", 1e-6, n=2),
                _flag(cfg, case, "pair_sandwich_verified", sandwich.verified, n=2),
            ]
        cases.append(Case(f"pair-{j:04d}", pair_run, seed))
    for n, shape in ((2, "triangle"), (3, "tetrahedron")):
        regular_diameter = np.sqrt(2 * n * (n + 1))
        for j, seed in enumerate(_seeds(cfg.seed + 500 + n, cfg.samples)):
            def simplex_run(case, n=n, shape=shape, regular_diameter=regular_diameter):
                rng = np.random.default_rng(case.seed)
                V = rng.standard_normal((n + 1, n))
                profile = radial_profile(VPolytope(V / radial_profile(VPolytope(V)).r))
                return [_row(cfg, case, f"{shape}_D_at_unit_inradius", profile.D, regular_diameter, "lower", 1e-7,
                             n=n),
                        _row(cfg, case, "jung", profile.R / profile.D, jung_bound(n), "upper", 1e-9, n=n)]
            cases.append(Case(f"{shape}-{j:04d}", simplex_run, seed))

    def shear_run(case):
        report = shear_inflation_report(Subspace.coordinate(3, [0]), [0.0, 0.0, 0.5], 1.5, 1.2, seed=case.seed)
        return [_flag(cfg, case, "shear_lemma", report.passed, n=3)]
    cases.append(Case("shear", shear_run, cfg.seed))
    return cases


def _sample_point(body, rng):
    if isinstance(body, BallHull):
        z = rng.standard_normal(body.dim)
        z = body.center + body.radius * z / np.linalg.norm(z) * rng.random() ** (1 / body.dim)
        if body.apexes.shape[0] == 0:
            return z
        p = body.apexes[rng.integers(body.apexes.shape[0])]
        lam = rng.random()
        return lam * z + (1 - lam) * p
    V = vertex_form(body)
    w = rng.dirichlet(np.full(V.shape[0], 0.3))
    return w @ V


def _oracle_cases(cfg):
    cases = []
    per_case = max(cfg.samples, 1)
    for j, seed in enumerate(_seeds(cfg.seed + 600, 10)):
        def lemma_run(case):
            rng = np.random.default_rng(case.seed)
            violations = 0
            for _ in range(per_case * 10):
                n = int(rng.integers(2, 6))
                m = int(rng.integers(2, 8))
                X = rng.standard_normal((m, n))
                X -= X.mean(axis=0)
                U = rng.standard_normal((m, n))
                U /= np.linalg.norm(U, axis=1)[:, None]
                rep = oracle_ball_lemma(X, U)
                violations += not rep.holds
            return [_row(cfg, case, "ball_lemma_violations", violations, 0, "upper", 0.0, "random")]
        cases.append(Case(f"ball-lemma-{j:02d}", lemma_run, seed))

    def lemma_equality(case):
        t = 0.6
        a = np.sqrt(1 - t * t)
        rep = oracle_ball_lemma([[1.0, 0.0], [-1.0, 0.0]], [[t, a], [-t, a]])
        return [_flag(cfg, case, "ball_lemma_equality", rep.near_equality and rep.characterization_ok)]
    cases.append(Case("ball-lemma-equality", lemma_equality, cfg.seed))

    for n in cfg.n_range:
        def vectors_run(case, n=n):
            rng = np.random.default_rng(case.seed)
            bodies = [regular_body(kind, n) for kind in ("simplex", "cube", "cross-polytope")]
            bodies += [rounding_body(n, float(s)) for s in (1.0, (1 + n) / 2, float(n))]
            bodies += [asym_body(n, k, s)[0] for k in cfg.ks(n)[:1] for s in (1.0, float(n))]
            failures = 0
            for body in bodies:
                decomp = john_decomposition(body)
                for _ in range(per_case * 5):
                    x, y = _sample_point(body, rng), _sample_point(body, rng)
                    rep = oracle_john_vectors(decomp, x, y)
                    failures += not (rep.holds_i and rep.holds_ii and rep.holds_iii and rep.equality_i_ok)
            return [_row(cfg, case, "john_vector_violations", failures, 0, "upper", 0.0, "random", n=n)]
        cases.append(Case(f"john-vectors-n{n}", vectors_run, cfg.seed + n))

        def vectors_equality(case, n=n):
            cube = regular_body("cube", n)
            simplex = regular_body("simplex", n)
            ones = np.ones(n)
            rep_i = oracle_john_vectors(john_decomposition(cube), ones, -ones)
            X = vertex_form(simplex)
            rep_iii = oracle_john_vectors(john_decomposition(simplex), X[0], X[1])
            return [_flag(cfg, case, "john_vectors_equality_i", rep_i.equality_i and rep_i.equality_i_ok, n=n),
                    _flag(cfg, case, "john_vectors_equality_iii", rep_iii.equality_iii and rep_iii.equality_iii_ok, n=n)]
        cases.append(Case(f"john-vectors-equality-n{n}", vectors_equality, cfg.seed))

        def support_run(case, n=n):
            rng = np.random.default_rng(case.seed)
            worst = 0.0
            for k in cfg.ks(n):
                V = np.linalg.qr(rng.standard_normal((n, k)))[0]
                G = rng.standard_normal((k, k))
                E = KEllipsoid(rng.standard_normal(n), V, G @ G.T + 0.1 * np.eye(k))
                b = rng.standard_normal(n)
                value, x = oracle_ellip_support(E, b)
                sampled = float(np.max(E.boundary_points(2000, seed=case.seed) @ b))
                y = V.T @ (x - E.center)
                on_boundary = abs(y @ E.shape @ y - 1.0)
                worst = max(worst, abs(b @ x - value), on_boundary, max(0.0, sampled - value))
            return [_row(cfg, case, "ellipsoid_support_residual", worst, 1e-9, "upper", 0.0, n=n)]
        cases.append(Case(f"ellip-support-n{n}", support_run, cfg.seed + 7 * n))
    return cases


_BUILDERS = {
    "john-identities": _john_identity_cases,
    "outer-bound": _outer_bound_cases,
    "inner-bound": _inner_bound_cases,
    "planar-diameter": _planar_cases,
    "scalar-lemmas": _scalar_cases,
    "rounding": _rounding_cases,
    "affine-ratios": _affine_cases,
    "oracles": _oracle_cases,
}


# === Step 3: run ===
def _execute(cfg, case):
    try:
        return case.run(case)
    except GeometryError as e:
        log.warning("case %s failed: %s", case.label, e)
        row = _row(cfg, case, "error", 0.0, 1.0, "lower", 0.0, type(e).__name__)
        return [row]


def run_suite(cfg):
    """Rows of every case, sorted by case_id"""
    cases = _BUILDERS[cfg.name](cfg)
    labels = [c.label for c in cases]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate case ids in suite {cfg.name}")
    log.info("suite %s: %d cases on %d workers", cfg.name, len(cases), config.worker_count())
    with ThreadPoolExecutor(max_workers=config.worker_count()) as pool:
        results = list(pool.map(lambda c: _execute(cfg, c), cases))
    rows = [row for chunk in results for row in chunk]
    rows.sort(key=lambda r: (r["case_id"], r["quantity"]))
    failed = sum(not r["pass"] for r in rows)
    log.info("suite %s: %d rows, %d failed", cfg.name, len(rows), failed)
    return rows
