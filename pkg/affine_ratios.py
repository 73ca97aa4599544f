#!/usr/bin/env python3
"""
Radial functionals w, D, R, r of a body against an optional gauge body,
their optimization over linear maps, and the theorem checks built on them.

Widths and diameters go through the difference body K - K:
    w(K, C) = 2 min over facets (a, b) of K - K of b / h_{C-C}(a)
    D(K, C) = 2 max over vertices z of K - K of gauge_{C-C}(z)
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError

import config
from bodies import (
    AffineMap,
    BallHull,
    HPolytope,
    VPolytope,
    chebyshev_center,
    diameter_pair,
    facet_form,
    solve_lp,
    sphere_directions,
    supports,
    v_to_h,
    vertex_form,
)
from constructions import D_s
from ellipsoid_engine import inscribed_ellipsoid
from errors import GeometryError, ParameterOutOfRange, RepresentationUnavailable
from radii_bounds import enclosing_ball_of, min_enclosing_ball

log = config.get_logger(__name__)

JUNG_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RadialProfile:
    w: float
    D: float
    R: float
    r: float
    gauge_body: Optional[object] = None
    witnesses: dict = field(default_factory=dict)
    method: str = "exact"
    w_interval: Optional[tuple] = None

    def consistent(self, tol=1e-9):
        return (self.w <= self.D + tol and self.r <= self.R + tol
                and self.w <= 2 * self.R + tol and self.D >= 2 * self.r - tol)


@dataclass(frozen=True, eq=False)
class AffineSearchResult:
    best_map: AffineMap
    best_ratio: float
    start_ratio: float
    method: str
    iterations: int
    jung_max: float = float("nan")
    profile: Optional[RadialProfile] = None


# === Gauge and body tables ===
class _Gauge:
    """Euclidean (optionally scaled) or polytope gauge body"""

    def __init__(self, C):
        self.body = C
        self.scale = 1.0
        self.euclidean = C is None
        if isinstance(C, BallHull):
            if C.apexes.shape[0]:
                raise RepresentationUnavailable("ball-hull gauges with apexes are not supported")
            self.euclidean, self.scale = True, C.radius
        if not self.euclidean:
            self.vertices = vertex_form(C)
            self.A, self.b = facet_form(C)
            self.diff_A, self.diff_b = _difference_facets(self.vertices)

    def width_of(self, D):
        """h_C(a) + h_C(-a) for each row"""
        if self.euclidean:
            return 2 * self.scale * np.linalg.norm(D, axis=1)
        P = D @ self.vertices.T
        return P.max(axis=1) - P.min(axis=1)

    def diff_gauge(self, Z):
        """gauge of each row with respect to C - C"""
        if self.euclidean:
            return np.linalg.norm(Z, axis=1) / (2 * self.scale)
        return np.max(Z @ self.diff_A.T / self.diff_b, axis=1)


def _difference_points(V):
    Z = (V[:, None, :] - V[None, :, :]).reshape(-1, V.shape[1])
    return Z[np.linalg.norm(Z, axis=1) > 0]


def _difference_facets(V):
    Z = _difference_points(V)
    if V.shape[1] == 1:
        return np.array([[1.0], [-1.0]]), np.array([Z.max(), Z.max()])
    hull = ConvexHull(Z)
    A, b = hull.equations[:, :-1], -hull.equations[:, -1]
    return A, b


class _BodyTable:
    """Vertex and facet data of K and of K - K, transformed lazily by L"""

    def __init__(self, K):
        if K.dim > config.MAX_ENUM_DIM:
            raise RepresentationUnavailable(f"affine searches need n <= {config.MAX_ENUM_DIM}")
        self.n = K.dim
        self.V = vertex_form(K)
        self.A, self.b = facet_form(K)
        Z = _difference_points(self.V)
        try:
            if self.n == 1:
                self.Z = np.array([[Z.max()], [-Z.max()]])
            else:
                self.Z = Z[ConvexHull(Z).vertices]
            self.diff_A, self.diff_b = _difference_facets(self.V)
        except QhullError as e:
            raise RepresentationUnavailable(f"difference body: {e}") from e

    def radii(self, L, gauge):
        Linv = np.linalg.inv(L)
        V = self.V @ L.T
        A = self.A @ Linv
        Z = self.Z @ L.T
        Ad = self.diff_A @ Linv
        D = 2 * float(np.max(gauge.diff_gauge(Z)))
        w = 2 * float(np.min(self.diff_b / (gauge.width_of(Ad))))
        if gauge.euclidean:
            norms = np.linalg.norm(A, axis=1)
            center, r = chebyshev_center(A / norms[:, None], self.b / norms)
            ball = min_enclosing_ball(V)
            return {"w": w, "D": D, "R": ball.radius / gauge.scale, "r": r / gauge.scale,
                    "inner_center": center, "outer_center": ball.center}
        n = self.n
        hC = supports(gauge.body, A)
        cost = np.zeros(n + 1)
        cost[-1] = -1.0
        res = solve_lp(cost, A_ub=np.hstack([A, hC[:, None]]), b_ub=self.b,
                       bounds=[(None, None)] * n + [(0, None)])
        r, inner = float(res.x[-1]), res.x[:n]
        R, outer = _outer_radius(V, gauge.A, gauge.b)
        return {"w": w, "D": D, "R": R, "r": r, "inner_center": inner, "outer_center": outer}


def _outer_radius(V, G, h):
    """min rho with conv(V) inside rho C + t, C = {G x <= h}"""
    n = V.shape[1]
    reach = np.max(V @ G.T, axis=0)
    cost = np.zeros(n + 1)
    cost[-1] = 1.0
    res = solve_lp(cost, A_ub=np.hstack([-G, -h[:, None]]), b_ub=-reach,
                   bounds=[(None, None)] * n + [(0, None)])
    return float(res.x[-1]), res.x[:n]


def _sampled_ballhull_profile(K):
    """Euclidean profile of a ball hull; w and r are direction-sampled upper bounds"""
    n = K.dim
    dirs = sphere_directions(n)
    h_pos, h_neg = supports(K, dirs), supports(K, -dirs)
    widths = h_pos + h_neg
    i = int(np.argmin(widths))
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    res = solve_lp(cost, A_ub=np.hstack([dirs, np.ones((dirs.shape[0], 1))]), b_ub=h_pos,
                   bounds=[(None, None)] * n + [(0, None)])
    D, x, y = diameter_pair(K)
    ball = enclosing_ball_of(K)
    lower_w = 2 * K.radius
    return RadialProfile(float(widths[i]), D, ball.radius, float(res.x[-1]), None,
                         {"w_direction": dirs[i], "D_pair": (x, y), "R_center": ball.center,
                          "r_center": res.x[:n]},
                         "sampled", (lower_w, float(widths[i])))


def radial_profile(K, C=None):
    """w, D, R, r of K measured in the gauge of C (Euclidean when C is None)"""
    if isinstance(K, BallHull):
        if C is not None:
            raise RepresentationUnavailable("ball-hull bodies are profiled in the Euclidean gauge only")
        return _sampled_ballhull_profile(K)
    gauge = _Gauge(C)
    table = _BodyTable(K)
    vals = table.radii(np.eye(K.dim), gauge)
    return RadialProfile(vals["w"], vals["D"], vals["R"], vals["r"], C,
                         {"inner_center": vals["inner_center"], "outer_center": vals["outer_center"]})


# === Parameterizations ===
def _upper_triangular(params, n):
    L = np.zeros((n, n))
    L[np.triu_indices(n)] = params
    L[np.diag_indices(n)] = np.exp(np.diag(L))
    return L


def _upper_params(L):
    """Inverse of _upper_triangular after removing the left orthogonal factor"""
    _, R = np.linalg.qr(L)
    R = np.diag(np.sign(np.diag(R))) @ R
    p = R.copy()
    p[np.diag_indices(R.shape[0])] = np.log(np.diag(R))
    return p[np.triu_indices(R.shape[0])]


def _full(params, n):
    return params.reshape(n, n)


def _john_linear(K):
    H = K if isinstance(K, HPolytope) else v_to_h(K)
    return inscribed_ellipsoid(H).to_unit_ball_map().linear


def _multistart(objective, starts, seed, restarts, maxiter):
    """Nelder-Mead from each start; per-restart seeds make the minimum order-independent"""
    rng_seeds = np.random.SeedSequence(seed).spawn(restarts)
    dim = starts[0].size
    points = list(starts) + [starts[0] + 0.3 * np.random.default_rng(s).standard_normal(dim)
                             for s in rng_seeds]

    def run(x0):
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": maxiter, "adaptive": True})
        return float(res.fun), res.x, int(res.nit)

    with ThreadPoolExecutor(max_workers=config.worker_count()) as pool:
        results = list(pool.map(run, points))
    best = min(results, key=lambda item: item[0])
    return best[0], best[1], sum(item[2] for item in results)


class _JungTracker:
    def __init__(self):
        self.worst = 0.0

    def record(self, vals):
        if vals["D"] > 0:
            self.worst = max(self.worst, vals["R"] / vals["D"])


def _search(K, C, ratio, restarts, seed, extra_starts=()):
    n = K.dim
    gauge = _Gauge(C)
    table = _BodyTable(K)
    tracker = _JungTracker()
    if gauge.euclidean:
        unpack, pack = _upper_triangular, _upper_params
        method = "john-start"
    else:
        unpack, pack = _full, lambda L: np.asarray(L, float).reshape(-1)
        method = "multistart-local"

    def evaluate(L):
        vals = table.radii(L, gauge)
        if gauge.euclidean:
            tracker.record(vals)
        return ratio(vals), vals

    def objective(params):
        L = unpack(params, n)
        if not np.all(np.isfinite(L)) or abs(np.linalg.det(L)) <= config.DET_TOL:
            return np.inf
        try:
            return evaluate(L)[0]
        except (GeometryError, np.linalg.LinAlgError):
            return np.inf

    start_mats = [np.eye(n)]
    try:
        start_mats.append(_john_linear(K))
    except GeometryError as e:
        log.warning("John start unavailable: %s", e)
    start_mats += [np.asarray(L, float) for L in extra_starts]
    starts = [pack(L) for L in start_mats]
    start_values = [objective(p) for p in starts]
    start_ratio = float(min(start_values))
    best, x, iterations = _multistart(objective, starts, seed, restarts, 300 * starts[0].size)
    if not best <= start_ratio:
        best, x = start_ratio, starts[int(np.argmin(start_values))]
    L = unpack(x, n)
    value, vals = evaluate(L)
    best_map = AffineMap(L, -vals["inner_center"])
    profile = RadialProfile(vals["w"], vals["D"], vals["R"], vals["r"], C,
                            {"inner_center": vals["inner_center"], "outer_center": vals["outer_center"]})
    return AffineSearchResult(best_map, float(value), start_ratio, method, iterations,
                              tracker.worst if gauge.euclidean else float("nan"), profile)


def minimize_Dr_affine(K, C=None, restarts=config.AFFINE_RESTARTS, seed=config.DEFAULT_SEED, starts=()):
    """Smallest D(AK, C) / 2r(AK, C) found over linear maps A"""
    result = _search(K, C, lambda v: v["D"] / (2 * v["r"]), restarts, seed, starts)
    if C is None:
        n = K.dim
        cap = np.sqrt(n * (n + 1) / 2)
        if result.best_ratio > cap + 1e-6:
            log.warning("D/2r search ended above sqrt(n(n+1)/2): %.9g", result.best_ratio)
    return result


def maximize_wR_affine(K, restarts=config.AFFINE_RESTARTS, seed=config.DEFAULT_SEED):
    """Largest w(AK) / 2R(AK) found over linear maps A (reported as the ratio itself)"""
    result = _search(K, None, lambda v: -v["w"] / (2 * v["R"]), restarts, seed)
    return AffineSearchResult(result.best_map, -result.best_ratio, -result.start_ratio, result.method,
                              result.iterations, result.jung_max, result.profile)


# === Groenbaum-type sandwich ===
@dataclass(frozen=True, eq=False)
class SandwichBound:
    rho: float
    linear: np.ndarray
    sigma: int
    inner_translation: np.ndarray
    outer_translation: np.ndarray
    verified: bool


def _sandwich(table, gauge_pair, L):
    """(rho, sigma, t_in, t_out) with C + t_in inside LK scaled to r = 1, inside rho sigma C + t_out"""
    gauge, neg = gauge_pair
    vals = table.radii(L, gauge)
    r = vals["r"]
    V = table.V @ L.T / r
    best = None
    for sigma, g in ((1, gauge), (-1, neg)):
        if g.euclidean:
            ball = min_enclosing_ball(V)
            rho, t = ball.radius / g.scale, ball.center
        else:
            rho, t = _outer_radius(V, g.A, g.b)
        if best is None or rho < best[0]:
            best = (rho, sigma, vals["inner_center"] / r, t)
    return best


def _verify_sandwich(table, gauge, neg, L, rho, sigma, t_in, t_out, tol=1e-7):
    L = np.asarray(L, float)
    r = table.radii(L, gauge)["r"]
    A = table.A @ np.linalg.inv(L)
    b = table.b / r
    V = table.V @ L.T / r
    if gauge.euclidean:
        inner_ok = bool(np.all(A @ t_in + gauge.scale * np.linalg.norm(A, axis=1) <= b + tol))
        outer_ok = bool(np.all(np.linalg.norm(V - t_out, axis=1) <= rho * gauge.scale + tol))
        return inner_ok and outer_ok
    inner_ok = bool(np.all((gauge.vertices + t_in) @ A.T <= b + tol))
    g = gauge if sigma == 1 else neg
    outer_ok = bool(np.all((V - t_out) @ g.A.T <= rho * g.b + tol))
    return inner_ok and outer_ok


def grunbaum_upper_bound(K, C=None, restarts=config.AFFINE_RESTARTS, seed=config.DEFAULT_SEED):
    """Upper bound rho on the Groenbaum distance with a verified sandwich
    C + t_in inside AK inside rho (sigma C) + t_out"""
    n = K.dim
    gauge = _Gauge(C)
    neg = gauge if gauge.euclidean else _Gauge(VPolytope(-vertex_form(C)))
    table = _BodyTable(K)
    unpack, pack = (_upper_triangular, _upper_params) if gauge.euclidean else \
        (_full, lambda L: np.asarray(L, float).reshape(-1))

    def objective(params):
        L = unpack(params, n)
        if not np.all(np.isfinite(L)) or abs(np.linalg.det(L)) <= config.DET_TOL:
            return np.inf
        try:
            return _sandwich(table, (gauge, neg), L)[0]
        except (GeometryError, np.linalg.LinAlgError):
            return np.inf

    start_mats = [np.eye(n)]
    try:
        start_mats.append(_john_linear(K))
    except GeometryError:
        pass
    starts = [pack(L) for L in start_mats]
    _, x, _ = _multistart(objective, starts, seed, restarts, 300 * starts[0].size)
    candidates = [unpack(x, n)] + start_mats
    best = None
    for L in candidates:
        try:
            rho, sigma, t_in, t_out = _sandwich(table, (gauge, neg), L)
        except (GeometryError, np.linalg.LinAlgError):
            continue
        if best is None or rho < best[0]:
            best = (rho, sigma, t_in, t_out, L)
    rho, sigma, t_in, t_out, L = best
    verified = _verify_sandwich(table, gauge, neg, L, rho, sigma, t_in, t_out)
    r = table.radii(L, gauge)["r"]
    return SandwichBound(float(rho), L / r, int(sigma), t_in, t_out, verified)


# === Theorem bounds ===
def general_lower_bound(s_K, s_C):
    """(s(K)+1)/(s(C)+1) * max{s(C)/s(K), 1}"""
    return (s_K + 1) / (s_C + 1) * max(s_C / s_K, 1.0)


def dr_corollary_bounds(s, s_J, n):
    """(lower, upper) for min over A of D(AK)/2r(AK), Euclidean"""
    lower = max(s * np.sqrt((n + 1) / (2 * n)), (s + 1) / 2)
    upper = D_s(min(max(s_J, 1.0), 2.0)) / 2 if n == 2 else np.sqrt(n * (s_J + 1) / 2)
    return float(lower), float(upper)


def wr_corollary_bounds(s, n):
    """(lower, upper) for max over A of w(AK)/2R(AK), Euclidean"""
    lower = 1 / np.sqrt(n)
    first = np.sqrt(n) / s if n % 2 else (n + 1) / (s * np.sqrt(n + 2))
    return float(lower), float(min(first, (s + 1) / (2 * s)))


def jung_bound(n):
    return float(np.sqrt(n / (2 * (n + 1))))


def jung_check(profile, n):
    return profile.R / profile.D <= jung_bound(n) + JUNG_TOL


# === Shear inflation ===
def shear_inflation_map(U, c, alpha):
    """x -> pi_U(x) + alpha (pi_{U-perp}(x) - c) + c"""
    c = np.asarray(c, float)
    if alpha <= 1:
        raise ParameterOutOfRange(f"alpha must exceed 1 (got {alpha})")
    if np.linalg.norm(U.project(c)) > 1e-9:
        raise ParameterOutOfRange("c must lie in the orthogonal complement of U")
    P = U.basis @ U.basis.T
    linear = P + alpha * (np.eye(U.dim) - P)
    return AffineMap(linear, (1 - alpha) * c)


@dataclass(frozen=True)
class ShearReport:
    min_support: float
    contains_ball: bool
    common_points: int
    min_c_dot: float
    passed: bool


def shear_inflation_report(U, c, alpha, mu_factor, count=20000, seed=config.DEFAULT_SEED):
    """Sampled check that A(conv((mu (B cap U) + c) cup B)) contains B and
    touches the sphere only where c^T x > 0"""
    if mu_factor <= 1:
        raise ParameterOutOfRange(f"mu must exceed 1 (got {mu_factor})")
    T = shear_inflation_map(U, c, alpha)
    c = np.asarray(c, float)
    X = sphere_directions(U.dim, seed=seed, count=count if U.dim > 2 else None)
    pre = X @ T.linear                       # L symmetric: L^T x
    h_body = np.maximum(np.linalg.norm(pre, axis=1),
                        mu_factor * np.linalg.norm(U.coordinates(pre), axis=1) + pre @ c)
    h = h_body + X @ T.translation
    touching = h <= 1 + 1e-9
    dots = X[touching] @ c
    min_dot = float(dots.min()) if dots.size else float("inf")
    contains_ball = bool(h.min() >= 1 - 1e-12)
    return ShearReport(float(h.min()), contains_ball, int(touching.sum()), min_dot,
                       contains_ball and min_dot > 0)
