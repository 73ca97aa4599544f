#!/usr/bin/env python3
"""
Inner/outer k-radius quantities, bound evaluators with equality
certificates, and the inequality oracles behind them.
"""

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import cvxpy as cp
from scipy.linalg import null_space
from scipy.optimize import minimize

import config
from bodies import (
    BallHull,
    HPolytope,
    KEllipsoid,
    Subspace,
    VPolytope,
    contains,
    diameter_pair,
    facet_form,
    project,
    solve_lp,
    vertex_form,
)
from asymmetry import john_asymmetry
from constructions import D_s, s_threshold
from ellipsoid_engine import loewner_decomposition, loewner_verify, mvee
from errors import (
    ContainmentViolated,
    DomainError,
    GeometryError,
    NotInLoewnerPosition,
    WrongDimension,
)

log = config.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class BoundReport:
    quantity: str
    measured: float
    bound: float
    slack: float
    passed: bool
    equality_certificate: Optional[dict] = None
    method: str = ""
    details: dict = field(default_factory=dict)


def _report(quantity, measured, bound, side, tol=config.BOUND_TOL, **extra):
    """side='upper': measured <= bound; side='lower': measured >= bound"""
    slack = bound - measured if side == "upper" else measured - bound
    return BoundReport(quantity, float(measured), float(bound), float(slack), bool(slack >= -tol), **extra)


# === Enclosing balls ===
@dataclass(frozen=True, eq=False)
class EnclosingBall:
    center: np.ndarray
    radius: float
    support: tuple
    certified: bool


def _circumcenter(S):
    base = S[0]
    U = S[1:] - base
    if U.shape[0] == 0:
        return base.copy()
    G = 2 * U @ U.T
    rhs = np.sum(U ** 2, axis=1)
    y = np.linalg.lstsq(G, rhs, rcond=None)[0]
    return base + y @ U


def _in_hull(point, S):
    m = S.shape[0]
    try:
        solve_lp(np.zeros(m), A_eq=np.vstack([S.T, np.ones((1, m))]),
                 b_eq=np.concatenate([point, [1.0]]), bounds=(0, None))
        return True
    except GeometryError:
        return False


def min_enclosing_ball(points, eps=1e-12, max_iter=100000):
    """Smallest Euclidean ball around the points (dual weights by Frank-Wolfe
    with away steps, then the circumcenter of the support set)"""
    P = np.atleast_2d(np.asarray(points, float))
    m = P.shape[0]
    if m == 1 or np.max(np.ptp(P, axis=0)) == 0:
        return EnclosingBall(P[0].copy(), 0.0, (0,), True)
    lam = np.full(m, 1.0 / m)
    for _ in range(max_iter):
        c = lam @ P
        dist = np.sum((P - c) ** 2, axis=1)
        r2 = float(lam @ dist)
        j = int(np.argmax(dist))
        sup = np.flatnonzero(lam > 0)
        k = sup[int(np.argmin(dist[sup]))]
        up = dist[j] / r2 - 1 if r2 > 0 else np.inf
        down = 1 - dist[k] / r2 if r2 > 0 else 0.0
        if up <= eps and down <= eps:
            break
        if up >= down:
            gamma = (dist[j] - r2) / (2 * dist[j])
            lam *= (1 - gamma)
            lam[j] += gamma
        else:
            gamma = min((r2 - dist[k]) / (2 * dist[k]) if dist[k] > 0 else np.inf,
                        lam[k] / (1 - lam[k]))
            lam *= (1 + gamma)
            lam[k] -= gamma
            if lam[k] < 1e-15:
                lam[k] = 0.0
    c = lam @ P
    radius = float(np.sqrt(np.max(np.sum((P - c) ** 2, axis=1))))
    support = np.flatnonzero(lam > 0)
    polished = _circumcenter(P[support])
    r_polished = float(np.sqrt(np.max(np.sum((P - polished) ** 2, axis=1))))
    if r_polished <= radius * (1 + 1e-12):
        c, radius = polished, r_polished
    dist = np.sqrt(np.sum((P - c) ** 2, axis=1))
    touching = np.flatnonzero(dist >= radius - 1e-9 * max(1.0, radius))
    certified = touching.size >= 2 and _in_hull(c, P[touching])
    return EnclosingBall(c, radius, tuple(int(i) for i in touching), certified)


def _ball_hull_enclosing(body):
    """Smallest ball containing a ball hull (ball plus apexes), as an SOCP"""
    if body.apexes.shape[0] == 0:
        return EnclosingBall(body.center.copy(), body.radius, (), True)
    x = cp.Variable(body.dim)
    R = cp.Variable()
    cons = [cp.norm(x - body.center) + body.radius <= R]
    cons += [cp.norm(x - p) <= R for p in body.apexes]
    cp.Problem(cp.Minimize(R), cons).solve()
    return EnclosingBall(np.asarray(x.value), float(R.value), (), False)


def enclosing_ball_of(body):
    if isinstance(body, BallHull):
        return _ball_hull_enclosing(body)
    return min_enclosing_ball(vertex_form(body))


# === Outer k-radius ===
def outer_kradius(K, F, tol=config.BOUND_TOL):
    """Projection radius onto F against sqrt(k/n) for K in Loewner position"""
    decomp = loewner_decomposition(K)
    check = loewner_verify(decomp, K)
    if not check.passed:
        raise NotInLoewnerPosition(f"Loewner certificate residuals too large: {check}")
    n, k = K.dim, F.k
    bound = np.sqrt(k / n)
    image = project(K, F)
    ball = enclosing_ball_of(image)
    cert = {"ball_center_norm": float(np.linalg.norm(ball.center)), "ball_radius": ball.radius}
    if isinstance(image, VPolytope):
        E = mvee(image.vertices)
        mean_radius = float(np.prod(E.semiaxes) ** (1.0 / k))
        cert.update(mvee_mean_radius=mean_radius, mvee_center_norm=float(np.linalg.norm(E.center)),
                    mvee_slack=mean_radius - bound)
    else:
        cert.update(mvee_mean_radius=image.radius, mvee_center_norm=float(np.linalg.norm(image.center)),
                    mvee_slack=image.radius - bound)
    report = _report("outer_kradius", ball.radius, bound, "lower", tol)
    equality = report.slack <= tol
    cert["equality"] = bool(equality and cert["ball_center_norm"] <= 1e-6)
    cert["centered_when_tight"] = bool(cert["mvee_slack"] > tol or cert["mvee_center_norm"] <= 1e-6)
    return BoundReport(report.quantity, report.measured, report.bound, report.slack, report.passed,
                       cert, "exact" if ball.certified else "socp")


@dataclass(frozen=True, eq=False)
class KRadiusSearch:
    radius: float
    subspace: Subspace
    method: str
    starts: int


def _projection_radius(P, V):
    return min_enclosing_ball(P @ V).radius


def _partition_directions(P):
    """Centroid differences of all two-block vertex partitions"""
    m = P.shape[0]
    out = []
    for mask in range(1, 2 ** (m - 1)):
        chosen = np.array([(mask >> i) & 1 for i in range(m)], bool)
        d = P[chosen].mean(axis=0) - P[~chosen].mean(axis=0)
        if np.linalg.norm(d) > 1e-12:
            out.append(d / np.linalg.norm(d))
    return out


def _polish_subspace(P, V0):
    """SLSQP on (V, z, R): min R s.t. ||V^T p_i - z||^2 <= R^2, V^T V = I"""
    n, k = V0.shape
    ball = min_enclosing_ball(P @ V0)
    x0 = np.concatenate([V0.reshape(-1), ball.center, [ball.radius]])
    iu = np.triu_indices(k)

    def unpack(x):
        return x[:n * k].reshape(n, k), x[n * k:n * k + k], x[-1]

    def ineq(x):
        V, z, R = unpack(x)
        return R ** 2 - np.sum((P @ V - z) ** 2, axis=1)

    def eq(x):
        V, _, _ = unpack(x)
        return (V.T @ V - np.eye(k))[iu]

    res = minimize(lambda x: x[-1], x0, method="SLSQP",
                   constraints=[{"type": "ineq", "fun": ineq}, {"type": "eq", "fun": eq}],
                   options={"ftol": 1e-15, "maxiter": 500})
    V = np.linalg.qr(unpack(res.x)[0])[0]
    return V, _projection_radius(P, V)


def outer_kradius_search(K, k, restarts=config.KRADIUS_RESTARTS, seed=config.DEFAULT_SEED):
    """Heuristic minimum over linear k-spaces of the projection radius"""
    P = vertex_form(K)
    n = P.shape[1]
    rng = np.random.default_rng(seed)
    starts = []
    if len(list(itertools.combinations(range(n), k))) <= 50:
        starts += [np.eye(n)[:, list(idx)] for idx in itertools.combinations(range(n), k)]
    if P.shape[0] <= 12 and k in (1, n - 1):
        for d in _partition_directions(P):
            starts.append(d[:, None] if k == 1 else null_space(d[None, :]))
    starts += [np.linalg.qr(rng.standard_normal((n, k)))[0] for _ in range(restarts)]
    scored = sorted(((_projection_radius(P, V), i) for i, V in enumerate(starts)))
    best_r, best_V = scored[0][0], starts[scored[0][1]]
    for _, i in scored[:max(5, restarts // 4)]:
        try:
            V, r = _polish_subspace(P, starts[i])
        except (ValueError, np.linalg.LinAlgError):
            continue
        if r < best_r:
            best_r, best_V = r, V
    return KRadiusSearch(float(best_r), Subspace(best_V), "multistart-local", len(starts))


def simplex_width(vertices):
    """Minimal width of a simplex: min over complementary face pairs"""
    X = np.atleast_2d(np.asarray(vertices, float))
    m, n = X.shape
    if m != n + 1:
        raise WrongDimension("simplex needs n+1 vertices")
    best = np.inf
    for mask in range(1, 2 ** (m - 1)):
        chosen = np.array([(mask >> i) & 1 for i in range(m)], bool)
        S, T = X[chosen], X[~chosen]
        diffs = np.vstack([S[1:] - S[0], T[1:] - T[0]]) if m > 2 else np.zeros((0, n))
        normal = null_space(diffs) if diffs.shape[0] else np.eye(n)[:, :1]
        a = normal[:, 0]
        best = min(best, abs(a @ (S[0] - T[0])))
    return float(best)


# === Inner k-balls ===
def _largest_kball_for_carrier(A, b, V):
    n = A.shape[1]
    reach = np.linalg.norm(A @ V, axis=1)
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    res = solve_lp(cost, A_ub=np.hstack([A, reach[:, None]]), b_ub=b,
                   bounds=[(None, None)] * n + [(0, None)])
    return res.x[:n], float(res.x[-1])


def search_inner_kball(P, k, restarts=config.INNER_SEARCH_RESTARTS, seed=config.DEFAULT_SEED):
    """Local ascent over carriers; for a fixed carrier the best k-ball is an LP"""
    A, b = facet_form(P)
    n = A.shape[1]
    rng = np.random.default_rng(seed)

    def carrier(params):
        return np.linalg.qr(params.reshape(n, k))[0]

    def objective(params):
        try:
            return -_largest_kball_for_carrier(A, b, carrier(params))[1]
        except GeometryError:
            return 0.0

    best = (-np.inf, None)
    for r in range(restarts):
        x0 = np.eye(n)[:, :k].reshape(-1) if r == 0 else rng.standard_normal(n * k)
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 400 * n * k})
        if -res.fun > best[0]:
            best = (-res.fun, carrier(res.x))
    V = best[1]
    center, radius = _largest_kball_for_carrier(A, b, V)
    return KEllipsoid.ball(center, V, radius)


def _containment_slack(K, E):
    """max over facets of h_E(a) - b (<= 0 means E inside K), and the method used"""
    if isinstance(K, (VPolytope, HPolytope)):
        A, b = facet_form(K)
        reach = A @ E.center + np.sqrt(np.einsum("ij,jk,ik->i", A @ E.basis, np.linalg.inv(E.shape), A @ E.basis))
        return float(np.max(reach - b)), "facets"
    V, c = E.basis, E.center
    offsets = K.apexes - c
    in_plane = np.linalg.norm(offsets - offsets @ V @ V.T, axis=1) <= 1e-9
    Y = offsets[in_plane] @ V
    if Y.shape[0] >= E.k + 1 and np.linalg.matrix_rank(Y - Y.mean(axis=0), tol=1e-9) == E.k:
        try:
            G, h = VPolytope(Y).facets()
            reach = np.sqrt(np.einsum("ij,jk,ik->i", G, np.linalg.inv(E.shape), G))
            worst = float(np.max(reach - h))
            if worst <= 1e-9:
                return worst, "carrier-polytope"
        except GeometryError:
            pass
    pts = E.boundary_points(200)
    outside = [pt for pt in pts if not contains(K, pt, tol=1e-9)]
    return (1.0 if outside else 0.0), "sampled"


def inner_bound_report(K, s_J, E, decomposition=None, tol=config.BOUND_TOL):
    """k-volume of E inside K against the asymmetry-dependent bound"""
    n, k = K.dim, E.k
    slack_c, how = _containment_slack(K, E)
    if slack_c > 1e-9:
        raise ContainmentViolated(f"k-ellipsoid leaves the body ({how}: {slack_c:.3e})")
    factor = min((s_J + 1) / 2, (n + 1) / (k + 1))
    bound = np.sqrt(n / k * factor)
    report = _report("inner_kball_radius", E.radius, bound, "upper", tol)
    details = {"ball_bound": float(np.sqrt(n * (n + 1) / (k * (k + 1)))), "containment": how}
    if abs(s_J - 1) <= 1e-9:
        details["symmetric_bound"] = float(np.sqrt(n / k))
    cert = None
    if abs(report.slack) <= config.NEAR_EQUALITY_REL * bound:
        c = E.center
        expected = n * (factor - 1)
        cert = {
            "is_ball": E.is_ball,
            "center_norm_sq": float(c @ c),
            "expected_center_norm_sq": float(expected),
            "center_residual": float(abs(c @ c - expected)),
            "perpendicularity": float(np.linalg.norm(E.basis.T @ c)),
        }
        if decomposition is not None and s_J >= 1 + 2 / n - 1e-9:
            targets = (1.0, (1 - s_J) / 2) if s_J <= s_threshold(n, k) + 1e-9 else (1.0, (k - n) / (k + 1))
            products = decomposition.contacts @ c
            miss = np.min(np.abs(products[:, None] - np.array(targets)[None, :]), axis=1)
            cert["contact_targets"] = list(targets)
            cert["contact_residual"] = float(np.max(miss))
        cert["equality"] = bool(cert["is_ball"] and cert["center_residual"] <= 1e-7
                                and cert["perpendicularity"] <= 1e-7
                                and cert.get("contact_residual", 0.0) <= 1e-7)
    return BoundReport(report.quantity, report.measured, report.bound, report.slack, report.passed,
                       cert, how, details)


def planar_diameter_report(K, s_J=None, tol=config.BOUND_TOL):
    """D(K) against D_{s_J} for planar K in John position"""
    if K.dim != 2:
        raise WrongDimension(f"planar diameter bound needs n = 2 (got {K.dim})")
    if s_J is None:
        s_J = john_asymmetry(K).value
    s = min(max(s_J, 1.0), 2.0)
    D, x, y = diameter_pair(K)
    bound = D_s(s)
    report = _report("diameter", D, bound, "upper", tol)
    cert = None
    if abs(report.slack) <= config.NEAR_EQUALITY_REL * bound:
        radius = np.sqrt(max(D ** 2 / 2 - 2, 0.0))
        mid = np.sqrt(max(D ** 2 / 4 - 2, 0.0))
        cert = {
            "endpoint_residual": float(max(abs(np.linalg.norm(x) - radius), abs(np.linalg.norm(y) - radius))),
            "midpoint_residual": float(abs(np.linalg.norm((x + y) / 2) - mid)),
        }
        cert["equality"] = max(cert.values()) <= 1e-7
    return BoundReport(report.quantity, report.measured, report.bound, report.slack, report.passed,
                       cert, "pairs", {"s_J": float(s_J)})


# === Oracles ===
def oracle_ellip_support(E, b):
    """max of b^T x over the k-ellipsoid and one maximizer"""
    b = np.asarray(b, float)
    Minv = np.linalg.inv(E.shape)
    Vb = E.basis.T @ b
    q = float(Vb @ Minv @ Vb)
    value = float(b @ E.center + np.sqrt(max(q, 0.0)))
    if q <= 1e-24:
        return value, E.center.copy()
    return value, E.center + E.basis @ (Minv @ Vb) / np.sqrt(q)


@dataclass(frozen=True)
class BallLemmaReport:
    lhs: float
    gamma: float
    holds: bool
    near_equality: bool
    characterization_ok: bool


def oracle_ball_lemma(xs, us):
    X = np.atleast_2d(np.asarray(xs, float))
    U = np.atleast_2d(np.asarray(us, float))
    scale = max(1.0, float(np.max(np.abs(X))))
    if np.linalg.norm(X.sum(axis=0)) > 1e-10 * scale:
        raise DomainError("points must sum to zero")
    norms = np.linalg.norm(X, axis=1)
    lhs = float(np.sum(X * U, axis=1).sum() ** 2)
    gamma = float(norms @ (1 - U @ U.T) @ norms)
    holds = lhs <= gamma + 1e-12 * max(1.0, gamma)
    near = gamma - lhs <= 1e-9 * max(gamma, 1e-300)
    ok = True
    xi = float(norms.sum())
    if near and xi > 0:
        u = norms @ U / xi
        live = norms > 1e-14
        step = np.sqrt(max(gamma, 0.0)) / xi * X[live] / norms[live][:, None]
        ok = any(np.max(np.abs(U[live] - u - sigma * step)) <= 1e-6 for sigma in (1.0, -1.0))
    return BallLemmaReport(lhs, gamma, bool(holds), bool(near), bool(ok))


@dataclass(frozen=True)
class JohnVectorsReport:
    inner_product: float
    distance: float
    holds_i: bool
    holds_ii: bool
    holds_iii: bool
    equality_i: bool
    equality_i_ok: bool
    equality_iii: bool
    equality_iii_ok: bool


def oracle_john_vectors(decomp, x, y, body=None):
    """Distance and inner-product bounds for points of a body in John position"""
    x, y = np.asarray(x, float), np.asarray(y, float)
    n = decomp.dim
    if body is not None and not (contains(body, x) and contains(body, y)):
        raise ContainmentViolated("test points must lie in the body")
    ip = float(x @ y)
    dist = float(np.linalg.norm(x - y))
    far = np.sqrt(2 * n * (n + 1))
    holds_i = ip >= -n - 1e-9
    holds_ii = dist <= np.sqrt(2 * (max(x @ x, y @ y) + n)) + 1e-9
    holds_iii = dist <= far + 1e-9
    eq_i = abs(ip + n) <= 1e-9 * n
    U = decomp.contacts[decomp.weights > 1e-12]
    touches = np.minimum(np.abs(U @ x - 1.0), np.abs(U @ y - 1.0))
    eq_i_ok = (not eq_i) or bool(np.all(touches <= 1e-7))
    eq_iii = abs(dist - far) <= 1e-9 * far
    eq_ok = (not eq_iii) or (abs(np.linalg.norm(x) - n) <= 1e-7 and abs(np.linalg.norm(y) - n) <= 1e-7)
    return JohnVectorsReport(ip, dist, bool(holds_i), bool(holds_ii), bool(holds_iii),
                             bool(eq_i), bool(eq_i_ok), bool(eq_iii), bool(eq_ok))
