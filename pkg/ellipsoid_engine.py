#!/usr/bin/env python3
"""
Loewner and John ellipsoid solvers.

mvee               - minimum-volume enclosing ellipsoid (Frank-Wolfe with away
                     steps on the D-optimal design weights, then a Newton
                     polish of the active weights)
inscribed_ellipsoid- maximum-volume inscribed ellipsoid of an H-polytope
                     (damped Newton on the log-det barrier, then a KKT polish)
john_decomposition - contact vectors and weights certifying John position
normalize_john / normalize_loewner - affine normalization with certificate
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, nnls

import config
from bodies import (
    AffineMap,
    BallHull,
    Ellipsoid,
    HPolytope,
    facet_form,
    sphere_directions,
    supports,
    v_to_h,
    vertex_form,
)
from errors import (
    DegenerateInput,
    NoConvergence,
    NotInJohnPosition,
    NotInLoewnerPosition,
    RepresentationUnavailable,
)

log = config.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class JohnDecomposition:
    contacts: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        U = np.atleast_2d(np.asarray(self.contacts, float))
        w = np.asarray(self.weights, float).reshape(-1)
        if U.shape[0] != w.shape[0]:
            raise DegenerateInput("one weight per contact vector")
        U.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "contacts", U)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self):
        return self.contacts.shape[1]

    @classmethod
    def from_certificate(cls, certificate):
        if certificate is None or certificate.contacts is None or certificate.weights is None:
            raise NotInJohnPosition("body carries no contact certificate")
        return cls(certificate.contacts, certificate.weights)


@dataclass(frozen=True)
class JohnReport:
    sum_residual: float
    identity_residual: float
    support_residual: float
    norm_residual: float
    trace_residual: float
    passed: bool


@dataclass(frozen=True, eq=False)
class PositionCertificate:
    map: AffineMap
    decomposition: JohnDecomposition
    residuals: JohnReport
    position: str = "john"


@dataclass(frozen=True, eq=False)
class InscribedResult:
    ellipsoid: Ellipsoid
    multipliers: np.ndarray
    kkt_residual: float
    polished: bool
    iterations: int = 0
    info: dict = field(default_factory=dict)


# === Loewner ellipsoid ===
def _omega(Q, M):
    return np.einsum("ij,ik,kj->j", Q, M, Q)


def _design_weights(Q, u, eps, max_iter):
    """Frank-Wolfe with away steps for max log det sum_i u_i q_i q_i^T"""
    D, m = Q.shape
    u = u.copy()
    M = np.linalg.inv((Q * u) @ Q.T)
    omega = _omega(Q, M)
    for it in range(max_iter):
        if it and it % 200 == 0:
            M = np.linalg.inv((Q * u) @ Q.T)
            omega = _omega(Q, M)
        j = int(np.argmax(omega))
        support = np.flatnonzero(u > 0)
        k = support[int(np.argmin(omega[support]))]
        up = omega[j] / D - 1.0
        down = 1.0 - omega[k] / D
        if up <= eps and down <= eps:
            return u, it
        if up >= down:
            idx = j
            beta = (omega[j] - D) / (D * (omega[j] - 1.0))
        else:
            idx = k
            if u[k] >= 1.0:
                raise NoConvergence("design weight collapsed onto a single point")
            beta = max((omega[k] - D) / (D * (omega[k] - 1.0)), -u[k] / (1.0 - u[k]))
        Mq = M @ Q[:, idx]
        denom = (1.0 - beta) + beta * omega[idx]
        g = Q.T @ Mq
        M = (M - beta * np.outer(Mq, Mq) / denom) / (1.0 - beta)
        omega = (omega - beta * g ** 2 / denom) / (1.0 - beta)
        u *= (1.0 - beta)
        u[idx] += beta
        if u[idx] < 1e-15:
            u[idx] = 0.0
    raise NoConvergence(f"mvee did not reach eps={eps:g} in {max_iter} iterations")


def _polish_weights(Q, u):
    """Solve omega_i(u) = D on the support of u"""
    D = Q.shape[0]
    active = np.flatnonzero(u > 0)
    Qa = Q[:, active]

    def residual(v):
        return _omega(Qa, np.linalg.inv((Qa * v) @ Qa.T)) - D

    def jacobian(v):
        M = np.linalg.inv((Qa * v) @ Qa.T)
        G = Qa.T @ M @ Qa
        return -(G ** 2)

    start = u[active] / u[active].sum()
    before = np.max(np.abs(residual(start)))
    try:
        sol = least_squares(residual, start, jac=jacobian, bounds=(0.0, 1.0),
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200)
    except (np.linalg.LinAlgError, ValueError) as e:
        log.debug("mvee polish skipped: %s", e)
        return u
    if np.max(np.abs(sol.fun)) < before:
        out = np.zeros_like(u)
        out[active] = sol.x / sol.x.sum()
        return out
    return u


def mvee(points, eps=config.MVEE_EPS, max_iter=config.MVEE_MAX_ITER):
    """Minimum-volume ellipsoid containing the points"""
    if not 1e-12 <= eps <= 1e-3:
        raise ValueError("eps must lie in [1e-12, 1e-3]")
    P = np.atleast_2d(np.asarray(points, float))
    m, d = P.shape
    shift = P.mean(axis=0)
    X = P - shift
    scale = max(1.0, float(np.max(np.abs(X))))
    if m < d + 1 or np.linalg.matrix_rank(X, tol=1e-9 * scale) < d:
        raise DegenerateInput(f"points do not affinely span R^{d}")
    Q = np.vstack([X.T, np.ones(m)])
    u, iters = _design_weights(Q, np.full(m, 1.0 / m), eps, max_iter)
    active = u > 0
    try:
        sub, _ = _design_weights(Q[:, active], u[active] / u[active].sum(),
                                 config.MVEE_POLISH_EPS, min(max_iter, 50000))
        u = np.zeros(m)
        u[active] = sub
    except NoConvergence:
        log.warning("mvee active-set refinement stopped early; keeping eps=%g solution", eps)
    u = _polish_weights(Q, u)
    c = X.T @ u
    S = (X.T * u) @ X - np.outer(c, c)
    shape = np.linalg.inv(S) / d
    diff = X - c
    vals = np.einsum("ij,jk,ik->i", diff, shape, diff)
    shape = shape / np.max(vals)
    vals = vals / np.max(vals)
    contacts = tuple(np.flatnonzero(vals >= 1 - 1e-6))
    log.debug("mvee: %d points, %d iterations, %d contacts", m, iters, len(contacts))
    return Ellipsoid(c + shift, shape, contacts)


# === John ellipsoid ===
def _sym_basis(n):
    pairs = [(j, l) for j in range(n) for l in range(j, n)]
    E = np.zeros((len(pairs), n, n))
    for k, (j, l) in enumerate(pairs):
        E[k, j, l] = 1.0
        E[k, l, j] = 1.0
    return pairs, E


class _Barrier:
    """phi(B, d) = -t log det B - sum_i log(b_i - a_i^T d - ||B a_i||)"""

    def __init__(self, A, b):
        self.A, self.b = A, b
        self.n = A.shape[1]
        self.pairs, self.E = _sym_basis(self.n)
        self.ms = len(self.pairs)
        self.G = np.einsum("kjl,il->ijk", self.E, A)

    def unpack(self, x):
        beta, d = x[:self.ms], x[self.ms:]
        B = np.einsum("k,kjl->jl", beta, self.E)
        return B, d

    def pack(self, B, d):
        return np.concatenate([[B[j, l] for j, l in self.pairs], d])

    def value(self, x, t):
        B, d = self.unpack(x)
        try:
            chol = np.linalg.cholesky(B)
        except np.linalg.LinAlgError:
            return np.inf
        g = self.b - self.A @ d - np.linalg.norm(self.A @ B, axis=1)
        if np.any(g <= 0):
            return np.inf
        return -t * 2 * np.sum(np.log(np.diag(chol))) - np.sum(np.log(g))

    def derivatives(self, x, t):
        B, d = self.unpack(x)
        W = self.A @ B
        r = np.linalg.norm(W, axis=1)
        g = self.b - self.A @ d - r
        Binv = np.linalg.inv(B)
        Gw = np.einsum("ijk,ij->ik", self.G, W)
        dr = Gw / r[:, None]
        dg = dr / g[:, None]
        ag = self.A / g[:, None]
        grad = np.concatenate([
            -t * np.einsum("jl,kjl->k", Binv, self.E) + dg.sum(axis=0),
            ag.sum(axis=0),
        ])
        BE = np.einsum("jl,klm->kjm", Binv, self.E)
        H_logdet = t * np.einsum("kab,lba->kl", BE, BE)
        GtG = np.einsum("ijk,ijl->ikl", self.G, self.G)
        d2r = GtG / r[:, None, None] - np.einsum("ik,il->ikl", Gw, Gw) / r[:, None, None] ** 3
        Hbb = H_logdet + dg.T @ dg + np.einsum("ikl,i->kl", d2r, 1.0 / g)
        Hbd = dg.T @ ag
        Hdd = ag.T @ ag
        H = np.block([[Hbb, Hbd], [Hbd.T, Hdd]])
        return grad, H, g


def _center(barrier, x, t, max_steps=200):
    for step in range(max_steps):
        grad, H, _ = barrier.derivatives(x, t)
        try:
            dx = np.linalg.solve(H, -grad)
        except np.linalg.LinAlgError:
            dx = np.linalg.lstsq(H, -grad, rcond=None)[0]
        decrement = -grad @ dx
        if decrement / 2 <= 1e-12:
            return x, step
        f0 = barrier.value(x, t)
        s = 1.0
        while s > 1e-16:
            f1 = barrier.value(x + s * dx, t)
            if np.isfinite(f1) and f1 <= f0 - 0.25 * s * decrement:
                break
            s *= 0.5
        else:
            return x, step
        x = x + s * dx
    return x, max_steps


def _kkt_residual(A, b, B, d, lam):
    """Stationarity and feasibility residual of max log det B"""
    W = A @ B
    r = np.linalg.norm(W, axis=1)
    S = np.einsum("i,ij,ik->jk", lam / (2 * r), W, A)
    S = S + S.T
    stat = np.linalg.inv(B) - S
    iu = np.triu_indices(B.shape[0])
    return np.concatenate([stat[iu], A.T @ lam]), b - A @ d - r


def inscribed_ellipsoid_report(P, tol=config.KKT_TOL):
    """Maximum-volume ellipsoid {B u + d : ||u|| <= 1} inside P, with KKT data"""
    A, b = P.facets()
    x0, radius = P.chebyshev
    n = P.dim
    b0 = b - A @ x0
    barrier = _Barrier(A, b0)
    x = barrier.pack(0.5 * radius * np.eye(n), np.zeros(n))
    t, total = 1.0, 0
    N = A.shape[0]
    while True:
        x, steps = _center(barrier, x, t)
        total += steps
        if N / t < 1e-10:
            break
        t *= 8.0
    B, d = barrier.unpack(x)
    _, _, g = barrier.derivatives(x, t)
    lam = 1.0 / (t * g)
    active = np.flatnonzero(g < 1e-6)
    res_stat, gap = _kkt_residual(A, b0, B, d, np.where(g < 1e-6, lam, 0.0))
    best = (B, d, np.where(g < 1e-6, lam, 0.0), float(np.linalg.norm(res_stat) + max(0.0, -gap.min())))
    polished = False
    if active.size:
        Aa, ba = A[active], b0[active]
        ms = barrier.ms

        def residual(z):
            Bz, dz = barrier.unpack(z[:ms + n])
            stat, feas = _kkt_residual(Aa, ba, Bz, dz, z[ms + n:])
            return np.concatenate([stat, feas])

        try:
            sol = least_squares(residual, np.concatenate([x, lam[active]]), method="lm",
                                xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=4000)
            Bp, dp = barrier.unpack(sol.x[:ms + n])
            lam_full = np.zeros(N)
            lam_full[active] = sol.x[ms + n:]
            stat, gap = _kkt_residual(A, b0, Bp, dp, lam_full)
            score = float(np.linalg.norm(stat) + max(0.0, -gap.min()))
            if (np.min(np.linalg.eigvalsh(Bp)) > 0 and lam_full.min() >= -1e-12
                    and gap.min() >= -1e-12 and score < best[3]):
                best = (Bp, dp, lam_full, score)
                polished = True
        except (np.linalg.LinAlgError, ValueError) as e:
            log.debug("KKT polish failed: %s", e)
    B, d, lam, score = best
    if score > tol:
        log.warning("inscribed ellipsoid KKT residual %.2e exceeds tol %.0e", score, tol)
    W = A @ B
    slack = b0 - A @ d - np.linalg.norm(W, axis=1)
    contacts = tuple(np.flatnonzero(slack <= 1e-6))
    B = 0.5 * (B + B.T)
    Binv = np.linalg.inv(B)
    ellipsoid = Ellipsoid(d + x0, Binv @ Binv, contacts)
    log.debug("inscribed ellipsoid: %d Newton steps, KKT residual %.2e", total, score)
    return InscribedResult(ellipsoid, lam, score, polished, total)


def inscribed_ellipsoid(P, tol=config.KKT_TOL):
    return inscribed_ellipsoid_report(P, tol).ellipsoid


# === Decompositions ===
def solve_john_weights(contacts, residual_tol=config.NNLS_RESIDUAL_TOL):
    """Nonnegative weights with sum l u = 0, sum l u u^T = I, sum l = n"""
    U = np.atleast_2d(np.asarray(contacts, float))
    U = U / np.linalg.norm(U, axis=1)[:, None]
    m, n = U.shape
    outer = np.einsum("ij,ik->ijk", U, U).reshape(m, n * n)
    system = np.vstack([U.T, outer.T, np.ones((1, m))])
    rhs = np.concatenate([np.zeros(n), np.eye(n).reshape(-1), [float(n)]])
    weights, rnorm = nnls(system, rhs, maxiter=50 * max(m, 10))
    if rnorm > residual_tol:
        raise NotInJohnPosition(f"no John weights among {m} contacts (residual {rnorm:.2e})")
    keep = weights > config.WEIGHT_PRUNE
    return JohnDecomposition(U[keep], weights[keep])


def john_decomposition(body, contact_tol=config.CONTACT_TOL):
    """Contacts of the body with B^n and weights certifying John position"""
    if isinstance(body, BallHull):
        if np.linalg.norm(body.center) + 1.0 > body.radius + 1e-9:
            raise NotInJohnPosition("unit ball is not contained in the ball part")
        cert = body.certificate
        if cert is not None and cert.contacts is not None:
            U = cert.contacts / np.linalg.norm(cert.contacts, axis=1)[:, None]
        else:
            log.warning("ball hull without certificate: searching contacts on a sphere sweep")
            U = sphere_directions(body.dim)
        U = U[supports(body, U) <= 1 + contact_tol]
        if U.shape[0] == 0:
            raise NotInJohnPosition("no contact directions")
        return solve_john_weights(U)
    A, b = facet_form(body)
    if np.min(b) < 1 - 1e-9:
        raise NotInJohnPosition(f"unit ball pokes out of a facet (offset {np.min(b):.3g})")
    U = A[b <= 1 + contact_tol]
    if U.shape[0] == 0:
        raise NotInJohnPosition("no facet touches the unit ball")
    return solve_john_weights(U)


def john_verify(decomp, body, tol=config.JOHN_RESIDUAL_TOL):
    U, w = decomp.contacts, decomp.weights
    n = U.shape[1]
    sum_res = float(np.linalg.norm(w @ U))
    ident = float(np.linalg.norm(np.einsum("i,ij,ik->jk", w, U, U) - np.eye(n)))
    supp = float(np.max(np.abs(supports(body, U) - 1.0)))
    norms = float(np.max(np.abs(np.linalg.norm(U, axis=1) - 1.0)))
    trace = float(abs(w.sum() - n))
    passed = max(sum_res, ident, supp, norms, trace) <= tol and bool(np.all(w > 0))
    return JohnReport(sum_res, ident, supp, norms, trace, passed)


def normalize_john(body):
    """Affine image of the body in John position, with its certificate"""
    if isinstance(body, BallHull):
        decomp = john_decomposition(body)
        return body, PositionCertificate(AffineMap.identity(body.dim), decomp, john_verify(decomp, body))
    H = body if isinstance(body, HPolytope) else v_to_h(body)
    E = inscribed_ellipsoid(H)
    T = E.to_unit_ball_map()
    image = T.apply_body(body)
    decomp = john_decomposition(image)
    report = john_verify(decomp, image)
    if not report.passed:
        log.warning("John normalization residuals above tolerance: %s", report)
    return image, PositionCertificate(T, decomp, report)


# === Loewner position ===
def loewner_decomposition(body, contact_tol=config.CONTACT_TOL):
    """Decomposition from points of the body on the unit sphere (body inside B^n)"""
    if isinstance(body, BallHull):
        if np.linalg.norm(body.center) <= 1e-12 and abs(body.radius - 1.0) <= 1e-12 and body.apexes.shape[0] == 0:
            n = body.dim
            return JohnDecomposition(np.vstack([np.eye(n), -np.eye(n)]), np.full(2 * n, 0.5))
        raise RepresentationUnavailable("Loewner contacts of a ball hull need a vertex form")
    pts = vertex_form(body)
    norms = np.linalg.norm(pts, axis=1)
    if np.max(norms) > 1 + contact_tol:
        raise NotInLoewnerPosition(f"body leaves the unit ball (radius {np.max(norms):.6g})")
    touching = pts[norms >= 1 - contact_tol]
    if touching.shape[0] == 0:
        raise NotInLoewnerPosition("no vertex on the unit sphere")
    try:
        return solve_john_weights(touching)
    except NotInJohnPosition as e:
        raise NotInLoewnerPosition(str(e)) from e


def loewner_verify(decomp, body, tol=config.JOHN_RESIDUAL_TOL):
    U, w = decomp.contacts, decomp.weights
    n = U.shape[1]
    sum_res = float(np.linalg.norm(w @ U))
    ident = float(np.linalg.norm(np.einsum("i,ij,ik->jk", w, U, U) - np.eye(n)))
    if isinstance(body, BallHull):
        radius = float(np.linalg.norm(body.center) + body.radius)
    else:
        radius = float(np.max(np.linalg.norm(vertex_form(body), axis=1)))
    supp = abs(radius - 1.0)
    norms = float(np.max(np.abs(np.linalg.norm(U, axis=1) - 1.0)))
    trace = float(abs(w.sum() - n))
    passed = max(sum_res, ident, supp, norms, trace) <= tol and bool(np.all(w > 0))
    return JohnReport(sum_res, ident, supp, norms, trace, passed)


def normalize_loewner(body):
    if isinstance(body, BallHull):
        if body.apexes.shape[0]:
            raise RepresentationUnavailable("Loewner normalization of a ball hull with apexes")
        T = AffineMap(np.eye(body.dim) / body.radius, -body.center / body.radius)
        image = T.apply_body(body)
    else:
        E = mvee(vertex_form(body))
        T = E.to_unit_ball_map()
        image = T.apply_body(body)
    decomp = loewner_decomposition(image)
    return image, PositionCertificate(T, decomp, loewner_verify(decomp, image), position="loewner")
