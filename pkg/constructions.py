#!/usr/bin/env python3
"""
Extremal bodies and scalar functions, each shipped with its certificate.

Index conventions: the orthonormal frame v^1..v^n is the standard basis,
the distinguished axis v^n is e_{n-1}, and index sets J are 0-based
subsets of {0, ..., n-2}.
"""

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.spatial import ConvexHull

import config
from bodies import BallHull, Certificate, HPolytope, KEllipsoid, Subspace, VPolytope
from errors import ContainmentViolated, DomainError, ParameterOutOfRange

log = config.get_logger(__name__)

EDGE_TOL = 1e-12


@dataclass(frozen=True)
class ScalarParams:
    n: int
    k: int = 1
    s: float = 1.0
    t: float = 0.0
    tau: float = 1.0
    J: tuple = ()

    def __post_init__(self):
        _check_nk(self.n, self.k)
        _check_interval("s", self.s, 1.0, self.n)
        _check_interval("t", self.t, 0.0, 2.0)
        J = _check_index_set(self.J, self.n)
        _check_interval("tau", self.tau, tau_lower(len(J), self.n), 1.0)
        object.__setattr__(self, "J", J)


def _check_nk(n, k):
    if n < 2:
        raise ParameterOutOfRange(f"n must be at least 2 (got {n})")
    if not 1 <= k <= n - 1:
        raise ParameterOutOfRange(f"k must lie in [1, {n - 1}] (got {k})")


def _check_interval(name, value, lo, hi, error=ParameterOutOfRange):
    if not lo - EDGE_TOL <= value <= hi + EDGE_TOL:
        raise error(f"{name}={value!r} outside [{lo:.12g}, {hi:.12g}]")


def _check_index_set(J, n):
    J = tuple(sorted(set(int(j) for j in J)))
    if any(j < 0 or j > n - 2 for j in J):
        raise ParameterOutOfRange(f"index set {J} not inside {{0..{n - 2}}}")
    return J


def s_threshold(n, k):
    """s_{n,k} = 2(n+1)/(k+1) - 1, where Ball's bound takes over"""
    _check_nk(n, k)
    return 2 * (n + 1) / (k + 1) - 1


def tau_lower(size, n):
    return np.sqrt((n - size) / ((size + 1) * n))


# === Scalar functions ===
def D_s(s):
    """Sharp planar diameter bound for John asymmetry s"""
    _check_interval("s", s, 1.0, 2.0, DomainError)
    return float(np.sqrt(s ** 2 + 5 + np.sqrt(4 * (2 - s) ** 2 + (s ** 2 - 1) ** 2)))


def xi_star(s):
    _check_interval("s", s, 1.0, 2.0, DomainError)
    return float(np.sqrt(D_s(s) ** 2 / 2 - 2))


def f_s(s, xi):
    _check_interval("s", s, 1.0, 2.0, DomainError)
    if xi <= s:
        raise DomainError(f"f_s needs xi > s (got xi={xi!r}, s={s!r})")
    return float(xi ** 2 + (2 - s) ** 2 / (xi ** 2 - s ** 2))


def zeta(n, k, s):
    _check_nk(n, k)
    _check_interval("s", s, 1.0, 1 + 2 / n, DomainError)
    gap = 1 + 2 / n - s
    return float(np.sqrt((2 * gap - (s ** 2 - 1)) ** 2 + 8 * gap * (s ** 2 - 1) * (n - k) / n))


def mu(n, k, s):
    z = zeta(n, k, s)
    return float(n / (8 * (k + 1)) * (n * (s - 1) ** 2 + 4 * k * (s + 1) + 4 + n * z))


def tau(n, k, m):
    """Nonnegative root t of (t sqrt(m-n) - 1)^2 = m (1 - t^2) / k"""
    _check_nk(n, k)
    _check_interval("mu", m, n, n + 1, DomainError)
    e = max(m - n, 0.0)
    denom = k * e + m
    return float((k * np.sqrt(e) + np.sqrt((k * e + m - k) * m)) / denom)


# === Regular bodies ===
def _simplex_frame(n):
    """Unit vertices of a regular simplex (columns) with pairwise products -1/n"""
    H = null_space(np.ones((1, n + 1)))
    return np.sqrt((n + 1) / n) * H.T


def regular_body(kind, n, position="john"):
    if n < 2:
        raise ParameterOutOfRange("regular bodies need n >= 2")
    if position not in ("john", "loewner"):
        raise ParameterOutOfRange(f"unknown position {position!r}")
    if kind == "cube":
        half = 1.0 if position == "john" else 1 / np.sqrt(n)
        return VPolytope(half * np.array(list(itertools.product((-1.0, 1.0), repeat=n))))
    if kind == "cross-polytope":
        scale = np.sqrt(n) if position == "john" else 1.0
        return VPolytope(scale * np.vstack([np.eye(n), -np.eye(n)]))
    if kind == "simplex":
        scale = float(n) if position == "john" else 1.0
        return VPolytope(scale * _simplex_frame(n).T)
    raise ParameterOutOfRange(f"unknown regular body {kind!r}")


def _harmonic_rows(N, k, zero_sum):
    """k x N orthonormal rows with equal column norms sqrt(k/N), or None"""
    rows = []
    grid = np.arange(N)
    for j in range(1, k // 2 + 1):
        angle = 2 * np.pi * j * grid / N
        rows += [np.sqrt(2 / N) * np.cos(angle), np.sqrt(2 / N) * np.sin(angle)]
    if k % 2:
        if not zero_sum:
            rows.append(np.ones(N) / np.sqrt(N))
        elif N % 2 == 0:
            rows.append((-1.0) ** grid / np.sqrt(N))
        else:
            return None
    return np.array(rows)


def _equal_norm_rows(T, k, target, seed=config.DEFAULT_SEED, iterations=20000):
    """Alternating projection for W (k x n, orthonormal rows) with ||W t_i||^2 = target"""
    rng = np.random.default_rng(seed)
    n = T.shape[0]
    W = np.linalg.qr(rng.standard_normal((n, k)))[0].T
    for _ in range(iterations):
        Y = W @ T
        Y = Y * (np.sqrt(target) / np.linalg.norm(Y, axis=0))
        U, _, Vt = np.linalg.svd(Y @ T.T, full_matrices=False)
        W = U @ Vt
        if np.max(np.abs(np.sum((W @ T) ** 2, axis=0) - target)) < 1e-14:
            break
    err = np.max(np.abs(np.sum((W @ T) ** 2, axis=0) - target))
    if err > 1e-12:
        raise ParameterOutOfRange(f"no equal-norm projection found (residual {err:.2e})")
    return W


def _rotation_with_rows(W):
    return np.vstack([W, null_space(W).T])


def aligned_regulars(n, k, include_simplex=True):
    """Cross-polytope, cube and simplex in Loewner position whose outer
    k-radius sqrt(k/n) is attained on span{e_1..e_k}"""
    _check_nk(n, k)
    out = {"cube": regular_body("cube", n, "loewner")}
    W = _harmonic_rows(n, k, zero_sum=False)
    out["cross-polytope"] = VPolytope(np.vstack([_rotation_with_rows(W).T, -_rotation_with_rows(W).T]))
    if include_simplex:
        T = _simplex_frame(n)
        R = _harmonic_rows(n + 1, k, zero_sum=True)
        if R is not None:
            Wt = R @ null_space(np.ones((1, n + 1)))
        elif k in (1, n - 1):
            raise ParameterOutOfRange(f"no common {k}-space for the simplex when n={n} is even")
        else:
            Wt = _equal_norm_rows(T, k, k / n)
        out["simplex"] = VPolytope((_rotation_with_rows(Wt) @ T).T)
    return out


def outer_family(n, t, k=1):
    """Continuous cross-polytope -> cube -> simplex interpolation in Loewner position"""
    _check_interval("t", t, 0.0, 2.0)
    bodies = aligned_regulars(n, k, include_simplex=t > 1)
    P1, Pinf = bodies["cross-polytope"].vertices, bodies["cube"].vertices
    if t <= 0.5:
        pts = np.vstack([P1, 2 * t * Pinf])
    elif t <= 1.0:
        pts = np.vstack([2 * (1 - t) * P1, Pinf])
    else:
        T = bodies["simplex"].vertices
        if t <= 1.5:
            pts = np.vstack([Pinf, 2 * (t - 1) * T])
        else:
            pts = np.vstack([2 * (2 - t) * Pinf, T])
    pts = pts[np.linalg.norm(pts, axis=1) > 1e-15]
    body = VPolytope(pts)
    return VPolytope(body.vertices[ConvexHull(body.vertices).vertices],
                     Certificate(params={"family": "outer", "n": n, "k": k, "t": t}))


# === Certified polyhedra and ball hulls ===
def construction_polytope(J, tau_value, n):
    """P(J, tau) with its analytic John decomposition"""
    if n < 2:
        raise ParameterOutOfRange("n must be at least 2")
    J = _check_index_set(J, n)
    size = len(J)
    _check_interval("tau", tau_value, tau_lower(size, n), 1.0)
    t = min(max(tau_value, tau_lower(size, n)), 1.0)
    rest = [j for j in range(n - 1) if j not in J]
    a_vectors = []
    for delta in itertools.product((-1.0, 1.0), repeat=size):
        a = np.zeros(n)
        if size:
            a[list(J)] = np.array(delta) * np.sqrt((1 - t ** 2) / size)
        a[n - 1] = t
        a_vectors.append(a)
    cJ = np.sqrt(max(((size + 1) * n * t ** 2 + size - n) / (size * n ** 2 * t ** 2), 0.0)) if size else 0.0
    cR = np.sqrt(n * t ** 2 + 1) / (n * t)
    b_vectors = []
    for sigma in itertools.product((-1.0, 1.0), repeat=n - 1):
        b = np.zeros(n)
        sigma = np.array(sigma)
        if size:
            b[list(J)] = sigma[list(J)] * cJ
        if rest:
            b[rest] = sigma[rest] * cR
        b[n - 1] = -1 / (n * t)
        b_vectors.append(b)
    lam_a = n / (2 ** size * (n * t ** 2 + 1))
    lam_b = n ** 2 * t ** 2 / (2 ** (n - 1) * (n * t ** 2 + 1))
    U, w = _merge_contacts(np.vstack(a_vectors + b_vectors),
                           np.array([lam_a] * len(a_vectors) + [lam_b] * len(b_vectors)))
    cert = Certificate(contacts=U, weights=w, params={"family": "construction-polytope", "J": list(J), "tau": t})
    return HPolytope(U, np.ones(U.shape[0]), cert)


def _merge_contacts(U, w):
    keep, weights = [], []
    for u, lam in zip(U, w):
        for i, v in enumerate(keep):
            if np.max(np.abs(u - v)) <= 1e-12:
                weights[i] += lam
                break
        else:
            keep.append(u)
            weights.append(lam)
    return np.array(keep), np.array(weights)


def _check_kball_in_hpolytope(P, E):
    A, b = P.facets()
    reach = A @ E.center + np.sqrt(np.einsum("ij,jk,ik->i", A @ E.basis, np.linalg.inv(E.shape), A @ E.basis))
    worst = float(np.max(reach - b))
    if worst > 1e-9:
        raise ContainmentViolated(f"k-ball leaves the polytope by {worst:.3e}")
    return worst


def high_asym_body(n, k, s):
    """T cap (-sT) with the inscribed ball of a k-face of T"""
    _check_nk(n, k)
    _check_interval("s", s, s_threshold(n, k), n)
    X = regular_body("simplex", n, "john").vertices
    K_A = np.vstack([-X, X])
    K_b = np.concatenate([np.full(n + 1, float(n)), np.full(n + 1, s * n)])
    center = X[:k + 1].mean(axis=0)
    carrier = Subspace.span((X[:k] - X[k]).T)
    E = KEllipsoid.ball(center, carrier.basis, np.sqrt(n * (n + 1) / (k * (k + 1))))
    cert = Certificate(contacts=-X / n, weights=np.full(n + 1, n / (n + 1)), kball=E,
                       params={"family": "high-asym", "n": n, "k": k, "s": s})
    K = HPolytope(K_A, K_b, cert)
    _check_kball_in_hpolytope(K, E)
    return K, E


def _apex_shape(n, k, s, rho, height):
    c = np.zeros(n)
    c[n - 1] = height
    apexes = []
    for j in range(k):
        e = np.zeros(n)
        e[j] = rho
        apexes += [c + e, c - e, -c / s + e / s, -c / s - e / s]
    return c, np.array(apexes)


def _ball_hull_with(n, k, apexes, c, rho, P, params):
    E = KEllipsoid.ball(c, np.eye(n)[:, :k], rho / np.sqrt(k))
    cert = Certificate(contacts=P.certificate.contacts, weights=P.certificate.weights,
                       kball=E, enclosing=P, params=params)
    return BallHull(np.zeros(n), 1.0, apexes, cert), E


def mid_asym_body(n, k, s):
    _check_nk(n, k)
    _check_interval("s", s, 1 + 2 / n, s_threshold(n, k))
    rho = np.sqrt(n * (s + 1) / 2)
    c, apexes = _apex_shape(n, k, s, rho, np.sqrt(max(n * (s - 1) / 2, 0.0)))
    tau_value = min(1.0, np.sqrt(2 / (n * (s - 1))))
    P = construction_polytope(range(k, n - 1), tau_value, n)
    return _ball_hull_with(n, k, apexes, c, rho, P, {"family": "mid-asym", "n": n, "k": k, "s": s})


def small_asym_body(n, k, s):
    _check_nk(n, k)
    _check_interval("s", s, 1.0, 1 + 2 / n)
    m = mu(n, k, min(max(s, 1.0), 1 + 2 / n))
    rho = np.sqrt(m)
    c, apexes = _apex_shape(n, k, s, rho, np.sqrt(max(m - n, 0.0)))
    P = construction_polytope(range(k), tau(n, k, m), n)
    return _ball_hull_with(n, k, apexes, c, rho, P, {"family": "small-asym", "n": n, "k": k, "s": s})


def asym_body(n, k, s):
    """Dispatch to the small/mid/high family owning s; the shared endpoint 1+2/n goes to small"""
    if s <= 1 + 2 / n + EDGE_TOL:
        return small_asym_body(n, k, s)
    if s <= s_threshold(n, k) + EDGE_TOL:
        return mid_asym_body(n, k, s)
    return high_asym_body(n, k, s)


def rounding_body(n, s):
    """conv(B^n, -sqrt(ns) v, sqrt(n/s) v): farthest point at sqrt(ns)"""
    if n < 2:
        raise ParameterOutOfRange("n must be at least 2")
    _check_interval("s", s, 1.0, n)
    v = np.eye(n)[n - 1]
    P = construction_polytope(range(n - 1), np.sqrt(s / n), n)
    root = 1 / np.sqrt(n * s)
    side = np.sqrt(max(1 - root ** 2, 0.0))
    dirs = [-v]
    for j in range(n - 1):
        e = np.eye(n)[j]
        dirs += [root * v + side * e, root * v - side * e]
    cert = Certificate(
        contacts=P.certificate.contacts, weights=P.certificate.weights, enclosing=P,
        minkowski_center=-np.sqrt(n * s) * (s - 1) / (3 * s + 1) * v,
        minkowski_value=2 * s / (s + 1),
        minkowski_directions=np.array(dirs),
        params={"family": "rounding", "n": n, "s": s})
    return BallHull(np.zeros(n), 1.0, np.array([-np.sqrt(n * s) * v, np.sqrt(n / s) * v]), cert)


def spike_body(n, s):
    """conv(B^n, -s v): John asymmetry s with circumradius s"""
    if n < 2:
        raise ParameterOutOfRange("n must be at least 2")
    _check_interval("s", s, 1.0, n)
    P = construction_polytope(range(n - 1), 1.0, n)
    v = np.eye(n)[n - 1]
    cert = Certificate(contacts=P.certificate.contacts, weights=P.certificate.weights, enclosing=P,
                       params={"family": "spike", "n": n, "s": s})
    return BallHull(np.zeros(n), 1.0, np.array([-s * v]), cert)


FAMILIES = ("simplex", "cube", "cross-polytope", "outer", "construction-polytope",
            "high-asym", "mid-asym", "small-asym", "rounding", "spike")


def construct(family, n, k=1, s=1.0, t=0.0, tau_value=None, J=None, position="john"):
    """Single entry point used by the CLI"""
    if family in ("simplex", "cube", "cross-polytope"):
        return regular_body(family, n, position)
    if family == "outer":
        return outer_family(n, t, k)
    if family == "construction-polytope":
        J = tuple(range(n - 1)) if J is None else J
        return construction_polytope(J, 1.0 if tau_value is None else tau_value, n)
    if family == "high-asym":
        return high_asym_body(n, k, s)[0]
    if family == "mid-asym":
        return mid_asym_body(n, k, s)[0]
    if family == "small-asym":
        return small_asym_body(n, k, s)[0]
    if family == "rounding":
        return rounding_body(n, s)
    if family == "spike":
        return spike_body(n, s)
    raise ParameterOutOfRange(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
