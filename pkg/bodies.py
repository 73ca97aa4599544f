#!/usr/bin/env python3
"""
Core convex-body types and LP-level queries.

Three body representations share one query surface:
    VPolytope  - convex hull of finitely many points
    HPolytope  - bounded intersection of halfspaces a_i^T x <= b_i
    BallHull   - conv(radius * B^n + center, apexes)

plus the auxiliary value types Ellipsoid, KEllipsoid, Subspace, AffineMap
and the Certificate block that constructions attach to their bodies.
All values are immutable; every query is a pure function.
"""

from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np
import cvxpy as cp
from scipy.linalg import null_space
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection

import config
from errors import (
    DegenerateInput,
    DimensionTooLarge,
    EmptyInterior,
    NoConvergence,
    OriginNotInterior,
    UnboundedBody,
    WrongDimension,
)

log = config.get_logger(__name__)


# === Helpers ===
def _frozen(array):
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


def _dedupe(points, tol=config.DEDUP_TOL):
    """Drop points closer than tol (sup-norm) to an earlier one"""
    kept = []
    for p in points:
        if not any(np.max(np.abs(p - q)) <= tol for q in kept):
            kept.append(p)
    return np.array(kept, dtype=float).reshape(-1, points.shape[1])


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=(None, None)):
    """Run HiGHS and translate non-optimal statuses into package errors"""
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status == 0:
        return res
    if res.status == 2:
        raise EmptyInterior(f"LP infeasible: {res.message}")
    if res.status == 3:
        raise UnboundedBody(f"LP unbounded: {res.message}")
    raise NoConvergence(f"LP failed (status {res.status}): {res.message}")


def chebyshev_center(A, b):
    """Largest Euclidean ball inside {A x <= b}: returns (center, radius)"""
    A = np.asarray(A, float)
    b = np.asarray(b, float)
    m, n = A.shape
    norms = np.linalg.norm(A, axis=1)
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = solve_lp(c, A_ub=np.hstack([A, norms[:, None]]), b_ub=b,
                   bounds=[(None, None)] * n + [(0, None)])
    return res.x[:n], float(res.x[-1])


# === Certificates ===
@dataclass(frozen=True, eq=False)
class Certificate:
    """Machine-checkable metadata a construction attaches to its body"""
    contacts: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    kball: Optional["KEllipsoid"] = None
    enclosing: Optional["HPolytope"] = None
    minkowski_center: Optional[np.ndarray] = None
    minkowski_value: Optional[float] = None
    minkowski_directions: Optional[np.ndarray] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("contacts", "weights", "minkowski_center", "minkowski_directions"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _frozen(value))


# === Bodies ===
@dataclass(frozen=True, eq=False)
class VPolytope:
    vertices: np.ndarray
    certificate: Optional[Certificate] = None
    _hform: Optional[tuple] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise DegenerateInput("vertices must be a list of points")
        pts = _dedupe(pts)
        n = pts.shape[1]
        centered = pts - pts.mean(axis=0)
        scale = max(1.0, float(np.max(np.abs(centered))))
        if pts.shape[0] < n + 1 or np.linalg.matrix_rank(centered, tol=1e-9 * scale) < n:
            raise DegenerateInput(f"vertices do not affinely span R^{n}")
        object.__setattr__(self, "vertices", _frozen(pts))

    @property
    def dim(self):
        return self.vertices.shape[1]

    def facets(self):
        """Cached H-form (A, b) with unit-norm rows"""
        if self._hform is None:
            object.__setattr__(self, "_hform", _hull_halfspaces(self.vertices))
        return self._hform


@dataclass(frozen=True, eq=False)
class HPolytope:
    A: np.ndarray
    b: np.ndarray
    certificate: Optional[Certificate] = None
    _chebyshev: Optional[tuple] = field(default=None, init=False, repr=False)
    _vform: Optional[np.ndarray] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise DegenerateInput("A and b disagree on the number of halfspaces")
        if np.any(np.linalg.norm(A, axis=1) <= 1e-14):
            raise DegenerateInput("halfspace normal is zero")
        n = A.shape[1]
        for j in range(n):
            for sign in (1.0, -1.0):
                e = np.zeros(n)
                e[j] = -sign
                solve_lp(e, A_ub=A, b_ub=b)
        center, radius = chebyshev_center(A, b)
        if radius <= config.INTERIOR_TOL:
            raise EmptyInterior(f"Chebyshev radius {radius:.3g} is not positive")
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "b", _frozen(b))
        object.__setattr__(self, "_chebyshev", (_frozen(center), radius))

    @classmethod
    def trusted(cls, A, b, certificate=None):
        """Skip the boundedness/interior LPs for internally derived forms"""
        obj = object.__new__(cls)
        object.__setattr__(obj, "A", _frozen(np.atleast_2d(A)))
        object.__setattr__(obj, "b", _frozen(np.asarray(b, float).reshape(-1)))
        object.__setattr__(obj, "certificate", certificate)
        object.__setattr__(obj, "_chebyshev", None)
        object.__setattr__(obj, "_vform", None)
        return obj

    @property
    def dim(self):
        return self.A.shape[1]

    @property
    def chebyshev(self):
        if self._chebyshev is None:
            center, radius = chebyshev_center(self.A, self.b)
            object.__setattr__(self, "_chebyshev", (_frozen(center), radius))
        return self._chebyshev

    def facets(self):
        norms = np.linalg.norm(self.A, axis=1)
        return self.A / norms[:, None], self.b / norms

    def vertices(self):
        if self._vform is None:
            object.__setattr__(self, "_vform", _frozen(_enumerate_vertices(self)))
        return self._vform


@dataclass(frozen=True, eq=False)
class BallHull:
    center: np.ndarray
    radius: float
    apexes: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    certificate: Optional[Certificate] = None

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(-1)
        n = center.shape[0]
        radius = float(self.radius)
        if radius <= 0:
            raise DegenerateInput("ball radius must be positive")
        apexes = np.asarray(self.apexes, dtype=float)
        apexes = apexes.reshape(-1, n) if apexes.size else np.zeros((0, n))
        if apexes.shape[0]:
            outside = np.linalg.norm(apexes - center, axis=1) > radius * (1 + 1e-12)
            apexes = _dedupe(apexes[outside]) if outside.any() else np.zeros((0, n))
        object.__setattr__(self, "center", _frozen(center))
        object.__setattr__(self, "radius", radius)
        object.__setattr__(self, "apexes", _frozen(apexes))

    @property
    def dim(self):
        return self.center.shape[0]


ConvexBody = Union[VPolytope, HPolytope, BallHull]


def with_certificate(body, certificate):
    if isinstance(body, HPolytope):
        out = HPolytope.trusted(body.A, body.b, certificate)
        object.__setattr__(out, "_chebyshev", body._chebyshev)
        object.__setattr__(out, "_vform", body._vform)
        return out
    return replace(body, certificate=certificate)


# === Ellipsoids, subspaces, maps ===
@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """{x : (x-c)^T Q (x-c) <= 1}; `contacts` indexes the active points/constraints"""
    center: np.ndarray
    shape: np.ndarray
    contacts: tuple = ()

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(-1)
        Q = np.asarray(self.shape, dtype=float)
        if Q.shape != (c.size, c.size):
            raise WrongDimension("shape must be n x n")
        if np.max(np.abs(Q - Q.T)) > config.SYMMETRY_TOL * max(1.0, np.max(np.abs(Q))):
            raise DegenerateInput("shape matrix is not symmetric")
        Q = 0.5 * (Q + Q.T)
        if np.min(np.linalg.eigvalsh(Q)) <= 0:
            raise DegenerateInput("shape matrix is not positive definite")
        object.__setattr__(self, "center", _frozen(c))
        object.__setattr__(self, "shape", _frozen(Q))
        object.__setattr__(self, "contacts", tuple(int(i) for i in self.contacts))

    @property
    def dim(self):
        return self.center.size

    @property
    def semiaxes(self):
        return 1.0 / np.sqrt(np.linalg.eigvalsh(self.shape))

    def volume_ratio(self):
        """vol(E) / vol(B^n)"""
        return float(np.prod(self.semiaxes))

    def contains(self, points, tol=1e-9):
        d = np.atleast_2d(points) - self.center
        return np.einsum("ij,jk,ik->i", d, self.shape, d) <= 1 + tol

    def to_unit_ball_map(self):
        """Affine map sending E onto B^n"""
        w, U = np.linalg.eigh(self.shape)
        root = U @ np.diag(np.sqrt(w)) @ U.T
        return AffineMap(root, -root @ self.center)

    def polar(self):
        if np.linalg.norm(self.center) > 1e-12:
            raise DegenerateInput("polar ellipsoid needs a centered ellipsoid")
        return Ellipsoid(np.zeros(self.dim), np.linalg.inv(self.shape))


@dataclass(frozen=True, eq=False)
class KEllipsoid:
    """{c + V y : y^T M y <= 1} with V an n x k column-orthonormal carrier"""
    center: np.ndarray
    basis: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(-1)
        V = np.asarray(self.basis, dtype=float).reshape(c.size, -1)
        M = np.asarray(self.shape, dtype=float).reshape(V.shape[1], V.shape[1])
        if np.max(np.abs(V.T @ V - np.eye(V.shape[1]))) > config.ORTHO_TOL:
            raise DegenerateInput("carrier basis is not column-orthonormal")
        M = 0.5 * (M + M.T)
        if np.min(np.linalg.eigvalsh(M)) <= 0:
            raise DegenerateInput("k-ellipsoid shape is not positive definite")
        object.__setattr__(self, "center", _frozen(c))
        object.__setattr__(self, "basis", _frozen(V))
        object.__setattr__(self, "shape", _frozen(M))

    @classmethod
    def ball(cls, center, basis, radius):
        k = np.asarray(basis).reshape(len(center), -1).shape[1]
        return cls(center, basis, np.eye(k) / float(radius) ** 2)

    @property
    def dim(self):
        return self.center.size

    @property
    def k(self):
        return self.basis.shape[1]

    @property
    def semiaxes(self):
        return 1.0 / np.sqrt(np.linalg.eigvalsh(self.shape))

    @property
    def is_ball(self):
        ax = self.semiaxes
        return bool(np.max(ax) - np.min(ax) <= 1e-7 * np.max(ax))

    @property
    def radius(self):
        """Radius of the k-ball with the same k-volume"""
        return float(np.exp(np.mean(np.log(self.semiaxes))))

    def principal_axes(self):
        """(directions n x k, semiaxes) in the ambient space"""
        w, U = np.linalg.eigh(self.shape)
        return self.basis @ U, 1.0 / np.sqrt(w)

    def boundary_points(self, count, seed=config.DEFAULT_SEED):
        rng = np.random.default_rng(seed)
        y = rng.standard_normal((count, self.k))
        y /= np.linalg.norm(y, axis=1)[:, None]
        axes, alpha = self.principal_axes()
        return self.center + (y * alpha) @ axes.T


@dataclass(frozen=True, eq=False)
class Subspace:
    basis: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.basis, dtype=float)
        if V.ndim == 1:
            V = V[:, None]
        if np.max(np.abs(V.T @ V - np.eye(V.shape[1]))) > config.ORTHO_TOL:
            raise DegenerateInput("subspace basis is not column-orthonormal")
        object.__setattr__(self, "basis", _frozen(V))

    @classmethod
    def coordinate(cls, n, indices):
        return cls(np.eye(n)[:, list(indices)])

    @classmethod
    def span(cls, vectors):
        """Orthonormalize the given column vectors"""
        Q, R = np.linalg.qr(np.asarray(vectors, float))
        keep = np.abs(np.diag(R)) > 1e-12
        if not keep.all():
            raise DegenerateInput("spanning vectors are linearly dependent")
        return cls(Q)

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def k(self):
        return self.basis.shape[1]

    def complement(self):
        return Subspace(null_space(self.basis.T))

    def coordinates(self, x):
        return np.asarray(x, float) @ self.basis

    def project(self, x):
        return self.coordinates(x) @ self.basis.T


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> linear @ x + translation"""
    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        L = np.atleast_2d(np.asarray(self.linear, dtype=float))
        t = np.asarray(self.translation, dtype=float).reshape(-1)
        if L.shape != (t.size, t.size):
            raise WrongDimension("linear part must be n x n")
        if abs(np.linalg.det(L)) <= config.DET_TOL:
            raise DegenerateInput("linear part is singular")
        object.__setattr__(self, "linear", _frozen(L))
        object.__setattr__(self, "translation", _frozen(t))

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n), np.zeros(n))

    @property
    def dim(self):
        return self.translation.size

    def __call__(self, points):
        pts = np.asarray(points, float)
        return pts @ self.linear.T + self.translation

    def inverse(self):
        inv = np.linalg.inv(self.linear)
        return AffineMap(inv, -inv @ self.translation)

    def compose(self, inner):
        """self after inner"""
        return AffineMap(self.linear @ inner.linear, self.linear @ inner.translation + self.translation)

    def apply_body(self, body):
        """Image of a body; certificates do not survive a general map"""
        if isinstance(body, VPolytope):
            return VPolytope(self(body.vertices))
        if isinstance(body, HPolytope):
            inv = np.linalg.inv(self.linear)
            A = body.A @ inv
            return HPolytope.trusted(A, body.b + A @ self.translation)
        if isinstance(body, BallHull):
            L = self.linear
            sv = np.linalg.svd(L, compute_uv=False)
            if sv[0] - sv[-1] > 1e-12 * sv[0]:
                raise DegenerateInput("a ball hull maps to a ball hull only under similarities")
            return BallHull(self(body.center), body.radius * sv[0], self(body.apexes) if body.apexes.size else body.apexes)
        raise TypeError(f"unsupported body type {type(body).__name__}")


# === Representation conversion ===
def _hull_halfspaces(points):
    """Facet normals (unit) and offsets of conv(points), duplicates merged"""
    n = points.shape[1]
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([points.max(), -points.min()])
    hull = ConvexHull(points)
    eq = hull.equations
    A, b = eq[:, :-1], -eq[:, -1]
    norms = np.linalg.norm(A, axis=1)
    A, b = A / norms[:, None], b / norms
    rows = _dedupe(np.hstack([A, b[:, None]]), tol=1e-9)
    return rows[:, :-1], rows[:, -1]


def _enumerate_vertices(P):
    n = P.dim
    if n > config.MAX_ENUM_DIM or P.A.shape[0] > config.MAX_ENUM_FACETS:
        raise DimensionTooLarge(
            f"vertex enumeration limited to n <= {config.MAX_ENUM_DIM} and "
            f"<= {config.MAX_ENUM_FACETS} facets (got n={n}, m={P.A.shape[0]})")
    A, b = P.facets()
    if n == 1:
        upper = np.min(b[A[:, 0] > 0] / A[A[:, 0] > 0, 0])
        lower = np.max(b[A[:, 0] < 0] / A[A[:, 0] < 0, 0])
        return np.array([[lower], [upper]])
    center, radius = P.chebyshev
    if radius <= config.INTERIOR_TOL:
        raise EmptyInterior("no interior point for vertex enumeration")
    hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), center)
    return _dedupe(hs.intersections, tol=1e-9)


def v_to_h(P):
    A, b = P.facets()
    return HPolytope.trusted(A, b, P.certificate)


def h_to_v(P):
    return VPolytope(P.vertices(), P.certificate)


def vertex_form(body):
    if isinstance(body, VPolytope):
        return body.vertices
    if isinstance(body, HPolytope):
        return body.vertices()
    raise TypeError("vertex form exists for polytopes only")


def facet_form(body):
    """(A, b) with unit rows for either polytope representation"""
    if isinstance(body, (VPolytope, HPolytope)):
        return body.facets()
    raise TypeError("facet form exists for polytopes only")


# === Queries ===
def supports(body, directions):
    """h_K(a) for each row a of directions"""
    D = np.atleast_2d(np.asarray(directions, dtype=float))
    if isinstance(body, VPolytope):
        return np.max(D @ body.vertices.T, axis=1)
    if isinstance(body, BallHull):
        vals = D @ body.center + body.radius * np.linalg.norm(D, axis=1)
        if body.apexes.shape[0]:
            vals = np.maximum(vals, np.max(D @ body.apexes.T, axis=1))
        return vals
    if isinstance(body, HPolytope):
        if body._vform is not None:
            return np.max(D @ body._vform.T, axis=1)
        return np.array([-solve_lp(-a, A_ub=body.A, b_ub=body.b).fun for a in D])
    raise TypeError(f"unsupported body type {type(body).__name__}")


def support(body, a):
    a = np.asarray(a, dtype=float)
    if not np.any(a):
        raise ValueError("support direction must be nonzero")
    return float(supports(body, a[None, :])[0])


def support_point(body, a):
    """One maximizer of a^T x over the body"""
    a = np.asarray(a, dtype=float)
    if isinstance(body, VPolytope):
        return body.vertices[int(np.argmax(body.vertices @ a))]
    if isinstance(body, HPolytope):
        return solve_lp(-a, A_ub=body.A, b_ub=body.b).x
    ball_pt = body.center + body.radius * a / np.linalg.norm(a)
    if body.apexes.shape[0]:
        i = int(np.argmax(body.apexes @ a))
        if body.apexes[i] @ a > ball_pt @ a:
            return body.apexes[i]
    return ball_pt


def origin_is_interior(body):
    if isinstance(body, HPolytope):
        return bool(np.min(body.b / np.linalg.norm(body.A, axis=1)) > config.INTERIOR_TOL)
    if isinstance(body, VPolytope):
        return bool(np.min(body.facets()[1]) > config.INTERIOR_TOL)
    return bool(np.linalg.norm(body.center) < body.radius - config.INTERIOR_TOL)


def _ball_gauge(center, radius, x):
    xx = float(x @ x)
    if xx == 0.0:
        return 0.0
    cx = float(center @ x)
    t = (cx + np.sqrt(cx * cx - xx * (center @ center - radius ** 2))) / xx
    return 1.0 / t


def gauge(body, x):
    """min{rho >= 0 : x in rho K}; requires the origin strictly inside"""
    x = np.asarray(x, dtype=float)
    if not origin_is_interior(body):
        raise OriginNotInterior("gauge needs the origin in the interior")
    if not np.any(x):
        return 0.0
    if isinstance(body, HPolytope):
        return float(max(0.0, np.max(body.A @ x / body.b)))
    if isinstance(body, VPolytope):
        V = body.vertices
        res = solve_lp(np.ones(V.shape[0]), A_eq=V.T, b_eq=x, bounds=(0, None))
        return float(res.fun)
    if body.apexes.shape[0] == 0:
        return _ball_gauge(body.center, body.radius, x)
    P = body.apexes
    rho = cp.Variable()
    theta = cp.Variable(nonneg=True)
    mu = cp.Variable(P.shape[0], nonneg=True)
    y = cp.Variable(body.dim)
    problem = cp.Problem(cp.Minimize(rho), [
        x == y + P.T @ mu,
        cp.norm(y - theta * body.center) <= theta * body.radius,
        theta + cp.sum(mu) == rho,
    ])
    problem.solve()
    if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise NoConvergence(f"ball-hull gauge SOCP ended with status {problem.status}")
    value = float(rho.value)
    # a lone apex or the ball alone gives exact upper bounds
    candidates = [_ball_gauge(body.center, body.radius, x)]
    for p in P:
        scale = float(p @ x) / float(p @ p)
        if scale > 0 and np.linalg.norm(x - scale * p) <= 1e-12 * np.linalg.norm(x):
            candidates.append(1.0 / scale)
    return min([value] + candidates)


def distance_to(body, x):
    """Euclidean distance from x to the body"""
    x = np.asarray(x, dtype=float)
    if isinstance(body, HPolytope):
        if np.all(body.A @ x <= body.b):
            return 0.0
        z = cp.Variable(body.dim)
        prob = cp.Problem(cp.Minimize(cp.norm(z - x)), [body.A @ z <= body.b])
    else:
        pts = body.vertices if isinstance(body, VPolytope) else body.apexes
        mu = cp.Variable(pts.shape[0], nonneg=True) if pts.shape[0] else None
        if isinstance(body, VPolytope):
            prob = cp.Problem(cp.Minimize(cp.norm(pts.T @ mu - x)), [cp.sum(mu) == 1])
        else:
            if np.linalg.norm(x - body.center) <= body.radius:
                return 0.0
            theta = cp.Variable(nonneg=True)
            y = cp.Variable(body.dim)
            point = y if mu is None else y + pts.T @ mu
            total = theta if mu is None else theta + cp.sum(mu)
            prob = cp.Problem(cp.Minimize(cp.norm(point - x)),
                              [cp.norm(y - theta * body.center) <= theta * body.radius, total == 1])
    prob.solve()
    return max(0.0, float(prob.value))


def contains(body, x, tol=1e-9):
    x = np.asarray(x, dtype=float)
    if isinstance(body, HPolytope):
        return bool(np.all(body.A @ x <= body.b + tol * np.linalg.norm(body.A, axis=1)))
    if isinstance(body, VPolytope):
        A, b = body.facets()
        return bool(np.all(A @ x <= b + tol))
    if np.linalg.norm(x - body.center) <= body.radius + tol:
        return True
    # conic solver accuracy
    return distance_to(body, x) <= max(tol, 1e-7)


def project(body, F):
    """Image of the body in F-coordinates"""
    if body.dim != F.dim:
        raise WrongDimension(f"body in R^{body.dim}, subspace in R^{F.dim}")
    V = F.basis
    if isinstance(body, BallHull):
        apexes = body.apexes @ V if body.apexes.size else np.zeros((0, F.k))
        return BallHull(body.center @ V, body.radius, apexes)
    pts = vertex_form(body) @ V
    if F.k == 1:
        return VPolytope(np.array([[pts.min()], [pts.max()]]))
    return VPolytope(pts[ConvexHull(pts).vertices])


def polar(P):
    """{x : v_i^T x <= 1 for all vertices v_i}"""
    if not origin_is_interior(P):
        raise OriginNotInterior("polar needs the origin in the interior")
    return HPolytope(P.vertices, np.ones(P.vertices.shape[0]))


def circumradius(body, center=None):
    """Smallest rho with body - center inside rho B^n"""
    c = np.zeros(body.dim) if center is None else np.asarray(center, float)
    if isinstance(body, BallHull):
        r = np.linalg.norm(body.center - c) + body.radius
        if body.apexes.shape[0]:
            r = max(r, float(np.max(np.linalg.norm(body.apexes - c, axis=1))))
        return float(r)
    return float(np.max(np.linalg.norm(vertex_form(body) - c, axis=1)))


def diameter_pair(body):
    """(D, x, y) with x, y in the body realizing the Euclidean diameter"""
    if isinstance(body, BallHull):
        c, r = body.center, body.radius
        best = (2 * r, None, None)
        for p in body.apexes:
            d = np.linalg.norm(p - c)
            if d + r > best[0]:
                best = (d + r, p, c - r * (p - c) / d)
        m = body.apexes.shape[0]
        for i in range(m):
            for j in range(i + 1, m):
                d = np.linalg.norm(body.apexes[i] - body.apexes[j])
                if d > best[0]:
                    best = (d, body.apexes[i], body.apexes[j])
        if best[1] is None:
            e = np.zeros(body.dim)
            e[0] = r
            best = (2 * r, c + e, c - e)
        return float(best[0]), best[1], best[2]
    pts = vertex_form(body)
    diff = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
    return float(diff[i, j]), pts[i], pts[j]


# === Direction sweeps ===
_ICOSAHEDRON_FACES = [
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
]


def icosphere(level):
    """Unit vertices of the icosahedron subdivided `level` times"""
    t = (1 + 5 ** 0.5) / 2
    verts = [np.array(v, float) for v in [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]]
    verts = [v / np.linalg.norm(v) for v in verts]
    faces = list(_ICOSAHEDRON_FACES)
    for _ in range(level):
        cache = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        refined = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            refined += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = refined
    return np.array(verts)


def sphere_directions(n, seed=config.DEFAULT_SEED, count=None):
    """Deterministic unit-direction sample used by sweeps and sampled checks"""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        m = count or config.SWEEP_ANGLES_2D
        theta = 2 * np.pi * np.arange(m) / m
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if n == 3 and count is None:
        return icosphere(config.SWEEP_ICOSPHERE_LEVEL)
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((count or config.SWEEP_RANDOM_HIGH_DIM, n))
    return pts / np.linalg.norm(pts, axis=1)[:, None]


def hausdorff_distance(K, L, directions=None):
    """sup over unit directions of |h_K - h_L|"""
    D = sphere_directions(K.dim) if directions is None else directions
    return float(np.max(np.abs(supports(K, D) - supports(L, D))))
