#!/usr/bin/env python3
"""
Seeded random bodies in John position for randomized theorem checks.
"""

import numpy as np

import config
from bodies import Certificate, HPolytope, VPolytope
from constructions import construction_polytope, regular_body, tau_lower
from ellipsoid_engine import JohnDecomposition, john_verify, normalize_john
from errors import GenerationFailed, GeometryError, ParameterOutOfRange

log = config.get_logger(__name__)

MAX_ATTEMPTS = 100
GENERATORS = ("vpolytope", "construction")


def _random_vpolytope(n, complexity, rng):
    pts = rng.standard_normal((n + 1 + complexity, n))
    image, cert = normalize_john(VPolytope(pts))
    if not cert.residuals.passed:
        raise GeometryError("normalized body misses the John residual tolerance")
    return image


def _random_construction(n, complexity, rng):
    """P(J, tau) cut by extra halfspaces at distance >= 1 from the origin"""
    J = tuple(int(j) for j in np.flatnonzero(rng.random(n - 1) < 0.5))
    lo = tau_lower(len(J), n)
    base = construction_polytope(J, float(rng.uniform(lo, 1.0)), n)
    extra = rng.standard_normal((complexity, n))
    extra /= np.linalg.norm(extra, axis=1)[:, None]
    offsets = rng.uniform(1.0, 2.0, complexity)
    body = HPolytope(np.vstack([base.A, extra]), np.concatenate([base.b, offsets]),
                     Certificate(contacts=base.certificate.contacts, weights=base.certificate.weights,
                                 params=dict(base.certificate.params, extra=complexity)))
    analytic = JohnDecomposition(body.certificate.contacts, body.certificate.weights)
    if not john_verify(analytic, body).passed:
        raise GeometryError("extra halfspaces broke the John decomposition")
    return body


def random_john_body(n, complexity=4, seed=config.DEFAULT_SEED, generator="vpolytope"):
    """Random body in John position; complexity 0 gives the cube"""
    if n < 2 or n > config.MAX_ENUM_DIM:
        raise ParameterOutOfRange(f"random bodies need 2 <= n <= {config.MAX_ENUM_DIM}")
    if generator not in GENERATORS:
        raise ParameterOutOfRange(f"unknown generator {generator!r}")
    if complexity == 0:
        return regular_body("cube", n, "john")
    rng = np.random.default_rng(seed)
    build = _random_vpolytope if generator == "vpolytope" else _random_construction
    for attempt in range(MAX_ATTEMPTS):
        try:
            return build(n, complexity, rng)
        except GeometryError as e:
            log.debug("attempt %d rejected: %s", attempt, e)
    raise GenerationFailed(f"no John-position body after {MAX_ATTEMPTS} attempts (n={n}, seed={seed})")
