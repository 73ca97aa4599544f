#!/usr/bin/env python3
"""
Shared settings for the convex-body toolkit.

Every solver reads its defaults from here; callers override per call
through keyword arguments (eps=, tol=, seed=).
"""

import os
import logging

# === CONFIGURATION ===
DEDUP_TOL = 1e-12            # vertex / apex merging (absolute)
ORTHO_TOL = 1e-10            # column-orthonormality of carriers
SYMMETRY_TOL = 1e-12         # ellipsoid shape symmetry
DET_TOL = 1e-12              # |det| floor for affine maps
INTERIOR_TOL = 1e-9          # Chebyshev radius floor / origin interiority

MAX_ENUM_DIM = 6             # H-to-V conversion limits
MAX_ENUM_FACETS = 64

MVEE_EPS = 1e-9
MVEE_MAX_ITER = 10**6
MVEE_POLISH_EPS = 1e-13

KKT_TOL = 1e-8
CONTACT_TOL = 1e-6
WEIGHT_PRUNE = 1e-10
JOHN_RESIDUAL_TOL = 1e-6
NNLS_RESIDUAL_TOL = 1e-6

BOUND_TOL = 1e-7
NEAR_EQUALITY_REL = 1e-6

# Sphere sweeps used for sampled checks
SWEEP_ANGLES_2D = 4096
SWEEP_ICOSPHERE_LEVEL = 5
SWEEP_RANDOM_HIGH_DIM = 20000

AFFINE_RESTARTS = 50
INNER_SEARCH_RESTARTS = 50
KRADIUS_RESTARTS = 40

DEFAULT_SEED = 20240607
LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


def worker_count():
    """Pool size for suite runs, capped by GEO_THREADS"""
    raw = os.environ.get("GEO_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            get_logger(__name__).warning("ignoring GEO_THREADS=%r (not an integer)", raw)
    return os.cpu_count() or 1


_configured = False


def get_logger(name):
    global _configured
    if not _configured:
        level = os.environ.get("GEO_LOG_LEVEL", "WARNING").upper()
        logging.basicConfig(level=getattr(logging, level, logging.WARNING), format=LOG_FORMAT)
        _configured = True
    return logging.getLogger(name)


def set_verbosity(count):
    """Map CLI -v counts onto log levels"""
    level = logging.WARNING
    if count == 1:
        level = logging.INFO
    elif count >= 2:
        level = logging.DEBUG
    get_logger(__name__)
    logging.getLogger().setLevel(level)
