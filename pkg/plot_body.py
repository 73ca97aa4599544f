#!/usr/bin/env python3
"""
SVG plot of a planar body: outline, unit circle, John contacts and any
attached k-ball
"""

import numpy as np
import matplotlib
matplotlib.use('Agg')  # Use non-interactive backend
import matplotlib.pyplot as plt
from scipy.spatial import ConvexHull

import config
from bodies import BallHull, Ellipsoid, vertex_form
from ellipsoid_engine import john_decomposition
from errors import GeometryError, WrongDimension

log = config.get_logger(__name__)

OUTLINE_SAMPLES = 720


def outline(body):
    """Closed boundary polyline, counterclockwise"""
    if isinstance(body, Ellipsoid):
        theta = np.linspace(0, 2 * np.pi, OUTLINE_SAMPLES + 1)
        w, U = np.linalg.eigh(body.shape)
        circle = np.column_stack([np.cos(theta), np.sin(theta)])
        return body.center + (circle / np.sqrt(w)) @ U.T
    if isinstance(body, BallHull):
        theta = np.linspace(0, 2 * np.pi, OUTLINE_SAMPLES, endpoint=False)
        pts = body.center + body.radius * np.column_stack([np.cos(theta), np.sin(theta)])
        pts = np.vstack([pts, body.apexes]) if body.apexes.shape[0] else pts
    else:
        pts = vertex_form(body)
    hull = ConvexHull(pts)
    ring = pts[hull.vertices]
    return np.vstack([ring, ring[:1]])


def plot2d(body, output):
    if body.dim != 2:
        raise WrongDimension(f"plot2d draws planar bodies only (got n = {body.dim})")

    fig, ax = plt.subplots(figsize=(7, 7))

    ring = outline(body)
    ax.fill(ring[:, 0], ring[:, 1], color='tab:blue', alpha=0.15)
    ax.plot(ring[:, 0], ring[:, 1], color='tab:blue', linewidth=2, label='body')

    theta = np.linspace(0, 2 * np.pi, OUTLINE_SAMPLES + 1)
    ax.plot(np.cos(theta), np.sin(theta), color='gray', linestyle='--', linewidth=1, label='unit circle')

    if not isinstance(body, Ellipsoid):
        try:
            contacts = john_decomposition(body).contacts
            ax.scatter(contacts[:, 0], contacts[:, 1], color='tab:red', zorder=3, s=30, label='John contacts')
        except GeometryError as e:
            log.warning("no John contacts drawn: %s", e)

    cert = getattr(body, "certificate", None)
    if cert is not None and cert.kball is not None:
        E = cert.kball
        if E.k == 1:
            half = E.semiaxes[0] * E.basis[:, 0]
            seg = np.vstack([E.center - half, E.center + half])
            ax.plot(seg[:, 0], seg[:, 1], color='tab:green', linewidth=3, label='k-ball')
        else:
            pts = E.boundary_points(OUTLINE_SAMPLES)
            ax.plot(pts[:, 0], pts[:, 1], '.', color='tab:green', markersize=1, label='k-ball')
        ax.scatter([E.center[0]], [E.center[1]], color='tab:green', marker='x', zorder=3)

    ax.set_aspect('equal')
    ax.grid(True, alpha=0.3)
    ax.legend(loc='upper right', fontsize=9)
    ax.set_title(f'{type(body).__name__}', fontsize=14, fontweight='bold')

    plt.tight_layout()
    fig.savefig(output, format='svg', bbox_inches='tight')
    plt.close(fig)
    log.info("plot saved to %s", output)
    return output
