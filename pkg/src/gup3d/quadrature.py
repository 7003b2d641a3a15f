"""Quadrature rules as flat (points, weights) pairs.

Closed-form states are integrated on rules adapted to a Gaussian envelope
``exp(-|p - c|^2 / (4 tau^2))``: spherical when the envelope is centred at the
origin, cylindrical about the direction of ``c`` when it is isotropic, and a
tensor product of composite Gauss-Legendre panels otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

NODES_PER_PANEL = 8
# Envelope widths kept on each side of the centre (exp(-36) cut-off) ...
ENVELOPE_WIDTHS = 12.0
# ... and the fraction of the distance to the nearest complex singularity used
# as a panel width (8-node panels then reach about 1e-12 relative accuracy).
PANEL_FRACTION = 0.5
# Panel width in envelope widths.
PANEL_WIDTHS = 2.0
N_MU = 4
N_PHI = 8


@dataclass(frozen=True)
class Rule:
    points: np.ndarray  # (N, d)
    weights: np.ndarray  # (N,)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.weights.shape[0]


@lru_cache(maxsize=None)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def panel_edges(lo: float, hi: float, width: float, strip: float = math.inf) -> np.ndarray:
    """Panel edges on [lo, hi] of at most ``width``.

    With a finite ``strip`` the integrand is assumed analytic except at
    distance sqrt(x^2 + strip^2) from a real point x (the complex zeros of
    G and H as functions of |p|^2), so panels may widen away from the origin.
    """
    if not math.isfinite(strip):
        n = max(1, int(math.ceil((hi - lo) / width - 1e-9)))
        return np.linspace(lo, hi, n + 1)
    edges = [lo]
    x = lo
    while hi - x > 1e-12 * max(1.0, abs(hi)):
        w = width
        for _ in range(60):
            near = 0.0 if x < 0.0 < x + w else min(abs(x), abs(x + w))
            w_new = min(width, PANEL_FRACTION * math.hypot(near, strip))
            if w_new >= w * (1.0 - 1e-12):
                break
            w = w_new
        x = min(x + w, hi)
        if hi - x < 0.05 * w:
            x = hi
        edges.append(x)
    return np.array(edges)


def gl_panels(lo: float, hi: float, width: float, nodes: int = None, strip: float = math.inf):
    """Composite Gauss-Legendre nodes and weights on [lo, hi]."""
    edges = panel_edges(lo, hi, width, strip)
    t, w = _leggauss(NODES_PER_PANEL if nodes is None else nodes)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wx = (half[:, None] * w[None, :]).ravel()
    return x, wx


def trapezoid_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def tensor_rule(axes_nodes) -> Rule:
    """Tensor product of 1D (nodes, weights) pairs."""
    xs = [a[0] for a in axes_nodes]
    ws = [a[1] for a in axes_nodes]
    grids = np.meshgrid(*xs, indexing="ij")
    wgrid = ws[0]
    for w in ws[1:]:
        wgrid = np.multiply.outer(wgrid, w)
    points = np.stack([g.ravel() for g in grids], axis=1)
    return Rule(points, np.asarray(wgrid).ravel())


def spherical_rule(radius: float, panel: float, strip: float = math.inf, n_mu: int = N_MU, n_phi: int = N_PHI) -> Rule:
    """Ball of given radius about the origin: radial panels x (mu, phi) product."""
    r, wr = gl_panels(0.0, radius, panel, strip=strip)
    mu, wmu = _leggauss(n_mu)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    s = np.sqrt(1.0 - mu**2)
    dirs = np.stack(
        [np.repeat(mu, n_phi), np.outer(s, np.cos(phi)).ravel(), np.outer(s, np.sin(phi)).ravel()],
        axis=1,
    )
    wdir = np.repeat(wmu, n_phi) * (2.0 * np.pi / n_phi)
    points = (r[:, None, None] * dirs[None, :, :]).reshape(-1, 3)
    weights = ((wr * r**2)[:, None] * wdir[None, :]).ravel()
    return Rule(points, weights)


def _frame(axis):
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    trial = np.eye(3)[int(np.argmin(np.abs(u)))]
    a = trial - u * (trial @ u)
    a /= np.linalg.norm(a)
    b = np.cross(u, a)
    return u, a, b


def cylindrical_rule(
    axis, z_lo: float, z_hi: float, rho_max: float, panel: float, strip: float = math.inf, n_phi: int = N_PHI
) -> Rule:
    """Cylinder about the unit direction ``axis`` through the origin."""
    u, a, b = _frame(axis)
    z, wz = gl_panels(z_lo, z_hi, panel, strip=strip)
    rho, wrho = gl_panels(0.0, rho_max, panel, strip=strip)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    ring = np.cos(phi)[:, None] * a + np.sin(phi)[:, None] * b  # (n_phi, 3)
    disk = (rho[:, None, None] * ring[None, :, :]).reshape(-1, 3)
    wdisk = np.repeat(wrho * rho, n_phi) * (2.0 * np.pi / n_phi)
    points = (z[:, None, None] * u[None, None, :] + disk[None, :, :]).reshape(-1, 3)
    weights = (wz[:, None] * wdisk[None, :]).ravel()
    return Rule(points, weights)


def envelope_rule(center, tau, growth: float = 0.0, strip: float = math.inf, cap: float = math.inf) -> Rule:
    """Rule for integrands ~ poly(p) f(|p|) exp(-|p-c|^2/(4 tau^2)).

    ``growth`` is the exponential growth rate of f in |p| (shifts the mass
    outwards), ``strip`` the distance from the origin to the nearest complex
    singularity of f in |p| (limits the panel width, see :func:`panel_edges`)
    and ``cap`` a radius beyond which the rule is not extended.
    """
    c = np.asarray(center, dtype=float)
    t = np.broadcast_to(np.asarray(tau, dtype=float), c.shape)
    dim = c.shape[0]
    reach = ENVELOPE_WIDTHS * t + 2.0 * growth * t**2
    panel = PANEL_WIDTHS * t
    iso = dim == 3 and np.ptp(t) <= 1e-12 * t.max()
    cnorm = float(np.linalg.norm(c))
    if iso and cnorm <= 1e-12 * t[0]:
        return spherical_rule(min(reach[0], cap), panel[0], strip)
    if iso:
        z_hi = min(cnorm + reach[0], cap)
        z_lo = max(cnorm - reach[0], -cap)
        return cylindrical_rule(c, z_lo, z_hi, min(reach[0], cap), panel[0], strip)
    nodes = []
    for k in range(dim):
        lo = max(c[k] - reach[k], -cap)
        hi = min(c[k] + reach[k], cap)
        nodes.append(gl_panels(lo, hi, panel[k], strip=strip))
    return tensor_rule(nodes)


def box_rule(centers, taus, growth: float = 0.0, strip: float = math.inf, cap: float = math.inf) -> Rule:
    """Tensor rule covering several envelopes (rows of ``centers`` / ``taus``).

    Each axis spans the union of the per-envelope reaches of
    :func:`envelope_rule` and uses the narrowest envelope's panel width.
    """
    c = np.atleast_2d(np.asarray(centers, dtype=float))
    t = np.broadcast_to(np.asarray(taus, dtype=float), c.shape)
    reach = ENVELOPE_WIDTHS * t + 2.0 * growth * t**2
    lo = np.maximum(np.min(c - reach, axis=0), -cap)
    hi = np.minimum(np.max(c + reach, axis=0), cap)
    panel = PANEL_WIDTHS * np.min(t, axis=0)
    return tensor_rule([gl_panels(lo[k], hi[k], panel[k], strip=strip) for k in range(c.shape[1])])
