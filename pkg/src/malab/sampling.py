"""Deterministic point and direction sampling utilities.

Everything here is reproducible with no hidden state: Halton sequences are
unscrambled, direction sets come from golden-angle / Fibonacci lattices, and
any use of pseudo-randomness takes an explicit seed.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc

from .errors import ParameterError

# Golden ratio; the lattice constructions below rely on its equidistribution.
_PHI = (1.0 + np.sqrt(5.0)) / 2.0


def halton(n_points: int, dim: int, *, skip: int = 0) -> np.ndarray:
    """Unscrambled Halton sequence in the unit cube.

    Parameters
    ----------
    n_points : int
        Number of points to generate.
    dim : int
        Dimension of the cube.
    skip : int, optional
        Number of initial sequence elements to drop.

    Returns
    -------
    ndarray, shape (n_points, dim)
        Points in ``[0, 1)^dim``, identical across calls and platforms.
    """
    if n_points < 0:
        raise ParameterError("n_points must be nonnegative")
    if dim < 1:
        raise ParameterError("dim must be at least 1")
    sampler = qmc.Halton(d=dim, scramble=False)
    if skip > 0:
        sampler.fast_forward(skip)
    return sampler.random(n_points)


def golden_angles(n_points: int) -> np.ndarray:
    """Angles ``2*pi*k/phi mod 2*pi`` for ``k = 0..n_points-1``.

    The golden-angle sequence fills the circle without clustering, which
    makes it a good deterministic stand-in for uniform angular sampling.
    """
    if n_points < 0:
        raise ParameterError("n_points must be nonnegative")
    k = np.arange(n_points)
    return 2.0 * np.pi * np.mod(k / _PHI, 1.0)


def unit_circle(n_points: int) -> np.ndarray:
    """Deterministic well-spread unit vectors in the plane, shape (n, 2)."""
    t = golden_angles(n_points)
    return np.column_stack([np.cos(t), np.sin(t)])


def fibonacci_sphere(n_points: int) -> np.ndarray:
    """Fibonacci lattice on the unit sphere in R^3, shape (n, 3).

    Latitudes are taken at midpoints so no point sits exactly at a pole.
    """
    if n_points < 0:
        raise ParameterError("n_points must be nonnegative")
    k = np.arange(n_points)
    z = 1.0 - (2.0 * k + 1.0) / max(n_points, 1)
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    t = 2.0 * np.pi * np.mod(k / _PHI, 1.0)
    return np.column_stack([rho * np.cos(t), rho * np.sin(t), z])


def unit_directions(n_points: int, dim: int) -> np.ndarray:
    """Deterministic well-spread unit vectors in R^dim, shape (n, dim).

    Uses the golden-angle circle for ``dim == 2``, the Fibonacci sphere for
    ``dim == 3``, and normalized Halton-driven Gaussians above that (Halton
    points pushed through the inverse normal CDF, then normalized).
    """
    if dim < 2:
        raise ParameterError("dim must be at least 2")
    if dim == 2:
        return unit_circle(n_points)
    if dim == 3:
        return fibonacci_sphere(n_points)
    from scipy.special import ndtri

    # skip=1 avoids the all-zeros first Halton point, which would normalize
    # to a zero vector.
    u = halton(n_points, dim, skip=1)
    g = ndtri(np.clip(u, 1e-12, 1.0 - 1e-12))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    return g / norms


def interior_points(domain, n_points: int, *, margin: float = 0.0) -> np.ndarray:
    """Deterministic points inside a convex domain.

    Halton points in the bounding box are filtered by membership; the
    sequence is extended until enough survive. ``margin`` additionally
    requires ``boundary_distance >= margin``.

    Parameters
    ----------
    domain : ConvexDomain
        Target domain.
    n_points : int
        Number of interior points required.
    margin : float, optional
        Minimum distance to the boundary.

    Returns
    -------
    ndarray, shape (n_points, dim)
    """
    lo, hi = domain.bbox()
    dim = lo.size
    out = []
    skip = 0
    batch = max(4 * n_points, 64)
    # Filtered-acceptance loop; 60 rounds bounds work even for thin domains.
    for _ in range(60):
        u = halton(batch, dim, skip=skip)
        skip += batch
        pts = lo + u * (hi - lo)
        d = domain.boundary_distance_many(pts)
        keep = pts[d > margin]
        if keep.size:
            out.append(keep)
        total = sum(b.shape[0] for b in out)
        if total >= n_points:
            return np.vstack(out)[:n_points]
    raise ParameterError(
        "could not draw enough interior points; domain may be lower-dimensional "
        "or the margin too large"
    )
