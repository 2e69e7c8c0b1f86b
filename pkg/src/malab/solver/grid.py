"""Cut-cell lattice grids for the 2D wide-stencil scheme.

Interior nodes are the points of an axis-aligned lattice (anchored at the
domain's bounding box corner) that lie strictly inside the domain. Along
each stencil direction a node either sees another node at lattice distance
or a cut arm ending on the boundary, where the solution value is pinned
to zero by the Dirichlet condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from ..errors import DiscretizationError, ParameterError
from ..geometry import ConvexDomain

__all__ = ["Grid2D", "discretize_domain", "direction_pairs"]


def _canonical(p: int, q: int) -> tuple:
    # one representative per +- line: positive first coordinate, or (0, 1)
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return p, q


def direction_pairs(width: int):
    """Orthogonal pairs of primitive lattice directions up to ``width``.

    Returns (directions, pairs): each direction is a primitive integer
    vector, one per +-line; each pair indexes two mutually orthogonal
    directions. Widths 1, 2, 3 give 2, 4, 8 pairs.
    """
    if width not in (1, 2, 3):
        raise ParameterError("stencil width must be 1, 2, or 3")
    dirs = []
    for p in range(-width, width + 1):
        for q in range(-width, width + 1):
            if (p, q) == (0, 0) or max(abs(p), abs(q)) > width:
                continue
            if gcd(abs(p), abs(q)) != 1:
                continue
            if _canonical(p, q) == (p, q) and (p, q) not in dirs:
                dirs.append((p, q))
    dirs.sort(key=lambda v: (max(abs(v[0]), abs(v[1])), v))
    index = {v: i for i, v in enumerate(dirs)}
    pairs = []
    for i, (p, q) in enumerate(dirs):
        perp = _canonical(-q, p)
        j = index.get(perp)
        if j is not None and i < j:
            pairs.append((i, j))
    return np.array(dirs, dtype=int), np.array(pairs, dtype=int)


@dataclass
class Grid2D:
    """Interior lattice nodes with per-direction arms.

    ``plus_idx[d, k]`` is the node index seen from node k along direction d
    (-1 when the arm is cut by the boundary); ``plus_rho[d, k]`` is the arm
    length in Euclidean units (h |v| for full arms). ``minus_*`` mirror the
    opposite arm. Boundary values are identically zero, so cut arms carry
    no value payload.
    """

    domain: ConvexDomain
    h: float
    width: int
    nodes: np.ndarray
    ij: np.ndarray
    dirs: np.ndarray
    pairs: np.ndarray
    plus_idx: np.ndarray
    plus_rho: np.ndarray
    minus_idx: np.ndarray
    minus_rho: np.ndarray
    node_dist: np.ndarray = field(default=None)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def second_differences(self, u: np.ndarray) -> np.ndarray:
        """All directional second differences, shape (n_dirs, n_nodes).

        Along each arm pair the generalized three-point formula
        2 [ u+ / (rho+ (rho+ + rho-)) + u- / (rho- (rho+ + rho-))
            - u0 / (rho+ rho-) ]
        reduces to the standard central difference on full arms.
        """
        up = np.where(self.plus_idx >= 0, u[self.plus_idx], 0.0)
        um = np.where(self.minus_idx >= 0, u[self.minus_idx], 0.0)
        rp, rm = self.plus_rho, self.minus_rho
        return 2.0 * (up / (rp * (rp + rm)) + um / (rm * (rp + rm))
                      - u[None, :] / (rp * rm))

    def pair_products(self, u: np.ndarray) -> np.ndarray:
        """Products of positive-part second differences, (n_pairs, n_nodes)."""
        d2 = np.maximum(self.second_differences(u), 0.0)
        return d2[self.pairs[:, 0]] * d2[self.pairs[:, 1]]


def discretize_domain(domain: ConvexDomain, h: float,
                      stencil_width: int = 1) -> Grid2D:
    """Build the cut-cell lattice grid for a 2D convex domain.

    Parameters
    ----------
    domain : ConvexDomain
        Two-dimensional domain.
    h : float
        Lattice spacing; must satisfy h <= diam/4 so the lattice sees the
        domain at all (finer spacing is needed for quantitative accuracy).
    stencil_width : int
        Maximal direction coordinate, one of 1, 2, 3 (2, 4, 8 direction
        pairs).

    Returns
    -------
    Grid2D

    Raises
    ------
    DiscretizationError
        Spacing too coarse, or no lattice point falls inside the domain.
    """
    if domain.dim != 2:
        raise ParameterError("grid solver supports 2D domains only")
    if h <= 0:
        raise ParameterError("spacing h must be positive")
    if h > domain.diam / 4.0:
        raise DiscretizationError(
            f"spacing h = {h:g} too coarse for a domain of diameter "
            f"{domain.diam:g}; need h <= diam/4")
    dirs, pairs = direction_pairs(stencil_width)
    lo, hi = domain.bbox()
    ni = int(np.floor((hi[0] - lo[0]) / h)) + 1
    nj = int(np.floor((hi[1] - lo[1]) / h)) + 1
    ii, jj = np.meshgrid(np.arange(ni), np.arange(nj), indexing="ij")
    ij_all = np.column_stack([ii.ravel(), jj.ravel()])
    pts_all = lo[None, :] + ij_all * h
    sd = domain.boundary_distance_many(pts_all)
    keep = sd > 1e-12 * domain.diam
    nodes = pts_all[keep]
    ij = ij_all[keep]
    dist = sd[keep]
    if len(nodes) == 0:
        raise DiscretizationError("domain too thin for this spacing: no "
                                  "interior lattice node")

    id_grid = -np.ones((ni, nj), dtype=int)
    id_grid[ij[:, 0], ij[:, 1]] = np.arange(len(nodes))

    n_dirs = len(dirs)
    m = len(nodes)
    plus_idx = np.full((n_dirs, m), -1, dtype=int)
    minus_idx = np.full((n_dirs, m), -1, dtype=int)
    plus_rho = np.empty((n_dirs, m))
    minus_rho = np.empty((n_dirs, m))
    for d, v in enumerate(dirs):
        vlen = h * float(np.hypot(v[0], v[1]))
        unit = np.asarray(v, dtype=float) / np.hypot(v[0], v[1])
        for sign, idx_arr, rho_arr in ((+1, plus_idx, plus_rho),
                                       (-1, minus_idx, minus_rho)):
            tgt = ij + sign * v
            ok = ((tgt[:, 0] >= 0) & (tgt[:, 0] < ni)
                  & (tgt[:, 1] >= 0) & (tgt[:, 1] < nj))
            nb = np.full(m, -1, dtype=int)
            nb[ok] = id_grid[tgt[ok, 0], tgt[ok, 1]]
            idx_arr[d] = nb
            rho_arr[d] = vlen
            for k in np.nonzero(nb < 0)[0]:
                t = domain.ray_exit(nodes[k], sign * unit)
                rho_arr[d, k] = min(t, vlen)
    return Grid2D(domain=domain, h=float(h), width=int(stencil_width),
                  nodes=nodes, ij=ij, dirs=dirs, pairs=pairs,
                  plus_idx=plus_idx, plus_rho=plus_rho,
                  minus_idx=minus_idx, minus_rho=minus_rho,
                  node_dist=dist)
