"""Bounded convex domains and the geometric queries barrier arguments rely on.

The domain zoo is a closed set of exactly-computable primitives: balls,
axis boxes, convex polygons (2D), half-spaces (as intersection parts only),
superellipse cusp sets ``{x_n >= eta*|x'|^a}``, and finite intersections of
these. Exact boundary-distance formulas keep downstream verification
noise-free.

Coordinates are plain numpy arrays. A point is shape ``(n,)``; a batch of
points is shape ``(m, n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import (
    DegenerateFrameError,
    DomainMembershipError,
    ParameterError,
)
from .sampling import halton, unit_circle, unit_directions

__all__ = [
    "ConvexDomain",
    "LocalFrame",
    "AEtaCertificate",
    "SphereCertificate",
    "distance_to_boundary",
    "nearest_boundary_point",
    "local_frame_at",
    "certify_a_eta",
    "certify_a_eta_domain",
    "sphere_conditions",
]


def _as_point(x, dim=None):
    p = np.asarray(x, dtype=float)
    if p.ndim != 1:
        raise ParameterError(f"expected a point, got array of shape {p.shape}")
    if dim is not None and p.size != dim:
        raise ParameterError(f"expected a point in R^{dim}, got R^{p.size}")
    return p


def _as_points(x, dim):
    p = np.atleast_2d(np.asarray(x, dtype=float))
    if p.shape[1] != dim:
        raise ParameterError(f"expected points in R^{dim}, got shape {p.shape}")
    return p


def _dedupe(points, tol):
    """Remove near-duplicate rows, keeping first occurrences (order stable)."""
    if len(points) == 0:
        return np.zeros((0, 0))
    pts = np.asarray(points, dtype=float)
    kept = []
    for p in pts:
        if not any(np.linalg.norm(p - q) <= tol for q in kept):
            kept.append(p)
    return np.array(kept)


# ---------------------------------------------------------------------------
# Shape primitives
# ---------------------------------------------------------------------------


class _Shape:
    """Convex primitive with inside-positive signed boundary measure.

    ``signed_distance_many`` returns the exact Euclidean distance to the
    shape's boundary for points inside and a negative value for points
    outside (the exact negated distance for smooth primitives, a negated
    violation measure otherwise). Membership and min-composition only rely
    on the sign and the interior values.
    """

    dim: int

    def signed_distance_many(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, pts: np.ndarray, tol: float) -> np.ndarray:
        return self.signed_distance_many(pts) >= -tol

    def ray_exit(self, x: np.ndarray, v: np.ndarray) -> float:
        """Smallest t > 0 with x + t v on the shape boundary (x inside)."""
        raise NotImplementedError

    def boundary_samples(self, n: int, bbox=None) -> np.ndarray:
        raise NotImplementedError

    def feature_points(self) -> np.ndarray:
        return np.zeros((0, self.dim))

    def inward_normals(self, z: np.ndarray, tol: float) -> np.ndarray:
        """Unit inward normals of the constraints active at boundary point z."""
        raise NotImplementedError

    def nearest_feet(self, x: np.ndarray) -> np.ndarray:
        """Candidate nearest boundary points for an interior point x."""
        raise NotImplementedError

    def bbox(self):
        """(lo, hi) for bounded shapes, None for unbounded parts."""
        return None

    def curves_2d(self):
        """Boundary curves for corner finding in 2D; + list of tuples."""
        return []

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class _Ball(_Shape):
    center: np.ndarray
    radius: float

    @property
    def dim(self):
        return self.center.size

    def signed_distance_many(self, pts):
        return self.radius - np.linalg.norm(pts - self.center, axis=1)

    def ray_exit(self, x, v):
        # positive root of |x + t v - c|^2 = R^2
        q = x - self.center
        a = float(v @ v)
        b = float(q @ v)
        c0 = float(q @ q) - self.radius**2
        disc = b * b - a * c0
        if disc < 0 or a == 0.0:
            return np.inf
        return (-b + np.sqrt(disc)) / a

    def boundary_samples(self, n, bbox=None):
        return self.center + self.radius * unit_directions(n, self.dim)

    def inward_normals(self, z, tol):
        u = self.center - z
        r = np.linalg.norm(u)
        if abs(r - self.radius) > tol or r == 0.0:
            return np.zeros((0, self.dim))
        return (u / r)[None, :]

    def nearest_feet(self, x):
        q = x - self.center
        r = np.linalg.norm(q)
        if r <= 1e-14 * max(self.radius, 1.0):
            # all boundary points tie; offer axis-aligned representatives
            feet = np.tile(self.center, (2 * self.dim, 1))
            for i in range(self.dim):
                feet[2 * i, i] -= self.radius
                feet[2 * i + 1, i] += self.radius
            return feet
        return (self.center + self.radius * q / r)[None, :]

    def bbox(self):
        return self.center - self.radius, self.center + self.radius

    def curves_2d(self):
        return [("circle", self.center, self.radius)] if self.dim == 2 else []

    def to_config(self):
        return {"kind": "ball", "center": self.center.tolist(),
                "radius": float(self.radius)}


@dataclass(frozen=True, eq=False)
class _Box(_Shape):
    lo: np.ndarray
    hi: np.ndarray

    @property
    def dim(self):
        return self.lo.size

    def signed_distance_many(self, pts):
        return np.minimum((pts - self.lo).min(axis=1), (self.hi - pts).min(axis=1))

    def ray_exit(self, x, v):
        t = np.inf
        for i in range(self.dim):
            if v[i] > 0:
                t = min(t, (self.hi[i] - x[i]) / v[i])
            elif v[i] < 0:
                t = min(t, (self.lo[i] - x[i]) / v[i])
        return t

    def boundary_samples(self, n, bbox=None):
        if self.dim == 2:
            return _polyline_samples(self._corners_ccw(), n, closed=True)
        # faces weighted by area, Halton points within each face
        side = self.hi - self.lo
        total = 0.0
        faces = []
        for i in range(self.dim):
            area = np.prod(np.delete(side, i))
            faces.append((i, area))
            total += 2 * area
        out = []
        for i, area in faces:
            m = max(1, int(round(n * 2 * area / total / 2)))
            u = halton(m, self.dim - 1)
            rest = self.lo[np.arange(self.dim) != i] + u * side[np.arange(self.dim) != i]
            for val in (self.lo[i], self.hi[i]):
                pts = np.empty((m, self.dim))
                pts[:, i] = val
                pts[:, np.arange(self.dim) != i] = rest
                out.append(pts)
        return np.vstack(out)

    def _corners_ccw(self):
        (x0, y0), (x1, y1) = self.lo, self.hi
        return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])

    def feature_points(self):
        # all 2^n corners
        grids = np.meshgrid(*[(self.lo[i], self.hi[i]) for i in range(self.dim)],
                            indexing="ij")
        return np.column_stack([g.ravel() for g in grids])

    def inward_normals(self, z, tol):
        out = []
        for i in range(self.dim):
            if abs(z[i] - self.lo[i]) <= tol:
                e = np.zeros(self.dim)
                e[i] = 1.0
                out.append(e)
            if abs(z[i] - self.hi[i]) <= tol:
                e = np.zeros(self.dim)
                e[i] = -1.0
                out.append(e)
        return np.array(out) if out else np.zeros((0, self.dim))

    def nearest_feet(self, x):
        feet = []
        for i in range(self.dim):
            for val in (self.lo[i], self.hi[i]):
                f = x.copy()
                f[i] = val
                feet.append(f)
        return np.array(feet)

    def bbox(self):
        return self.lo.copy(), self.hi.copy()

    def curves_2d(self):
        if self.dim != 2:
            return []
        c = self._corners_ccw()
        return [("segment", c[k], c[(k + 1) % 4]) for k in range(4)]

    def to_config(self):
        return {"kind": "box", "lo": self.lo.tolist(), "hi": self.hi.tolist()}


def _polyline_samples(vertices, n, closed):
    """n points equispaced in arclength along a polyline (midpoint offsets)."""
    verts = np.asarray(vertices, dtype=float)
    pts = np.vstack([verts, verts[:1]]) if closed else verts
    seg = np.diff(pts, axis=0)
    lengths = np.linalg.norm(seg, axis=1)
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    total = cum[-1]
    t = (np.arange(n) + 0.5) / n * total
    idx = np.clip(np.searchsorted(cum, t, side="right") - 1, 0, len(seg) - 1)
    local = (t - cum[idx]) / lengths[idx]
    return pts[idx] + local[:, None] * seg[idx]


@dataclass(frozen=True, eq=False)
class _Polygon(_Shape):
    """Convex polygon in the plane, vertices counterclockwise."""

    vertices: np.ndarray
    normals: np.ndarray = field(init=False)   # unit outward, one per edge
    offsets: np.ndarray = field(init=False)   # n_k . x <= b_k

    def __post_init__(self):
        v = self.vertices
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ParameterError("polygon needs at least 3 vertices in the plane")
        edges = np.roll(v, -1, axis=0) - v
        cross = np.cross(edges, np.roll(edges, -1, axis=0))
        if np.all(cross < 0):
            v = v[::-1]
            object.__setattr__(self, "vertices", v)
            edges = np.roll(v, -1, axis=0) - v
            cross = np.cross(edges, np.roll(edges, -1, axis=0))
        if np.any(cross <= 0):
            raise ParameterError("polygon must be strictly convex")
        # outward normal of CCW edge (dx, dy) is (dy, -dx)
        nrm = np.column_stack([edges[:, 1], -edges[:, 0]])
        nrm /= np.linalg.norm(nrm, axis=1, keepdims=True)
        object.__setattr__(self, "normals", nrm)
        object.__setattr__(self, "offsets", np.einsum("ij,ij->i", nrm, v))

    @property
    def dim(self):
        return 2

    def signed_distance_many(self, pts):
        return (self.offsets - pts @ self.normals.T).min(axis=1)

    def ray_exit(self, x, v):
        speed = self.normals @ v
        gap = self.offsets - self.normals @ x
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(speed > 0, gap / speed, np.inf)
        return float(t.min())

    def boundary_samples(self, n, bbox=None):
        return _polyline_samples(self.vertices, n, closed=True)

    def feature_points(self):
        return self.vertices.copy()

    def inward_normals(self, z, tol):
        active = np.abs(self.offsets - self.normals @ z) <= tol
        return -self.normals[active]

    def nearest_feet(self, x):
        feet = []
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        for k in range(len(v)):
            e = w[k] - v[k]
            s = np.clip((x - v[k]) @ e / (e @ e), 0.0, 1.0)
            feet.append(v[k] + s * e)
        return np.array(feet)

    def bbox(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def curves_2d(self):
        v = self.vertices
        return [("segment", v[k], v[(k + 1) % len(v)]) for k in range(len(v))]

    def to_config(self):
        return {"kind": "polygon", "vertices": self.vertices.tolist()}


@dataclass(frozen=True, eq=False)
class _Halfspace(_Shape):
    """Half-space n.x <= b. Unbounded: valid only inside an intersection."""

    normal: np.ndarray   # unit outward
    offset: float

    def __post_init__(self):
        nn = np.linalg.norm(self.normal)
        if nn == 0:
            raise ParameterError("half-space normal must be nonzero")
        object.__setattr__(self, "normal", self.normal / nn)
        object.__setattr__(self, "offset", float(self.offset) / nn)

    @property
    def dim(self):
        return self.normal.size

    def signed_distance_many(self, pts):
        return self.offset - pts @ self.normal

    def ray_exit(self, x, v):
        speed = float(self.normal @ v)
        if speed <= 0:
            return np.inf
        return (self.offset - float(self.normal @ x)) / speed

    def boundary_samples(self, n, bbox=None):
        if bbox is None:
            raise ParameterError("half-space sampling needs a bounding box")
        lo, hi = bbox
        center = 0.5 * (lo + hi)
        z0 = center + (self.offset - self.normal @ center) * self.normal
        basis = _tangent_basis(self.normal)
        half = 0.5 * np.linalg.norm(hi - lo)
        u = (halton(n, self.dim - 1) - 0.5) * 2 * half
        return z0 + u @ basis

    def inward_normals(self, z, tol):
        if abs(self.offset - self.normal @ z) <= tol:
            return -self.normal[None, :]
        return np.zeros((0, self.dim))

    def nearest_feet(self, x):
        gap = self.offset - float(self.normal @ x)
        return (x + gap * self.normal)[None, :]

    def curves_2d(self):
        if self.dim != 2:
            return []
        t = np.array([-self.normal[1], self.normal[0]])
        p = self.offset * self.normal
        return [("line", p, t)]

    def to_config(self):
        return {"kind": "halfspace", "normal": self.normal.tolist(),
                "offset": float(self.offset)}


def _tangent_basis(normal):
    """Rows: orthonormal basis of the hyperplane orthogonal to ``normal``."""
    n = normal.size
    q = _rotation_to_axis(normal)  # maps normal -> e_n
    return q[:-1, :]  # rows orthogonal to normal


@dataclass(frozen=True, eq=False)
class _CuspSet(_Shape):
    """Superellipse cusp set {x : x_n >= eta |x'|^a}. Unbounded part."""

    a: float
    eta: float
    ndim: int

    def __post_init__(self):
        if self.a < 1:
            raise ParameterError("cusp exponent a must be >= 1")
        if self.eta <= 0:
            raise ParameterError("cusp coefficient eta must be positive")
        if self.ndim < 2:
            raise ParameterError("cusp set needs dimension >= 2")

    @property
    def dim(self):
        return self.ndim

    def _residual(self, pts):
        rho = np.linalg.norm(pts[:, :-1], axis=1)
        return pts[:, -1] - self.eta * rho**self.a

    def contains(self, pts, tol):
        # constraint residual with gradient-scaled tolerance
        rho = np.linalg.norm(pts[:, :-1], axis=1)
        grad = np.sqrt(1.0 + (self.a * self.eta * rho ** (self.a - 1.0)) ** 2)
        return self._residual(pts) >= -tol * grad

    def signed_distance_many(self, pts):
        pts = np.atleast_2d(pts)
        rho = np.linalg.norm(pts[:, :-1], axis=1)
        z = pts[:, -1]
        s_star, dist = self._surface_foot(rho, z)
        sign = np.where(z - self.eta * rho**self.a >= 0, 1.0, -1.0)
        return sign * dist

    def _surface_foot(self, rho, z):
        """Distance minimization over the profile curve (s, eta s^a), s >= 0.

        Returns (s*, distance). Vectorized: graded grid plus ternary
        refinement around the grid argmin.
        """
        a, eta = self.a, self.eta
        hi = np.maximum(rho, (np.maximum(z, 0.0) / eta) ** (1.0 / a)) + 1e-30
        # quadratic grading clusters nodes near s = 0 where curvature blows up
        u = np.linspace(0.0, 1.0, 257)
        s = hi[:, None] * u[None, :] ** 2
        f = (rho[:, None] - s) ** 2 + (z[:, None] - eta * s**a) ** 2
        k = np.argmin(f, axis=1)
        lo_i = np.clip(k - 1, 0, 256)
        hi_i = np.clip(k + 1, 0, 256)
        left = np.take_along_axis(s, lo_i[:, None], axis=1)[:, 0]
        right = np.take_along_axis(s, hi_i[:, None], axis=1)[:, 0]

        def fval(sv):
            return (rho - sv) ** 2 + (z - eta * sv**a) ** 2

        for _ in range(60):
            m1 = left + (right - left) / 3.0
            m2 = right - (right - left) / 3.0
            swap = fval(m1) > fval(m2)
            left = np.where(swap, m1, left)
            right = np.where(swap, right, m2)
        s_star = 0.5 * (left + right)
        return s_star, np.sqrt(fval(s_star))

    def ray_exit(self, x, v):
        # residual along the ray is concave: at most one downcrossing ahead
        def h(t):
            p = x + t * v
            return p[-1] - self.eta * np.linalg.norm(p[:-1]) ** self.a

        if h(0.0) < 0:
            return np.inf
        t_hi = 1.0
        for _ in range(200):
            if h(t_hi) < 0:
                return brentq(h, 0.0, t_hi, xtol=1e-14, rtol=1e-15)
            t_hi *= 2.0
            if t_hi > 1e18:
                return np.inf
        return np.inf

    def boundary_samples(self, n, bbox=None):
        if bbox is None:
            raise ParameterError("cusp-set sampling needs a bounding box")
        lo, hi = bbox
        s_max = max(np.linalg.norm(lo[:-1]), np.linalg.norm(hi[:-1]))
        s_max = max(s_max, (max(hi[-1], 0.0) / self.eta) ** (1.0 / self.a))
        s = (np.arange(n) + 0.5) / n * s_max
        if self.dim == 2:
            signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
            pts = np.column_stack([signs * s, self.eta * s**self.a])
        else:
            dirs = unit_directions(n, self.dim - 1)
            pts = np.column_stack([dirs * s[:, None], self.eta * s**self.a])
        return np.vstack([np.zeros((1, self.dim)), pts])

    def feature_points(self):
        return np.zeros((1, self.dim))  # the tip

    def inward_normals(self, z, tol):
        rho = np.linalg.norm(z[:-1])
        grad = np.sqrt(1.0 + (self.a * self.eta * rho ** (self.a - 1.0)) ** 2)
        if abs(z[-1] - self.eta * rho**self.a) > tol * grad:
            return np.zeros((0, self.dim))
        if rho <= tol:
            if self.a > 1.0 + 1e-12:
                e = np.zeros(self.dim)
                e[-1] = 1.0
                return e[None, :]
            # a = 1: the tip cone; report extreme normals along axis directions
            out = []
            for i in range(self.dim - 1):
                for sgn in (1.0, -1.0):
                    g = np.zeros(self.dim)
                    g[i] = -sgn * self.eta
                    g[-1] = 1.0
                    out.append(g / np.linalg.norm(g))
            return np.array(out)
        g = np.concatenate([
            -self.a * self.eta * rho ** (self.a - 2.0) * z[:-1],
            [1.0],
        ])
        return (g / np.linalg.norm(g))[None, :]

    def nearest_feet(self, x):
        rho = np.array([np.linalg.norm(x[:-1])])
        zz = np.array([x[-1]])
        s_star, _ = self._surface_foot(rho, zz)
        s = float(s_star[0])
        if s <= 1e-12 * (rho[0] + abs(zz[0])):
            s = 0.0  # snap to the tip
        if rho[0] > 1e-14:
            d = x[:-1] / rho[0]
        else:
            d = np.zeros(self.dim - 1)
            d[0] = -1.0  # lexicographic representative on the axis
        foot = np.concatenate([s * d, [self.eta * s**self.a]])
        return foot[None, :]

    def to_config(self):
        return {"kind": "cusp_set", "a": float(self.a), "eta": float(self.eta),
                "dim": int(self.ndim)}


@dataclass(frozen=True, eq=False)
class _Intersection(_Shape):
    parts: tuple
    bbox_override: Optional[tuple] = None
    extra_features: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.parts:
            raise ParameterError("intersection needs at least one part")
        dims = {p.dim for p in self.parts}
        if len(dims) != 1:
            raise ParameterError("intersection parts disagree on dimension")
        if self.bbox() is None:
            raise ParameterError(
                "intersection is unbounded: include a bounded part or a bbox")

    @property
    def dim(self):
        return self.parts[0].dim

    def signed_distance_many(self, pts):
        vals = [p.signed_distance_many(pts) for p in self.parts]
        return np.min(vals, axis=0)

    def contains(self, pts, tol):
        out = np.ones(len(pts), dtype=bool)
        for p in self.parts:
            out &= p.contains(pts, tol)
        return out

    def ray_exit(self, x, v):
        return min(p.ray_exit(x, v) for p in self.parts)

    def boundary_samples(self, n, bbox=None):
        box = self.bbox()
        tol = 1e-9 * np.linalg.norm(box[1] - box[0])
        out = []
        for p in self.parts:
            cand = p.boundary_samples(n, bbox=box)
            keep = self.contains(cand, tol)
            if keep.any():
                out.append(cand[keep])
        if not out:
            raise ParameterError("intersection appears to be empty")
        return np.vstack(out)

    def feature_points(self):
        box = self.bbox()
        tol = 1e-9 * np.linalg.norm(box[1] - box[0])
        cand = [p.feature_points() for p in self.parts]
        if self.dim == 2:
            cand.append(_pairwise_corners_2d(self.parts))
        if self.extra_features is not None:
            cand.append(self.extra_features)
        cand = [c for c in cand if len(c)]
        if not cand:
            return np.zeros((0, self.dim))
        pts = np.vstack(cand)
        pts = pts[self.contains(pts, tol)]
        return _dedupe(pts, tol) if len(pts) else np.zeros((0, self.dim))

    def inward_normals(self, z, tol):
        out = [p.inward_normals(z, tol) for p in self.parts]
        out = [o for o in out if len(o)]
        return np.vstack(out) if out else np.zeros((0, self.dim))

    def nearest_feet(self, x):
        feet = [p.nearest_feet(x) for p in self.parts]
        return np.vstack(feet)

    def bbox(self):
        if self.bbox_override is not None:
            lo, hi = self.bbox_override
            return lo.copy(), hi.copy()
        boxes = [p.bbox() for p in self.parts if p.bbox() is not None]
        if not boxes:
            return None
        lo = np.max([b[0] for b in boxes], axis=0)
        hi = np.min([b[1] for b in boxes], axis=0)
        return lo, hi

    def curves_2d(self):
        out = []
        for p in self.parts:
            out.extend(p.curves_2d())
        return out

    def to_config(self):
        cfg = {"kind": "intersection",
               "parts": [p.to_config() for p in self.parts]}
        if self.bbox_override is not None:
            lo, hi = self.bbox_override
            cfg["bbox"] = [lo.tolist(), hi.tolist()]
        if self.extra_features is not None:
            cfg["extra_features"] = self.extra_features.tolist()
        return cfg


def _pairwise_corners_2d(parts):
    """Intersection points of boundary curves of distinct parts (2D)."""
    curves = []
    for p in parts:
        curves.extend((p, c) for c in p.curves_2d())
    pts = []
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            if curves[i][0] is curves[j][0]:
                continue  # same part: its own corners are its features
            pts.extend(_curve_intersections(curves[i][1], curves[j][1]))
    return np.array(pts) if pts else np.zeros((0, 2))


def _curve_intersections(c1, c2):
    kinds = (c1[0], c2[0])
    if kinds == ("circle", "circle"):
        return _circle_circle(c1[1], c1[2], c2[1], c2[2])
    if c1[0] == "circle":
        return _circle_linear(c1[1], c1[2], c2)
    if c2[0] == "circle":
        return _circle_linear(c2[1], c2[2], c1)
    return _linear_linear(c1, c2)


def _circle_circle(c1, r1, c2, r2):
    d = np.linalg.norm(c2 - c1)
    if d < 1e-14 or d > r1 + r2 or d < abs(r1 - r2):
        return []
    a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    h2 = r1 * r1 - a * a
    if h2 < 0:
        return []
    h = np.sqrt(max(h2, 0.0))
    u = (c2 - c1) / d
    perp = np.array([-u[1], u[0]])
    m = c1 + a * u
    return [m + h * perp, m - h * perp]


def _linear_params(curve):
    if curve[0] == "segment":
        p0, p1 = curve[1], curve[2]
        return p0, p1 - p0, (0.0, 1.0)
    return curve[1], curve[2], (-np.inf, np.inf)


def _circle_linear(c, r, line):
    p0, d, (t_lo, t_hi) = _linear_params(line)
    a = float(d @ d)
    if a == 0.0:
        return []
    b = float((p0 - c) @ d)
    c0 = float((p0 - c) @ (p0 - c)) - r * r
    disc = b * b - a * c0
    if disc < 0:
        return []
    sq = np.sqrt(disc)
    out = []
    for t in ((-b - sq) / a, (-b + sq) / a):
        if t_lo - 1e-12 <= t <= t_hi + 1e-12:
            out.append(p0 + t * d)
    return out

def _linear_linear(l1, l2):
    p, d1, (a_lo, a_hi) = _linear_params(l1)
    q, d2, (b_lo, b_hi) = _linear_params(l2)
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(denom) < 1e-14 * (np.linalg.norm(d1) * np.linalg.norm(d2) + 1e-30):
        return []
    rhs = q - p
    s = (rhs[0] * d2[1] - rhs[1] * d2[0]) / denom
    t = (rhs[0] * d1[1] - rhs[1] * d1[0]) / denom
    if a_lo - 1e-12 <= s <= a_hi + 1e-12 and b_lo - 1e-12 <= t <= b_hi + 1e-12:
        return [p + s * d1]
    return []


# ---------------------------------------------------------------------------
# Public domain wrapper
# ---------------------------------------------------------------------------


class ConvexDomain:
    """A bounded convex region assembled from exact primitives.

    Construct through the factory classmethods (:meth:`ball`, :meth:`box`,
    :meth:`polygon`, :meth:`intersection`, :meth:`cusp_region`) or from a
    config tree with :meth:`from_config`.

    Attributes
    ----------
    dim : int
        Ambient dimension n >= 2.
    diam : float
        Cached diameter of the region (exact for ball/box/polygon,
        convex-hull-of-samples for composites).
    """

    def __init__(self, shape: _Shape, *, diam: Optional[float] = None):
        if shape.dim < 2:
            raise ParameterError("domains must live in dimension >= 2")
        if shape.bbox() is None:
            raise ParameterError("domain must be bounded")
        self.shape = shape
        self.dim = shape.dim
        self._diam = diam

    # -- factories ----------------------------------------------------------

    @classmethod
    def ball(cls, center, radius) -> "ConvexDomain":
        center = _as_point(center)
        if radius <= 0:
            raise ParameterError("ball radius must be positive")
        return cls(_Ball(center, float(radius)), diam=2.0 * float(radius))

    @classmethod
    def box(cls, lo, hi) -> "ConvexDomain":
        lo, hi = _as_point(lo), _as_point(hi)
        if lo.size != hi.size or np.any(hi <= lo):
            raise ParameterError("box corners must satisfy lo < hi componentwise")
        return cls(_Box(lo, hi), diam=float(np.linalg.norm(hi - lo)))

    @classmethod
    def polygon(cls, vertices) -> "ConvexDomain":
        verts = np.asarray(vertices, dtype=float)
        poly = _Polygon(verts)
        d = 0.0
        v = poly.vertices
        for i in range(len(v)):
            d = max(d, float(np.max(np.linalg.norm(v - v[i], axis=1))))
        return cls(poly, diam=d)

    @classmethod
    def intersection(cls, descriptors, bbox=None) -> "ConvexDomain":
        """Intersection of parts given as shape descriptors or domains."""
        parts = []
        for d in descriptors:
            if isinstance(d, ConvexDomain):
                parts.append(d.shape)
            elif isinstance(d, _Shape):
                parts.append(d)
            else:
                parts.append(_shape_from_config(d))
        override = None
        if bbox is not None:
            override = (_as_point(bbox[0]), _as_point(bbox[1]))
        return cls(_Intersection(tuple(parts), bbox_override=override))

    @classmethod
    def halfspace_part(cls, normal, offset) -> _Shape:
        """A half-space n.x <= offset, for use inside :meth:`intersection`."""
        return _Halfspace(_as_point(normal), float(offset))

    @classmethod
    def cusp_region(cls, a, eta, height, dim=2) -> "ConvexDomain":
        """Model (a, eta) domain: {x_n >= eta |x'|^a} cut at height x_n <= h."""
        if height <= 0:
            raise ParameterError("cusp region height must be positive")
        cusp = _CuspSet(float(a), float(eta), int(dim))
        e_n = np.zeros(dim)
        e_n[-1] = 1.0
        cap = _Halfspace(e_n, float(height))
        s = (height / eta) ** (1.0 / a)
        lo = np.full(dim, -s)
        hi = np.full(dim, s)
        lo[-1], hi[-1] = 0.0, float(height)
        if dim == 2:
            rim = np.array([[-s, height], [s, height]])
        else:
            ring = unit_directions(32, dim - 1) * s
            rim = np.column_stack([ring, np.full(32, height)])
        inter = _Intersection((cusp, cap), bbox_override=(lo, hi),
                              extra_features=rim)
        return cls(inter)

    # -- config round trip ---------------------------------------------------

    @classmethod
    def from_config(cls, cfg: dict) -> "ConvexDomain":
        return cls(_shape_from_config(cfg))

    def to_config(self) -> dict:
        return self.shape.to_config()

    # -- queries -------------------------------------------------------------

    @property
    def diam(self) -> float:
        if self._diam is None:
            self._diam = self._sampled_diameter()
        return self._diam

    def _sampled_diameter(self):
        pts = np.vstack([self.shape.boundary_samples(4096, bbox=self.shape.bbox()),
                         self.shape.feature_points()])
        from scipy.spatial import ConvexHull

        try:
            hull = pts[ConvexHull(pts).vertices]
        except Exception:
            hull = pts
        d = 0.0
        for i in range(len(hull)):
            d = max(d, float(np.max(np.linalg.norm(hull - hull[i], axis=1))))
        return d

    @property
    def tol(self) -> float:
        """Default geometric equality tolerance, 1e-9 * diam."""
        return 1e-9 * self.diam

    def contains(self, x, tol=None) -> bool:
        pts = _as_points(x, self.dim) if np.ndim(x) > 1 else _as_point(x, self.dim)[None, :]
        t = self.tol if tol is None else tol
        out = self.shape.contains(pts, t)
        return out if np.ndim(x) > 1 else bool(out[0])

    def boundary_distance(self, x) -> float:
        """Checked scalar distance to the boundary; requires x in the closure."""
        p = _as_point(x, self.dim)
        d = float(self.shape.signed_distance_many(p[None, :])[0])
        if d < -self.tol:
            raise DomainMembershipError(
                f"point {p.tolist()} lies outside the domain (violation {-d:.3e})")
        return max(d, 0.0)

    def boundary_distance_many(self, pts) -> np.ndarray:
        """Unchecked signed distances: positive inside, negative outside."""
        return self.shape.signed_distance_many(_as_points(pts, self.dim))

    def ray_exit(self, x, v) -> float:
        """First boundary hit t > 0 along x + t v from an inside point."""
        x = _as_point(x, self.dim)
        v = _as_point(v, self.dim)
        t = self.shape.ray_exit(x, v)
        if not np.isfinite(t):
            raise DomainMembershipError("ray does not exit the domain")
        return float(t)

    def boundary_samples(self, n: int) -> np.ndarray:
        pts = self.shape.boundary_samples(n, bbox=self.shape.bbox())
        feats = self.shape.feature_points()
        return np.vstack([pts, feats]) if len(feats) else pts

    def feature_points(self) -> np.ndarray:
        return self.shape.feature_points()

    def inward_normals(self, z, tol=None) -> np.ndarray:
        z = _as_point(z, self.dim)
        t = self.tol if tol is None else tol
        return self.shape.inward_normals(z, t)

    def bbox(self):
        return self.shape.bbox()

    def __repr__(self):
        return f"ConvexDomain({self.shape.to_config()['kind']}, dim={self.dim})"


def _shape_from_config(cfg: dict) -> _Shape:
    kind = cfg.get("kind")
    if kind == "ball":
        return _Ball(np.asarray(cfg["center"], dtype=float), float(cfg["radius"]))
    if kind == "box":
        return _Box(np.asarray(cfg["lo"], dtype=float),
                    np.asarray(cfg["hi"], dtype=float))
    if kind == "polygon":
        return _Polygon(np.asarray(cfg["vertices"], dtype=float))
    if kind == "halfspace":
        return _Halfspace(np.asarray(cfg["normal"], dtype=float),
                          float(cfg["offset"]))
    if kind == "cusp_set":
        return _CuspSet(float(cfg["a"]), float(cfg["eta"]), int(cfg["dim"]))
    if kind == "intersection":
        parts = tuple(_shape_from_config(p) for p in cfg["parts"])
        override = None
        if "bbox" in cfg:
            override = (np.asarray(cfg["bbox"][0], dtype=float),
                        np.asarray(cfg["bbox"][1], dtype=float))
        extra = None
        if "extra_features" in cfg:
            extra = np.asarray(cfg["extra_features"], dtype=float)
        return _Intersection(parts, bbox_override=override, extra_features=extra)
    raise ParameterError(f"unknown shape kind: {kind!r}")


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------


def _rotation_to_axis(u: np.ndarray) -> np.ndarray:
    """Proper rotation Q with Q u = e_n for a unit vector u."""
    n = u.size
    e = np.zeros(n)
    e[-1] = 1.0
    w = u - e
    wn2 = float(w @ w)
    if wn2 < 1e-28:
        return np.eye(n)
    h = np.eye(n) - 2.0 * np.outer(w, w) / wn2  # reflection swapping u, e_n
    d = np.eye(n)
    d[0, 0] = -1.0  # restore det = +1 without moving e_n
    return d @ h


@dataclass(frozen=True, eq=False)
class LocalFrame:
    """Rigid motion x -> Q (x - z) sending z to 0 and y onto the x_n axis.

    Attributes
    ----------
    rotation : ndarray, shape (n, n)
        Proper orthogonal matrix Q.
    origin : ndarray, shape (n,)
        The boundary point z mapped to the origin.
    boundary_point, interior_point : ndarray
        Provenance (z, y) the frame was built from.
    """

    rotation: np.ndarray
    origin: np.ndarray
    boundary_point: np.ndarray
    interior_point: np.ndarray

    def apply(self, pts) -> np.ndarray:
        p = np.asarray(pts, dtype=float)
        return (p - self.origin) @ self.rotation.T

    def invert(self, pts) -> np.ndarray:
        p = np.asarray(pts, dtype=float)
        return p @ self.rotation + self.origin


def _frame_from_axis(z: np.ndarray, axis: np.ndarray) -> LocalFrame:
    u = axis / np.linalg.norm(axis)
    q = _rotation_to_axis(u)
    return LocalFrame(rotation=q, origin=z.copy(),
                      boundary_point=z.copy(), interior_point=z + u)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass
class AEtaCertificate:
    """Sampled certificate that the domain fits in {x_n >= eta |x'|^a}.

    ``point`` is the boundary point the frame sits at, or the string
    ``"all boundary points"`` for a domain-wide certificate. ``status`` is
    one of ``certified``, ``refuted``, ``indeterminate``; eta is the largest
    sampled coefficient when certified, else the best sampled value found.
    """

    a: float
    eta: float
    point: object
    status: str
    n_samples: int
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        pt = self.point if isinstance(self.point, str) else list(np.asarray(self.point, dtype=float))
        return {
            "a": float(self.a),
            "eta": float(self.eta),
            "point": pt,
            "status": self.status,
            "n_samples": int(self.n_samples),
            "notes": list(self.notes),
        }


@dataclass
class SphereCertificate:
    """Sampled exterior/interior sphere radii with touching witnesses.

    ``exterior_radius`` is the smallest sampled radius valid simultaneously
    at every boundary point that admits an enclosing tangent ball; boundary
    points admitting none (interior points of flat faces) are listed in
    ``notes``. ``interior_radius`` is the largest radius of an inside tangent
    ball valid at all sampled boundary points, or None when some sampled
    point (a corner) admits none above 1e-6 * diam.
    """

    exterior_radius: Optional[float]
    interior_radius: Optional[float]
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "exterior_radius": None if self.exterior_radius is None else float(self.exterior_radius),
            "interior_radius": None if self.interior_radius is None else float(self.interior_radius),
            "witnesses": [
                {"boundary_point": list(map(float, z)), "center": list(map(float, c))}
                for z, c in self.witnesses
            ],
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# Module operations
# ---------------------------------------------------------------------------


def distance_to_boundary(domain: ConvexDomain, x) -> float:
    """Distance from a point of the closed domain to the boundary.

    Parameters
    ----------
    domain : ConvexDomain
    x : array_like, shape (n,)
        Point in the closure of the domain.

    Returns
    -------
    float
        dist(x, boundary), exact for the primitive shapes; zero (within
        1e-12 of it) exactly on the boundary.

    Raises
    ------
    DomainMembershipError
        If x lies outside the closed domain.
    """
    return domain.boundary_distance(x)


def nearest_boundary_point(domain: ConvexDomain, y):
    """Nearest boundary point of an interior point, with deterministic ties.

    Parameters
    ----------
    domain : ConvexDomain
    y : array_like, shape (n,)
        Interior point (a boundary point is returned unchanged).

    Returns
    -------
    (z, d) : (ndarray, float)
        Boundary point with |y - z| = dist(y, boundary); among ties the
        lexicographically smallest foot is returned.
    """
    p = _as_point(y, domain.dim)
    d = domain.boundary_distance(p)  # raises if outside
    if d <= domain.tol:
        return p.copy(), 0.0
    feet = domain.shape.nearest_feet(p)
    dist = np.linalg.norm(feet - p, axis=1)
    on_boundary = np.abs(domain.boundary_distance_many(feet)) <= 10 * domain.tol
    inside = domain.shape.contains(feet, 10 * domain.tol)
    ok = on_boundary & inside
    if ok.any():
        feet, dist = feet[ok], dist[ok]
        d_min = dist.min()
        tied = feet[dist <= d_min * (1 + 1e-9) + 1e-12 * domain.diam]
        z = min(map(tuple, tied))
        return np.array(z), float(d_min)
    # safety net: dense boundary scan (composite shapes with exotic ties)
    cand = domain.boundary_samples(4096)
    k = int(np.argmin(np.linalg.norm(cand - p, axis=1)))
    z = cand[k]
    return z.copy(), float(np.linalg.norm(z - p))


def local_frame_at(domain: ConvexDomain, z, y) -> LocalFrame:
    """Rigid motion sending boundary point z to 0 and y onto the x_n axis.

    Parameters
    ----------
    domain : ConvexDomain
    z : array_like
        Boundary point (within tolerance).
    y : array_like
        Interior point whose nearest boundary point is z, so that
        |y - z| = dist(y, boundary).

    Returns
    -------
    LocalFrame
        Proper rigid motion with ``apply(z) = 0`` and
        ``apply(y) = (0, ..., 0, |y - z|)``.

    Raises
    ------
    DegenerateFrameError
        If y coincides with z.
    DomainMembershipError
        If y is outside the domain or z is not a boundary point.
    ParameterError
        If |y - z| differs from dist(y, boundary) beyond tolerance.
    """
    z = _as_point(z, domain.dim)
    y = _as_point(y, domain.dim)
    dz = domain.boundary_distance(z)
    if dz > 10 * domain.tol:
        raise DomainMembershipError("z is not a boundary point")
    dy = domain.boundary_distance(y)
    gap = np.linalg.norm(y - z)
    if gap <= 1e-14 * domain.diam:
        raise DegenerateFrameError("frame is degenerate: y coincides with z")
    if abs(gap - dy) > 1e-6 * domain.diam:
        raise ParameterError(
            "frame axis invalid: |y - z| must equal the boundary distance of y")
    u = (y - z) / gap
    q = _rotation_to_axis(u)
    return LocalFrame(rotation=q, origin=z, boundary_point=z, interior_point=y)


def _certification_samples(domain: ConvexDomain, n_samples: int):
    from .sampling import interior_points

    bnd = domain.boundary_samples(n_samples)
    n_int = max(n_samples // 4, 16)
    try:
        inner = interior_points(domain, n_int)
    except ParameterError:
        inner = np.zeros((0, domain.dim))
    return bnd, inner


def _largest_eta(x_prime_pow, x_n, tol):
    """Largest eta with x_n >= eta * |x'|^a - tol on the samples, by bisection."""

    def ok(eta):
        return bool(np.all(x_n >= eta * x_prime_pow - tol))

    if x_prime_pow.size == 0:
        return np.inf
    lo = 0.0
    hi = 1.0
    grew = 0
    while ok(hi):
        lo = hi
        hi *= 2.0
        grew += 1
        if grew > 200:
            return np.inf
    while hi - lo > 1e-6 * max(hi, 1e-300):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _certify_at(domain, z, a, samples, diam):
    """Core of certify_a_eta on a prepared sample set. Returns (eta, status, notes)."""
    normals = domain.inward_normals(z, tol=10 * domain.tol)
    notes = []
    if len(normals) == 0:
        return 0.0, "indeterminate", ["no boundary normal found at the base point"]
    axis = normals.sum(axis=0)
    if np.linalg.norm(axis) < 1e-12:
        axis = normals[0]
    frame = _frame_from_axis(z, axis)
    local = frame.apply(samples)
    x_n = local[:, -1]
    r = np.linalg.norm(local[:, :-1], axis=1)
    keep = ~((r <= 1e-12 * diam) & (np.abs(x_n) <= 1e-12 * diam))  # drop z itself
    x_n, r = x_n[keep], r[keep]
    # an exactly-zero height at macroscopic radius is a flat face; heights
    # that are merely tiny can come from very flat cusps (x_n ~ r^a, a large)
    flat = (x_n <= 1e-13 * diam) & (r >= 1e-2 * diam)
    if flat.any():
        return 0.0, "refuted", ["flat boundary piece through the base point"]
    if np.any(x_n < -1e-9 * diam):
        # frame axis is not supporting; certificate cannot be given
        return 0.0, "indeterminate", ["samples fall below the tangent plane"]
    mask = r > 1e-12 * diam
    tol = 1e-9 * diam
    eta_full = _largest_eta(r[mask] ** a, x_n[mask], tol)
    # sampling-stability check: quarter the samples, recompute
    sub = np.zeros_like(mask)
    sub[::4] = True
    m2 = mask & sub
    eta_coarse = _largest_eta(r[m2] ** a, x_n[m2], tol)
    if not np.isfinite(eta_full):
        return 0.0, "indeterminate", ["no sample constrains eta"]
    # dimensionless collapse test: eta has units length^(1-a)
    if eta_full * (0.5 * diam) ** (a - 1.0) <= 1e-5:
        return float(eta_full), "refuted", ["sampled eta collapses toward zero"]
    if np.isfinite(eta_coarse) and eta_full < 0.8 * eta_coarse:
        notes.append(
            "eta shrinks under sample refinement; inclusion likely fails in the limit")
        return float(eta_full), "indeterminate", notes
    return float(eta_full), "certified", notes


def certify_a_eta(domain: ConvexDomain, z, a: float,
                  n_samples: int = 4096) -> AEtaCertificate:
    """Certify the pointwise inclusion x_n >= eta |x'|^a at boundary point z.

    The frame at z is aligned with the bisector of the active inward
    normals. The largest eta valid on all sampled boundary and interior
    points is found by bisection (relative tolerance 1e-6). The status is
    ``refuted`` when a flat boundary piece passes through z, and
    ``indeterminate`` when the sampled eta is unstable under sample
    refinement (the hallmark of an inclusion that fails only in the limit).

    Parameters
    ----------
    domain : ConvexDomain
    z : array_like
        Boundary point.
    a : float
        Cusp exponent, a >= 1.
    n_samples : int, optional
        Boundary sample budget (a quarter as many interior samples).

    Returns
    -------
    AEtaCertificate
    """
    if a < 1:
        raise ParameterError("cusp exponent a must be >= 1")
    z = _as_point(z, domain.dim)
    if domain.boundary_distance(z) > 10 * domain.tol:
        raise DomainMembershipError("base point z is not on the boundary")
    bnd, inner = _certification_samples(domain, n_samples)
    samples = np.vstack([bnd, inner]) if len(inner) else bnd
    eta, status, notes = _certify_at(domain, z, a, samples, domain.diam)
    return AEtaCertificate(a=float(a), eta=eta, point=z, status=status,
                           n_samples=int(len(samples)), notes=notes)


def certify_a_eta_domain(domain: ConvexDomain, a: float,
                         n_samples: int = 4096,
                         n_base_points: int = 64) -> AEtaCertificate:
    """Domain-wide (a, eta) certificate: the inclusion at every base point.

    Runs the pointwise certification at ``n_base_points`` spread boundary
    points plus all feature points and takes the worst case: refuted if any
    base point is refuted, indeterminate if any is indeterminate, otherwise
    certified with the minimum eta.
    """
    if a < 1:
        raise ParameterError("cusp exponent a must be >= 1")
    bnd, inner = _certification_samples(domain, n_samples)
    samples = np.vstack([bnd, inner]) if len(inner) else bnd
    base = domain.boundary_samples(n_base_points)
    feats = domain.feature_points()
    if len(feats):
        base = np.vstack([base, feats])
    base = _dedupe(base, domain.tol)
    etas = []
    notes = []
    status = "certified"
    for zb in base:
        eta_b, st_b, notes_b = _certify_at(domain, zb, a, samples, domain.diam)
        etas.append(eta_b)
        if st_b == "refuted":
            status = "refuted"
            notes = notes_b
            break
        if st_b == "indeterminate" and status != "refuted":
            status = "indeterminate"
            notes.extend(notes_b)
    eta = float(min(etas)) if etas else 0.0
    return AEtaCertificate(a=float(a), eta=eta, point="all boundary points",
                           status=status, n_samples=int(len(samples)),
                           notes=notes)


def _normal_cone_candidates(normals: np.ndarray) -> np.ndarray:
    """Directions spanning the sampled normal cone: actives, mean, sweeps."""
    if len(normals) == 1:
        return normals
    cands = [normals]
    mean = normals.sum(axis=0)
    if np.linalg.norm(mean) > 1e-12:
        cands.append((mean / np.linalg.norm(mean))[None, :])
    dim = normals.shape[1]
    if dim == 2:
        ang = np.arctan2(normals[:, 1], normals[:, 0])
        # sweep the shorter angular interval between extreme actives
        a0, a1 = ang.min(), ang.max()
        if a1 - a0 > np.pi:  # wrap: sweep the complement
            a0, a1 = a1, a0 + 2 * np.pi
        t = np.linspace(a0, a1, 33)
        cands.append(np.column_stack([np.cos(t), np.sin(t)]))
    else:
        w = halton(33, len(normals), skip=1)
        mix = w @ normals
        norms = np.linalg.norm(mix, axis=1, keepdims=True)
        good = norms[:, 0] > 1e-12
        cands.append(mix[good] / norms[good])
    return np.vstack(cands)


def _min_enclosing_radius(z, nu, check_pts, diam):
    """Smallest R with the ball through z of normal nu containing the samples.

    Returns inf when no enclosing tangent ball exists for this normal
    (some sample sits on or beyond the tangent plane).
    """
    q = check_pts - z
    dist2 = np.einsum("ij,ij->i", q, q)
    proj = q @ nu
    far = dist2 > (1e-9 * diam) ** 2
    if not far.any():
        return np.inf
    dist2, proj = dist2[far], proj[far]
    if np.any(proj <= 1e-13 * diam):
        return np.inf
    return float(np.max(dist2 / (2.0 * proj)))


def _max_interior_radius(domain, z, nu):
    """Largest R with the ball of radius R tangent at z from inside, or 0."""
    lo, hi = 0.0, domain.diam
    slack = 1e-12 * domain.diam

    def feasible(rr):
        c = z + rr * nu
        d = domain.boundary_distance_many(c[None, :])[0]
        return d >= rr * (1 - 1e-9) - slack

    if not feasible(1e-9 * domain.diam):
        return 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def sphere_conditions(domain: ConvexDomain, n_boundary: int = 256,
                      n_check: int = 2048) -> SphereCertificate:
    """Sampled exterior and interior sphere radii of the domain.

    Exterior: at each sampled boundary point the smallest enclosing ball
    tangent there is found by minimizing over normal-cone directions the
    largest ratio |p - z|^2 / (2 (p - z).nu) over check samples p. The
    reported radius is the maximum over the points admitting such a ball,
    so one radius is valid everywhere a tangent enclosing ball exists;
    points admitting none (interior points of flat faces) are recorded in
    the notes. Interior: the largest inside tangent ball per point by
    bisection; the reported radius is the minimum over sampled points, or
    None when a sampled point (a corner) admits no ball above 1e-6 * diam.

    Parameters
    ----------
    domain : ConvexDomain
    n_boundary : int, optional
        Number of base boundary points examined.
    n_check : int, optional
        Number of containment samples.

    Returns
    -------
    SphereCertificate
    """
    diam = domain.diam
    base = _dedupe(np.vstack([domain.boundary_samples(n_boundary),
                              domain.feature_points()]), domain.tol)
    check = np.vstack([domain.boundary_samples(n_check),
                       domain.feature_points()])
    witnesses = []
    notes = []

    ext_best = None   # (radius, z, center): the maximal minimal radius
    untouchable = 0
    int_best = None   # (radius, z, center): the minimal maximal radius
    int_failed = None
    for z in base:
        normals = domain.inward_normals(z, tol=10 * domain.tol)
        if len(normals) == 0:
            continue
        cands = _normal_cone_candidates(normals)
        r_ext = np.inf
        nu_ext = None
        r_int = 0.0
        nu_int = None
        for nu in cands:
            r = _min_enclosing_radius(z, nu, check, diam)
            if r < r_ext:
                r_ext, nu_ext = r, nu
            ri = _max_interior_radius(domain, z, nu)
            if ri > r_int:
                r_int, nu_int = ri, nu
        if np.isfinite(r_ext):
            if ext_best is None or r_ext > ext_best[0]:
                ext_best = (r_ext, z, z + r_ext * nu_ext)
        else:
            untouchable += 1
        if r_int <= 1e-6 * diam:
            if int_failed is None:
                int_failed = z
        elif int_best is None or r_int < int_best[0]:
            int_best = (r_int, z, z + r_int * nu_int)

    exterior_radius = None
    if ext_best is not None:
        exterior_radius = ext_best[0]
        witnesses.append((ext_best[1], ext_best[2]))
    if untouchable:
        notes.append(
            f"{untouchable} sampled boundary points admit no enclosing tangent "
            "ball (flat boundary pieces); the exterior radius covers the rest")
    interior_radius = None
    if int_failed is not None:
        notes.append(
            "interior sphere fails at a sampled boundary point near "
            f"{np.round(int_failed, 6).tolist()}")
    elif int_best is not None:
        interior_radius = int_best[0]
        witnesses.append((int_best[1], int_best[2]))
    return SphereCertificate(exterior_radius=exterior_radius,
                             interior_radius=interior_radius,
                             witnesses=witnesses, notes=notes)
