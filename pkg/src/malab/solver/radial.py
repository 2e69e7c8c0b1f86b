"""High-accuracy radial oracle for det D^2 u = F on balls.

For radial convex u on a ball of radius R the determinant factors as
(u'/r)^(n-1) u'', so with q = (u')^n the problem becomes the first-order
system q' = n r^(n-1) F(r, u), u' = q^(1/n), u'(0) = 0, closed by shooting
on the center value until u(R) = 0. The |u|^(-alpha) singularity at the
boundary is handled by shooting at a sequence of regularization floors
with Richardson extrapolation; the boundary layer where q blows up is
finished with a fitted power tail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import ParameterError, ShootingBracketError
from ..rhs import PowerLawRHS

__all__ = ["RadialProfile", "radial_solve"]

_END_GAP = 1e-12  # integrate to R (1 - gap); the last slice is the tail


@dataclass
class RadialProfile:
    """Radial solution values u(r) and derivatives u'(r) on [0, R]."""

    r: np.ndarray
    u: np.ndarray
    du: np.ndarray
    R: float
    n: int
    tol: float
    center: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.center is None:
            self.center = np.zeros(2)

    def u_at_r(self, r) -> np.ndarray:
        return np.interp(np.asarray(r, dtype=float), self.r, self.u)

    def du_at_r(self, r) -> np.ndarray:
        return np.interp(np.asarray(r, dtype=float), self.r, self.du)

    def u_at(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        rr = np.linalg.norm(pts - self.center[None, :], axis=1)
        return self.u_at_r(rr)

    def metadata(self) -> dict:
        return {"R": float(self.R), "n": int(self.n), "tol": float(self.tol),
                "u0": float(self.u[0]), **self.meta}


def _tail_correction(sol, n: int, R: float):
    """Integral of u' over the last boundary slice [R_end, R].

    Where q grows like c (R - r)^(-p) the slice contributes
    c^(1/n) delta^(1 - p/n) / (1 - p/n); for bounded q the linear estimate
    q_end^(1/n) delta is used.
    """
    delta = R * _END_GAP
    ds = R * np.geomspace(1e-11, 1e-7, 10)
    rs = R - ds
    qs = np.maximum(sol.sol(rs)[1], 0.0)
    q_end = float(np.maximum(sol.y[1, -1], 0.0))
    if np.any(qs <= 0.0):
        return q_end ** (1.0 / n) * delta
    coef = np.polyfit(np.log(ds), np.log(qs), 1)
    p = -float(coef[0])
    if p < 0.01 or p >= 0.95 * n:
        return q_end ** (1.0 / n) * delta
    c = float(np.exp(coef[1]))
    return c ** (1.0 / n) * delta ** (1.0 - p / n) / (1.0 - p / n)


def _integrate(n: int, f_ru: Callable, R: float, u0: float):
    r_end = R * (1.0 - _END_GAP)

    def rhs(r, y):
        u, q = y
        du = max(q, 0.0) ** (1.0 / n)
        dq = n * r ** (n - 1) * f_ru(r, min(u, -1e-300))
        return (du, dq)

    def hit_zero(r, y):
        return y[0]

    hit_zero.terminal = True
    hit_zero.direction = 1.0
    sol = solve_ivp(rhs, (0.0, r_end), (u0, 0.0), method="DOP853",
                    rtol=1e-12, atol=1e-14, dense_output=True,
                    events=hit_zero)
    return sol, r_end


def _shoot(n: int, f_ru: Callable, R: float, tol: float):
    """Bisection on u(0) until the boundary value vanishes to ``tol``."""

    def phi(u0):
        sol, r_end = _integrate(n, f_ru, R, u0)
        if sol.t_events[0].size > 0 and sol.t_events[0][0] < r_end:
            # hit zero early: center value too shallow
            return 1.0 + (r_end - sol.t_events[0][0]), sol
        return float(sol.y[0, -1]) + _tail_correction(sol, n, R), sol

    hi = -1e-10 * max(R, 1.0) ** 2
    p_hi, _ = phi(hi)
    shrinks = 0
    while p_hi <= 0.0 and shrinks < 60:
        hi *= 0.5
        p_hi, _ = phi(hi)
        shrinks += 1
    lo = -max(1.0, R**2)
    p_lo, sol_lo = phi(lo)
    doublings = 0
    while p_lo > 0.0:
        lo *= 2.0
        doublings += 1
        if doublings > 60:
            raise ShootingBracketError(
                "no shooting bracket: boundary residual stayed positive",
                tried_interval=(lo, hi))
        p_lo, sol_lo = phi(lo)
    if p_hi <= 0.0:
        raise ShootingBracketError(
            "no shooting bracket: boundary residual stayed negative",
            tried_interval=(lo, hi))
    best = (abs(p_lo), lo, sol_lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        p_mid, sol_mid = phi(mid)
        if abs(p_mid) < best[0]:
            best = (abs(p_mid), mid, sol_mid)
        if abs(p_mid) < tol:
            break
        if p_mid > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-17 * max(1.0, abs(lo)):
            break
    _, u0, sol = best
    return u0, sol


def _profile_grid(R: float) -> np.ndarray:
    r_end = R * (1.0 - _END_GAP)
    bulk = np.linspace(0.0, r_end, 1200)
    layer = R - R * np.geomspace(1e-11, 0.5, 600)
    rg = np.unique(np.concatenate([bulk, layer]))
    return rg[rg <= r_end]


def radial_solve(n: int, F: Union[PowerLawRHS, Callable],
                 tol: float = 1e-10, *, R: Optional[float] = None,
                 floors: Optional[list] = None,
                 center=None) -> RadialProfile:
    """Shooting solution of (u'/r)^(n-1) u'' = F(r, u), u'(0) = 0, u(R) = 0.

    Parameters
    ----------
    n : int
        Dimension (any n >= 2; the radial reduction is exact).
    F : PowerLawRHS or callable
        Structured right-hand side on a ball domain (radius inferred), or
        a plain callable f(r, u). Callables need ``R``.
    tol : float
        Target size of |u(R)| for the shooting residual.
    R : float, optional
        Ball radius; required for callable F.
    floors : list of float, optional
        Regularization floors for the |u|^(-alpha) singularity; default
        1e-3 * 4^-j for j = 0..6 (only used when F carries alpha > 0).

    Returns
    -------
    RadialProfile

    Raises
    ------
    ShootingBracketError
        No sign change found for the shooting residual.
    """
    if n < 2:
        raise ParameterError("dimension n must be at least 2")
    singular = False
    if isinstance(F, PowerLawRHS):
        cfg = F.domain.to_config()
        if cfg.get("kind") != "ball":
            raise ParameterError("radial oracle needs a ball domain")
        R = float(cfg["radius"])
        center = np.asarray(cfg["center"], dtype=float)
        singular = F.alpha > 0

        def f_of(eps):
            if eps is None:
                return lambda r, u: float(
                    F.evaluate_at_distance(R - r, u))
            return lambda r, u: float(
                F.evaluate_at_distance(R - r, min(u, -eps)))
    else:
        if R is None:
            raise ParameterError("callable right-hand sides need the "
                                 "radius R")
        R = float(R)

        def f_of(eps):
            return lambda r, u: float(F(r, u))
    if center is None:
        center = np.zeros(n)
    center = np.asarray(center, dtype=float)

    rg = _profile_grid(R)
    meta = {}
    if not singular:
        u0, sol = _shoot(n, f_of(None), R, tol)
        ys = sol.sol(rg)
        u_grid = ys[0]
        q_grid = np.maximum(ys[1], 0.0)
    else:
        if floors is None:
            floors = [1e-3 * 4.0 ** (-j) for j in range(7)]
        u_prev = None
        u_grid = None
        q_grid = None
        diffs = []
        for eps in floors:
            u0, sol = _shoot(n, f_of(eps), R, tol)
            ys = sol.sol(rg)
            u_new = ys[0]
            q_new = np.maximum(ys[1], 0.0)
            if u_grid is not None:
                diffs.append(float(np.max(np.abs(u_new - u_grid))))
            u_prev = u_grid
            u_grid, q_grid = u_new, q_new
            if diffs and diffs[-1] < 0.1 * max(tol, 1e-12):
                break
        # geometric extrapolation over floors when the ratio is stable
        if len(diffs) >= 2 and diffs[-2] > 0 and u_prev is not None:
            ratio = diffs[-1] / diffs[-2]
            if 0.0 < ratio < 0.9:
                u_grid = u_grid + (u_grid - u_prev) * ratio / (1.0 - ratio)
        meta["floors_used"] = len(diffs) + 1
        meta["floor_diffs"] = diffs
    du_grid = q_grid ** (1.0 / n)
    r_full = np.append(rg, R)
    u_full = np.append(u_grid, 0.0)
    du_full = np.append(du_grid, du_grid[-1])
    meta["u_end_value"] = float(u_grid[-1])
    return RadialProfile(r=r_full, u=u_full, du=du_full, R=R, n=int(n),
                         tol=float(tol), center=center, meta=meta)
