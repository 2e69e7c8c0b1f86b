"""Monotone wide-stencil scheme for det D^2 u = f and the singular loop.

The discrete operator at a node is the minimum over orthogonal direction
pairs of the product of positive-part second differences. It is degenerate
elliptic (non-increasing in the center value, non-decreasing in neighbor
values), which gives the discrete comparison principle the singular
continuation leans on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import IterationLimitError, ParameterError
from ..rhs import PowerLawRHS, RegularizedRHS
from .grid import Grid2D

__all__ = ["DiscreteSolution", "ma_operator", "solve_fixed_rhs",
           "solve_singular"]


@dataclass
class DiscreteSolution:
    """Converged node values with iteration metadata.

    Boundary values are identically zero; ``values`` covers interior nodes
    in grid order. ``residual_history`` records (label, value) milestones;
    for singular runs ``level_history`` records per-floor sup-norm moves.
    """

    grid: Grid2D
    values: np.ndarray
    residual_history: list = field(default_factory=list)
    level_history: list = field(default_factory=list)
    eps_level: Optional[float] = None
    method: str = "auto"
    sweeps: int = 0
    converged: bool = True

    _interp: object = field(default=None, repr=False, compare=False)

    def u_at(self, points) -> np.ndarray:
        """Linear interpolation of the solution at arbitrary domain points.

        The triangulation includes boundary samples pinned to zero, so the
        interpolant is defined up to the boundary.
        """
        from scipy.interpolate import LinearNDInterpolator

        if self._interp is None:
            bnd = self.grid.domain.boundary_samples(2048)
            pts = np.vstack([self.grid.nodes, bnd])
            vals = np.concatenate([self.values, np.zeros(len(bnd))])
            object.__setattr__(self, "_interp",
                               LinearNDInterpolator(pts, vals, fill_value=np.nan))
        return self._interp(np.atleast_2d(np.asarray(points, dtype=float)))

    def second_difference_min(self) -> float:
        return float(np.min(self.grid.second_differences(self.values)))

    def to_table(self) -> np.ndarray:
        """Columnar (x, y, d_x, u) records, one row per node."""
        return np.column_stack([self.grid.nodes, self.grid.node_dist,
                                self.values])

    def metadata(self) -> dict:
        return {
            "h": self.grid.h,
            "stencil_width": self.grid.width,
            "n_nodes": self.grid.n_nodes,
            "method": self.method,
            "sweeps": int(self.sweeps),
            "converged": bool(self.converged),
            "eps_level": self.eps_level,
            "residual_history": [[str(k), float(v)]
                                 for k, v in self.residual_history],
            "level_history": [[float(e), float(d)]
                              for e, d in self.level_history],
        }


def ma_operator(grid: Grid2D, u: np.ndarray, node: Optional[int] = None):
    """Wide-stencil Monge-Ampere operator value(s).

    Minimum over stencil direction pairs of the product of positive parts
    of the two generalized second differences. ``node`` selects a single
    node; None evaluates all nodes.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.n_nodes,):
        raise ParameterError("u must carry one value per interior node")
    prods = grid.pair_products(u)
    vals = prods.min(axis=0)
    if node is None:
        return vals
    return float(vals[node])


def _arm_coeffs(grid: Grid2D):
    rp, rm = grid.plus_rho, grid.minus_rho
    cp = 2.0 / (rp * (rp + rm))
    cm = 2.0 / (rm * (rp + rm))
    c0 = 2.0 / (rp * rm)
    return cp, cm, c0


def _neighbor_part(grid, u, cp, cm):
    up = np.where(grid.plus_idx >= 0, u[grid.plus_idx], 0.0)
    um = np.where(grid.minus_idx >= 0, u[grid.minus_idx], 0.0)
    return cp * up + cm * um


def _node_update(grid, u, f, cp, cm, c0, subset=None):
    """Exact per-node update: root of (A1 - c1 u)(A2 - c2 u) = f.

    A_k is the neighbor part of the k-th active-pair second difference and
    c_k its center coefficient; the smaller root keeps both factors
    nonnegative. The quadratic is solved in whichever form avoids
    cancellation.
    """
    A = _neighbor_part(grid, u, cp, cm)
    d2 = A - c0 * u[None, :]
    pos = np.maximum(d2, 0.0)
    prods = pos[grid.pairs[:, 0]] * pos[grid.pairs[:, 1]]
    act = np.argmin(prods, axis=0)
    i1 = grid.pairs[act, 0]
    i2 = grid.pairs[act, 1]
    cols = np.arange(grid.n_nodes)
    A1, A2 = A[i1, cols], A[i2, cols]
    c1, c2 = c0[i1, cols], c0[i2, cols]
    if subset is not None:
        A1, A2, c1, c2 = A1[subset], A2[subset], c1[subset], c2[subset]
        fs = f[subset]
    else:
        fs = f
    S = A1 * c2 + A2 * c1
    disc = np.sqrt((A1 * c2 - A2 * c1) ** 2 + 4.0 * c1 * c2 * fs)
    root_std = (S - disc) / (2.0 * c1 * c2)
    with np.errstate(divide="ignore", invalid="ignore"):
        root_cit = 2.0 * (A1 * A2 - fs) / (S + disc)
    return np.where(S > 0, root_cit, root_std)


def _residual(grid, u, f, cp, cm, c0):
    A = _neighbor_part(grid, u, cp, cm)
    pos = np.maximum(A - c0 * u[None, :], 0.0)
    prods = pos[grid.pairs[:, 0]] * pos[grid.pairs[:, 1]]
    return prods.min(axis=0) - f


def _poisson_init(grid, f, cp, cm, c0):
    """Convex warm start: solve the cut-cell Laplace proxy L u = n f^(1/n).

    For radially balanced data the proxy matches the Monge-Ampere solution
    closely (exactly for constant-curvature quadratics), and it starts every
    stencil direction strictly convex so the semismooth Newton Jacobian has
    no clipped rows.
    """
    axes = [d for d, v in enumerate(grid.dirs)
            if tuple(v) in ((1, 0), (0, 1))]
    m = grid.n_nodes
    cols = np.arange(m)
    rows_list, cols_list, vals_list = [], [], []
    diag = np.zeros(m)
    for d in axes:
        diag -= c0[d]
        for idx_arr, coef_arr in ((grid.plus_idx, cp), (grid.minus_idx, cm)):
            nb = idx_arr[d]
            has = nb >= 0
            rows_list.append(cols[has])
            cols_list.append(nb[has])
            vals_list.append(coef_arr[d][has])
    rows = np.concatenate(rows_list + [cols])
    cls = np.concatenate(cols_list + [cols])
    vals = np.concatenate(vals_list + [diag])
    L = sp.coo_matrix((vals, (rows, cls)), shape=(m, m)).tocsr()
    g = len(axes) * np.maximum(f, 0.0) ** (1.0 / max(len(axes), 1))
    try:
        u = spla.spsolve(L, g)
    except Exception:
        return np.zeros(m)
    if not np.all(np.isfinite(u)):
        return np.zeros(m)
    return np.minimum(u, 0.0)


def _newton_matrix(grid, u, f, cp, cm, c0):
    A = _neighbor_part(grid, u, cp, cm)
    d2 = A - c0 * u[None, :]
    pos = np.maximum(d2, 0.0)
    prods = pos[grid.pairs[:, 0]] * pos[grid.pairs[:, 1]]
    act = np.argmin(prods, axis=0)
    cols = np.arange(grid.n_nodes)
    rows_list, cols_list, vals_list = [], [], []
    diag = np.zeros(grid.n_nodes)
    for leg in (0, 1):
        d_i = grid.pairs[act, leg]
        other = grid.pairs[act, 1 - leg]
        g_other = pos[other, cols]
        active = d2[d_i, cols] > 0.0
        w = np.where(active, g_other, 0.0)
        diag += -w * c0[d_i, cols]
        for idx_arr, coef_arr in ((grid.plus_idx, cp), (grid.minus_idx, cm)):
            nb = idx_arr[d_i, cols]
            has = nb >= 0
            rows_list.append(cols[has])
            cols_list.append(nb[has])
            vals_list.append((w * coef_arr[d_i, cols])[has])
    # rows where both legs are clipped contribute nothing; freeze them
    dead = diag == 0.0
    diag[dead] = 1.0
    rows = np.concatenate(rows_list + [cols])
    cls = np.concatenate(cols_list + [cols])
    vals = np.concatenate(vals_list + [diag])
    J = sp.coo_matrix((vals, (rows, cls)),
                      shape=(grid.n_nodes, grid.n_nodes)).tocsr()
    return J, dead


def solve_fixed_rhs(grid: Grid2D, f, *, tol: float = 1e-8, rtol: float = 0.0,
                    max_iters: int = 100000, method: str = "auto",
                    u0: Optional[np.ndarray] = None) -> DiscreteSolution:
    """Solve the discrete problem ma_operator(u) = f, u = 0 on the boundary.

    Parameters
    ----------
    grid : Grid2D
    f : array_like
        Nonnegative right-hand side per node.
    tol : float
        Absolute residual tolerance (every node within ``tol + rtol |f|``).
    rtol : float
        Relative residual allowance for large right-hand sides.
    max_iters : int
        Sweep budget before an iteration-limit error.
    method : str
        "auto" (exact-update sweeps then semismooth Newton), "jacobi",
        "gauss_seidel", or "newton".
    u0 : array, optional
        Warm start; default zero.

    Returns
    -------
    DiscreteSolution

    Raises
    ------
    IterationLimitError
        Residual still above tolerance after the sweep budget.
    """
    f = np.asarray(f, dtype=float) * np.ones(grid.n_nodes)
    if np.any(f < 0) or not np.all(np.isfinite(f)):
        raise ParameterError("right-hand side must be finite and >= 0")
    if method not in ("auto", "jacobi", "gauss_seidel", "newton"):
        raise ParameterError(f"unknown method '{method}'")
    cp, cm, c0 = _arm_coeffs(grid)
    u = np.zeros(grid.n_nodes) if u0 is None else np.array(u0, dtype=float)
    tol_vec = tol + rtol * np.abs(f)
    history = []
    sweeps = 0
    red = (grid.ij[:, 0] + grid.ij[:, 1]) % 2 == 0

    def res_ok(r):
        return np.all(np.abs(r) <= tol_vec)

    last_update = np.inf
    use_newton = method in ("auto", "newton")
    sweep_method = "gauss_seidel" if method == "gauss_seidel" else "jacobi"
    warm_target = 0 if method == "newton" else (200 if use_newton else max_iters)

    while sweeps < max_iters:
        r = _residual(grid, u, f, cp, cm, c0)
        rn = float(np.max(np.abs(r)))
        history.append((f"sweep{sweeps}", rn))
        if res_ok(r) and last_update < 1e-10:
            break
        if use_newton and sweeps >= warm_target:
            J, dead = _newton_matrix(grid, u, f, cp, cm, c0)
            rhs = -r
            rhs[dead] = 0.0
            try:
                delta = spla.spsolve(J, rhs)
            except Exception:
                delta = None
            stepped = False
            if delta is not None and np.all(np.isfinite(delta)):
                s = 1.0
                for _ in range(30):
                    trial = u + s * delta
                    rt = _residual(grid, trial, f, cp, cm, c0)
                    if np.max(np.abs(rt)) < rn * (1.0 - 1e-4 * s) or res_ok(rt):
                        last_update = float(np.max(np.abs(s * delta)))
                        u = trial
                        stepped = True
                        break
                    s *= 0.5
            sweeps += 1
            if stepped:
                continue
            # Newton stalled: fall back to exact-update sweeps for a while
            warm_target = sweeps + 50
        if sweep_method == "jacobi":
            new = _node_update(grid, u, f, cp, cm, c0)
            last_update = float(np.max(np.abs(new - u)))
            u = new
            sweeps += 1
        else:
            for mask in (red, ~red):
                new = _node_update(grid, u, f, cp, cm, c0, subset=mask)
                prev = u[mask]
                u = u.copy()
                u[mask] = new
                last_update = float(np.max(np.abs(new - prev)))
            sweeps += 1
    else:
        raise IterationLimitError(
            f"no convergence after {max_iters} sweeps "
            f"(residual {history[-1][1]:.3e})",
            diagnostics={"residual_history": history[-50:],
                         "max_residual": history[-1][1]})

    # roundoff guard: the exact solution is <= 0 for f >= 0
    u[np.abs(u) <= 1e-14] = np.minimum(u[np.abs(u) <= 1e-14], 0.0)
    return DiscreteSolution(grid=grid, values=u,
                            residual_history=history[-10:], method=method,
                            sweeps=sweeps, converged=True)


def solve_singular(grid: Grid2D, F: PowerLawRHS, schedule=None, *,
                   theta: float = 0.5, inner_tol: float = 1e-8,
                   outer_tol: float = 1e-6, max_inner: int = 500,
                   method: str = "auto") -> DiscreteSolution:
    """Continuation solve of det D^2 u = F(x, u) with u-floor regularization.

    The singular factor |u|^(-alpha) is floored at decreasing levels
    eps_k; each level runs a damped Picard iteration (freeze u in F, solve
    the fixed-RHS problem, relax with weight theta), warm-started from the
    previous level. Stops once successive levels differ by less than
    ``outer_tol`` in sup norm.

    Parameters
    ----------
    grid : Grid2D
    F : PowerLawRHS
        Structured right-hand side on the grid's domain.
    schedule : sequence of float, optional
        Decreasing floors; default 0.1 * 2^-k for k = 0..12.
    theta : float
        Picard damping weight; halved when the update norm grows for 10
        consecutive inner steps.

    Returns
    -------
    DiscreteSolution

    Raises
    ------
    IterationLimitError
        Damping exhausted (theta < 1e-3), an inner loop stalled, or the
        levels ran out before reaching ``outer_tol``.
    """
    if schedule is None:
        schedule = [0.1 * 2.0 ** (-k) for k in range(13)]
    schedule = list(schedule)
    if any(e2 >= e1 for e1, e2 in zip(schedule, schedule[1:])):
        raise ParameterError("floor schedule must be strictly decreasing")
    dists = grid.node_dist
    u = np.zeros(grid.n_nodes)
    level_history = []
    history = []
    total_sweeps = 0
    prev_level = None
    converged = False
    eps_used = schedule[0]
    for eps in schedule:
        eps_used = eps
        increases = 0
        last_norm = np.inf
        for m in range(max_inner):
            fvals = F.evaluate_at_distance(dists, np.minimum(u, -eps))
            sol = solve_fixed_rhs(grid, fvals, tol=inner_tol * 1e-2,
                                  rtol=1e-8, method=method, u0=u)
            total_sweeps += sol.sweeps
            u_new = theta * sol.values + (1.0 - theta) * u
            norm = float(np.max(np.abs(u_new - u)))
            u = u_new
            if norm >= last_norm:
                increases += 1
                if increases >= 10:
                    theta *= 0.5
                    increases = 0
                    if theta < 1e-3:
                        raise IterationLimitError(
                            "picard damping exhausted (theta < 1e-3)",
                            diagnostics={"eps": eps, "theta": theta,
                                         "residual_history": history[-50:]})
            else:
                increases = 0
            last_norm = norm
            history.append((f"eps{eps:.3e}/it{m}", norm))
            if norm < inner_tol:
                break
        else:
            raise IterationLimitError(
                f"inner picard loop at floor {eps:.3e} did not settle in "
                f"{max_inner} iterations",
                diagnostics={"eps": eps,
                             "residual_history": history[-50:]})
        if prev_level is not None:
            move = float(np.max(np.abs(u - prev_level)))
            level_history.append((eps, move))
            if move < outer_tol:
                converged = True
                prev_level = u.copy()
                break
        prev_level = u.copy()
    if not converged:
        raise IterationLimitError(
            "floor schedule exhausted before successive levels agreed to "
            f"{outer_tol:g}",
            diagnostics={"level_history": level_history,
                         "residual_history": history[-50:]})
    return DiscreteSolution(grid=grid, values=u,
                            residual_history=history[-10:],
                            level_history=level_history, eps_level=eps_used,
                            method=method, sweeps=total_sweeps,
                            converged=True)
