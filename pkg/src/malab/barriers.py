"""Explicit barrier families with closed-form Hessian determinants.

Three families, each pinned to a boundary geometry:

* edge barrier  W = -M x_n^gamma sqrt(N^2 l^2 - r^2), for flat pieces and
  general convex boundary points (frame at a boundary point, r = |x'|);
* cusp barrier  W = -[(x_n/eps)^(2/a) - r^2]^(1/b), for outward cusp
  domains x_n >= eta |x'|^a with a > 2;
* sphere barrier W = -M (R^2 - |x - y0|^2)^b, sub-solution on an enclosing
  tangent ball (exterior sphere) or super-solution on an inscribed tangent
  ball (interior sphere).

Each family comes with a parameter recipe that makes the barrier a certified
sub-solution (super-solution for the interior sphere) of det D^2 u = F(x, u)
for the power-law right-hand side, a closed-form evaluator, and numerical
certification sweeps. Constants are canonical: minimal scale for
sub-solutions, maximal for super-solutions, largest admissible margins,
so certificates are reproducible and as tight as the chains allow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainMembershipError, ParameterError, RegimeError
from .geometry import ConvexDomain, LocalFrame
from .rhs import PowerLawRHS, RegularizedRHS

__all__ = [
    "EdgeBarrier",
    "CuspBarrier",
    "SphereBarrier",
    "BarrierEval",
    "BarrierCertificate",
    "FDCheckReport",
    "edge_barrier_params",
    "cusp_barrier_params",
    "sphere_barrier_params",
    "edge_barrier_eval",
    "cusp_barrier_eval",
    "sphere_barrier_eval",
    "verify_subsolution",
    "hessian_fd_check",
    "edge_capped_beta",
    "cusp_capped_beta",
    "capped_rhs_coefficient",
    "cusp_combined_exponent",
    "cusp_margin_sigma",
    "cusp_delta_condition",
    "cusp_regime_threshold",
    "sphere_sub_exponents",
]


# ---------------------------------------------------------------------------
# Shared structure checks and capping helpers
# ---------------------------------------------------------------------------


def _check_structure(n, alpha, beta, A):
    if n < 2:
        raise ParameterError("dimension n must be at least 2")
    if not A > 0:
        raise ParameterError("coefficient A must be positive")
    if alpha < 0:
        raise ParameterError("exponent alpha must be nonnegative")
    if beta < n + 1:
        raise ParameterError(f"exponent beta must be at least n + 1 = {n + 1}")


def edge_capped_beta(n: int, alpha: float, gamma_target: float) -> float:
    """Capped beta realizing a chosen edge exponent gamma_target < 1.

    The edge recipe needs beta < alpha + 2n - 1; when the actual beta is
    at or above that, the barrier is built for the capped value
    beta_hat = gamma_target (n + alpha) + n - 1 instead (and the RHS
    coefficient inflated by :func:`capped_rhs_coefficient`).
    """
    lo = 2.0 / (n + alpha)
    if not lo <= gamma_target < 1.0:
        raise ParameterError(
            f"edge gamma_target must lie in [{lo:.6g}, 1); the barrier's "
            "x_n-power replacement needs the capped beta to stay >= n + 1")
    return gamma_target * (n + alpha) + n - 1.0


def cusp_capped_beta(n: int, alpha: float, a: float, gamma_target: float) -> float:
    """Capped beta realizing a chosen cusp exponent gamma_target < 1."""
    lo = (2.0 + (2.0 * n - 2.0) / a) / (n + alpha)
    if lo >= 1.0:
        raise RegimeError(
            "no admissible cusp exponent for these parameters: the smallest "
            f"achievable value (2 + (2n - 2)/a)/(n + alpha) = {lo:.6g} is "
            "already >= 1")
    if not lo <= gamma_target < 1.0:
        raise ParameterError(
            f"cusp gamma_target must lie in [{lo:.6g}, 1); the capped beta "
            "must stay >= n + 1 for the boundary-distance replacement")
    return gamma_target * (n + alpha) - (2.0 * n - 2.0) / a + n - 1.0


def capped_rhs_coefficient(A: float, l: float, beta: float, beta_hat: float) -> float:
    """Inflated coefficient A l^(beta - beta_hat) dominating the original RHS.

    For d <= l and beta_hat <= beta, A d^(beta-n-1) <= A_hat d^(beta_hat-n-1).
    """
    if beta_hat > beta:
        raise ParameterError("capped beta cannot exceed the original beta")
    return A * l ** (beta - beta_hat)


# ---------------------------------------------------------------------------
# Result containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BarrierEval:
    """Pointwise barrier data: value, first/second derivatives, determinant.

    ``gradient`` and ``hessian`` are Cartesian for the edge and sphere
    barriers; for the cusp barrier they are the radial pair (W_r, W_n) and
    the 2x2 (r, x_n) second-derivative block, with ``parts`` carrying the
    three-term split of W_rr W_nn - W_rn^2. ``det_hessian`` is always the
    full n-dimensional determinant.
    """

    value: float
    gradient: np.ndarray
    hessian: np.ndarray
    det_hessian: float
    parts: Optional[tuple] = None


@dataclass
class BarrierCertificate:
    """Outcome of a sampled sub/super-solution sweep.

    ``min_h``/``max_h`` are the extremes of H = det D^2 W / F(x, W) over the
    sample set; ``passed`` requires min_h >= 1 - 1e-9 for a sub-solution
    (max_h <= 1 + 1e-9 for a super-solution) and W <= 0 on sampled boundary
    points.
    """

    kind: str
    passed: bool
    min_h: float
    max_h: float
    worst_point: Optional[np.ndarray]
    boundary_w_max: float
    n_samples: int
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "passed": bool(self.passed),
            "min_h": float(self.min_h),
            "max_h": float(self.max_h),
            "worst_point": None if self.worst_point is None
            else list(map(float, self.worst_point)),
            "boundary_w_max": float(self.boundary_w_max),
            "n_samples": int(self.n_samples),
            "notes": list(self.notes),
        }


@dataclass
class FDCheckReport:
    """Finite-difference validation of a closed-form Hessian determinant."""

    max_rel_error: float
    n_checked: int
    n_skipped: int
    step: float

    def to_dict(self) -> dict:
        return {"max_rel_error": float(self.max_rel_error),
                "n_checked": int(self.n_checked),
                "n_skipped": int(self.n_skipped), "step": float(self.step)}


# ---------------------------------------------------------------------------
# Grid minimization helper (deterministic, grid + ternary refinement)
# ---------------------------------------------------------------------------


def _grid_min(f, lo, hi, n_grid=10001):
    """Minimum of a smooth f on [lo, hi]: dense grid, then ternary refine."""
    r = np.linspace(lo, hi, n_grid)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        vals = f(r)
    vals = np.where(np.isnan(vals), np.inf, vals)
    j = int(np.argmin(vals))
    left = r[max(j - 1, 0)]
    right = r[min(j + 1, n_grid - 1)]
    for _ in range(100):
        m1 = left + (right - left) / 3.0
        m2 = right - (right - left) / 3.0
        if f(np.array([m1]))[0] > f(np.array([m2]))[0]:
            left = m1
        else:
            right = m2
    mid = 0.5 * (left + right)
    return float(f(np.array([mid]))[0]), float(mid)


# ---------------------------------------------------------------------------
# Edge barrier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeBarrier:
    """W = -M x_n^gamma sqrt(N^2 l^2 - r^2) in frame coordinates.

    Valid on {x_n >= 0, r <= l}; the stretch N keeps the determinant bracket
    1 - (1 + r^2 / (N^2 l^2)) gamma positive through r = l.
    """

    M: float
    N: int
    gamma: float
    l: float
    n: int
    alpha: float
    beta: float
    A: float
    frame: Optional[LocalFrame] = None
    notes: tuple = ()

    @property
    def kind(self) -> str:
        return "sub"

    def to_frame(self, pts: np.ndarray) -> np.ndarray:
        return self.frame.apply(pts) if self.frame is not None else np.asarray(pts, dtype=float)

    def to_config(self) -> dict:
        return {"family": "edge", "M": self.M, "N": self.N, "gamma": self.gamma,
                "l": self.l, "n": self.n, "alpha": self.alpha,
                "beta": self.beta, "A": self.A, "notes": list(self.notes)}


def edge_barrier_params(n: int, alpha: float, beta: float, A: float, l: float,
                        frame: Optional[LocalFrame] = None) -> EdgeBarrier:
    """Select (gamma, N, M) so the edge barrier is a certified sub-solution.

    gamma = (beta - n + 1)/(n + alpha) zeroes the x_n-exponent in the
    determinant-versus-RHS comparison; N is the smallest stretch keeping the
    determinant bracket positive up to r = l; M is the smallest scale making
    the comparison hold, found by minimizing the r-dependent factor on a
    10^4-point grid with local refinement.

    Parameters
    ----------
    n : int
        Dimension (the barrier is dimension-generic).
    alpha, beta, A : float
        Structure constants of the right-hand side.
    l : float
        Domain diameter (the frame radius the barrier must cover).
    frame : LocalFrame, optional
        Boundary frame; None means inputs are already frame coordinates.

    Returns
    -------
    EdgeBarrier

    Raises
    ------
    RegimeError
        If beta >= alpha + 2n - 1 (cap beta first, see
        :func:`edge_capped_beta`).
    """
    _check_structure(n, alpha, beta, A)
    if l <= 0:
        raise ParameterError("diameter l must be positive")
    if beta >= alpha + 2 * n - 1:
        raise RegimeError(
            "edge barrier requires beta < alpha + 2n - 1; cap beta at a "
            "target exponent first (edge_capped_beta) and inflate A "
            "(capped_rhs_coefficient)")
    gamma = (beta - n + 1.0) / (n + alpha)
    notes = []
    # smallest integer stretch with 1 - (1 + 1/N^2) gamma > 0
    N = 1
    while 1.0 - (1.0 + 1.0 / N**2) * gamma <= 0.0:
        N += 1
    if N == 1 and alpha > n:
        # with N = 1 the r-factor vanishes at r = l and no finite scale
        # certifies; one extra stretch restores a positive minimum
        N = 2
        notes.append("stretch raised to 2: the r = l endpoint degenerates "
                     "at the minimal stretch when alpha > n")

    NL2 = (N * l) ** 2

    def g(r):
        bracket = 1.0 - (1.0 + r**2 / NL2) * gamma
        return bracket * (NL2 - r**2) ** ((alpha - n) / 2.0)

    g_min, _ = _grid_min(g, 0.0, l)
    if not g_min > 0:
        raise RegimeError("edge comparison factor is not positive on [0, l]")
    M = (A / (NL2 * gamma * g_min)) ** (1.0 / (n + alpha))
    return EdgeBarrier(M=M, N=N, gamma=gamma, l=float(l), n=int(n),
                       alpha=float(alpha), beta=float(beta), A=float(A),
                       frame=frame, notes=tuple(notes))


def _edge_w_many(bar: EdgeBarrier, X: np.ndarray) -> np.ndarray:
    r2 = np.sum(X[:, :-1] ** 2, axis=1)
    S = (bar.N * bar.l) ** 2 - r2
    with np.errstate(invalid="ignore"):
        w = -bar.M * np.maximum(X[:, -1], 0.0) ** bar.gamma * np.sqrt(np.maximum(S, 0.0))
    return w


def _edge_det_many(bar: EdgeBarrier, X: np.ndarray) -> np.ndarray:
    n, gamma = bar.n, bar.gamma
    NL2 = (bar.N * bar.l) ** 2
    r2 = np.sum(X[:, :-1] ** 2, axis=1)
    xn = X[:, -1]
    S = NL2 - r2
    bracket = 1.0 - (1.0 + r2 / NL2) * gamma
    with np.errstate(divide="ignore", over="ignore"):
        det = (bar.M**n * NL2 * gamma * xn ** (n * gamma - 2.0)
               * S ** (-n / 2.0) * bracket)
    return det


def edge_barrier_eval(bar: EdgeBarrier, x) -> BarrierEval:
    """Closed-form value, gradient, Hessian, and determinant at one point.

    ``x`` is in frame coordinates with x_n > 0 and r < N l.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != bar.n:
        raise ParameterError(f"expected a point in R^{bar.n}")
    xp = x[:-1]
    xn = x[-1]
    if xn <= 0:
        raise DomainMembershipError("edge barrier needs x_n > 0")
    r2 = float(xp @ xp)
    NL2 = (bar.N * bar.l) ** 2
    S = NL2 - r2
    if S <= 0:
        raise DomainMembershipError("edge barrier needs r < N l")
    M, gamma, n = bar.M, bar.gamma, bar.n
    sqS = np.sqrt(S)
    value = -M * xn**gamma * sqS
    grad = np.empty(n)
    grad[:-1] = M * xn**gamma * xp / sqS
    grad[-1] = -M * gamma * xn ** (gamma - 1.0) * sqS
    hess = np.empty((n, n))
    hess[:-1, :-1] = M * xn**gamma * (np.eye(n - 1) + np.outer(xp, xp) / S) / sqS
    cross = M * gamma * xn ** (gamma - 1.0) * xp / sqS
    hess[:-1, -1] = cross
    hess[-1, :-1] = cross
    hess[-1, -1] = M * gamma * (1.0 - gamma) * xn ** (gamma - 2.0) * sqS
    det = float(_edge_det_many(bar, x[None, :])[0])
    return BarrierEval(value=float(value), gradient=grad, hessian=hess,
                       det_hessian=det)


# ---------------------------------------------------------------------------
# Cusp barrier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CuspBarrier:
    """W = -[(x_n/eps)^(2/a) - r^2]^(1/b) on an (a, eta) cusp region, a > 2.

    ``regime`` is "positive_parts" when b > 1 (all three determinant parts
    positive) and "signed_parts" when b <= 1 (certification rests on the
    positive margin sigma(a, b, delta)).
    """

    a: float
    b: float
    eps: float
    eta: float
    delta: float
    n: int
    alpha: float
    beta: float
    A: float
    regime: str = "positive_parts"
    frame: Optional[LocalFrame] = None
    notes: tuple = ()

    @property
    def kind(self) -> str:
        return "sub"

    def to_frame(self, pts: np.ndarray) -> np.ndarray:
        return self.frame.apply(pts) if self.frame is not None else np.asarray(pts, dtype=float)

    def to_config(self) -> dict:
        return {"family": "cusp", "a": self.a, "b": self.b, "eps": self.eps,
                "eta": self.eta, "delta": self.delta, "n": self.n,
                "alpha": self.alpha, "beta": self.beta, "A": self.A,
                "regime": self.regime, "notes": list(self.notes)}


def cusp_regime_threshold(n: int, alpha: float, beta: float) -> float:
    """The cusp-exponent threshold (2 alpha + 2)/(beta - n + 1).

    Below it the barrier exponent satisfies b > 1; at or above it, b <= 1.
    """
    return (2.0 * alpha + 2.0) / (beta - n + 1.0)


def cusp_combined_exponent(n: int, alpha: float, beta: float,
                           a: float, b: float) -> float:
    """Net |W|-exponent of the determinant-versus-RHS comparison.

    Zero at the recipe exponent b = 2(n + alpha)/(a(beta - n + 1) + 2n - 2);
    the same expression governs both cusp regimes.
    """
    return (2.0 - b - a * b + (1.0 - b) * (n - 2.0)
            + a * b * (n + 1.0 - beta) / 2.0 + alpha)


def cusp_margin_sigma(a: float, b: float, delta: float) -> float:
    """Margin constant for the signed-parts regime (b <= 1).

    Combines the two negative determinant parts, bounded on the slab
    r^2 <= delta (x_n/eps)^(2/a), with the positive third part.
    """
    return ((1.0 + delta * (a - 2.0)) * 8.0 * (b - 1.0) / (a**2 * b**3)
            + 4.0 * (a - 2.0) / (a**2 * b**2) * (1.0 - delta) ** (a - 1.0))


def cusp_delta_condition(a: float, b: float, delta: float) -> bool:
    """Margin condition equivalent to sigma(a, b, delta) > 0."""
    lhs = (a - 2.0) * (1.0 - delta) ** (a - 1.0)
    rhs = (1.0 + delta * (a - 2.0)) * (2.0 * (1.0 - b) / b)
    return lhs > rhs


def _delta_ladder():
    k = 0
    while True:
        for mant in (5.0, 2.5, 1.0):
            yield mant * 10.0 ** (-(k + 1))
        k += 1


def _cusp_margin_constant(bar_like, eps):
    """Guaranteed lower bound of H at the zeroed |W|-exponent, as K(eps)."""
    n, alpha, beta = bar_like["n"], bar_like["alpha"], bar_like["beta"]
    a, b, delta, A = bar_like["a"], bar_like["b"], bar_like["delta"], bar_like["A"]
    common = (1.0 / A) * (1.0 / eps) ** (beta - n + 1.0) * (2.0 / b) ** (n - 2.0)
    if b > 1.0:
        # keep only the positive cross part I2
        core = 8.0 * (b - 1.0) / (a**2 * b**3)
        slack = (1.0 / (1.0 - delta)) ** (2.0 - a + a * (n + 1.0 - beta) / 2.0)
        return common * core * slack
    core = cusp_margin_sigma(a, b, delta)
    slack = (1.0 / (1.0 - delta)) ** (a * (n + 1.0 - beta) / 2.0)
    return common * core * slack


def cusp_barrier_params(n: int, alpha: float, beta: float, A: float,
                        a: float, eta: float,
                        frame: Optional[LocalFrame] = None) -> CuspBarrier:
    """Select (b, delta, eps) so the cusp barrier is a certified sub-solution.

    b = 2(n + alpha)/(a(beta - n + 1) + 2n - 2) zeroes the net |W|-exponent.
    In the signed-parts regime (b <= 1), delta is the largest value of the
    ladder 0.5, 0.25, 0.1, 0.05, ... with positive margin sigma; in the
    positive-parts regime (b > 1) the canonical delta is 0.1. eps starts at
    the largest value compatible with the region inclusion,
    eps = eta delta^(a/2), and is halved until the comparison constant
    reaches 1.

    Raises
    ------
    RegimeError
        If a <= 2, or beta >= alpha + 2n - 1 - (2n - 2)/a (cap beta first,
        see :func:`cusp_capped_beta`).
    """
    _check_structure(n, alpha, beta, A)
    if a <= 2:
        raise RegimeError("cusp barrier requires exponent a > 2")
    if eta <= 0:
        raise ParameterError("cusp coefficient eta must be positive")
    if beta >= alpha + 2 * n - 1 - (2 * n - 2) / a:
        raise RegimeError(
            "cusp barrier requires beta < alpha + 2n - 1 - (2n - 2)/a; cap "
            "beta at a target exponent first (cusp_capped_beta) and inflate "
            "A (capped_rhs_coefficient)")
    b = 2.0 * (n + alpha) / (a * (beta - n + 1.0) + 2.0 * n - 2.0)
    notes = []
    threshold = cusp_regime_threshold(n, alpha, beta)
    if a < threshold:
        regime = "positive_parts"
        delta = 0.1
    else:
        regime = "signed_parts"
        if abs(a - threshold) <= 1e-12 * max(1.0, threshold):
            notes.append("regime boundary: b = 1 exactly; assigned to the "
                         "signed-parts chain")
        delta = None
        for cand in _delta_ladder():
            if cusp_delta_condition(a, b, cand):
                delta = cand
                break
            if cand < 1e-12:
                break
        if delta is None:
            raise RegimeError(
                "no admissible margin delta found; the signed-parts chain "
                "has no positive margin for these parameters")
    like = {"n": n, "alpha": alpha, "beta": beta, "a": a, "b": b,
            "delta": delta, "A": A}
    eps = eta * delta ** (a / 2.0)
    halvings = 0
    while _cusp_margin_constant(like, eps) < 1.0:
        eps *= 0.5
        halvings += 1
        if halvings > 2000:
            raise RegimeError("comparison constant will not reach 1")
    return CuspBarrier(a=float(a), b=float(b), eps=float(eps), eta=float(eta),
                       delta=float(delta), n=int(n), alpha=float(alpha),
                       beta=float(beta), A=float(A), regime=regime,
                       frame=frame, notes=tuple(notes))


def _cusp_core(bar: CuspBarrier, X: np.ndarray):
    """(r2, P, S, |W|) at frame points; S = P^(2/a) - r^2 may be negative."""
    r2 = np.sum(X[:, :-1] ** 2, axis=1)
    P = X[:, -1] / bar.eps
    with np.errstate(invalid="ignore"):
        S = np.maximum(P, 0.0) ** (2.0 / bar.a) - r2
        absw = np.maximum(S, 0.0) ** (1.0 / bar.b)
    return r2, P, S, absw


def _cusp_w_many(bar: CuspBarrier, X: np.ndarray) -> np.ndarray:
    return -_cusp_core(bar, X)[3]


def _cusp_parts_many(bar: CuspBarrier, X: np.ndarray):
    """I1, I2, I3 and (W_r / r) at strictly interior frame points."""
    a, b, eps = bar.a, bar.b, bar.eps
    r2, P, S, absw = _cusp_core(bar, X)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        i1 = (8.0 * (a - 2.0) * (b - 1.0) / (a**2 * b**3)
              * absw ** (2.0 - 3.0 * b) * P ** (2.0 / a - 2.0) * r2 / eps**2)
        i2 = (8.0 * (b - 1.0) / (a**2 * b**3)
              * absw ** (2.0 - 3.0 * b) * P ** (4.0 / a - 2.0) / eps**2)
        i3 = (4.0 * (a - 2.0) / (a**2 * b**2)
              * absw ** (2.0 - 2.0 * b) * P ** (2.0 / a - 2.0) / eps**2)
        wr_over_r = (2.0 / b) * absw ** (1.0 - b)
    return i1, i2, i3, wr_over_r


def _cusp_det_many(bar: CuspBarrier, X: np.ndarray) -> np.ndarray:
    i1, i2, i3, wr_over_r = _cusp_parts_many(bar, X)
    return wr_over_r ** (bar.n - 2.0) * (i1 + i2 + i3)


def cusp_barrier_eval(bar: CuspBarrier, x) -> BarrierEval:
    """Value, radial derivatives (W_r, W_n), the (r, x_n) second-derivative
    block, the three-part determinant split, and the full determinant.

    ``x`` is in frame coordinates, strictly inside the barrier region
    (x_n/eps)^(2/a) > r^2 with x_n > 0.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != bar.n:
        raise ParameterError(f"expected a point in R^{bar.n}")
    X = x[None, :]
    r2, P, S, absw = _cusp_core(bar, X)
    if x[-1] <= 0 or S[0] <= 0:
        raise DomainMembershipError(
            "cusp barrier needs x_n > 0 and (x_n/eps)^(2/a) > r^2")
    a, b, eps = bar.a, bar.b, bar.eps
    r = float(np.sqrt(r2[0]))
    p = float(P[0])
    w = float(absw[0])
    w_r = (2.0 / b) * w ** (1.0 - b) * r
    w_n = -(2.0 / (a * b * eps)) * w ** (1.0 - b) * p ** (2.0 / a - 1.0)
    w_rr = (2.0 / b) * w ** (1.0 - b) - (4.0 * r2[0] * (1.0 - b) / b**2) * w ** (1.0 - 2.0 * b)
    w_rn = (4.0 * r * (1.0 - b) / (a * b**2 * eps)) * w ** (1.0 - 2.0 * b) * p ** (2.0 / a - 1.0)
    w_nn = (-(4.0 * (1.0 - b) / (a**2 * b**2 * eps**2)) * w ** (1.0 - 2.0 * b) * p ** (4.0 / a - 2.0)
            + (2.0 * (a - 2.0) / (a**2 * b * eps**2)) * w ** (1.0 - b) * p ** (2.0 / a - 2.0))
    i1, i2, i3, wr_over_r = _cusp_parts_many(bar, X)
    det = float(wr_over_r[0] ** (bar.n - 2.0) * (i1[0] + i2[0] + i3[0]))
    grad = np.array([w_r, w_n])
    hess = np.array([[w_rr, w_rn], [w_rn, w_nn]])
    return BarrierEval(value=-w, gradient=grad, hessian=hess,
                       det_hessian=det,
                       parts=(float(i1[0]), float(i2[0]), float(i3[0])))


# ---------------------------------------------------------------------------
# Sphere barriers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SphereBarrier:
    """W = -M (R^2 - |x - y0|^2)^b on the ball of radius R about y0.

    kind = "sub" certifies det D^2 W >= F on a domain enclosed by the ball
    (exterior tangent sphere); kind = "super" certifies det D^2 W <= F on a
    ball inscribed in the domain (interior tangent sphere).
    """

    M: float
    b: float
    R: float
    center: np.ndarray
    kind: str
    n: int
    alpha: float
    beta: float
    A: float
    notes: tuple = ()

    def to_config(self) -> dict:
        return {"family": "sphere", "M": self.M, "b": self.b, "R": self.R,
                "center": list(map(float, self.center)), "kind": self.kind,
                "n": self.n, "alpha": self.alpha, "beta": self.beta,
                "A": self.A, "notes": list(self.notes)}


def sphere_sub_exponents(n: int, alpha: float, beta: float, b: float):
    """(R + r) and (R - r) exponents of the sub-solution comparison.

    The (R - r) exponent n(b - 1) + b alpha + n - beta vanishes at the
    recipe b = beta/(n + alpha); the (R + r) exponent n(b - 1) + b alpha - 1
    vanishes exactly when beta = n + 1.
    """
    e_plus = n * (b - 1.0) + b * alpha - 1.0
    e_minus = n * (b - 1.0) + b * alpha + n - beta
    return e_plus, e_minus


def sphere_barrier_params(n: int, alpha: float, beta: float, A: float,
                          R: float, kind: str, center=None,
                          gamma_target: Optional[float] = None) -> SphereBarrier:
    """Select (b, M) for the sphere barrier.

    kind = "sub": b = beta/(n + alpha) when beta < alpha + n; for
    alpha + n <= beta < alpha + n + 1 the exponent is the caller's
    gamma_target in (0, 1); for beta >= alpha + n + 1, b = 1. M is the
    smallest scale making the comparison chain reach 1, minimizing the
    radial factor over [0, R] on a 10^4-point grid.

    kind = "super": requires beta < n + alpha (so the exponent
    beta/(n + alpha) stays below 1); M is the largest scale keeping the
    reverse chain at or below 1.

    Raises
    ------
    RegimeError
        kind = "super" with beta >= n + alpha; kind = "sub" in the middle
        regime without a gamma_target.
    """
    _check_structure(n, alpha, beta, A)
    if R <= 0:
        raise ParameterError("sphere radius must be positive")
    if kind not in ("sub", "super"):
        raise ParameterError("kind must be 'sub' or 'super'")
    center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    if center.shape != (n,):
        raise ParameterError(f"center must be a point in R^{n}")
    notes = []

    if kind == "super":
        if beta >= n + alpha:
            raise RegimeError(
                "interior-sphere super-solution needs beta < n + alpha so "
                "its exponent beta/(n + alpha) stays below 1")
        b = beta / (n + alpha)
        notes.append("super-solution gated on beta < n + alpha, the exact "
                     "condition for exponent < 1")
        M = (A / ((2.0 * b) ** n * 2.0 * R**2 * (2.0 * R) ** (beta - n - 1.0))) \
            ** (1.0 / (n + alpha))
        return SphereBarrier(M=float(M), b=float(b), R=float(R), center=center,
                             kind=kind, n=int(n), alpha=float(alpha),
                             beta=float(beta), A=float(A), notes=tuple(notes))

    # sub-solution exponent by regime
    if beta < alpha + n:
        b = beta / (n + alpha)
    elif beta < alpha + n + 1:
        if gamma_target is None:
            raise RegimeError(
                "for alpha + n <= beta < alpha + n + 1 the sub-solution "
                "exponent is any value in (0, 1); pass gamma_target")
        if not 0.0 < gamma_target < 1.0:
            raise ParameterError("gamma_target must lie in (0, 1)")
        b = float(gamma_target)
        notes.append("middle regime: exponent set to the requested "
                     "gamma_target and the chain re-verified numerically")
    else:
        b = 1.0

    e_plus, e_minus = sphere_sub_exponents(n, alpha, beta, b)
    if b == 1.0:
        def G(r):
            return (R + r) ** alpha * (R - r) ** (alpha + n + 1.0 - beta)

        g_min, _ = _grid_min(G, 0.0, R)
        M = (A / (2.0**n * g_min)) ** (1.0 / (n + alpha))
    else:
        def G(r):
            return (R + r) ** e_plus * (R - r) ** e_minus

        g_min, _ = _grid_min(G, 0.0, R)
        lead = (1.0 - abs(2.0 * b - 1.0)) * R**2 * (2.0 * b) ** n
        if not (g_min > 0 and lead > 0):
            raise RegimeError("sub-solution chain has no positive margin")
        M = (A / (lead * g_min)) ** (1.0 / (n + alpha))
    return SphereBarrier(M=float(M), b=float(b), R=float(R), center=center,
                         kind=kind, n=int(n), alpha=float(alpha),
                         beta=float(beta), A=float(A), notes=tuple(notes))


def _sphere_w_many(bar: SphereBarrier, X: np.ndarray) -> np.ndarray:
    r2 = np.sum((X - bar.center) ** 2, axis=1)
    S = np.maximum(bar.R**2 - r2, 0.0)
    return -bar.M * S**bar.b


def _sphere_det_many(bar: SphereBarrier, X: np.ndarray) -> np.ndarray:
    n, b, M, R = bar.n, bar.b, bar.M, bar.R
    r2 = np.sum((X - bar.center) ** 2, axis=1)
    S = R**2 - r2
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        det = (2.0 * M * b) ** n * S ** (n * (b - 1.0) - 1.0) \
            * (R**2 - (2.0 * b - 1.0) * r2)
    return det


def sphere_barrier_eval(bar: SphereBarrier, x) -> BarrierEval:
    """Closed-form value, gradient, Hessian, determinant at |x - y0| < R."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != bar.n:
        raise ParameterError(f"expected a point in R^{bar.n}")
    q = x - bar.center
    r2 = float(q @ q)
    S = bar.R**2 - r2
    if S <= 0:
        raise DomainMembershipError("sphere barrier needs |x - y0| < R")
    M, b, n = bar.M, bar.b, bar.n
    value = -M * S**b
    grad = 2.0 * M * b * S ** (b - 1.0) * q
    hess = (2.0 * M * b * S ** (b - 1.0) * np.eye(n)
            + 4.0 * M * b * (1.0 - b) * S ** (b - 2.0) * np.outer(q, q))
    det = float(_sphere_det_many(bar, x[None, :])[0])
    return BarrierEval(value=float(value), gradient=grad, hessian=hess,
                       det_hessian=det)


# ---------------------------------------------------------------------------
# Certification sweeps
# ---------------------------------------------------------------------------


def _barrier_w_and_det(bar, X_frame):
    if isinstance(bar, EdgeBarrier):
        return _edge_w_many(bar, X_frame), _edge_det_many(bar, X_frame)
    if isinstance(bar, CuspBarrier):
        return _cusp_w_many(bar, X_frame), _cusp_det_many(bar, X_frame)
    if isinstance(bar, SphereBarrier):
        return _sphere_w_many(bar, X_frame), _sphere_det_many(bar, X_frame)
    raise ParameterError(f"unknown barrier type {type(bar).__name__}")


def verify_subsolution(bar, F, domain: ConvexDomain,
                       grid_spec: int = 10000) -> BarrierCertificate:
    """Sampled certification of H = det D^2 W / F(x, W) against 1.

    Draws at least ``grid_spec`` deterministic interior points (for the
    interior-sphere super-solution: points of the tangent ball), evaluates
    H at each, and checks H >= 1 - 1e-9 for sub-solutions or H <= 1 + 1e-9
    for super-solutions, plus W <= 0 at sampled boundary points.

    Parameters
    ----------
    bar : EdgeBarrier or CuspBarrier or SphereBarrier
    F : PowerLawRHS or RegularizedRHS
        Right-hand side; evaluated through precomputed boundary distances.
    domain : ConvexDomain
        The domain the comparison runs on.
    grid_spec : int, optional
        Number of interior sample points (minimum 10^4 enforced).

    Returns
    -------
    BarrierCertificate
    """
    from .sampling import interior_points

    n_pts = max(int(grid_spec), 10000)
    kind = bar.kind
    notes = []
    if kind == "super":
        # sample the tangent ball; the chain is only claimed inside it
        ball = ConvexDomain.ball(bar.center, bar.R)
        pts = interior_points(ball, n_pts)
        inside = domain.contains(pts)
        if not np.all(inside):
            notes.append(
                f"{int((~inside).sum())} ball samples fall outside the "
                "domain; the tangent ball is not contained (check geometry)")
            pts = pts[inside]
    else:
        pts = interior_points(domain, n_pts)

    X = bar.to_frame(pts) if hasattr(bar, "to_frame") else pts
    w, det = _barrier_w_and_det(bar, X)
    dists = np.maximum(domain.boundary_distance_many(pts), 0.0)
    w_neg = np.minimum(w, -1e-300)  # F needs t < 0; w <= 0 in-region
    fvals = F.evaluate_at_distance(dists, w_neg)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = det / fvals
    good = np.isfinite(h)
    if not np.all(good):
        # F = 0 (boundary-degenerate RHS at d = 0) never happens strictly
        # inside; infinities here mean W hit 0 at an interior sample
        notes.append(f"{int((~good).sum())} samples had degenerate H and "
                     "were excluded")
        h = h[good]
        pts = pts[good]
    i_min = int(np.argmin(h))
    i_max = int(np.argmax(h))
    min_h = float(h[i_min])
    max_h = float(h[i_max])
    worst = pts[i_min] if kind != "super" else pts[i_max]

    bnd = domain.boundary_samples(2048)
    if kind == "super":
        keep = np.sum((bnd - bar.center) ** 2, axis=1) <= bar.R**2
        bnd = bnd[keep]
    Xb = bar.to_frame(bnd) if hasattr(bar, "to_frame") else bnd
    wb, _ = _barrier_w_and_det(bar, Xb)
    boundary_w_max = float(np.max(wb)) if len(wb) else 0.0

    tol = 1e-9
    if kind == "super":
        passed = max_h <= 1.0 + tol and boundary_w_max <= tol
    else:
        passed = min_h >= 1.0 - tol and boundary_w_max <= tol
    return BarrierCertificate(kind=kind, passed=bool(passed), min_h=min_h,
                              max_h=max_h, worst_point=worst,
                              boundary_w_max=boundary_w_max,
                              n_samples=int(len(h)), notes=notes)


# ---------------------------------------------------------------------------
# Finite-difference oracle
# ---------------------------------------------------------------------------


def _value_fn(bar):
    if isinstance(bar, EdgeBarrier):
        return lambda X: _edge_w_many(bar, X)
    if isinstance(bar, CuspBarrier):
        return lambda X: _cusp_w_many(bar, X)
    if isinstance(bar, SphereBarrier):
        return lambda X: _sphere_w_many(bar, X)
    raise ParameterError(f"unknown barrier type {type(bar).__name__}")


def _singular_margin(bar, x):
    """Distance estimate from x (frame coordinates) to the singular set."""
    if isinstance(bar, EdgeBarrier):
        r = float(np.linalg.norm(x[:-1]))
        return min(float(x[-1]), bar.N * bar.l - r)
    if isinstance(bar, CuspBarrier):
        r2 = float(np.sum(x[:-1] ** 2))
        p = float(x[-1]) / bar.eps
        if p <= 0:
            return 0.0
        S = p ** (2.0 / bar.a) - r2
        grad = np.sqrt(4.0 * r2 + (2.0 / (bar.a * bar.eps)) ** 2
                       * p ** (2.0 * (2.0 / bar.a - 1.0)))
        return min(float(x[-1]), S / max(grad, 1e-300))
    if isinstance(bar, SphereBarrier):
        return bar.R - float(np.linalg.norm(x - bar.center))
    raise ParameterError(f"unknown barrier type {type(bar).__name__}")


def _fd_hessian(values, x, h):
    n = x.size
    H = np.empty((n, n))
    f0 = values(x[None, :])[0]
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        H[i, i] = (values((x + ei)[None, :])[0] - 2.0 * f0
                   + values((x - ei)[None, :])[0]) / h**2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            H[i, j] = (values((x + ei + ej)[None, :])[0]
                       - values((x + ei - ej)[None, :])[0]
                       - values((x - ei + ej)[None, :])[0]
                       + values((x - ei - ej)[None, :])[0]) / (4.0 * h**2)
            H[j, i] = H[i, j]
    return H


def hessian_fd_check(bar, points, h: float) -> FDCheckReport:
    """Compare the closed-form determinant with a central-difference Hessian.

    Points (in frame coordinates) closer than 10 h to the barrier's singular
    set are skipped and counted in the report.

    Parameters
    ----------
    bar : barrier
    points : array_like, shape (m, n)
    h : float
        Central-difference step.

    Returns
    -------
    FDCheckReport
        Maximum relative determinant error over the checked points.
    """
    if h <= 0:
        raise ParameterError("finite-difference step must be positive")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    values = _value_fn(bar)
    max_err = 0.0
    checked = 0
    skipped = 0
    for x in pts:
        if _singular_margin(bar, x) < 10.0 * h:
            skipped += 1
            continue
        if isinstance(bar, EdgeBarrier):
            det_exact = float(_edge_det_many(bar, x[None, :])[0])
        elif isinstance(bar, CuspBarrier):
            det_exact = float(_cusp_det_many(bar, x[None, :])[0])
        else:
            det_exact = float(_sphere_det_many(bar, x[None, :])[0])
        H = _fd_hessian(values, x, h)
        det_fd = float(np.linalg.det(H))
        err = abs(det_fd - det_exact) / max(abs(det_exact), 1e-300)
        max_err = max(max_err, err)
        checked += 1
    return FDCheckReport(max_rel_error=max_err, n_checked=checked,
                         n_skipped=skipped, step=float(h))
