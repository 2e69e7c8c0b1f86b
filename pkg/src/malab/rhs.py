"""Structured right-hand sides F(x, t) and structure-condition checks.

The central family is the power law F(x, t) = A * d_x^(beta-n-1) * |t|^(-alpha)
on a convex domain, with A > 0, alpha >= 0 and beta >= n+1, where d_x is the
distance of x to the boundary. The exponent beta - n - 1 >= 0 makes the
boundary factor degenerate (vanishing) rather than singular; the |t| factor
is singular as t -> 0- and is the only part that ever needs regularizing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainMembershipError, ParameterError
from .geometry import ConvexDomain

__all__ = [
    "PowerLawRHS",
    "RegularizedRHS",
    "StructureReport",
    "evaluate",
    "verify_structure",
]


def _power_law(dist, t, A, alpha, beta, n):
    """Vectorized A * d^(beta-n-1) * |t|^(-alpha) with the 0^0 = 1 convention."""
    dist = np.asarray(dist, dtype=float)
    t = np.asarray(t, dtype=float)
    p = beta - n - 1.0
    if p == 0.0:
        dfac = np.ones_like(dist)
    else:
        dfac = np.maximum(dist, 0.0) ** p
    if alpha == 0.0:
        tfac = np.ones_like(t)
    else:
        tfac = np.abs(t) ** (-alpha)
    return A * dfac * tfac


@dataclass(frozen=True)
class PowerLawRHS:
    """The power-law right-hand side A * d_x^(beta-n-1) * |t|^(-alpha).

    Parameters
    ----------
    domain : ConvexDomain
        Supplies the boundary distance d_x and the dimension n.
    A : float
        Positive coefficient.
    alpha : float
        Monotonicity exponent, alpha >= 0.
    beta : float
        Boundary-degeneracy exponent, beta >= n + 1.
    """

    domain: ConvexDomain
    A: float
    alpha: float
    beta: float

    def __post_init__(self):
        n = self.domain.dim
        if not self.A > 0:
            raise ParameterError("coefficient A must be positive")
        if self.alpha < 0:
            raise ParameterError("exponent alpha must be nonnegative")
        if self.beta < n + 1:
            raise ParameterError(
                f"exponent beta must be at least n + 1 = {n + 1} "
                "(degenerate boundary factor)")

    @property
    def n(self) -> int:
        return self.domain.dim

    def evaluate(self, x, t) -> float:
        """F(x, t) for a single point x in the closed domain and t < 0."""
        t = float(t)
        if t >= 0:
            raise ParameterError("t must be negative")
        d = self.domain.boundary_distance(x)  # membership error if outside
        return float(_power_law(d, t, self.A, self.alpha, self.beta, self.n))

    def evaluate_at_distance(self, dist, t) -> np.ndarray:
        """Vectorized evaluation from precomputed boundary distances.

        No membership checks; the solver's inner loops call this with the
        distances it already carries. Negative distances are clipped to 0.
        """
        return _power_law(dist, t, self.A, self.alpha, self.beta, self.n)

    def __call__(self, x, t):
        return self.evaluate(x, t)

    def to_config(self) -> dict:
        return {"A": float(self.A), "alpha": float(self.alpha),
                "beta": float(self.beta)}


@dataclass(frozen=True)
class RegularizedRHS:
    """Floor the |t| singularity: evaluates base at min(t, -floor).

    Equal to the base whenever t <= -floor; constant in t above that level,
    which keeps the evaluation monotone non-decreasing in t and bounded on
    the closed domain times (-inf, 0).
    """

    base: PowerLawRHS
    floor: float

    def __post_init__(self):
        if not self.floor > 0:
            raise ParameterError("regularization floor must be positive")

    @property
    def domain(self) -> ConvexDomain:
        return self.base.domain

    @property
    def n(self) -> int:
        return self.base.n

    def evaluate(self, x, t) -> float:
        return self.base.evaluate(x, min(float(t), -self.floor))

    def evaluate_at_distance(self, dist, t) -> np.ndarray:
        t = np.minimum(np.asarray(t, dtype=float), -self.floor)
        return self.base.evaluate_at_distance(dist, t)

    def __call__(self, x, t):
        return self.evaluate(x, t)


def evaluate(F, x, t) -> float:
    """Evaluate a right-hand side at one point; see PowerLawRHS.evaluate."""
    return F.evaluate(x, t)


@dataclass
class BoundCheck:
    """Outcome of one sampled inequality: pass flag plus the worst sample."""

    passed: bool
    worst_margin: float
    worst_x: Optional[np.ndarray] = None
    worst_t: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "worst_margin": float(self.worst_margin),
            "worst_x": None if self.worst_x is None else list(map(float, self.worst_x)),
            "worst_t": None if self.worst_t is None else float(self.worst_t),
        }


@dataclass
class StructureReport:
    """Sampled verification of the structure conditions on a general F.

    ``monotone`` checks F(x, t1) <= F(x, t2) for sampled t1 < t2 < 0;
    ``upper`` checks F(x, t) <= A d^(beta-n-1) |t|^(-alpha);
    ``lower`` checks A d^(beta-n-1) |t|^(-alpha) <= F(x, t).
    Margins are signed; negative means violated by that amount.
    """

    monotone: BoundCheck
    upper: BoundCheck
    lower: BoundCheck
    n_samples: int = 0
    notes: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return self.monotone.passed and self.upper.passed and self.lower.passed

    def to_dict(self) -> dict:
        return {
            "monotone": self.monotone.to_dict(),
            "upper": self.upper.to_dict(),
            "lower": self.lower.to_dict(),
            "n_samples": int(self.n_samples),
            "all_passed": self.all_passed,
        }


def _eval_general(F: Callable, xs, ts):
    out = np.empty(len(xs))
    for i, (x, t) in enumerate(zip(xs, ts)):
        out[i] = F(x, float(t))
    return out


def verify_structure(F, domain: ConvexDomain, A: float, alpha: float,
                     beta: float, samples=None, n_samples: int = 512,
                     rtol: float = 1e-9) -> StructureReport:
    """Check monotonicity and the two-sided power-law bounds on samples.

    Parameters
    ----------
    F : callable
        Evaluator ``F(x, t) -> float`` for x in the domain, t < 0.
    domain : ConvexDomain
    A, alpha, beta : float
        Bound constants: upper bound A d^(beta-n-1) |t|^(-alpha) from the
        structure condition, the same expression as lower bound for the
        reverse inequality.
    samples : sequence of (x, t), optional
        Explicit sample pairs with t < 0; defaults to a deterministic
        interior Halton sweep crossed with a logarithmic t-grid.
    n_samples : int, optional
        Budget when ``samples`` is omitted.
    rtol : float, optional
        Relative slack in the comparisons.

    Returns
    -------
    StructureReport
    """
    from .sampling import interior_points

    n = domain.dim
    if samples is None:
        n_x = max(n_samples // 8, 4)
        xs_base = interior_points(domain, n_x)
        t_grid = -np.geomspace(1e-3, 10.0, 8)
        xs = np.repeat(xs_base, len(t_grid), axis=0)
        ts = np.tile(t_grid, n_x)
    else:
        xs = np.array([np.asarray(s[0], dtype=float) for s in samples])
        ts = np.array([float(s[1]) for s in samples])
    if np.any(ts >= 0):
        raise ParameterError("structure samples need t < 0")
    for x in xs:
        if not domain.contains(x):
            raise DomainMembershipError("structure sample outside the domain")

    vals = _eval_general(F, xs, ts)
    dists = np.maximum(domain.boundary_distance_many(xs), 0.0)
    bound = _power_law(dists, ts, A, alpha, beta, n)
    scale = np.maximum(np.abs(bound), 1e-300)

    # upper: F <= bound; lower: bound <= F
    up_margin = (bound - vals) / scale
    lo_margin = (vals - bound) / scale
    iu = int(np.argmin(up_margin))
    il = int(np.argmin(lo_margin))
    upper = BoundCheck(bool(up_margin[iu] >= -rtol), float(up_margin[iu]),
                       xs[iu], float(ts[iu]))
    lower = BoundCheck(bool(lo_margin[il] >= -rtol), float(lo_margin[il]),
                       xs[il], float(ts[il]))

    # monotonicity: consecutive t at the same x (sorted increasing t)
    worst = np.inf
    wx, wt = None, None
    # group samples by x, then compare consecutive t within each group
    seen = {}
    for i, x in enumerate(xs):
        seen.setdefault(tuple(np.round(x, 12)), []).append(i)
    for idxs in seen.values():
        idxs = sorted(idxs, key=lambda i: ts[i])
        for i, j in zip(idxs[:-1], idxs[1:]):
            if ts[j] <= ts[i]:
                continue
            m = (vals[j] - vals[i]) / max(abs(vals[i]), 1e-300)
            if m < worst:
                worst, wx, wt = m, xs[j], float(ts[j])
    if not np.isfinite(worst):
        worst = 0.0
    monotone = BoundCheck(bool(worst >= -rtol), float(worst), wx, wt)
    return StructureReport(monotone=monotone, upper=upper, lower=lower,
                           n_samples=int(len(xs)))
