"""2D monotone wide-stencil solver and high-accuracy radial oracle."""

from .grid import Grid2D, discretize_domain
from .scheme import (
    DiscreteSolution,
    ma_operator,
    solve_fixed_rhs,
    solve_singular,
)
from .radial import RadialProfile, radial_solve

__all__ = [
    "Grid2D",
    "discretize_domain",
    "DiscreteSolution",
    "ma_operator",
    "solve_fixed_rhs",
    "solve_singular",
    "RadialProfile",
    "radial_solve",
]
