"""Spectral Poisson solvers on the square, cylinder and cube with optimal ADI shifts."""

from ._core import (
    CubeSolution,
    CylinderSolution,
    DomainError,
    NumericalError,
    PreconditionError,
    SolveReport,
    SquareSolution,
    adi_shifts,
    cheb_coeffs_3d,
    cheb_eval_2d,
    cheb_inverse_transform_2d,
    cheb_points,
    cheb_transform_2d,
    cross_ratio_gamma,
    ellipk,
    grotzsch_mu,
    iteration_count,
    jacobi_dn,
    sample_cube,
    solve_cube,
    solve_cylinder,
    solve_fd,
    solve_square,
    verify_bounds,
    zolotarev_bound,
)

__all__ = [
    "CubeSolution",
    "CylinderSolution",
    "DomainError",
    "NumericalError",
    "PreconditionError",
    "SolveReport",
    "SquareSolution",
    "adi_shifts",
    "cheb_coeffs_3d",
    "cheb_eval_2d",
    "cheb_inverse_transform_2d",
    "cheb_points",
    "cheb_transform_2d",
    "cross_ratio_gamma",
    "ellipk",
    "grotzsch_mu",
    "iteration_count",
    "jacobi_dn",
    "sample_cube",
    "solve_cube",
    "solve_cylinder",
    "solve_fd",
    "solve_square",
    "verify_bounds",
    "zolotarev_bound",
]
