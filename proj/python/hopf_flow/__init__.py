"""Hopf-fibration flow: field evaluation, trajectories, the reduced H(r)
equation with its implicit Bessel relation, the first integral, and the
verification battery."""

import json as _json

from ._core import (
    DegenerateSampleError,
    DomainError,
    HopfFlowError,
    NoRootError,
    RegionError,
    SingularityError,
    TurningPointError,
    UsageError,
    bessel,
    check_names,
    derived_rates,
    eval_cartesian,
    eval_spherical,
    h_rhs,
    implicit_constant,
    integrate_h,
    linear_pde_residual,
    psi_rhs,
    rho,
    run_verify_json,
    solve_implicit,
    trace,
    transformed_linear_residual,
)


def run_verify(only=(), tol_scale=1.0, grid=20, c2=1.0, f1=()):
    """Run the check battery; returns the report document as a dict."""
    return _json.loads(run_verify_json(list(only), tol_scale, grid, c2, list(f1)))


__all__ = [name for name in dir() if not name.startswith("_")]
