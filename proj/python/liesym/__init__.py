"""Symmetry systems of Lie systems and PDE Lie systems."""

from ._liesym import (
    LiesymError,
    catalog_names,
    check_algebra,
    curvature,
    family_residuals,
    integrate,
    run_cli,
    structure_constants,
    symmetry_system,
)

SL2 = [(1, 2, 1, "1"), (1, 3, 2, "2"), (2, 3, 3, "1")]

__all__ = [
    "LiesymError",
    "SL2",
    "catalog_names",
    "check_algebra",
    "curvature",
    "family_residuals",
    "integrate",
    "run_cli",
    "structure_constants",
    "symmetry_system",
]
