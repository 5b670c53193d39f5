"""Python surface of the gasket solver core."""

from ._core import (
    Gasket,
    build_gasket,
    compute_constants,
    energy,
    eval_I,
    harmonic_extension,
    hausdorff_dimension,
    inner,
    three_solutions,
)

__all__ = [
    "Gasket",
    "build_gasket",
    "compute_constants",
    "energy",
    "eval_I",
    "harmonic_extension",
    "hausdorff_dimension",
    "inner",
    "three_solutions",
]
