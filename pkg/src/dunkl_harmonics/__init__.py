"""Dunkl harmonic analysis for the reflection group Z_2^d: transforms, heat and
fractional Laplacians, paraproducts, and numerical checks of Leibniz-type bounds."""
from .core import (FREQUENCY, SPACE, Grid, SampledFunction, TransformPlan, convolve,
                   dunkl_derivative, dunkl_inverse, dunkl_laplacian, dunkl_transform,
                   inversion_defect, lp_norm, plancherel_defect, translate)
from .geometry import ReflectionSetup, ball_volume, orbit_distance
from .operators import (ParaproductSpec, decompose_product, fractional_laplacian,
                        fractional_laplacian_subordination, heat_apply, heat_kernel,
                        heat_kernel_bivariate, heat_kernel_closed_form, paraproduct)
from .special import dunkl_kernel, gamma, normalized_bessel
from .windows import DecompositionWindows, SpectralWindow, lp_partition, window_transfer

__version__ = "0.1.0"

__all__ = [
    "FREQUENCY", "SPACE", "Grid", "SampledFunction", "TransformPlan", "convolve",
    "dunkl_derivative", "dunkl_inverse", "dunkl_laplacian", "dunkl_transform",
    "inversion_defect", "lp_norm", "plancherel_defect", "translate", "ReflectionSetup",
    "ball_volume", "orbit_distance", "ParaproductSpec", "decompose_product",
    "fractional_laplacian", "fractional_laplacian_subordination", "heat_apply", "heat_kernel",
    "heat_kernel_bivariate", "heat_kernel_closed_form", "paraproduct", "dunkl_kernel", "gamma",
    "normalized_bessel", "DecompositionWindows", "SpectralWindow", "lp_partition",
    "window_transfer",
]
