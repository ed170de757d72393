"""Piecewise-spherical manifold approximation.

Fits local data with pieces of spheres instead of tangent planes: a
closed-form spherical analogue of PCA, a PC1-sign partition tree that
assembles the pieces into a manifold estimate with out-of-sample
projection, blur-and-project point-cloud denoising, and a Student-t
embedding driven by local great-circle distances.
"""

__version__ = "0.1.0"

from .denoise import DenoiseConfig, blur_step, denoise
from .embed import (
    EmbedConfig,
    affinities,
    embed,
    kl_divergence,
    knn_distances,
    spherical_knn_distances,
    stsne,
)
from .exceptions import (
    DegenerateSplitError,
    DimensionError,
    DivergenceError,
    InsufficientDataError,
    ParameterError,
    ParseError,
    SingularProjectionError,
    SphereletsError,
    VersionError,
)
from .model import SphereletModel, fit, load, save
from .numeric import knn, seeded_gaussian, sym_eig
from .partition import build_tree, route, split_cell
from .spca import (
    Hyperplane,
    Spherelet,
    SphereFitDiagnostics,
    fit_hyperplane,
    fit_sphere,
    project_plane,
    project_sphere,
    reduce_to_plane,
    sphere_distance,
)

__all__ = [
    "DenoiseConfig",
    "EmbedConfig",
    "Hyperplane",
    "SphereFitDiagnostics",
    "Spherelet",
    "SphereletModel",
    "affinities",
    "blur_step",
    "build_tree",
    "denoise",
    "embed",
    "fit",
    "fit_hyperplane",
    "fit_sphere",
    "kl_divergence",
    "knn",
    "knn_distances",
    "load",
    "project_plane",
    "project_sphere",
    "reduce_to_plane",
    "route",
    "save",
    "seeded_gaussian",
    "sphere_distance",
    "spherical_knn_distances",
    "split_cell",
    "stsne",
    "sym_eig",
    "__version__",
]
