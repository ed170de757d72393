"""Point-cloud denoising by Gaussian blurring and local projection.

Five ablations of the same per-pass skeleton:

    gbms   blur toward the Gaussian neighborhood mean only
    ltp    project each point onto its local PCA tangent plane only
    mbms   blur, then project onto the tangent plane of the blurred
           neighborhood
    smbms  blur, then project onto the best-fit local sphere of the
           blurred neighborhood
    lsp    project onto the local sphere without blurring

Neighborhoods are the k nearest points (self included) of the running
estimate at the start of each pass; blur-then-fit methods fit on the
blurred images of those original neighbors, which keeps neighborhoods
stable within a pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DimensionError,
    InsufficientDataError,
    ParameterError,
    SingularProjectionError,
)
from .numeric import knn_indices
from .spca import _fit_plane_width, fit_sphere, project_plane, project_sphere

METHODS = ("gbms", "ltp", "mbms", "smbms", "lsp")
_SPHERE_METHODS = ("smbms", "lsp")
_MODEL_METHODS = ("ltp", "mbms", "smbms", "lsp")


@dataclass(frozen=True)
class DenoiseConfig:
    method: str
    k: int
    sigma: float = 1.0
    iters: int = 1
    d: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.sigma <= 0:
            raise ParameterError(f"sigma must be > 0, got {self.sigma}")
        if self.iters < 1:
            raise ParameterError(f"iters must be >= 1, got {self.iters}")
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if self.method in _MODEL_METHODS and self.k < self.d + 3:
            raise ParameterError(
                f"method {self.method!r} fits local models and needs k >= d+3 = {self.d + 3}"
            )


def _blur(X: np.ndarray, nbr: np.ndarray, sigma: float) -> np.ndarray:
    hoods = X[nbr]                                      # (n, k, D)
    d2 = np.sum((hoods - X[:, None, :]) ** 2, axis=2)
    w = np.exp(-d2 / (2.0 * sigma * sigma))
    w /= np.sum(w, axis=1, keepdims=True)               # self weight keeps the sum >= 1
    return np.einsum("nk,nkj->nj", w, hoods)


def blur_step(X: np.ndarray, k: int, sigma: float) -> np.ndarray:
    """One Gaussian-mean shift: each point moves to the softmax-weighted
    average of its k-neighborhood (self included)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if sigma <= 0:
        raise ParameterError(f"sigma must be > 0, got {sigma}")
    if not 1 <= k <= X.shape[0]:
        raise ParameterError(f"k={k} out of range [1, {X.shape[0]}]")
    return _blur(X, knn_indices(X, k, exclude_self=False), sigma)


def denoise(
    X: np.ndarray,
    cfg: DenoiseConfig,
    return_info: bool = False,
) -> np.ndarray | tuple[np.ndarray, int]:
    """Run ``cfg.iters`` denoising passes and return the cleaned points.

    A per-point sphere fit that degenerates (or whose projection is
    singular) falls back to the local tangent plane; with
    ``return_info=True`` the count of such fallbacks is returned as well.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float)).copy()
    n, D = X.shape
    if n < cfg.k:
        raise ParameterError(f"k={cfg.k} exceeds sample size {n}")
    if cfg.method in _SPHERE_METHODS and cfg.d + 1 > D:
        raise DimensionError(f"a {cfg.d}-sphere needs ambient dimension >= {cfg.d + 1}, got {D}")
    if cfg.method in _MODEL_METHODS and cfg.d > D:
        raise DimensionError(f"d={cfg.d} exceeds ambient dimension {D}")

    fallbacks = 0
    for _ in range(cfg.iters):
        X, fb = _pass(X, cfg)
        fallbacks += fb
    if return_info:
        return X, fallbacks
    return X


def _pass(X: np.ndarray, cfg: DenoiseConfig) -> tuple[np.ndarray, int]:
    n, D = X.shape
    nbr = knn_indices(X, cfg.k, exclude_self=False)
    if cfg.method == "gbms":
        return _blur(X, nbr, cfg.sigma), 0

    Y = _blur(X, nbr, cfg.sigma) if cfg.method in ("mbms", "smbms") else X
    plane_dim = min(cfg.d, D)
    out = np.empty_like(X)
    fallbacks = 0
    for i in range(n):
        hood = Y[nbr[i]]
        if cfg.method in ("ltp", "mbms"):
            out[i] = project_plane(Y[i], _fit_plane_width(hood, plane_dim))
            continue
        try:
            s, _ = fit_sphere(hood, cfg.d)
            if s.degenerate:
                raise SingularProjectionError("local sphere fit degenerated")
            out[i] = project_sphere(Y[i], s)
        except (SingularProjectionError, InsufficientDataError):
            fallbacks += 1
            out[i] = project_plane(Y[i], _fit_plane_width(hood, plane_dim))
    return out, fallbacks
