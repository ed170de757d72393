"""Spherical PCA: closed-form best-fit spheres and hyperplanes.

A d-dimensional sphere in R^D is parameterized by an orthonormal frame
V (D x (d+1)) spanning the affine subspace it lives in, a center c, and
a radius r. Fitting reduces the data to the top-(d+1) PCA subspace and
solves a linear system for the center; the radius is the mean distance
of the reduced points to the center.

The algebraic loss being minimized is

    g(f, b) = sum_i (y_i' y_i + f' y_i + b)^2

over the reduced coordinates, whose minimizer has the closed form
f_hat = -H^{-1} xi with H the centered scatter and xi the correlation of
squared norms with centered positions. The center is c = -f_hat / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DimensionError,
    InsufficientDataError,
    ParameterError,
    SingularProjectionError,
)
from .numeric import sym_eig

# Fall back to the hyperplane when the reduced scatter is this
# ill-conditioned or the fitted radius dwarfs the data scale.
H_CONDITION_LIMIT = 1e12
RADIUS_DIAMETER_RATIO = 1e6


@dataclass(frozen=True)
class Hyperplane:
    """Affine subspace mu + span(frame); frame columns are orthonormal."""

    mu: np.ndarray
    frame: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.mu.shape[0]

    @property
    def subspace_dim(self) -> int:
        return self.frame.shape[1]


@dataclass(frozen=True)
class Spherelet:
    """A d-sphere in R^D: frame V (D x (d+1)), center c, radius r.

    ``degenerate`` marks the infinite-radius limit where the sphere
    collapses to a hyperplane; projection then delegates to ``plane``,
    the reduction hyperplane the fit was computed in.
    """

    frame: np.ndarray
    center: np.ndarray
    radius: float
    plane: Hyperplane
    degenerate: bool = False

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def sphere_dim(self) -> int:
        return self.frame.shape[1] - 1


@dataclass(frozen=True)
class SphereFitDiagnostics:
    h_condition: float
    algebraic_loss: float
    geometric_mse: float


def _fit_plane_width(X: np.ndarray, width: int) -> Hyperplane:
    """Best affine subspace of the given frame width (PCA)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, D = X.shape
    if width > D:
        raise DimensionError(f"frame width {width} exceeds ambient dimension {D}")
    if n < width:
        raise InsufficientDataError(f"need at least {width} points, got {n}")
    mu = X.mean(axis=0)
    Xc = X - mu
    eig = sym_eig(Xc.T @ Xc)
    return Hyperplane(mu=mu, frame=eig.eigenvectors[:, :width].copy())


def fit_hyperplane(X: np.ndarray, d: int) -> Hyperplane:
    """Fit the (d+1)-dimensional affine subspace through the data that a
    d-sphere would live in: sample mean plus top d+1 scatter eigenvectors.
    """
    if d < 0:
        raise ParameterError(f"d must be >= 0, got {d}")
    return _fit_plane_width(X, d + 1)


def project_plane(x: np.ndarray, p: Hyperplane) -> np.ndarray:
    """Orthogonal projection mu + VV'(x - mu); idempotent."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != p.ambient_dim:
        raise DimensionError(
            f"point dimension {x.shape[-1]} != plane dimension {p.ambient_dim}"
        )
    diff = x - p.mu
    return p.mu + (diff @ p.frame) @ p.frame.T


def reduce_to_plane(X: np.ndarray, plane: Hyperplane) -> np.ndarray:
    """Map every row into the affine subspace: x_bar + VV'(X_i - x_bar)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return project_plane(X, plane)


def sphere_fit_loss(Y: np.ndarray, f: np.ndarray, b: float | None = None) -> float:
    """Algebraic loss sum_i (y_i'y_i + f'y_i + b)^2 over rows of Y.

    When b is omitted it is set to its optimal value
    b_hat(f) = -mean_i (y_i'y_i + f'y_i), which is how the sphere fit
    eliminates b before solving for f.
    """
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    f = np.asarray(f, dtype=float).ravel()
    if f.shape[0] != Y.shape[1]:
        raise DimensionError(f"f has dimension {f.shape[0]}, points have {Y.shape[1]}")
    t = np.sum(Y * Y, axis=1) + Y @ f
    if b is None:
        b = -float(np.mean(t))
    return float(np.sum((t + b) ** 2))


def optimal_offset(Y: np.ndarray, f: np.ndarray) -> float:
    """The b minimizing the algebraic loss at fixed f."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    f = np.asarray(f, dtype=float).ravel()
    return -float(np.mean(np.sum(Y * Y, axis=1) + Y @ f))


def fit_sphere(X: np.ndarray, d: int) -> tuple[Spherelet, SphereFitDiagnostics]:
    """Best-fit d-sphere through the rows of X.

    The data is first reduced to the top-(d+1) PCA subspace. The linear
    system for the center is solved in the (d+1)-dimensional reduced
    coordinates z_i = V'(x_i - x_bar), where the scatter is generically
    invertible, and the center is mapped back as c = x_bar + V c_z. This
    keeps the center inside the affine subspace of the frame, which the
    ambient-coordinate pseudo-inverse form only guarantees for centered
    data.

    Returns
    -------
    (Spherelet, SphereFitDiagnostics). The spherelet is degenerate
    (hyperplane fallback) when the reduced scatter is numerically
    singular or the fitted radius exceeds ``RADIUS_DIAMETER_RATIO``
    times the data diameter.

    Raises
    ------
    InsufficientDataError if n < d + 2, the count of free parameters
    (center coordinates plus radius) inside the reduced subspace.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    if n < d + 2:
        raise InsufficientDataError(f"need at least {d + 2} points for a {d}-sphere, got {n}")
    plane = fit_hyperplane(X, d)
    V, mu = plane.frame, plane.mu

    Z = (X - mu) @ V                       # reduced coordinates, (n, d+1)
    Zc = Z - Z.mean(axis=0)
    l = np.sum(Z * Z, axis=1)
    H = Zc.T @ Zc
    xi = Zc.T @ (l - l.mean())

    h_cond = float(np.linalg.cond(H))
    diameter = 2.0 * float(np.max(np.linalg.norm(X - X.mean(axis=0), axis=1)))
    degenerate = not np.isfinite(h_cond) or h_cond > H_CONDITION_LIMIT
    center = mu
    radius = math.inf
    if not degenerate:
        try:
            f_z = -np.linalg.solve(H, xi)
        except np.linalg.LinAlgError:
            degenerate = True
        else:
            c_z = -0.5 * f_z
            center = mu + V @ c_z
            radius = float(np.mean(np.linalg.norm(Z - c_z, axis=1)))
            if not np.isfinite(radius) or radius > RADIUS_DIAMETER_RATIO * max(diameter, 1e-300):
                degenerate = True
                center, radius = mu, math.inf

    s = Spherelet(frame=V, center=center, radius=radius, plane=plane, degenerate=degenerate)
    if degenerate:
        loss = math.inf
    else:
        loss = sphere_fit_loss(Z, -2.0 * ((center - mu) @ V))
    mse = float(np.mean(sphere_residual_sq(X, s)))
    return s, SphereFitDiagnostics(h_condition=h_cond, algebraic_loss=loss, geometric_mse=mse)


def _project_sphere_rows(X: np.ndarray, s: Spherelet) -> np.ndarray:
    """Row-wise sphere projection; raises if any row hits the center."""
    diff = X - s.center
    W = (diff @ s.frame) @ s.frame.T
    norms = np.linalg.norm(W, axis=1)
    if np.any(norms < 1e-12 * s.radius):
        bad = int(np.argmin(norms))
        raise SingularProjectionError(f"row {bad} projects onto the sphere center")
    return s.center + (s.radius / norms)[:, None] * W


def project_sphere(x: np.ndarray, s: Spherelet) -> np.ndarray:
    """Closest point on the sphere: c + (r / |VV'(x-c)|) VV'(x-c).

    Delegates to the reduction hyperplane when the spherelet is
    degenerate. Raises SingularProjectionError when x projects onto the
    center, where every sphere point is equally close.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != s.ambient_dim:
        raise DimensionError(
            f"point dimension {x.shape[-1]} != sphere dimension {s.ambient_dim}"
        )
    if s.degenerate:
        return project_plane(x, s.plane)
    if x.ndim == 1:
        return _project_sphere_rows(x[None, :], s)[0]
    return _project_sphere_rows(x, s)


def sphere_residual_sq(X: np.ndarray, s: Spherelet) -> np.ndarray:
    """Squared distance of each row to the sphere, via the closed form
    (|VV'(x-c)| - r)^2 + |(I-VV')(x-c)|^2; defined even at the center."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if s.degenerate:
        resid = X - project_plane(X, s.plane)
        return np.sum(resid * resid, axis=1)
    diff = X - s.center
    in_norm = np.linalg.norm(diff @ s.frame, axis=1)
    if s.frame.shape[1] == s.frame.shape[0]:
        perp_sq = 0.0  # full frame: no out-of-subspace component
    else:
        total = np.sum(diff * diff, axis=1)
        perp_sq = np.maximum(total - in_norm**2, 0.0)
    return (in_norm - s.radius) ** 2 + perp_sq


def sphere_distance(x: np.ndarray, y: np.ndarray, s: Spherelet) -> float:
    """Intrinsic (great-circle) distance between two points of the sphere:
    r * arccos((x-c)'(y-c) / r^2), clamped against round-off.

    Falls back to the Euclidean distance for a degenerate spherelet.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if s.degenerate:
        return float(np.linalg.norm(x - y))
    cosang = float((x - s.center) @ (y - s.center)) / (s.radius * s.radius)
    return s.radius * math.acos(min(1.0, max(-1.0, cosang)))
