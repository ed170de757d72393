"""Low-dimensional embedding from local spherical distances.

Pipeline: per-point local sphere fits turn the k-NN graph into a sparse
matrix of intrinsic (great-circle) distances; a fixed-bandwidth kernel
exp(-D_ij / sigma^2) converts distances to symmetrized affinities; and a
Student-t embedding minimizes KL(P || Q) by momentum gradient descent.
A ``euclidean`` distance mode runs the identical pipeline on straight-
line distances over the same k-NN graph for apples-to-apples baselines.

Absent entries of the sparse distance matrix are represented as
``np.inf``; they receive zero affinity.

The optimizer records KL every ``kl_every`` iterations. If a checkpoint
shows an increase it reverts to the best iterate seen, halves the step,
and clears momentum, so the recorded KL sequence never increases and the
returned embedding is the iterate with the lowest recorded KL.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DimensionError,
    DivergenceError,
    ParameterError,
    SingularProjectionError,
)
from .numeric import knn_indices, pairwise_sq_dists
from .spca import fit_sphere, project_sphere, sphere_distance

DISTANCE_MODES = ("spherical", "euclidean")


@dataclass(frozen=True)
class EmbedConfig:
    m: int = 2
    k: int = 20
    sigma: float = 1.0
    iters: int = 1000
    learning_rate: float = 100.0
    momentum_early: float = 0.5
    momentum_late: float = 0.8
    momentum_switch: int = 250
    exaggeration: float = 4.0
    exaggeration_iters: int = 100
    distance_mode: str = "spherical"
    seed: int = 0
    kl_every: int = 50

    def __post_init__(self):
        if self.m not in (1, 2, 3):
            raise ParameterError(f"m must be 1, 2 or 3, got {self.m}")
        if self.iters < 1:
            raise ParameterError(f"iters must be >= 1, got {self.iters}")
        if self.sigma <= 0:
            raise ParameterError(f"sigma must be > 0, got {self.sigma}")
        if self.learning_rate <= 0:
            raise ParameterError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.distance_mode not in DISTANCE_MODES:
            raise ParameterError(
                f"distance_mode must be one of {DISTANCE_MODES}, got {self.distance_mode!r}"
            )


# -- distances ---------------------------------------------------------------


def spherical_knn_distances(
    X: np.ndarray,
    d: int,
    k: int,
    return_info: bool = False,
) -> np.ndarray | tuple[np.ndarray, int]:
    """Sparse symmetric matrix of local great-circle distances.

    For each point, a d-sphere is fitted to its k-neighborhood (self
    included); the point and its neighbors are projected onto that
    sphere and their arc distances recorded. Rows whose local fit
    degenerates fall back to Euclidean distances (counted when
    ``return_info`` is set). The matrix is symmetrized entrywise by the
    minimum over the two directed estimates; non-neighbor entries are
    ``np.inf``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, D = X.shape
    if k < d + 3:
        raise ParameterError(f"need k >= d+3 = {d + 3} to fit local spheres, got k={k}")
    if k > n:
        raise ParameterError(f"k={k} exceeds sample size {n}")
    if d + 1 > D:
        raise DimensionError(f"a {d}-sphere needs ambient dimension >= {d + 1}, got {D}")

    nbr = knn_indices(X, k, exclude_self=False)
    dist = np.full((n, n), np.inf)
    fallbacks = 0
    for i in range(n):
        idx = nbr[i]
        hood = X[idx]
        row = None
        try:
            s, _ = fit_sphere(hood, d)
            if not s.degenerate:
                p_self = project_sphere(X[i], s)
                p_hood = project_sphere(hood, s)
                row = np.array(
                    [sphere_distance(p_self, p_hood[j], s) for j in range(k)]
                )
        except SingularProjectionError:
            row = None
        if row is None:
            fallbacks += 1
            row = np.linalg.norm(hood - X[i], axis=1)
        dist[i, idx] = row
    np.fill_diagonal(dist, np.inf)
    dist = np.minimum(dist, dist.T)
    if return_info:
        return dist, fallbacks
    return dist


def euclidean_knn_distances(X: np.ndarray, k: int) -> np.ndarray:
    """Euclidean counterpart over the same k-NN support, inf elsewhere."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    if k > n:
        raise ParameterError(f"k={k} exceeds sample size {n}")
    nbr = knn_indices(X, k, exclude_self=False)
    dist = np.full((n, n), np.inf)
    for i in range(n):
        dist[i, nbr[i]] = np.linalg.norm(X[nbr[i]] - X[i], axis=1)
    np.fill_diagonal(dist, np.inf)
    return np.minimum(dist, dist.T)


def knn_distances(X: np.ndarray, d: int, k: int, mode: str = "spherical") -> np.ndarray:
    if mode == "spherical":
        return spherical_knn_distances(X, d, k)
    if mode == "euclidean":
        return euclidean_knn_distances(X, k)
    raise ParameterError(f"mode must be one of {DISTANCE_MODES}, got {mode!r}")


# -- affinities ---------------------------------------------------------------


def conditional_affinities(Dmat: np.ndarray, sigma: float) -> np.ndarray:
    """Row-conditional affinities p_{j|i} = exp(-D_ij / sigma^2), normalized
    so each row sums to 1 over its support.

    Entries of ``Dmat`` equal to inf are outside the support and get zero
    affinity. Raises ParameterError when some row has empty support.
    """
    if sigma <= 0:
        raise ParameterError(f"sigma must be > 0, got {sigma}")
    Dmat = np.asarray(Dmat, dtype=float)
    n = Dmat.shape[0]
    if Dmat.ndim != 2 or Dmat.shape[1] != n:
        raise DimensionError(f"distance matrix must be square, got {Dmat.shape}")
    support = np.isfinite(Dmat)
    np.fill_diagonal(support, False)
    empty = ~support.any(axis=1)
    if empty.any():
        raise ParameterError(
            f"row {int(np.nonzero(empty)[0][0])} has no neighbors; increase k"
        )
    K = np.zeros((n, n))
    K[support] = np.exp(-Dmat[support] / (sigma * sigma))
    return K / np.sum(K, axis=1, keepdims=True)


def affinities(Dmat: np.ndarray, sigma: float) -> np.ndarray:
    """Symmetrized affinities P_ij = (p_{j|i} + p_{i|j}) / 2."""
    cond = conditional_affinities(Dmat, sigma)
    return 0.5 * (cond + cond.T)


def check_affinity_matrix(P: np.ndarray) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    if P.ndim != 2 or P.shape[1] != n:
        raise DimensionError(f"affinity matrix must be square, got {P.shape}")
    if not np.all(np.isfinite(P)):
        raise ParameterError("affinities must be finite")
    if not np.array_equal(P, P.T):
        raise ParameterError("affinity matrix must be exactly symmetric")
    if np.any(np.diag(P) != 0.0):
        raise ParameterError("affinity matrix must have a zero diagonal")
    if np.any(P < 0.0):
        raise ParameterError("affinities must be nonnegative")
    return P


# -- KL divergence and its gradient ------------------------------------------


def kl_divergence(P: np.ndarray, Q: np.ndarray) -> float:
    """sum_{i != j} p_ij log(p_ij / q_ij); zero-p terms contribute nothing,
    a zero q under positive p yields inf."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if P.shape != Q.shape:
        raise DimensionError(f"shape mismatch {P.shape} vs {Q.shape}")
    mask = P > 0.0
    np.fill_diagonal(mask, False)
    if np.any(Q[mask] == 0.0):
        return math.inf
    return float(np.sum(P[mask] * np.log(P[mask] / Q[mask])))


def _student_q(Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Student-t pair kernel W and its global normalization Q.

    Overflow is deliberately silenced: a diverged iterate produces
    non-finite values that the optimizer's safeguard detects and undoes.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        W = 1.0 / (1.0 + pairwise_sq_dists(Y, Y))
        np.fill_diagonal(W, 0.0)
        return W, W / np.sum(W)


def kl_objective(P: np.ndarray, Y: np.ndarray) -> float:
    """KL(P || Q(Y)) of an embedding under the Student-t kernel."""
    _, Q = _student_q(np.atleast_2d(Y))
    return kl_divergence(P, Q)


def kl_gradient(P: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Analytic gradient 4 sum_j (p_ij - q_ij) w_ij (y_i - y_j)."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    W, Q = _student_q(Y)
    with np.errstate(over="ignore", invalid="ignore"):
        PQ = (P - Q) * W
        return 4.0 * (PQ.sum(axis=1)[:, None] * Y - PQ @ Y)


# -- optimizer ----------------------------------------------------------------


def embed(
    P: np.ndarray,
    cfg: EmbedConfig,
    return_log: bool = False,
) -> np.ndarray | tuple[np.ndarray, list[tuple[int, float]]]:
    """Minimize KL(P || Q) over an n-by-m embedding.

    P is globally renormalized to a distribution over ordered pairs.
    Early iterations use affinity exaggeration; momentum switches from
    its early to its late value at ``momentum_switch``. Returns the
    iterate with the lowest recorded KL (and the (iteration, KL) log when
    ``return_log`` is set).
    """
    P = check_affinity_matrix(P)
    total = float(P.sum())
    if total <= 0:
        raise ParameterError("affinity matrix is identically zero")
    P = P / total
    n = P.shape[0]

    rng = np.random.default_rng(cfg.seed)
    Y = rng.normal(0.0, 1e-4, size=(n, cfg.m))
    velocity = np.zeros_like(Y)
    lr = cfg.learning_rate

    best_Y = Y.copy()
    best_kl = kl_objective(P, Y)
    log: list[tuple[int, float]] = [(0, best_kl)]

    for it in range(1, cfg.iters + 1):
        P_eff = P * cfg.exaggeration if it <= cfg.exaggeration_iters else P
        mom = cfg.momentum_early if it < cfg.momentum_switch else cfg.momentum_late

        grad = kl_gradient(P_eff, Y)
        halvings = 0
        while not np.all(np.isfinite(grad)):
            halvings += 1
            if halvings > 20:
                raise DivergenceError(f"gradient non-finite after {halvings - 1} halvings at iteration {it}")
            Y = best_Y.copy()
            velocity[:] = 0.0
            lr *= 0.5
            grad = kl_gradient(P_eff, Y)

        velocity = mom * velocity - lr * grad
        Y = Y + velocity

        if it % cfg.kl_every == 0 or it == cfg.iters:
            kl = kl_objective(P, Y)
            if np.isfinite(kl) and kl < best_kl:
                best_kl = kl
                best_Y = Y.copy()
            elif not np.isfinite(kl) or kl > log[-1][1]:
                # checkpoint got worse (or blew up): restart from the best
                # iterate with a smaller step so the recorded sequence
                # never increases
                Y = best_Y.copy()
                velocity[:] = 0.0
                lr *= 0.5
                kl = best_kl
            log.append((it, min(kl, log[-1][1])))

    if return_log:
        return best_Y, log
    return best_Y


def stsne(
    X: np.ndarray,
    d: int,
    cfg: EmbedConfig,
    return_log: bool = False,
):
    """Distance -> affinity -> embedding pipeline on raw data."""
    Dmat = knn_distances(X, d, cfg.k, cfg.distance_mode)
    P = affinities(Dmat, cfg.sigma)
    return embed(P, cfg, return_log=return_log)
