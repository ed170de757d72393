"""Recursive PC1-sign partitioning of ambient space.

Each internal node stores the cell mean and the leading eigenvector of
the cell scatter; a point goes left when its centered score along that
direction is strictly positive, right otherwise. Because the rule is a
sign test, it extends from the training rows to a total partition of
R^D, so unseen points can be routed through the same tree.

A cell is split while its fit MSE exceeds ``eps`` and it retains more
than ``n_min`` members; a split that would leave either side below
``n_min`` is rejected and the cell becomes a leaf.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateSplitError,
    DimensionError,
    InsufficientDataError,
    ParameterError,
)
from .numeric import sym_eig
from .spca import _fit_plane_width, fit_sphere, project_plane

FITTERS = ("spca", "pca")


@dataclass(frozen=True)
class SplitRule:
    """Cell mean and unit direction of the first principal component."""

    mu: np.ndarray
    direction: np.ndarray

    def goes_left(self, x: np.ndarray) -> bool:
        return float((np.asarray(x, dtype=float) - self.mu) @ self.direction) > 0.0


@dataclass(frozen=True)
class Internal:
    rule: SplitRule
    left: "Internal | Leaf"
    right: "Internal | Leaf"


@dataclass(frozen=True)
class Leaf:
    cell_id: int
    member_indices: np.ndarray


PartitionNode = Internal | Leaf


def split_cell(X_cell: np.ndarray) -> tuple[SplitRule, np.ndarray, np.ndarray]:
    """Split rows by the sign of the first principal-component score.

    Rows with strictly positive score go left; scores <= 0 (including
    points exactly at the mean) go right. Raises DegenerateSplitError on
    zero scatter or when one side would be empty.
    """
    X_cell = np.atleast_2d(np.asarray(X_cell, dtype=float))
    n = X_cell.shape[0]
    if n < 2:
        raise DegenerateSplitError(f"cannot split a cell of {n} point(s)")
    mu = X_cell.mean(axis=0)
    Xc = X_cell - mu
    scatter = Xc.T @ Xc
    if not np.any(np.abs(scatter) > 0.0):
        raise DegenerateSplitError("zero scatter: all points identical")
    v1 = sym_eig(scatter).eigenvectors[:, 0]
    scores = Xc @ v1
    left = np.nonzero(scores > 0.0)[0]
    right = np.nonzero(scores <= 0.0)[0]
    if left.size == 0 or right.size == 0:
        raise DegenerateSplitError("split leaves one side empty")
    return SplitRule(mu=mu, direction=v1), left, right


def _cell_mse(X_cell: np.ndarray, d: int, fitter: str) -> float:
    """MSE of the cell under its own fitted piece (sphere or d-plane)."""
    if fitter == "spca":
        try:
            _, diag = fit_sphere(X_cell, d)
            return diag.geometric_mse
        except (InsufficientDataError, DimensionError, np.linalg.LinAlgError):
            pass  # fall through to the planar fit
    plane = _fit_plane_width(X_cell, min(d, X_cell.shape[1]))
    resid = X_cell - project_plane(X_cell, plane)
    return float(np.mean(np.sum(resid * resid, axis=1)))


def build_tree(
    X: np.ndarray,
    d: int,
    eps: float,
    n_min: int,
    fitter: str = "spca",
) -> PartitionNode:
    """Grow the PC1-sign tree until every cell meets the MSE target or
    runs out of points; leaves are numbered in depth-first order."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if fitter not in FITTERS:
        raise ParameterError(f"fitter must be one of {FITTERS}, got {fitter!r}")
    if eps <= 0:
        raise ParameterError(f"eps must be > 0, got {eps}")
    if n_min < d + 3:
        raise ParameterError(f"n_min must be >= d+3 = {d + 3}, got {n_min}")
    if X.shape[0] < n_min:
        raise ParameterError(f"n={X.shape[0]} is below n_min={n_min}")

    counter = [0]

    def make_leaf(indices: np.ndarray) -> Leaf:
        leaf = Leaf(cell_id=counter[0], member_indices=indices.copy())
        counter[0] += 1
        return leaf

    def grow(indices: np.ndarray) -> PartitionNode:
        cell = X[indices]
        if indices.size <= n_min or _cell_mse(cell, d, fitter) <= eps:
            return make_leaf(indices)
        try:
            rule, left_loc, right_loc = split_cell(cell)
        except DegenerateSplitError:
            return make_leaf(indices)
        if left_loc.size < n_min or right_loc.size < n_min:
            return make_leaf(indices)
        return Internal(
            rule=rule,
            left=grow(indices[left_loc]),
            right=grow(indices[right_loc]),
        )

    return grow(np.arange(X.shape[0]))


def route(x: np.ndarray, tree: PartitionNode) -> int:
    """Cell id of the leaf that x falls into."""
    node = tree
    while isinstance(node, Internal):
        node = node.left if node.rule.goes_left(x) else node.right
    return node.cell_id


def iter_leaves(tree: PartitionNode):
    """Depth-first iteration over leaves."""
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            yield node
        else:
            stack.append(node.right)
            stack.append(node.left)


def tree_depth(tree: PartitionNode) -> int:
    if isinstance(tree, Leaf):
        return 1
    return 1 + max(tree_depth(tree.left), tree_depth(tree.right))
