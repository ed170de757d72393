"""Piecewise-spherical manifold models.

A fitted model is a PC1-sign partition tree plus one fitted piece per
leaf: a spherelet under the ``spca`` fitter (with hyperplane fallback on
degeneracy) or a d-dimensional hyperplane under ``pca``. Projection
routes a point to its leaf and applies that leaf's closest-point map, so
held-out data can be projected without refitting.

Models serialize to versioned JSON with explicit arrays; floats are
written with shortest round-trip precision so save/load is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    DimensionError,
    InsufficientDataError,
    ParameterError,
    ParseError,
    VersionError,
)
from .partition import (
    Internal,
    Leaf,
    PartitionNode,
    SplitRule,
    build_tree,
    iter_leaves,
    route,
)
from .spca import (
    Hyperplane,
    Spherelet,
    _fit_plane_width,
    fit_sphere,
    project_plane,
    project_sphere,
)

FORMAT_VERSION = 1

Piece = Spherelet | Hyperplane


@dataclass
class SphereletModel:
    tree: PartitionNode
    leaves: dict[int, Piece]
    d: int
    D: int
    fitter: str
    provenance: dict = field(default_factory=dict)

    @property
    def n_pieces(self) -> int:
        return len(self.leaves)

    def project(self, x: np.ndarray) -> np.ndarray:
        """Project a single D-vector onto the estimated manifold."""
        x = np.asarray(x, dtype=float).ravel()
        if x.shape[0] != self.D:
            raise DimensionError(f"point dimension {x.shape[0]} != model dimension {self.D}")
        piece = self.leaves[route(x, self.tree)]
        if isinstance(piece, Spherelet):
            return project_sphere(x, piece)
        return project_plane(x, piece)

    def project_many(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.vstack([self.project(row) for row in X])

    def mse(self, X: np.ndarray) -> tuple[float, dict[int, float]]:
        """Overall and per-cell mean squared projection residual.

        Works identically for training and held-out data; cells that
        receive no rows are omitted from the per-cell map.
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[0] == 0:
            raise ParameterError("cannot compute MSE of an empty dataset")
        cells = np.array([route(row, self.tree) for row in X])
        sq = np.array(
            [float(np.sum((row - self.project(row)) ** 2)) for row in X]
        )
        per_cell = {
            int(c): float(np.mean(sq[cells == c])) for c in np.unique(cells)
        }
        return float(np.mean(sq)), per_cell

    def save(self, path: str) -> None:
        save(self, path)


def fit(
    X: np.ndarray,
    d: int,
    eps: float,
    n_min: int | None = None,
    fitter: str = "spca",
    provenance: dict | None = None,
) -> SphereletModel:
    """Fit a piecewise model: grow the partition tree, then fit one piece
    per leaf. ``n_min`` defaults to max(10, d+3)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if n_min is None:
        n_min = max(10, d + 3)
    tree = build_tree(X, d, eps, n_min, fitter)
    leaves: dict[int, Piece] = {}
    for leaf in iter_leaves(tree):
        cell = X[leaf.member_indices]
        if fitter == "spca":
            try:
                piece, _ = fit_sphere(cell, d)
                if piece.degenerate:
                    piece = piece.plane
            except (InsufficientDataError, DimensionError):
                piece = _fit_plane_width(cell, min(d, X.shape[1]))
        else:
            piece = _fit_plane_width(cell, min(d, X.shape[1]))
        leaves[leaf.cell_id] = piece
    prov = dict(provenance or {})
    prov.setdefault("eps", eps)
    prov.setdefault("n_min", n_min)
    return SphereletModel(tree=tree, leaves=leaves, d=d, D=X.shape[1], fitter=fitter, provenance=prov)


# -- serialization ----------------------------------------------------------


def _tree_to_obj(node: PartitionNode):
    if isinstance(node, Leaf):
        return {"leaf": node.cell_id, "members": node.member_indices.tolist()}
    return {
        "split": {"mu": node.rule.mu.tolist(), "direction": node.rule.direction.tolist()},
        "left": _tree_to_obj(node.left),
        "right": _tree_to_obj(node.right),
    }


def _piece_to_obj(cell_id: int, piece: Piece):
    if isinstance(piece, Spherelet):
        return {
            "id": cell_id,
            "kind": "sphere",
            "mu": piece.plane.mu.tolist(),
            "frame": piece.frame.tolist(),
            "center": piece.center.tolist(),
            "radius": piece.radius,
        }
    return {
        "id": cell_id,
        "kind": "plane",
        "mu": piece.mu.tolist(),
        "frame": piece.frame.tolist(),
        "center": None,
        "radius": None,
    }


def save(model: SphereletModel, path: str) -> None:
    obj = {
        "version": FORMAT_VERSION,
        "d": model.d,
        "D": model.D,
        "fitter": model.fitter,
        "provenance": model.provenance,
        "tree": _tree_to_obj(model.tree),
        "leaves": [_piece_to_obj(cid, p) for cid, p in sorted(model.leaves.items())],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def _obj_to_tree(obj, where: str) -> PartitionNode:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    if "leaf" in obj:
        return Leaf(
            cell_id=int(obj["leaf"]),
            member_indices=np.asarray(obj.get("members", []), dtype=int),
        )
    try:
        rule = SplitRule(
            mu=np.asarray(obj["split"]["mu"], dtype=float),
            direction=np.asarray(obj["split"]["direction"], dtype=float),
        )
        return Internal(
            rule=rule,
            left=_obj_to_tree(obj["left"], where + ".left"),
            right=_obj_to_tree(obj["right"], where + ".right"),
        )
    except KeyError as exc:
        raise ParseError(f"{where}: missing field {exc}") from exc


def _obj_to_piece(obj, where: str) -> tuple[int, Piece]:
    try:
        cid = int(obj["id"])
        kind = obj["kind"]
        mu = np.asarray(obj["mu"], dtype=float)
        frame = np.asarray(obj["frame"], dtype=float)
        if kind == "plane":
            return cid, Hyperplane(mu=mu, frame=frame)
        if kind == "sphere":
            return cid, Spherelet(
                frame=frame,
                center=np.asarray(obj["center"], dtype=float),
                radius=float(obj["radius"]),
                plane=Hyperplane(mu=mu, frame=frame),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{where}: {exc}") from exc
    raise ParseError(f"{where}: unknown piece kind {kind!r}")


def load(path: str) -> SphereletModel:
    """Load a model file; raises ParseError / VersionError on bad input."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: top level must be an object")
    version = obj.get("version")
    if version != FORMAT_VERSION:
        raise VersionError(f"{path}: unsupported model version {version!r}")
    for key in ("d", "D", "fitter", "tree", "leaves"):
        if key not in obj:
            raise ParseError(f"{path}: missing field {key!r}")
    tree = _obj_to_tree(obj["tree"], "tree")
    leaves = dict(
        _obj_to_piece(o, f"leaves[{i}]") for i, o in enumerate(obj["leaves"])
    )
    leaf_ids = {leaf.cell_id for leaf in iter_leaves(tree)}
    if leaf_ids != set(leaves):
        raise ParseError(f"{path}: tree leaves {sorted(leaf_ids)} do not match pieces {sorted(leaves)}")
    return SphereletModel(
        tree=tree,
        leaves=leaves,
        d=int(obj["d"]),
        D=int(obj["D"]),
        fitter=str(obj["fitter"]),
        provenance=obj.get("provenance", {}),
    )
