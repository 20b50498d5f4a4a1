"""CART decision tree with Gini impurity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._backend import kernels
from ..errors import SizeError
from .dataset import Dataset


@dataclass(frozen=True)
class Node:
    feature: int = -1
    threshold: float = 0.0
    left: int = -1
    right: int = -1
    leaf_class: int = 0  # +1 / -1 at leaves, 0 at internal nodes

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


@dataclass(frozen=True)
class TreeModel:
    nodes: tuple
    max_depth: int
    n_features: int
    kind: str = "tree"

    def _check(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise SizeError(f"tree expects {self.n_features} features, got {X.shape[1]}")
        return X

    def predict(self, X) -> np.ndarray:
        X = self._check(X)
        out = np.empty(X.shape[0], dtype=np.int64)
        for i, x in enumerate(X):
            node = self.nodes[0]
            while not node.is_leaf:
                node = self.nodes[node.left if x[node.feature] <= node.threshold else node.right]
            out[i] = node.leaf_class
        return out

    @property
    def depth(self) -> int:
        def walk(i):
            n = self.nodes[i]
            return 0 if n.is_leaf else 1 + max(walk(n.left), walk(n.right))
        return walk(0)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "max_depth": self.max_depth,
            "n_features": self.n_features,
            "nodes": [{"feature": n.feature, "threshold": n.threshold, "left": n.left,
                       "right": n.right, "leaf_class": n.leaf_class} for n in self.nodes],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TreeModel":
        nodes = tuple(Node(int(n["feature"]), float(n["threshold"]), int(n["left"]),
                           int(n["right"]), int(n["leaf_class"])) for n in d["nodes"])
        return cls(nodes, int(d["max_depth"]), int(d["n_features"]))


def _majority(y: np.ndarray) -> int:
    return 1 if np.sum(y > 0) >= np.sum(y < 0) else -1


def train_tree(train: Dataset, max_depth: int = 4) -> TreeModel:
    """Grow a tree depth-first; nodes are stored in preorder.

    A node becomes a leaf when it is pure, at ``max_depth``, or has no
    feature with two distinct values. Splits are taken even when they do
    not lower impurity, which lets the tree solve XOR-like layouts.
    """
    train.require_both_classes()
    X, y = train.X, train.y
    nodes: list = []

    def grow(idx: np.ndarray, depth: int) -> int:
        pos = len(nodes)
        nodes.append(None)
        ys = y[idx]
        if depth >= max_depth or np.all(ys == ys[0]) or idx.shape[0] < 2:
            nodes[pos] = Node(leaf_class=_majority(ys))
            return pos
        feature, threshold, _ = kernels.best_split(X[idx], (ys > 0).astype(np.int64))
        if feature < 0:
            nodes[pos] = Node(leaf_class=_majority(ys))
            return pos
        go_left = X[idx, feature] <= threshold
        left = grow(idx[go_left], depth + 1)
        right = grow(idx[~go_left], depth + 1)
        nodes[pos] = Node(feature, threshold, left, right, 0)
        return pos

    grow(np.arange(len(train)), 0)
    return TreeModel(tuple(nodes), max_depth, train.n_features)
