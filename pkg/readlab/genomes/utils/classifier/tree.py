import logging
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from readlab.utils.base import Classifier

logger = logging.getLogger(__name__)

LEAF = -1
_EPS = 1e-12


@dataclass
class TreeArrays:
    """
    Binary CART tree in flat arrays. Node 0 is the root; feature[i] == LEAF marks a
    leaf. Samples with x[feature] <= threshold go left.
    counts[i] holds the training class counts reaching node i.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    @property
    def n_leaves(self) -> int:
        return int((self.feature == LEAF).sum())

    @property
    def leaf_labels(self) -> np.ndarray:
        return self.counts.argmax(axis=1)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by every row of X."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = np.flatnonzero(self.feature[node] != LEAF)
        while active.size:
            current = node[active]
            go_left = X[active, self.feature[current]] <= self.threshold[current]
            node[active] = np.where(go_left, self.left[current], self.right[current])
            active = active[self.feature[node[active]] != LEAF]
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.leaf_labels[self.apply(X)]

    def to_params(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "counts": self.counts.tolist(),
        }

    @staticmethod
    def from_params(d: dict) -> "TreeArrays":
        return TreeArrays(
            feature=np.asarray(d["feature"], dtype=np.int64),
            threshold=np.asarray(d["threshold"], dtype=np.float64),
            left=np.asarray(d["left"], dtype=np.int64),
            right=np.asarray(d["right"], dtype=np.int64),
            counts=np.asarray(d["counts"], dtype=np.float64),
        )

    @staticmethod
    def stump(feature: int, threshold: float, left_label: int, right_label: int, n_labels: int) -> "TreeArrays":
        """One split at the root; used to hand-build small boundary fixtures."""
        counts = np.zeros((3, n_labels))
        counts[1, left_label] = 1.0
        counts[2, right_label] = 1.0
        counts[0] = counts[1] + counts[2]
        return TreeArrays(
            feature=np.array([feature, LEAF, LEAF]),
            threshold=np.array([threshold, 0.0, 0.0]),
            left=np.array([1, LEAF, LEAF]),
            right=np.array([2, LEAF, LEAF]),
            counts=counts,
        )


def _gini_score(left: np.ndarray, n_left: np.ndarray, total: np.ndarray, n: int) -> np.ndarray:
    """n_l*gini_l + n_r*gini_r for every candidate position."""
    right = total[None, :] - left
    n_right = n - n_left
    return (n_left - (left**2).sum(axis=1) / n_left) + (
        n_right - (right**2).sum(axis=1) / n_right
    )


def _best_split(
    X: np.ndarray,
    onehot: np.ndarray,
    idx: np.ndarray,
    features: np.ndarray,
    min_leaf: int,
):
    n = idx.size
    total = onehot[idx].sum(axis=0)
    parent = n - (total**2).sum() / n
    best_score, best = parent - _EPS, None
    n_left = np.arange(1, n, dtype=np.float64)
    for f in features:
        x = X[idx, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        cum = np.cumsum(onehot[idx[order]], axis=0)[:-1]
        valid = xs[:-1] < xs[1:]
        if min_leaf > 1:
            valid[: min_leaf - 1] = False
            valid[n - min_leaf :] = False
        if not valid.any():
            continue
        score = _gini_score(cum, n_left, total, n)
        score[~valid] = np.inf
        i = int(np.argmin(score))
        if score[i] < best_score:
            best_score = score[i]
            best = (int(f), 0.5 * (xs[i] + xs[i + 1]), order[: i + 1], order[i + 1 :])
    return best


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_labels: int,
    min_leaf: int = 1,
    max_features: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> TreeArrays:
    """
    Grow a Gini CART tree until nodes are pure, too small to split, or no split
    lowers impurity. With max_features set, each split considers that many
    features drawn without replacement; candidates are scanned in ascending
    index so ties go to the lowest feature.
    """
    n_features = X.shape[1]
    onehot = np.eye(n_labels)[y]
    feature, threshold, left, right, counts = [], [], [], [], []

    def _new_node(idx: np.ndarray) -> int:
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        counts.append(onehot[idx].sum(axis=0))
        return len(feature) - 1

    root = _new_node(np.arange(X.shape[0]))
    stack = [(root, np.arange(X.shape[0]))]
    while stack:
        node, idx = stack.pop()
        node_counts = counts[node]
        if idx.size < 2 * min_leaf or np.count_nonzero(node_counts) <= 1:
            continue
        if max_features is None or max_features >= n_features:
            candidates = np.arange(n_features)
        else:
            candidates = np.sort(rng.choice(n_features, size=max_features, replace=False))
        split = _best_split(X, onehot, idx, candidates, min_leaf)
        if split is None:
            continue
        f, t, left_pos, right_pos = split
        left_idx, right_idx = idx[left_pos], idx[right_pos]
        feature[node], threshold[node] = f, t
        left[node] = _new_node(left_idx)
        right[node] = _new_node(right_idx)
        # right pushed first so the left subtree is numbered first
        stack.append((right[node], right_idx))
        stack.append((left[node], left_idx))

    return TreeArrays(
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        counts=np.asarray(counts, dtype=np.float64).reshape(-1, n_labels),
    )


def _compact(tree: TreeArrays, is_leaf: np.ndarray) -> TreeArrays:
    """Drop nodes below collapsed leaves and renumber depth-first."""
    order = []
    stack = [0]
    while stack:
        node = stack.pop()
        order.append(node)
        if not is_leaf[node]:
            stack.append(tree.right[node])
            stack.append(tree.left[node])
    new_id = {old: new for new, old in enumerate(order)}
    keep = np.asarray(order)
    leaf = is_leaf[keep]
    remap = lambda arr: np.array(  # noqa: E731
        [LEAF if lf else new_id[int(c)] for c, lf in zip(arr[keep], leaf)], dtype=np.int64
    )
    return TreeArrays(
        feature=np.where(leaf, LEAF, tree.feature[keep]),
        threshold=np.where(leaf, 0.0, tree.threshold[keep]),
        left=remap(tree.left),
        right=remap(tree.right),
        counts=tree.counts[keep].copy(),
    )


def prune_to_leaves(tree: TreeArrays, max_leaves: int) -> TreeArrays:
    """
    Weakest-link cost-complexity pruning. Repeatedly collapse the internal nodes with
    the smallest g(t) = (R(t) - R(T_t)) / (|T_t| - 1), R being resubstitution
    misclassification, until at most max_leaves terminal nodes remain.
    """
    if max_leaves < 1:
        raise ValueError("max_leaves must be >= 1")
    n_total = tree.counts[0].sum()
    node_risk = (tree.counts.sum(axis=1) - tree.counts.max(axis=1)) / n_total
    is_leaf = tree.feature == LEAF
    # DFS numbering puts children after parents
    post_order = np.arange(tree.n_nodes)[::-1]

    while True:
        subtree_risk = np.where(is_leaf, node_risk, 0.0)
        subtree_leaves = is_leaf.astype(np.int64)
        for node in post_order:
            if is_leaf[node]:
                continue
            lc, rc = tree.left[node], tree.right[node]
            subtree_risk[node] = subtree_risk[lc] + subtree_risk[rc]
            subtree_leaves[node] = subtree_leaves[lc] + subtree_leaves[rc]
        if subtree_leaves[0] <= max_leaves:
            break
        internal = reachable_internal(tree, is_leaf)
        g = (node_risk[internal] - subtree_risk[internal]) / (subtree_leaves[internal] - 1)
        weakest = internal[g <= g.min() + _EPS]
        is_leaf = is_leaf.copy()
        is_leaf[weakest] = True
    return _compact(tree, is_leaf)


def reachable_internal(tree: TreeArrays, is_leaf: np.ndarray) -> np.ndarray:
    out = []
    stack = [0]
    while stack:
        node = stack.pop()
        if is_leaf[node]:
            continue
        out.append(node)
        stack.append(tree.right[node])
        stack.append(tree.left[node])
    return np.asarray(sorted(out), dtype=np.int64)


class PartitionTreeClassifier(Classifier):
    """
    Single CART partition model: grown to min_leaf, then pruned to max_leaves
    terminal nodes (None keeps the unpruned tree).
    """

    def __init__(self, max_leaves: Optional[int] = 61, min_leaf: int = 5):
        self.max_leaves = max_leaves
        self.min_leaf = min_leaf
        self.tree: Optional[TreeArrays] = None
        self.unpruned_leaves: Optional[int] = None

    def fit(self, features, valid_counts, labels, n_labels) -> None:
        full = grow_tree(features, labels, n_labels, min_leaf=self.min_leaf)
        self.unpruned_leaves = full.n_leaves
        if self.max_leaves is not None and full.n_leaves > self.max_leaves:
            self.tree = prune_to_leaves(full, self.max_leaves)
        else:
            self.tree = full
        logger.debug(
            "Partition tree: %d leaves grown, %d kept",
            self.unpruned_leaves,
            self.tree.n_leaves,
        )

    def decide(self, features, valid_counts) -> np.ndarray:
        return self.tree.predict(features)

    def to_params(self) -> dict[str, Any]:
        return {
            "max_leaves": self.max_leaves,
            "min_leaf": self.min_leaf,
            "unpruned_leaves": self.unpruned_leaves,
            "tree": self.tree.to_params(),
        }

    @classmethod
    def from_params(cls, params: dict[str, Any]) -> "PartitionTreeClassifier":
        model = cls(max_leaves=params["max_leaves"], min_leaf=params["min_leaf"])
        model.unpruned_leaves = params.get("unpruned_leaves")
        model.tree = TreeArrays.from_params(params["tree"])
        return model

    @classmethod
    def from_tree(cls, tree: TreeArrays) -> "PartitionTreeClassifier":
        model = cls(max_leaves=None, min_leaf=1)
        model.tree = tree
        model.unpruned_leaves = tree.n_leaves
        return model
