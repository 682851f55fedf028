import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np

from readlab.genomes.utils.classifier.tree import TreeArrays, grow_tree
from readlab.utils.base import Classifier, lowest_max
from readlab.utils.seeding import child_rng

logger = logging.getLogger(__name__)


class RandomForestClassifier(Classifier):
    """
    Bagged unpruned Gini trees with a random feature subset at every split.
    Tree i always draws from child_rng(seed, i), so the fitted forest does not
    depend on how many workers grew it.
    """

    def __init__(
        self,
        n_trees: int = 500,
        mtry: int = 8,
        bootstrap: bool = True,
        min_leaf: int = 1,
        seed: int = 0,
        workers: int = 1,
    ):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = n_trees
        self.mtry = mtry
        self.bootstrap = bootstrap
        self.min_leaf = min_leaf
        self.seed = seed
        self.workers = workers
        self.n_labels = 0
        self.trees: list[TreeArrays] = []

    def _grow(self, i: int, features: np.ndarray, labels: np.ndarray) -> TreeArrays:
        rng = child_rng(self.seed, i)
        n = features.shape[0]
        if self.bootstrap:
            idx = rng.integers(0, n, size=n)
            features, labels = features[idx], labels[idx]
        return grow_tree(
            features,
            labels,
            self.n_labels,
            min_leaf=self.min_leaf,
            max_features=self.mtry,
            rng=rng,
        )

    def fit(self, features, valid_counts, labels, n_labels) -> None:
        self.n_labels = n_labels
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                self.trees = list(
                    executor.map(
                        lambda i: self._grow(i, features, labels), range(self.n_trees)
                    )
                )
        else:
            self.trees = [self._grow(i, features, labels) for i in range(self.n_trees)]
        logger.debug(
            "Forest: %d trees, mean %.1f leaves",
            self.n_trees,
            np.mean([t.n_leaves for t in self.trees]),
        )

    def votes(self, features: np.ndarray) -> np.ndarray:
        votes = np.zeros((features.shape[0], self.n_labels), dtype=np.int64)
        rows = np.arange(features.shape[0])
        for tree in self.trees:
            votes[rows, tree.predict(features)] += 1
        return votes

    def decide(self, features, valid_counts) -> np.ndarray:
        return lowest_max(self.votes(features))

    def to_params(self) -> dict[str, Any]:
        return {
            "n_trees": self.n_trees,
            "mtry": self.mtry,
            "bootstrap": self.bootstrap,
            "min_leaf": self.min_leaf,
            "seed": self.seed,
            "n_labels": self.n_labels,
            "trees": [t.to_params() for t in self.trees],
        }

    @classmethod
    def from_params(cls, params: dict[str, Any]) -> "RandomForestClassifier":
        model = cls(
            n_trees=params["n_trees"],
            mtry=params["mtry"],
            bootstrap=params["bootstrap"],
            min_leaf=params["min_leaf"],
            seed=params["seed"],
        )
        model.n_labels = params["n_labels"]
        model.trees = [TreeArrays.from_params(t) for t in params["trees"]]
        return model
