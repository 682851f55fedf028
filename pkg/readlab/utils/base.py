from abc import ABC, abstractmethod
from typing import Any

import numpy as np


class Classifier(ABC):
    @abstractmethod
    def fit(
        self,
        features: np.ndarray,
        valid_counts: np.ndarray,
        labels: np.ndarray,
        n_labels: int,
    ) -> None:
        """
        Learn model parameters from a feature matrix.
        :param features: (n, 64) triplet distributions, non-degenerate rows only.
        :param valid_counts: (n,) number of valid triplet windows per row.
        :param labels: (n,) label indices into the training LabelSet.
        :param n_labels: size of the LabelSet.
        """

    @abstractmethod
    def decide(self, features: np.ndarray, valid_counts: np.ndarray) -> np.ndarray:
        """
        Vectorized decisions for a batch of reads.
        Return label indices, ties resolved to the lowest index.
        :param features:
        :param valid_counts: number of valid triplet windows per row.
        :return:
        """

    @abstractmethod
    def to_params(self) -> dict[str, Any]: ...

    @classmethod
    @abstractmethod
    def from_params(cls, params: dict[str, Any]) -> "Classifier": ...


def lowest_max(scores: np.ndarray, rel_tol: float = 1e-9) -> np.ndarray:
    """
    Per-row index of the first column within rel_tol of the row maximum.
    Scores that differ only by rounding count as a tie, and ties go to the lowest
    index, so a row decides the same way in any batch.
    :param scores: (n, k) scores, larger is better.
    :param rel_tol: tolerance relative to max(|row maximum|, 1).
    :return: (n,) column indices.
    """
    scores = np.asarray(scores, dtype=np.float64)
    top = scores.max(axis=1, keepdims=True)
    with np.errstate(invalid="ignore"):
        slack = rel_tol * np.maximum(np.abs(top), 1.0)
        near = scores >= top - slack
    return near.argmax(axis=1)
