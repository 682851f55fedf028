from typing import Any, Optional

import numpy as np
from scipy.special import logsumexp

from readlab.utils.base import Classifier, lowest_max


class BayesClassifier(Classifier):
    """
    Multinomial naive Bayes over triplet windows.
    Each class keeps a table L_c(t) of triplet probabilities pooled from its training
    reads with add-one smoothing; the prior is uniform over the training labels.
    """

    def __init__(self, pseudocount: float = 1.0):
        if pseudocount < 0:
            raise ValueError("pseudocount must be >= 0")
        self.pseudocount = pseudocount
        self.tables: Optional[np.ndarray] = None
        self.prior: Optional[np.ndarray] = None

    def fit(self, features, valid_counts, labels, n_labels) -> None:
        counts = np.rint(features * valid_counts[:, None])
        pooled = np.zeros((n_labels, features.shape[1]))
        np.add.at(pooled, labels, counts)
        pooled += self.pseudocount
        self.tables = pooled / pooled.sum(axis=1, keepdims=True)
        self.prior = np.full(n_labels, 1.0 / n_labels)

    @classmethod
    def from_tables(
        cls, tables: np.ndarray, prior: Optional[np.ndarray] = None
    ) -> "BayesClassifier":
        """Model from given (K, 64) likelihood tables, used as-is."""
        model = cls()
        model.tables = np.asarray(tables, dtype=np.float64)
        k = model.tables.shape[0]
        model.prior = (
            np.full(k, 1.0 / k) if prior is None else np.asarray(prior, dtype=np.float64)
        )
        return model

    def log_scores(self, features: np.ndarray, valid_counts: np.ndarray) -> np.ndarray:
        """log pi_c + sum_t n(t) log L_c(t) for every row and class."""
        counts = features * valid_counts[:, None]
        with np.errstate(divide="ignore"):
            log_tables = np.log(self.tables)
            log_prior = np.log(self.prior)
        # 0 * log 0 contributes nothing
        log_tables = np.where(np.isfinite(log_tables), log_tables, -1e300)
        return log_prior[None, :] + counts @ log_tables.T

    def decide(self, features, valid_counts) -> np.ndarray:
        return lowest_max(self.log_scores(features, valid_counts))

    def posterior(self, features: np.ndarray, valid_counts: np.ndarray) -> np.ndarray:
        scores = self.log_scores(features, valid_counts)
        return np.exp(scores - logsumexp(scores, axis=1, keepdims=True))

    def to_params(self) -> dict[str, Any]:
        return {
            "pseudocount": self.pseudocount,
            "tables": self.tables.tolist(),
            "prior": self.prior.tolist(),
        }

    @classmethod
    def from_params(cls, params: dict[str, Any]) -> "BayesClassifier":
        model = cls.from_tables(np.asarray(params["tables"]), np.asarray(params["prior"]))
        model.pseudocount = params["pseudocount"]
        return model
