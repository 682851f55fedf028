import json
import logging
import os
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np

from readlab.genomes.utils.classifier.bayes import BayesClassifier
from readlab.genomes.utils.classifier.forest import RandomForestClassifier
from readlab.genomes.utils.classifier.mlp import NeuralNetClassifier, RpropSettings
from readlab.genomes.utils.classifier.tree import PartitionTreeClassifier
from readlab.genomes.utils.metrics.confusion import ConfusionMatrix, DecisionVector
from readlab.genomes.utils.sequence.records import LabelSet, ReadDataset
from readlab.genomes.utils.sequence.triplets import (TripletDistribution,
                                                     triplet_matrix)
from readlab.utils.base import Classifier
from readlab.utils.errors import ConfigError, DataError, DegenerateFeatureError

logger = logging.getLogger(__name__)

ARTIFACT_VERSION = 1


class ClassifierKind(str, Enum):
    BAYES = "bayes"
    NEURAL_NET = "neural_net"
    PARTITION_MODEL = "partition_model"
    RANDOM_FOREST = "random_forest"

    @property
    def abbreviation(self) -> str:
        return _ABBREVIATIONS[self]


_ABBREVIATIONS = {
    ClassifierKind.BAYES: "BA",
    ClassifierKind.NEURAL_NET: "NN",
    ClassifierKind.PARTITION_MODEL: "PM",
    ClassifierKind.RANDOM_FOREST: "RF",
}

DEFAULT_HYPERPARAMS = {
    ClassifierKind.BAYES: {"pseudocount": 1.0},
    ClassifierKind.NEURAL_NET: {"hidden": 3, **asdict(RpropSettings())},
    ClassifierKind.PARTITION_MODEL: {"max_leaves": 61, "min_leaf": 5},
    ClassifierKind.RANDOM_FOREST: {
        "n_trees": 500,
        "mtry": 8,
        "bootstrap": True,
        "min_leaf": 1,
    },
}

_MODEL_CLASSES = {
    ClassifierKind.BAYES: BayesClassifier,
    ClassifierKind.NEURAL_NET: NeuralNetClassifier,
    ClassifierKind.PARTITION_MODEL: PartitionTreeClassifier,
    ClassifierKind.RANDOM_FOREST: RandomForestClassifier,
}


def resolve_hyperparams(kind: ClassifierKind, overrides: Optional[dict] = None) -> dict:
    params = dict(DEFAULT_HYPERPARAMS[kind])
    for key, value in (overrides or {}).items():
        if key not in params:
            raise ConfigError(f"classifiers.{kind.value}.{key}", "unknown hyperparameter")
        params[key] = value
    return params


class ClassifierContext:
    """Strategy to select the learner for a classifier kind."""

    def __init__(self):
        self.strategy: Classifier = None

    def set_classifier(
        self, kind: ClassifierKind, hyperparams: dict, seed: int, workers: int = 1
    ):
        if kind == ClassifierKind.BAYES:
            self.strategy = BayesClassifier(pseudocount=hyperparams["pseudocount"])
        elif kind == ClassifierKind.NEURAL_NET:
            rprop = {k: v for k, v in hyperparams.items() if k != "hidden"}
            self.strategy = NeuralNetClassifier(
                hidden=hyperparams["hidden"],
                rprop=RpropSettings(**rprop),
                rng=np.random.default_rng(seed),
            )
        elif kind == ClassifierKind.PARTITION_MODEL:
            self.strategy = PartitionTreeClassifier(
                max_leaves=hyperparams["max_leaves"], min_leaf=hyperparams["min_leaf"]
            )
        elif kind == ClassifierKind.RANDOM_FOREST:
            self.strategy = RandomForestClassifier(
                n_trees=hyperparams["n_trees"],
                mtry=hyperparams["mtry"],
                bootstrap=hyperparams["bootstrap"],
                min_leaf=hyperparams["min_leaf"],
                seed=seed,
                workers=workers,
            )
        else:
            raise Exception(f"Classifier kind {kind} not supported")

    def fit(self, features, valid_counts, labels, n_labels) -> Classifier:
        self.strategy.fit(features, valid_counts, labels, n_labels)
        return self.strategy


@dataclass(eq=False)
class TrainedClassifier:
    """
    A fitted classifier over the labels observed in its training data.
    constant_label is set when fewer than two labels were observed; the model then
    always answers that label.
    """

    kind: ClassifierKind
    label_set: LabelSet
    model: Optional[Classifier]
    train_seed: int
    hyperparams: dict = field(default_factory=dict)
    constant_label: Optional[int] = None
    dropped_degenerate: int = 0

    @property
    def is_constant(self) -> bool:
        return self.constant_label is not None

    def decide(self, features: np.ndarray, valid_counts: np.ndarray) -> np.ndarray:
        """Label indices into self.label_set for a batch of feature rows."""
        valid_counts = np.asarray(valid_counts)
        if (valid_counts == 0).any():
            raise DegenerateFeatureError(
                f"{int((valid_counts == 0).sum())} degenerate feature vectors"
            )
        if self.is_constant:
            return np.full(features.shape[0], self.constant_label, dtype=np.int64)
        return np.asarray(self.model.decide(features, valid_counts), dtype=np.int64)

    def predict(self, f: TripletDistribution) -> str:
        idx = self.decide(f.probs[None, :], np.array([f.valid_triplet_count]))
        return self.label_set.labels[int(idx[0])]

    def predict_dataset(self, dataset: ReadDataset) -> np.ndarray:
        features, valid = triplet_matrix(dataset)
        return np.asarray(self.label_set.labels, dtype=object)[self.decide(features, valid)]

    def decision_vector(self, dataset: ReadDataset) -> DecisionVector:
        return DecisionVector(
            classifier=self.kind.value,
            ids=dataset.ids,
            decisions=tuple(self.predict_dataset(dataset)),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "format_version": ARTIFACT_VERSION,
            "kind": self.kind.value,
            "label_set": list(self.label_set.labels),
            "train_seed": int(self.train_seed),
            "hyperparams": self.hyperparams,
            "constant_label": self.constant_label,
            "dropped_degenerate": self.dropped_degenerate,
            "model": None if self.model is None else self.model.to_params(),
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TrainedClassifier":
        if d.get("format_version") != ARTIFACT_VERSION:
            raise DataError(f"unsupported model format version {d.get('format_version')}")
        kind = ClassifierKind(d["kind"])
        model = None
        if d["model"] is not None:
            model = _MODEL_CLASSES[kind].from_params(d["model"])
        return cls(
            kind=kind,
            label_set=LabelSet(tuple(d["label_set"])),
            model=model,
            train_seed=d["train_seed"],
            hyperparams=d["hyperparams"],
            constant_label=d["constant_label"],
            dropped_degenerate=d.get("dropped_degenerate", 0),
        )

    @classmethod
    def from_json_str(cls, text: str) -> "TrainedClassifier":
        return cls.from_dict(json.loads(text))

    def save(self, path: str) -> str:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_json_str())
        return path

    @classmethod
    def load(cls, path: str) -> "TrainedClassifier":
        if not os.path.exists(path):
            raise DataError(f"model file {path} does not exist")
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_json_str(f.read())


def fit(
    kind: ClassifierKind,
    training: ReadDataset,
    hyperparams: Optional[dict] = None,
    seed: int = 0,
    workers: int = 1,
) -> TrainedClassifier:
    """
    Train one classifier on a dataset's triplet distributions.
    Reads without a single valid window are dropped; the model speaks only the
    labels that remain.
    """
    kind = ClassifierKind(kind)
    params = resolve_hyperparams(kind, hyperparams)
    features, valid = triplet_matrix(training)
    keep = valid > 0
    dropped = int((~keep).sum())
    if dropped:
        logger.warning("Dropping %d degenerate reads from %s training", dropped, kind.value)
    if not keep.any():
        raise DegenerateFeatureError("every training read is degenerate")
    features, valid, labels = features[keep], valid[keep], training.labels[keep]

    present = np.unique(labels)
    observed = LabelSet(tuple(training.label_set.labels[i] for i in present))
    remap = np.full(len(training.label_set), -1, dtype=np.int64)
    remap[present] = np.arange(present.size)
    labels = remap[labels]

    if len(observed) < 2:
        logger.warning(
            "Only label %s observed; %s falls back to a constant model",
            observed.labels[0],
            kind.value,
        )
        return TrainedClassifier(
            kind=kind,
            label_set=observed,
            model=None,
            train_seed=seed,
            hyperparams=params,
            constant_label=0,
            dropped_degenerate=dropped,
        )

    context = ClassifierContext()
    context.set_classifier(kind, params, seed, workers=workers)
    model = context.fit(features, valid, labels, len(observed))
    return TrainedClassifier(
        kind=kind,
        label_set=observed,
        model=model,
        train_seed=seed,
        hyperparams=params,
        dropped_degenerate=dropped,
    )


def predict(m: TrainedClassifier, f: TripletDistribution) -> str:
    return m.predict(f)


def predict_posterior(m: TrainedClassifier, f: TripletDistribution, n_triplets: int) -> np.ndarray:
    """Bayes posterior over m.label_set for a read with n_triplets valid windows."""
    if not isinstance(m.model, BayesClassifier):
        raise DataError(f"posterior probabilities are only defined for bayes, not {m.kind.value}")
    if n_triplets < 1 or not np.asarray(f.probs).any():
        raise DegenerateFeatureError("posterior of a degenerate feature vector")
    return m.model.posterior(f.probs[None, :], np.array([n_triplets]))[0]


def confusion_matrix(
    m: TrainedClassifier, data: ReadDataset, label_set: Optional[LabelSet] = None
) -> ConfusionMatrix:
    """
    Rows: true label; columns: decision. The label set defaults to the data's labels
    extended by any the model can emit beyond them.
    """
    label_set = label_set or data.label_set.union(m.label_set)
    truth = np.asarray(data.label_set.labels, dtype=object)[data.labels]
    return ConfusionMatrix.from_labels(truth, m.predict_dataset(data), label_set)
