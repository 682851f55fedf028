import json
import os

import numpy as np
import pytest

from readlab.genomes.utils.classifier import ClassifierKind, TrainedClassifier
from readlab.genomes.utils.classifier.tree import (PartitionTreeClassifier,
                                                   TreeArrays)
from readlab.genomes.utils.sequence.records import (DatasetRole, LabelSet,
                                                    ReadDataset)
from readlab.genomes.utils.sequence.triplets import TRIPLETS

FIXTURES = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "readlab", "genomes", "fixtures"
)


def random_dataset(
    n: int,
    read_length: int,
    labels=("Adeno", "COVID", "SARS"),
    seed: int = 0,
    role: DatasetRole = DatasetRole.TRAINING,
) -> ReadDataset:
    """Uniform ACGT reads with labels cycling through `labels`."""
    rng = np.random.default_rng(seed)
    return ReadDataset(
        ids=tuple(f"r{i:06d}" for i in range(n)),
        codes=rng.integers(0, 4, size=(n, read_length), dtype=np.uint8),
        labels=np.arange(n) % len(labels),
        label_set=LabelSet(tuple(labels)),
        role=role,
    )


def stump_classifier(triplet: str, threshold: float, labels=("X", "Y")) -> TrainedClassifier:
    """Reads with P3(triplet) <= threshold go to labels[0], the rest to labels[1]."""
    tree = TreeArrays.stump(TRIPLETS.index(triplet), threshold, 0, 1, len(labels))
    return TrainedClassifier(
        kind=ClassifierKind.PARTITION_MODEL,
        label_set=LabelSet(tuple(labels)),
        model=PartitionTreeClassifier.from_tree(tree),
        train_seed=0,
    )


def constant_classifier(labels=("X", "Y", "Z"), index: int = 0) -> TrainedClassifier:
    return TrainedClassifier(
        kind=ClassifierKind.BAYES,
        label_set=LabelSet(tuple(labels)),
        model=None,
        train_seed=0,
        constant_label=index,
    )


def tiny_config(tmp_path, degradation: dict, **overrides) -> str:
    """A desk-sized experiment config written to tmp_path; returns its path."""
    config = {
        "name": "tiny",
        "output_dir": str(tmp_path / "run"),
        "master_seed": 7,
        "workers": 1,
        "read_length": 40,
        "compute_boundary": True,
        "compute_ns": True,
        "genomes": [
            {"label": "Adeno", "length": 2000, "markov": {"seed": 11, "concentration": 0.3}},
            {"label": "COVID", "length": 2000, "markov": {"seed": 22, "concentration": 0.3}},
            {"label": "SARS", "length": 2000, "markov": {"seed": 33, "concentration": 0.3}},
        ],
        "training": {"coverage": 2},
        "validation": {"reads_per_label": 30},
        "classifiers": {
            "bayes": {},
            "partition_model": {"max_leaves": 8, "min_leaf": 3},
            "random_forest": {"n_trees": 5, "mtry": 8},
        },
        "degradation": degradation,
    }
    config.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config, indent=2))
    return str(path)


@pytest.fixture
def tiny_snp_config(tmp_path):
    return tiny_config(tmp_path, {"kind": "snp", "grid": {"snp_probability": [0, 0.5, 0.95]}})
