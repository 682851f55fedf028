from typing import Optional

import numpy as np

from readlab.genomes.utils.sequence.records import ReadDataset
from readlab.utils.errors import DataError
from readlab.utils.seeding import RELABEL, SELECTION, streams


def relabel(
    labels: np.ndarray, rows: np.ndarray, offsets: Optional[np.ndarray], n_labels: int
) -> np.ndarray:
    """Move flagged rows to a uniformly chosen different label."""
    if not rows.any():
        return labels
    if offsets is None:
        raise DataError("mislabeling needs at least two labels")
    return np.where(rows, (labels + offsets) % n_labels, labels)


def relabel_offsets(rng: np.random.Generator, n: int, n_labels: int) -> Optional[np.ndarray]:
    if n_labels < 2:
        return None
    return rng.integers(1, n_labels, size=n)


def degrade_mislabel(d: ReadDataset, p: float, seed: int) -> ReadDataset:
    """Each read's label is replaced, with probability p, by one of the other labels."""
    rngs = streams(seed)
    K = len(d.label_set)
    selected = rngs[SELECTION].random(len(d)) < p
    offsets = relabel_offsets(rngs[RELABEL], len(d), K)
    return d.replace(labels=relabel(d.labels, selected, offsets, K))
