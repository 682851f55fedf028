from dataclasses import dataclass
from itertools import product
from typing import Tuple

import numpy as np
import pandas as pd

from readlab.genomes.utils.sequence.alphabet import BASES, N_CODE
from readlab.genomes.utils.sequence.records import DnaSequence, ReadDataset
from readlab.genomes.utils.tables import save_dataframe_as_csv
from readlab.utils.errors import DegenerateFeatureError, SequenceError

TRIPLETS = tuple("".join(p) for p in product(BASES, repeat=3))
N_TRIPLETS = len(TRIPLETS)  # 64


@dataclass(frozen=True, eq=False)
class TripletDistribution:
    """P3(b1b2b3|S) over the 64 lexicographic ACGT triplets."""

    probs: np.ndarray
    valid_triplet_count: int

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.shape != (N_TRIPLETS,):
            raise ValueError(f"expected {N_TRIPLETS} bins, got {probs.shape}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def degenerate(self) -> bool:
        return self.valid_triplet_count == 0

    def __getitem__(self, triplet: str) -> float:
        return float(self.probs[TRIPLETS.index(triplet.upper())])


def window_codes(codes: np.ndarray) -> np.ndarray:
    """
    Triplet index (0..63) of every window S(k:k+2) for each row of codes,
    -1 where the window contains N.
    """
    codes = np.atleast_2d(np.asarray(codes, dtype=np.int64))
    a, b, c = codes[:, :-2], codes[:, 1:-1], codes[:, 2:]
    idx = 16 * a + 4 * b + c
    invalid = (a == N_CODE) | (b == N_CODE) | (c == N_CODE)
    return np.where(invalid, -1, idx)


def triplet_counts(codes: np.ndarray) -> np.ndarray:
    """(n, 64) window counts for (n, L) codes, N-containing windows excluded."""
    windows = window_codes(codes)
    n = windows.shape[0]
    rows = np.repeat(np.arange(n), windows.shape[1])
    flat = windows.ravel()
    keep = flat >= 0
    return np.bincount(
        rows[keep] * N_TRIPLETS + flat[keep], minlength=n * N_TRIPLETS
    ).reshape(n, N_TRIPLETS).astype(np.float64)


def normalize_counts(counts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Counts -> (distributions, valid counts); degenerate rows stay all-zero."""
    totals = counts.sum(axis=1)
    safe = np.where(totals > 0, totals, 1.0)
    return counts / safe[:, None], totals.astype(np.int64)


def triplet_matrix(dataset: ReadDataset) -> Tuple[np.ndarray, np.ndarray]:
    """Feature matrix (n, 64) and valid window counts (n,) for a dataset."""
    return normalize_counts(triplet_counts(dataset.codes))


def triplet_distribution(s: DnaSequence) -> TripletDistribution:
    if len(s) < 3:
        raise SequenceError(f"sequence of length {len(s)} has no triplets")
    probs, valid = normalize_counts(triplet_counts(s.codes()[None, :]))
    return TripletDistribution(probs=probs[0], valid_triplet_count=int(valid[0]))


def triplet_entropy(d: TripletDistribution) -> float:
    """Shannon entropy in bits, 0*log 0 = 0; within [0, 6]."""
    if d.degenerate or not d.probs.any():
        raise DegenerateFeatureError("entropy of a degenerate triplet distribution")
    p = d.probs[d.probs > 0]
    return float(-(p * np.log2(p)).sum())


def write_triplet_csv(dataset: ReadDataset, path: str) -> str:
    """Canonical `id,label,AAA,...,TTT` table."""
    features, _ = triplet_matrix(dataset)
    df = pd.DataFrame(features, columns=list(TRIPLETS))
    labels = np.asarray(dataset.label_set.labels, dtype=object)
    df.insert(0, "label", labels[dataset.labels])
    df.insert(0, "id", list(dataset.ids))
    return save_dataframe_as_csv(df, path, kind="triplets")
