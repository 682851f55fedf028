import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np
import pandas as pd

from readlab.genomes.utils.boundary.neighbors import (neighbor_count,
                                                      neighbor_triplet_counts,
                                                      split_counts)
from readlab.genomes.utils.sequence.distance import hellinger_rows
from readlab.genomes.utils.sequence.records import (DnaSequence, ReadDataset,
                                                    ReadRecord)
from readlab.genomes.utils.sequence.triplets import triplet_counts
from readlab.genomes.utils.tables import save_dataframe_as_csv

if TYPE_CHECKING:
    from readlab.genomes.utils.classifier import TrainedClassifier

logger = logging.getLogger(__name__)

DEFAULT_CHUNK = 128


@dataclass(frozen=True, eq=False)
class BoundaryReport:
    id: str
    label: str
    decision: str
    bs: int
    ns: float
    neighbor_histogram: tuple  # counts over the classifier's label set
    dropped_neighbors: int = 0

    @property
    def on_boundary(self) -> bool:
        return self.bs >= 1


@dataclass(frozen=True, eq=False)
class BoundaryTable:
    """Boundary measures for every read of a dataset, in dataset order."""

    ids: tuple
    labels: tuple
    label_set: tuple  # classifier labels, histogram column order
    decisions: np.ndarray  # indices into label_set
    histograms: np.ndarray  # (n, K)
    dropped: np.ndarray

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def bs(self) -> np.ndarray:
        own = self.histograms[np.arange(len(self.ids)), self.decisions] > 0
        return np.count_nonzero(self.histograms, axis=1) - own

    @property
    def ns(self) -> np.ndarray:
        return neighbor_similarity_rows(self.decisions, self.histograms)

    def report(self, i: int) -> BoundaryReport:
        return BoundaryReport(
            id=self.ids[i],
            label=self.labels[i],
            decision=self.label_set[self.decisions[i]],
            bs=int(self.bs[i]),
            ns=float(self.ns[i]),
            neighbor_histogram=tuple(int(c) for c in self.histograms[i]),
            dropped_neighbors=int(self.dropped[i]),
        )

    def bs_distribution(self) -> np.ndarray:
        """Counts of reads with BS = 0, 1, ..., K-1."""
        return np.bincount(self.bs, minlength=len(self.label_set))

    def to_frame(self) -> pd.DataFrame:
        df = pd.DataFrame(
            {
                "id": list(self.ids),
                "label": list(self.labels),
                "decision": np.asarray(self.label_set, dtype=object)[self.decisions],
                "bs": self.bs,
                "ns": self.ns,
            }
        )
        for j, name in enumerate(self.label_set):
            df[f"n_{name}"] = self.histograms[:, j]
        return df

    def save(self, path: str) -> str:
        return save_dataframe_as_csv(self.to_frame(), path, kind="boundary")


def neighbor_similarity_rows(decisions: np.ndarray, histograms: np.ndarray) -> np.ndarray:
    """1 - Hellinger(point mass at the decision, neighbor decision distribution)."""
    histograms = np.asarray(histograms, dtype=np.float64)
    totals = histograms.sum(axis=1, keepdims=True)
    q = histograms / np.where(totals > 0, totals, 1.0)
    p = np.zeros_like(q)
    p[np.arange(q.shape[0]), decisions] = 1.0
    return 1.0 - hellinger_rows(p, q)


def _chunk_table(classifier: "TrainedClassifier", codes: np.ndarray):
    """Own decisions, neighbor histograms and dropped counts for a block of reads."""
    B, L = codes.shape
    per_read = neighbor_count(L)

    decisions = classifier.decide(*split_counts(triplet_counts(codes)))

    features, valid = split_counts(neighbor_triplet_counts(codes))
    keep = valid > 0
    owner = np.repeat(np.arange(B), per_read)
    histograms = np.zeros((B, len(classifier.label_set)), dtype=np.int64)
    if keep.any():
        neighbor_decisions = classifier.decide(features[keep], valid[keep])
        np.add.at(histograms, (owner[keep], neighbor_decisions), 1)
    dropped = np.bincount(owner[~keep], minlength=B)
    return decisions, histograms, dropped


def boundary_table(
    classifier: "TrainedClassifier",
    data: ReadDataset,
    chunk: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> BoundaryTable:
    """
    Classify all L*4 neighbors of every read. Blocks of `chunk` reads are evaluated
    together; block results are stitched back in read order.
    """
    blocks = [data.codes[i : i + chunk] for i in range(0, len(data), chunk)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(lambda b: _chunk_table(classifier, b), blocks))
    else:
        parts = [_chunk_table(classifier, b) for b in blocks]

    decisions = np.concatenate([p[0] for p in parts])
    histograms = np.vstack([p[1] for p in parts])
    dropped = np.concatenate([p[2] for p in parts])
    if dropped.any():
        logger.warning(
            "Dropped %d degenerate neighbors across %d reads",
            int(dropped.sum()),
            int((dropped > 0).sum()),
        )
    labels = np.asarray(data.label_set.labels, dtype=object)[data.labels]
    return BoundaryTable(
        ids=data.ids,
        labels=tuple(labels),
        label_set=classifier.label_set.labels,
        decisions=decisions,
        histograms=histograms,
        dropped=dropped,
    )


def _single(classifier: "TrainedClassifier", x: Union[ReadRecord, DnaSequence]) -> BoundaryTable:
    seq = x.sequence if isinstance(x, ReadRecord) else x
    label = x.label if isinstance(x, ReadRecord) else ""
    read_id = x.id if isinstance(x, ReadRecord) else ""
    decisions, histograms, dropped = _chunk_table(classifier, seq.codes()[None, :])
    if dropped[0]:
        logger.warning("Dropped %d degenerate neighbors of %s", int(dropped[0]), read_id or seq)
    return BoundaryTable(
        ids=(read_id,),
        labels=(label,),
        label_set=classifier.label_set.labels,
        decisions=decisions,
        histograms=histograms,
        dropped=dropped,
    )


def boundary_report(
    classifier: "TrainedClassifier", x: Union[ReadRecord, DnaSequence]
) -> BoundaryReport:
    return _single(classifier, x).report(0)


def boundary_status(classifier: "TrainedClassifier", x: Union[ReadRecord, DnaSequence]) -> int:
    """Number of labels other than C(x) among the decisions on x's neighbors."""
    return boundary_report(classifier, x).bs


def neighbor_similarity(
    classifier: "TrainedClassifier", x: Union[ReadRecord, DnaSequence]
) -> float:
    return boundary_report(classifier, x).ns


def bs_distribution(
    classifier: "TrainedClassifier",
    data: ReadDataset,
    chunk: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> np.ndarray:
    return boundary_table(classifier, data, chunk=chunk, workers=workers).bs_distribution()
