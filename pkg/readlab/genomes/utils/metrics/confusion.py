from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from readlab.genomes.utils.sequence.records import LabelSet
from readlab.genomes.utils.tables import save_dataframe_as_csv
from readlab.utils.errors import DataError


@dataclass(frozen=True, eq=False)
class DecisionVector:
    """Decisions of one classifier over a fixed dataset, aligned by read id."""

    classifier: str
    ids: tuple
    decisions: tuple

    def __post_init__(self):
        if len(self.ids) != len(self.decisions):
            raise DataError(
                f"{self.classifier}: {len(self.decisions)} decisions for {len(self.ids)} reads"
            )

    def __len__(self) -> int:
        return len(self.decisions)

    def tally(self, label_set: LabelSet) -> dict:
        """Number of reads assigned to each label, in label_set order."""
        counts = pd.Series(self.decisions).value_counts()
        return {label: int(counts.get(label, 0)) for label in label_set}


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """counts[i, j]: reads with true label i decided as label j (same label_set)."""

    label_set: LabelSet
    counts: np.ndarray

    @classmethod
    def from_labels(
        cls, truth: Sequence[str], decisions: Sequence[str], label_set: LabelSet
    ) -> "ConfusionMatrix":
        if len(truth) != len(decisions):
            raise DataError("truth and decisions differ in length")
        k = len(label_set)
        t = np.fromiter((label_set.index(x) for x in truth), dtype=np.int64, count=len(truth))
        d = np.fromiter(
            (label_set.index(x) for x in decisions), dtype=np.int64, count=len(decisions)
        )
        counts = np.bincount(t * k + d, minlength=k * k).reshape(k, k)
        return cls(label_set=label_set, counts=counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def correct(self) -> int:
        return int(np.trace(self.counts))

    @property
    def correct_rate(self) -> float:
        return self.correct / self.total if self.total else 0.0

    def row_totals(self) -> dict:
        return dict(zip(self.label_set, self.counts.sum(axis=1).tolist()))

    def column_totals(self) -> dict:
        return dict(zip(self.label_set, self.counts.sum(axis=0).tolist()))

    def to_frame(self) -> pd.DataFrame:
        df = pd.DataFrame(self.counts, columns=list(self.label_set))
        df.insert(0, "true", list(self.label_set))
        return df

    def save(self, path: str) -> str:
        return save_dataframe_as_csv(self.to_frame(), path, kind="confusion")
