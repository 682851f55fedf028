from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Sequence

import numpy as np

from readlab.genomes.utils.metrics.confusion import DecisionVector
from readlab.utils.errors import DataError


@dataclass(frozen=True)
class CongruenceTable:
    """Agreement counts keyed by joined classifier names, e.g. NN_PM or NN_PM_RF."""

    names: tuple
    counts: Dict[str, int]
    n_reads: int

    @property
    def full_key(self) -> str:
        return "_".join(self.names)

    def pairwise(self) -> Dict[str, int]:
        return {k: v for k, v in self.counts.items() if k.count("_") == 1}

    def as_row(self) -> Dict[str, int]:
        return dict(self.counts)


def congruence_columns(names: Sequence[str]) -> List[str]:
    """Every subset of two or more classifiers, smallest first, in roster order."""
    return [
        "_".join(group)
        for size in range(2, len(names) + 1)
        for group in combinations(names, size)
    ]


def congruence(vectors: Sequence[DecisionVector], names: Sequence[str] = ()) -> CongruenceTable:
    """
    Number of reads on which each group of two or more classifiers returns one
    decision. Correctness plays no part.
    """
    if len(vectors) < 2:
        raise DataError("congruence needs at least two decision vectors")
    ids = vectors[0].ids
    for v in vectors[1:]:
        if v.ids != ids:
            raise DataError(f"decision vector {v.classifier} is not aligned with {vectors[0].classifier}")
    names = tuple(names) if names else tuple(v.classifier for v in vectors)
    if len(names) != len(vectors):
        raise DataError("one name per decision vector required")

    decisions = [np.asarray(v.decisions, dtype=object) for v in vectors]
    counts = {}
    for size in range(2, len(names) + 1):
        for group in combinations(range(len(names)), size):
            agree = np.ones(len(ids), dtype=bool)
            for i in group[1:]:
                agree &= decisions[i] == decisions[group[0]]
            counts["_".join(names[i] for i in group)] = int(agree.sum())
    return CongruenceTable(names=names, counts=counts, n_reads=len(ids))
