from itertools import permutations
from typing import TYPE_CHECKING, Iterator, List, Optional, Tuple

import numpy as np

from readlab.genomes.utils.sequence.records import DnaSequence, ReadRecord
from readlab.genomes.utils.sequence.triplets import normalize_counts, triplet_counts

if TYPE_CHECKING:
    from readlab.genomes.utils.classifier import TrainedClassifier

MAX_EXHAUSTIVE = 5


def _codes(x) -> np.ndarray:
    seq = x.sequence if isinstance(x, ReadRecord) else x
    return seq.codes()


def hamming_distance(a, b) -> int:
    ca, cb = _codes(a), _codes(b)
    if ca.shape != cb.shape:
        raise ValueError(f"length mismatch {ca.size} vs {cb.size}")
    return int((ca != cb).sum())


def hamming_path(r, r2, order: Optional[Tuple[int, ...]] = None) -> List[DnaSequence]:
    """
    R_0 = r, ..., R_k = r2, changing one differing position per step.
    Positions change left to right unless `order` gives another permutation.
    """
    a, b = _codes(r), _codes(r2)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch {a.size} vs {b.size}")
    diff = np.flatnonzero(a != b)
    if order is not None:
        if sorted(order) != diff.tolist():
            raise ValueError("order must permute the differing positions")
        diff = np.asarray(order)
    path = [a.copy()]
    current = a.copy()
    for i in diff:
        current[i] = b[i]
        path.append(current.copy())
    return [DnaSequence.from_codes(c) for c in path]


def all_hamming_paths(r, r2) -> Iterator[List[DnaSequence]]:
    """All k! paths; only for fixtures with k <= 5."""
    a, b = _codes(r), _codes(r2)
    diff = np.flatnonzero(a != b).tolist()
    if len(diff) > MAX_EXHAUSTIVE:
        raise ValueError(f"{len(diff)}! paths requested, limit is {MAX_EXHAUSTIVE}")
    for order in permutations(diff):
        yield hamming_path(r, r2, order=order)


def _decisions(classifier: "TrainedClassifier", path: List[DnaSequence]) -> np.ndarray:
    features, valid = normalize_counts(triplet_counts(np.vstack([s.codes() for s in path])))
    return classifier.decide(features, valid)


def boundary_pair_on_path(
    classifier: "TrainedClassifier", path: List[DnaSequence]
) -> Optional[Tuple[DnaSequence, DnaSequence]]:
    decisions = _decisions(classifier, path)
    changes = np.flatnonzero(decisions[:-1] != decisions[1:])
    if changes.size == 0:
        return None
    j = int(changes[0])
    return path[j], path[j + 1]


def locate_boundary_pair(
    classifier: "TrainedClassifier", r, r2
) -> Optional[Tuple[DnaSequence, DnaSequence]]:
    """
    First adjacent pair on the left-to-right Hamming path from r to r2 that the
    classifier separates. Both members lie on the decision boundary.
    """
    return boundary_pair_on_path(classifier, hamming_path(r, r2))
