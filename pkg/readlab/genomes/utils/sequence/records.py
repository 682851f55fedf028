import hashlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence

import numpy as np
import pandas as pd

from readlab.genomes.utils.sequence.alphabet import SYMBOLS, decode, encode
from readlab.utils.errors import DataError, SequenceError


@dataclass(frozen=True)
class DnaSequence:
    """A string over {A, C, G, T, N}; positions are 1-based as S(i), S(i:j)."""

    bases: str

    def __post_init__(self):
        upper = self.bases.upper()
        if any(ch not in SYMBOLS for ch in upper):
            bad = next(ch for ch in upper if ch not in SYMBOLS)
            raise SequenceError(f"illegal character {bad!r}")
        object.__setattr__(self, "bases", upper)

    def __len__(self) -> int:
        return len(self.bases)

    def __str__(self) -> str:
        return self.bases

    def at(self, i: int) -> str:
        if not 1 <= i <= len(self.bases):
            raise IndexError(f"position {i} outside 1..{len(self.bases)}")
        return self.bases[i - 1]

    def slice(self, i: int, j: int) -> "DnaSequence":
        if not 1 <= i <= j <= len(self.bases):
            raise IndexError(f"S({i}:{j}) undefined for |S|={len(self.bases)}")
        return DnaSequence(self.bases[i - 1 : j])

    def codes(self) -> np.ndarray:
        return encode(self.bases)

    @classmethod
    def from_codes(cls, codes: np.ndarray) -> "DnaSequence":
        return cls(decode(codes))


@dataclass(frozen=True)
class ClassLabel:
    name: str


@dataclass(frozen=True)
class LabelSet:
    """Ordered, duplicate-free labels; order fixes tie-breaks and CSV columns."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if not labels:
            raise DataError("label set is empty")
        if len(set(labels)) != len(labels):
            raise DataError(f"duplicate labels in {labels}")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, name) -> bool:
        return str(name) in self.labels

    def index(self, name: str) -> int:
        try:
            return self.labels.index(str(name))
        except ValueError:
            raise DataError(f"label {name!r} not in {self.labels}") from None

    def union(self, other: "LabelSet") -> "LabelSet":
        return LabelSet(self.labels + tuple(x for x in other if x not in self.labels))


@dataclass(frozen=True)
class ReadRecord:
    id: str
    sequence: DnaSequence
    label: str


class DatasetRole(str, Enum):
    TRAINING = "training"
    VALIDATION = "validation"
    POOL = "pool"


@dataclass(frozen=True, eq=False)
class ReadDataset:
    """
    Fixed-length labeled reads held column-wise.
    codes: (n, L) uint8 over ACGTN, labels: (n,) indices into label_set.
    """

    ids: tuple
    codes: np.ndarray
    labels: np.ndarray
    label_set: LabelSet
    role: DatasetRole = DatasetRole.TRAINING
    _fingerprint: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        codes = np.ascontiguousarray(self.codes, dtype=np.uint8)
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if codes.ndim != 2 or codes.shape[0] == 0:
            raise DataError("dataset must hold at least one read")
        if codes.shape[0] != len(self.ids) or labels.shape != (codes.shape[0],):
            raise DataError("ids, codes and labels are misaligned")
        if labels.min() < 0 or labels.max() >= len(self.label_set):
            raise DataError("label index outside the label set")
        codes.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.codes.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReadDataset):
            return NotImplemented
        return (
            self.ids == other.ids
            and self.label_set == other.label_set
            and np.array_equal(self.codes, other.codes)
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None

    @property
    def read_length(self) -> int:
        return self.codes.shape[1]

    def record(self, i: int) -> ReadRecord:
        return ReadRecord(
            id=self.ids[i],
            sequence=DnaSequence.from_codes(self.codes[i]),
            label=self.label_set.labels[self.labels[i]],
        )

    def records(self) -> Iterator[ReadRecord]:
        for i in range(len(self)):
            yield self.record(i)

    def label_counts(self) -> Dict[str, int]:
        counts = np.bincount(self.labels, minlength=len(self.label_set))
        return {name: int(c) for name, c in zip(self.label_set, counts)}

    def replace(
        self,
        codes: Optional[np.ndarray] = None,
        labels: Optional[np.ndarray] = None,
        label_set: Optional[LabelSet] = None,
    ) -> "ReadDataset":
        return ReadDataset(
            ids=self.ids,
            codes=self.codes if codes is None else codes,
            labels=self.labels if labels is None else labels,
            label_set=self.label_set if label_set is None else label_set,
            role=self.role,
        )

    def subset(self, mask: np.ndarray) -> "ReadDataset":
        idx = np.flatnonzero(mask)
        return ReadDataset(
            ids=tuple(self.ids[i] for i in idx),
            codes=self.codes[idx],
            labels=self.labels[idx],
            label_set=self.label_set,
            role=self.role,
        )

    def concat(self, other: "ReadDataset") -> "ReadDataset":
        """Append other's reads; the label set becomes the union."""
        if other.read_length != self.read_length:
            raise DataError(
                f"read length {other.read_length} != {self.read_length}"
            )
        label_set = self.label_set.union(other.label_set)
        remap = np.array([label_set.index(x) for x in other.label_set])
        return ReadDataset(
            ids=self.ids + other.ids,
            codes=np.vstack([self.codes, other.codes]),
            labels=np.concatenate([self.labels, remap[other.labels]]),
            label_set=label_set,
            role=self.role,
        )

    def fingerprint(self) -> str:
        """sha256 over ids, labels and bases; equal fingerprints mean identical reads."""
        if not self._fingerprint:
            h = hashlib.sha256()
            h.update("\n".join(self.label_set).encode())
            h.update("\n".join(self.ids).encode())
            h.update(self.labels.tobytes())
            h.update(self.codes.tobytes())
            self._fingerprint.append(h.hexdigest())
        return self._fingerprint[0]

    def to_frame(self) -> pd.DataFrame:
        labels = np.asarray(self.label_set.labels, dtype=object)
        return pd.DataFrame(
            {
                "id": list(self.ids),
                "label": labels[self.labels],
                "sequence": [decode(row) for row in self.codes],
            }
        )

    @classmethod
    def from_records(
        cls,
        records: Iterable[ReadRecord],
        label_set: Optional[LabelSet] = None,
        role: DatasetRole = DatasetRole.TRAINING,
    ) -> "ReadDataset":
        records = list(records)
        if not records:
            raise DataError("dataset must hold at least one read")
        if label_set is None:
            label_set = LabelSet(tuple(dict.fromkeys(r.label for r in records)))
        lengths = {len(r.sequence) for r in records}
        if len(lengths) != 1:
            raise DataError(f"reads have differing lengths {sorted(lengths)}")
        return cls(
            ids=tuple(r.id for r in records),
            codes=np.vstack([r.sequence.codes() for r in records]),
            labels=np.array([label_set.index(r.label) for r in records]),
            label_set=label_set,
            role=role,
        )

    @classmethod
    def from_strings(
        cls,
        ids: Sequence[str],
        sequences: Sequence[str],
        labels: Sequence[str],
        label_set: Optional[LabelSet] = None,
        role: DatasetRole = DatasetRole.TRAINING,
    ) -> "ReadDataset":
        return cls.from_records(
            (
                ReadRecord(id=i, sequence=DnaSequence(s), label=lbl)
                for i, s, lbl in zip(ids, sequences, labels)
            ),
            label_set=label_set,
            role=role,
        )


def merge(datasets: List[ReadDataset], role: DatasetRole) -> ReadDataset:
    out = datasets[0]
    for ds in datasets[1:]:
        out = out.concat(ds)
    return ReadDataset(
        ids=out.ids,
        codes=out.codes,
        labels=out.labels,
        label_set=out.label_set,
        role=role,
    )
