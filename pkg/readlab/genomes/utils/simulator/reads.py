import logging
from dataclasses import asdict, dataclass, field
from typing import Optional, Union

import numpy as np

from readlab.genomes.utils.sequence.alphabet import N_CODE
from readlab.genomes.utils.sequence.records import (ClassLabel, DatasetRole,
                                                    DnaSequence, LabelSet,
                                                    ReadDataset)
from readlab.utils.errors import DataError

logger = logging.getLogger(__name__)

MAX_REDRAWS = 1000

# event codes, in cumulative-rate order
SNP, INSERTION, DELETION, UNDETERMINED, EXACT = range(5)


@dataclass(frozen=True)
class ErrorModel:
    """Per-base sequencing error rates applied while reading a genome window."""

    snp_rate: float = 0.004
    insertion_rate: float = 0.0001
    deletion_rate: float = 0.0001
    n_rate: float = 0.002

    def __post_init__(self):
        rates = self.rates()
        if any(not 0.0 <= r < 1.0 for r in rates):
            raise ValueError(f"error rates must lie in [0, 1): {rates}")
        if sum(rates) >= 1.0:
            raise ValueError("error rates must sum to less than 1")

    def rates(self) -> tuple:
        return (self.snp_rate, self.insertion_rate, self.deletion_rate, self.n_rate)

    @classmethod
    def exact(cls) -> "ErrorModel":
        return cls(0.0, 0.0, 0.0, 0.0)

    def to_params(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SimulationSpec:
    read_length: int = 101
    coverage: float = 6.0
    error_model: ErrorModel = field(default_factory=ErrorModel)
    seed: int = 0

    def __post_init__(self):
        if self.read_length < 3:
            raise ValueError(f"read_length must be >= 3, got {self.read_length}")
        if not self.coverage > 0:
            raise ValueError(f"coverage must be positive, got {self.coverage}")

    def n_reads(self, genome_length: int) -> int:
        return max(1, int(round(self.coverage * genome_length / self.read_length)))


class ReadSimulator:
    """
    Forward-strand read simulator with SNP / insertion / deletion / N errors.
    A sequencer always reports L cycles: after indels the read is refilled from
    the following genome bases or truncated. A read whose deletions run past the
    genome end is discarded and its start drawn again.
    """

    def __init__(self, spec: SimulationSpec):
        self.spec = spec
        self.cum_rates = np.cumsum(spec.error_model.rates())

    def _read_one(self, genome: np.ndarray, start: int, rng: np.random.Generator) -> Optional[np.ndarray]:
        L = self.spec.read_length
        pieces = []
        emitted = 0
        pos = start
        while emitted < L:
            window = genome[pos : pos + L]
            span = window.size
            if span == 0:
                return None
            u = rng.random(span)
            shift = rng.integers(1, 4, size=span)
            fresh = rng.integers(0, 4, size=span)
            inserted = rng.integers(0, 4, size=span)
            event = np.searchsorted(self.cum_rates, u, side="right")

            base = window.copy()
            snp = event == SNP
            base[snp] = np.where(
                window[snp] < N_CODE, (window[snp] + shift[snp]) % 4, fresh[snp]
            )
            base[event == UNDETERMINED] = N_CODE

            stacked = np.stack([inserted.astype(np.uint8), base], axis=1)
            keep = np.stack([event == INSERTION, event != DELETION], axis=1)
            chunk = stacked[keep]
            pieces.append(chunk)
            emitted += chunk.size
            pos += span
        return np.concatenate(pieces)[:L]

    def simulate_n(
        self, genome: DnaSequence, label: str, n: int, role: DatasetRole
    ) -> ReadDataset:
        L = self.spec.read_length
        if len(genome) < L:
            raise DataError(
                f"genome of length {len(genome)} shorter than read length {L}"
            )
        codes = genome.codes()
        rng = np.random.default_rng(self.spec.seed)
        starts = rng.integers(0, len(genome) - L + 1, size=n)
        reads = np.empty((n, L), dtype=np.uint8)
        for i in range(n):
            for _ in range(MAX_REDRAWS):
                read = self._read_one(codes, int(starts[i]), rng)
                if read is not None:
                    break
                starts[i] = rng.integers(0, len(genome) - L + 1)
            else:
                raise DataError(
                    f"{label}: no read of length {L} fits the genome under this deletion rate"
                )
            reads[i] = read
        ids = tuple(f"{label}-{i:06d}:{int(s) + 1}" for i, s in enumerate(starts))
        logger.debug("Simulated %d reads of length %d for %s", n, L, label)
        return ReadDataset(
            ids=ids,
            codes=reads,
            labels=np.zeros(n, dtype=np.int64),
            label_set=LabelSet((label,)),
            role=role,
        )


def read_start(read_id: str) -> int:
    """1-based genome start recorded in a simulated read id."""
    return int(read_id.rsplit(":", 1)[1])


def simulate_reads(
    genome: DnaSequence,
    label: Union[ClassLabel, str],
    spec: SimulationSpec,
    role: DatasetRole = DatasetRole.TRAINING,
) -> ReadDataset:
    """round(coverage*|genome|/L) reads with uniform start positions."""
    name = label.name if isinstance(label, ClassLabel) else str(label)
    return ReadSimulator(spec).simulate_n(genome, name, spec.n_reads(len(genome)), role)


def simulate_read_count(
    genome: DnaSequence,
    label: Union[ClassLabel, str],
    n: int,
    spec: SimulationSpec,
    role: DatasetRole = DatasetRole.VALIDATION,
) -> ReadDataset:
    """Exactly n reads, e.g. 2000 per genome for a validation set."""
    name = label.name if isinstance(label, ClassLabel) else str(label)
    return ReadSimulator(spec).simulate_n(genome, name, n, role)
