import logging
from dataclasses import dataclass
from typing import List, Optional

from readlab.genomes.utils.sequence.records import (DatasetRole, DnaSequence,
                                                    ReadDataset, merge)
from readlab.genomes.utils.simulator.reads import (ErrorModel, SimulationSpec,
                                                   simulate_read_count)

logger = logging.getLogger(__name__)

# Read counts of the reference superfluous pool (491,070 reads in total).
REFERENCE_POOL = {
    "Ecoli": 12000,
    "H5N1": 785,
    "HPV": 475,
    "Norovirus": 453,
    "Pgingivalis": 477357,
}


@dataclass(frozen=True)
class PoolMember:
    label: str
    genome: DnaSequence
    n_reads: int


def scaled_pool_counts(scale: float, reference: Optional[dict] = None) -> dict:
    """Reference proportions scaled down (or up); every member keeps at least one read."""
    reference = reference or REFERENCE_POOL
    return {label: max(1, int(round(n * scale))) for label, n in reference.items()}


def build_superfluous_pool(
    members: List[PoolMember],
    read_length: int,
    error_model: ErrorModel,
    seeds: List[int],
) -> ReadDataset:
    """Simulate each member's reads and merge them into one POOL dataset."""
    parts = []
    for member, seed in zip(members, seeds):
        spec = SimulationSpec(
            read_length=read_length, coverage=1.0, error_model=error_model, seed=seed
        )
        logger.info("Simulating %d pool reads for %s", member.n_reads, member.label)
        parts.append(
            simulate_read_count(
                member.genome, member.label, member.n_reads, spec, DatasetRole.POOL
            )
        )
    return merge(parts, DatasetRole.POOL)
