import logging
import sys
from typing import Dict, Optional, Sequence

from readlab.genomes.utils.degrader import DegradationContext
from readlab.genomes.utils.degrader.strategy import (GRID_PARAMETERS,
                                                     DegradationKind,
                                                     DegradationSpec)
from readlab.genomes.utils.sequence.fasta import (read_reads_csv,
                                                  write_reads_csv)
from readlab.genomes.utils.sequence.records import DatasetRole, ReadDataset
from readlab.utils.seeding import derive_seed

logger = logging.getLogger(__name__)


def degrade(
    reads_path: str,
    out_path: str,
    kind: str,
    params: Dict[str, float],
    seed: int,
    labels: Sequence[str] = (),
    target_label: Optional[str] = None,
    pool_path: Optional[str] = None,
    replicate: int = 0,
) -> ReadDataset:
    """Apply one degradation to a read CSV and write the result."""
    spec = DegradationSpec(kind=kind, labels=tuple(labels), target_label=target_label, **params)
    dataset = read_reads_csv(reads_path)
    pool = read_reads_csv(pool_path, role=DatasetRole.POOL) if pool_path else None
    derived = derive_seed(seed, spec.seed_label, spec.parameter_values(), replicate)
    degraded = DegradationContext(pool).degrade(dataset, spec, derived)
    write_reads_csv(degraded, out_path)
    logger.info("Degraded %d reads into %d, saved to %s", len(dataset), len(degraded), out_path)
    return degraded


if __name__ == "__main__":
    args = sys.argv[1:]
    if len(args) != 5:
        print("Usage: python -m readlab.genomes.scripts.degrade <reads.csv> <out.csv> <kind> <p> <seed>")
        sys.exit(1)
    logging.basicConfig(level=logging.INFO, format="[%(name)s] %(message)s")
    reads, out, kind, p, seed = args
    names = GRID_PARAMETERS[DegradationKind(kind)]
    degrade(reads, out, kind, {names[-1]: float(p)}, int(seed))
