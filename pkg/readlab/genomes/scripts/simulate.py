import logging
import os
import sys
from typing import Optional, Tuple

from readlab.genomes.utils.runner import ExperimentRunner
from readlab.genomes.utils.sequence.fasta import write_reads_csv
from readlab.genomes.utils.sequence.records import ReadDataset
from readlab.genomes.utils.sequence.triplets import write_triplet_csv
from readlab.genomes.utils.settings import ExperimentConfig

logger = logging.getLogger(__name__)


def simulate(
    config_path: str,
    out: Optional[str] = None,
    seed: Optional[int] = None,
    replicate: Optional[int] = None,
) -> Tuple[ReadDataset, ReadDataset]:
    """Simulate the training and validation reads of an experiment config."""
    cfg = ExperimentConfig.load(config_path, seed=seed, out=out, replicate=replicate)
    runner = ExperimentRunner(cfg)
    runner.prepare()
    for name, dataset in (("training", runner.training), ("validation", runner.validation)):
        path = write_reads_csv(dataset, os.path.join(cfg.output_dir, f"{name}_reads.csv"))
        logger.info("Saved %d %s reads to %s", len(dataset), name, path)
        write_triplet_csv(dataset, os.path.join(cfg.output_dir, f"{name}_triplets.csv"))
    return runner.training, runner.validation


if __name__ == "__main__":
    args = sys.argv[1:]
    if len(args) != 1:
        print("Usage: python -m readlab.genomes.scripts.simulate <config_path>")
        sys.exit(1)
    logging.basicConfig(level=logging.INFO, format="[%(name)s] %(message)s")
    simulate(args[0])
