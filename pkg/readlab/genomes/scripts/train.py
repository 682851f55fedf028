import logging
import sys
from typing import Optional

from readlab.genomes.utils.classifier import (ClassifierKind,
                                              TrainedClassifier, fit)
from readlab.genomes.utils.sequence.fasta import read_reads_csv

logger = logging.getLogger(__name__)


def train(
    reads_path: str,
    kind: str,
    out_path: str,
    seed: int = 0,
    hyperparams: Optional[dict] = None,
    workers: int = 1,
) -> TrainedClassifier:
    """Fit one classifier on a read CSV and save the model as JSON."""
    training = read_reads_csv(reads_path)
    model = fit(ClassifierKind(kind), training, hyperparams, seed=seed, workers=workers)
    model.save(out_path)
    logger.info("Saved %s model to %s", kind, out_path)
    return model


if __name__ == "__main__":
    args = sys.argv[1:]
    if len(args) != 3:
        print("Usage: python -m readlab.genomes.scripts.train <reads.csv> <kind> <model.json>")
        sys.exit(1)
    logging.basicConfig(level=logging.INFO, format="[%(name)s] %(message)s")
    train(*args)
