import logging
import sys

from readlab.genomes.utils.classifier import (TrainedClassifier,
                                              confusion_matrix)
from readlab.genomes.utils.metrics import ConfusionMatrix
from readlab.genomes.utils.sequence.fasta import read_reads_csv
from readlab.genomes.utils.sequence.records import DatasetRole

logger = logging.getLogger(__name__)


def evaluate(model_path: str, reads_path: str, out_path: str) -> ConfusionMatrix:
    """Confusion matrix of a saved model on a read CSV."""
    model = TrainedClassifier.load(model_path)
    dataset = read_reads_csv(reads_path, role=DatasetRole.VALIDATION)
    cm = confusion_matrix(model, dataset)
    cm.save(out_path)
    logger.info(
        "%s: %d of %d correct (%.2f%%), saved to %s",
        model.kind.value,
        cm.correct,
        cm.total,
        100.0 * cm.correct_rate,
        out_path,
    )
    return cm


if __name__ == "__main__":
    args = sys.argv[1:]
    if len(args) != 3:
        print("Usage: python -m readlab.genomes.scripts.evaluate <model.json> <reads.csv> <out.csv>")
        sys.exit(1)
    logging.basicConfig(level=logging.INFO, format="[%(name)s] %(message)s")
    evaluate(*args)
