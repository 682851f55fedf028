import logging
import sys

from readlab.genomes.utils.boundary import BoundaryTable, boundary_table
from readlab.genomes.utils.classifier import TrainedClassifier
from readlab.genomes.utils.sequence.fasta import read_reads_csv
from readlab.genomes.utils.sequence.records import DatasetRole

logger = logging.getLogger(__name__)


def boundary(model_path: str, reads_path: str, out_path: str, workers: int = 1) -> BoundaryTable:
    """Boundary status and neighbor similarity of every read under a saved model."""
    model = TrainedClassifier.load(model_path)
    dataset = read_reads_csv(reads_path, role=DatasetRole.VALIDATION)
    table = boundary_table(model, dataset, workers=workers)
    table.save(out_path)
    on_boundary = int((table.bs > 0).sum())
    logger.info("%d of %d reads lie on the boundary, saved to %s", on_boundary, len(table), out_path)
    return table


if __name__ == "__main__":
    args = sys.argv[1:]
    if len(args) != 3:
        print("Usage: python -m readlab.genomes.scripts.boundary <model.json> <reads.csv> <out.csv>")
        sys.exit(1)
    logging.basicConfig(level=logging.INFO, format="[%(name)s] %(message)s")
    boundary(*args)
