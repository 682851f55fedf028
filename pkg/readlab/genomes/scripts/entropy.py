import logging
import sys
from typing import List, Tuple

from readlab.genomes.utils.report import entropy_chart, write_chart
from readlab.genomes.utils.runner import entropy_curve, load_genome
from readlab.genomes.utils.simulator.markov import GenomeSpec

logger = logging.getLogger(__name__)


def entropy(
    genome: GenomeSpec, iterations: int, p: float, seed: int, out_dir: str
) -> List[Tuple[int, float]]:
    """Entropy of a genome under repeated SNP degradation, as CSV and chart."""
    curve = entropy_curve(load_genome(genome), iterations, p, seed)
    path = write_chart(entropy_chart(curve, p), out_dir)
    logger.info(
        "Entropy %.4f -> %.4f bits over %d iterations, saved to %s",
        curve[0][1],
        curve[-1][1],
        iterations,
        path,
    )
    return curve


if __name__ == "__main__":
    args = sys.argv[1:]
    if len(args) != 5:
        print("Usage: python -m readlab.genomes.scripts.entropy <genome.fasta> <iterations> <p> <seed> <out_dir>")
        sys.exit(1)
    logging.basicConfig(level=logging.INFO, format="[%(name)s] %(message)s")
    fasta, iterations, p, seed, out_dir = args
    entropy(GenomeSpec(id="genome", fasta=fasta), int(iterations), float(p), int(seed), out_dir)
