import logging
import sys
from typing import Optional

from readlab.genomes.utils.report import write_charts
from readlab.genomes.utils.runner import ExperimentResult, run_experiment
from readlab.genomes.utils.settings import ExperimentConfig

logger = logging.getLogger(__name__)


def experiment(
    config_path: str,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    out: Optional[str] = None,
    replicate: Optional[int] = None,
    charts: bool = True,
) -> ExperimentResult:
    """Run a degradation grid from a config, then render its charts."""
    cfg = ExperimentConfig.load(config_path, seed=seed, workers=workers, out=out, replicate=replicate)
    logger.info("Running %s (%d grid points) into %s", cfg.name, len(cfg.degradation.points), cfg.output_dir)
    result = run_experiment(cfg)
    if charts and "correct" in result.files:
        write_charts(cfg.output_dir, workers=cfg.workers)
    return result


if __name__ == "__main__":
    args = sys.argv[1:]
    if len(args) != 1:
        print("Usage: python -m readlab.genomes.scripts.experiment <config_path>")
        sys.exit(1)
    logging.basicConfig(level=logging.INFO, format="[%(name)s] %(message)s")
    experiment(args[0])
