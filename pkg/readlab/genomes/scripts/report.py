import logging
import sys
from typing import List, Optional

from readlab.genomes.utils.report import write_charts

logger = logging.getLogger(__name__)


def report(run_dir: str, out: Optional[str] = None, workers: int = 1) -> List[str]:
    """Re-render the charts of a finished run from its CSV tables."""
    paths = write_charts(run_dir, out_dir=out, workers=workers)
    logger.info("Wrote %d charts", len(paths))
    return paths


if __name__ == "__main__":
    args = sys.argv[1:]
    if len(args) != 1:
        print("Usage: python -m readlab.genomes.scripts.report <run_dir>")
        sys.exit(1)
    logging.basicConfig(level=logging.INFO, format="[%(name)s] %(message)s")
    report(args[0])
