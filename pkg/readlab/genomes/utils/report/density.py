from typing import Optional, Tuple

import numpy as np
from scipy import stats

GRID_POINTS = 201


def ns_density(
    values, grid_points: int = GRID_POINTS
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """
    Gaussian kernel density of NS values over [0, 1] with Silverman's bandwidth.

    Returns None when there is nothing to estimate: every value equals 1 (no read
    touches a boundary) or the values have no spread. Such panels stay blank.
    """
    values = np.asarray(values, dtype=np.float64)
    values = values[np.isfinite(values)]
    if values.size < 2 or np.all(values == 1.0) or np.ptp(values) == 0.0:
        return None
    kde = stats.gaussian_kde(values, bw_method="silverman")
    x = np.linspace(0.0, 1.0, grid_points)
    return x, kde(x)
