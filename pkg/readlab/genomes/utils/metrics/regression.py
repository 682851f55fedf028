from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd
from scipy import stats

from readlab.genomes.utils.tables import save_dataframe_as_csv
from readlab.utils.errors import DataError, RankDeficiencyError

_RANK_TOL = 1e-10
OVERPREDICTION_THRESHOLD = 0.75


@dataclass(frozen=True, eq=False)
class LinearModelFit:
    """OLS fit; coefficients[0] is the intercept."""

    names: tuple  # ("intercept", predictor, ...)
    coefficients: np.ndarray
    std_errors: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    r_squared: float
    adj_r_squared: float

    @property
    def n(self) -> int:
        return self.residuals.size

    @property
    def df_residual(self) -> int:
        return self.n - self.coefficients.size

    @property
    def t_values(self) -> np.ndarray:
        return self.coefficients / self.std_errors

    @property
    def p_values(self) -> np.ndarray:
        return 2.0 * stats.t.sf(np.abs(self.t_values), self.df_residual)

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "term": list(self.names),
                "estimate": self.coefficients,
                "std_error": self.std_errors,
                "t_value": self.t_values,
                "p_value": self.p_values,
                "adj_r_squared": self.adj_r_squared,
            }
        )

    def save(self, path: str) -> str:
        return save_dataframe_as_csv(self.to_frame(), path, kind="ols")


def fit_ols(predictors: np.ndarray, response: np.ndarray, names: Sequence[str] = ()) -> LinearModelFit:
    """
    Least squares with intercept through a QR factorization of the design matrix.
    A design whose R has a near-zero diagonal is rejected.
    """
    X = np.asarray(predictors, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(response, dtype=np.float64)
    n, p = X.shape
    if y.shape != (n,):
        raise DataError(f"response has shape {y.shape}, expected ({n},)")
    if n < p + 1:
        raise DataError(f"{n} rows cannot fit {p} predictors with an intercept")
    names = tuple(names) if names else tuple(f"x{j + 1}" for j in range(p))
    if len(names) != p:
        raise DataError("one name per predictor required")

    design = np.hstack([np.ones((n, 1)), X])
    q, r = np.linalg.qr(design)
    diag = np.abs(np.diag(r))
    if diag.min() <= _RANK_TOL * max(diag.max(), 1.0):
        raise RankDeficiencyError("design matrix is rank deficient")
    beta = np.linalg.solve(r, q.T @ y)
    fitted = design @ beta
    residuals = y - fitted

    rss = float(residuals @ residuals)
    tss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - rss / tss if tss > 0 else 1.0
    df = n - p - 1
    # a saturated design leaves no residual degrees of freedom
    adj = 1.0 - (1.0 - r2) * (n - 1) / df if df else float("nan")
    sigma2 = rss / df if df else float("nan")
    r_inv = np.linalg.inv(r)
    std_errors = np.sqrt(sigma2 * (r_inv**2).sum(axis=1))
    return LinearModelFit(
        names=("intercept",) + names,
        coefficients=beta,
        std_errors=std_errors,
        residuals=residuals,
        fitted=fitted,
        r_squared=r2,
        adj_r_squared=adj,
    )


@dataclass(frozen=True, eq=False)
class MinModelCheck:
    fit: LinearModelFit
    minimum: np.ndarray
    overpredicted: np.ndarray  # min > 0.75 and fitted > observed

    def to_frame(self, sel: np.ndarray, snp: np.ndarray, response: np.ndarray) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "sel_probability": sel,
                "snp_probability": snp,
                "min_probability": self.minimum,
                "congruence": response,
                "fitted": self.fit.fitted,
                "overpredicted": self.overpredicted,
            }
        )


def min_model_check(sel: Sequence[float], snp: Sequence[float], response: Sequence[float]) -> MinModelCheck:
    """OLS of congruence on min(sel, snp); flags grid points above 0.75 that the line overshoots."""
    sel = np.asarray(sel, dtype=np.float64)
    snp = np.asarray(snp, dtype=np.float64)
    response = np.asarray(response, dtype=np.float64)
    minimum = np.minimum(sel, snp)
    fit = fit_ols(minimum, response, names=("min_probability",))
    overpredicted = (minimum > OVERPREDICTION_THRESHOLD) & (fit.fitted > response)
    return MinModelCheck(fit=fit, minimum=minimum, overpredicted=overpredicted)
