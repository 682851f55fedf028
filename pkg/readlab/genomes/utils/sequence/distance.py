import numpy as np

_INVSQRT2 = 1 / np.sqrt(2)
_SUM_TOL = 1e-9


def _check(p: np.ndarray, name: str) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError(f"{name} must be a vector")
    if (p < 0).any():
        raise ValueError(f"{name} has negative entries")
    if abs(p.sum() - 1.0) > _SUM_TOL:
        raise ValueError(f"{name} sums to {p.sum()!r}, not 1")
    return p


def hellinger(p, q) -> float:
    """
    Hellinger distance in [0, 1]: sqrt(1 - sum sqrt(p*q)),
    evaluated as (1/sqrt 2)*||sqrt p - sqrt q||_2 which is exact at p = q.
    """
    p = _check(p, "p")
    q = _check(q, "q")
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch {p.shape} vs {q.shape}")
    h = np.sqrt(np.sum((np.sqrt(p) - np.sqrt(q)) ** 2)) * _INVSQRT2
    return float(min(h, 1.0))


def hellinger_rows(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Row-wise Hellinger distance between two (n, k) stacks of distributions."""
    h = np.sqrt(np.sum((np.sqrt(P) - np.sqrt(Q)) ** 2, axis=-1)) * _INVSQRT2
    return np.minimum(h, 1.0)
