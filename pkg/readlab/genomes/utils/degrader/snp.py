from typing import Iterable, Optional, Tuple

import numpy as np

from readlab.genomes.utils.sequence.alphabet import N_CODE
from readlab.genomes.utils.sequence.records import ReadDataset
from readlab.utils.errors import DataError
from readlab.utils.seeding import SELECTION, SUBSTITUTION, streams

Draws = Tuple[np.ndarray, np.ndarray, np.ndarray]


def substitution_draws(rng: np.random.Generator, shape: tuple) -> Draws:
    """Per-base uniform, ACGT shift (1..3) and fresh base (0..3) for N positions."""
    u = rng.random(shape)
    shift = rng.integers(1, 4, size=shape, dtype=np.uint8)
    fresh = rng.integers(0, 4, size=shape, dtype=np.uint8)
    return u, shift, fresh


def apply_substitution(
    codes: np.ndarray, draws: Draws, p: float, rows: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Replace each hit base by a different ACGT base (uniform over the other three);
    hit N bases become uniform over ACGT. Only rows flagged in `rows` are touched.
    """
    u, shift, fresh = draws
    hit = u < p
    if rows is not None:
        hit &= rows[:, None]
    out = codes.copy()
    acgt = codes < N_CODE
    sub = hit & acgt
    out[sub] = (codes[sub] + shift[sub]) % 4
    undetermined = hit & ~acgt
    out[undetermined] = fresh[undetermined]
    return out


def degrade_snp(d: ReadDataset, p: float, seed: int) -> ReadDataset:
    """Every base changes with probability p, independently."""
    rngs = streams(seed)
    draws = substitution_draws(rngs[SUBSTITUTION], d.codes.shape)
    return d.replace(codes=apply_substitution(d.codes, draws, p))


def degrade_selective_snp(
    d: ReadDataset, sel_p: float, snp_p: float, seed: int
) -> ReadDataset:
    """Reads selected with probability sel_p pass through SNP degradation at snp_p."""
    rngs = streams(seed)
    selected = rngs[SELECTION].random(len(d)) < sel_p
    draws = substitution_draws(rngs[SUBSTITUTION], d.codes.shape)
    return d.replace(codes=apply_substitution(d.codes, draws, snp_p, rows=selected))


def degrade_snp_filtered(
    d: ReadDataset, p: float, mode: str, labels: Iterable[str], seed: int
) -> ReadDataset:
    """
    mode="protect": degrade reads whose label is not in labels.
    mode="target": degrade only reads whose label is in labels.
    """
    labels = tuple(labels)
    unknown = [x for x in labels if x not in d.label_set]
    if unknown:
        raise DataError(f"labels {unknown} not in dataset labels {d.label_set.labels}")
    chosen = np.isin(d.labels, [d.label_set.index(x) for x in labels])
    if mode == "protect":
        rows = ~chosen
    elif mode == "target":
        rows = chosen
    else:
        raise ValueError(f"mode must be 'protect' or 'target', got {mode!r}")
    rngs = streams(seed)
    draws = substitution_draws(rngs[SUBSTITUTION], d.codes.shape)
    return d.replace(codes=apply_substitution(d.codes, draws, p, rows=rows))
