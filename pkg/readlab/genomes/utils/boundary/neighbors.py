from typing import Iterator, Union

import numpy as np

from readlab.genomes.utils.sequence.alphabet import ALPHABET_SIZE, N_CODE
from readlab.genomes.utils.sequence.records import DnaSequence, ReadRecord
from readlab.genomes.utils.sequence.triplets import (triplet_counts,
                                                     window_codes)

N_ALTERNATIVES = ALPHABET_SIZE - 1  # 4


def _codes_of(x: Union[ReadRecord, DnaSequence]) -> np.ndarray:
    seq = x.sequence if isinstance(x, ReadRecord) else x
    return seq.codes()


def alternatives(codes: np.ndarray) -> np.ndarray:
    """
    (..., L, 4) replacement symbols for every position, ascending over ACGTN
    with the current symbol skipped.
    """
    codes = np.asarray(codes, dtype=np.int64)
    base = np.arange(N_ALTERNATIVES)
    return base + (base >= codes[..., None])


def neighbor_count(read_length: int) -> int:
    return read_length * N_ALTERNATIVES


def enumerate_neighbors(x: Union[ReadRecord, DnaSequence]) -> Iterator[DnaSequence]:
    """Every read at Hamming distance 1 from x, in (position, symbol) order, lazily."""
    codes = _codes_of(x)
    alts = alternatives(codes)
    for i in range(codes.size):
        for symbol in alts[i]:
            neighbor = codes.copy()
            neighbor[i] = symbol
            yield DnaSequence.from_codes(neighbor)


def neighbor_codes(codes: np.ndarray) -> np.ndarray:
    """(4L, L) codes of all neighbors of one read, same order as enumerate_neighbors."""
    codes = np.asarray(codes, dtype=np.uint8)
    L = codes.size
    out = np.repeat(codes[None, :], N_ALTERNATIVES * L, axis=0)
    rows = np.arange(N_ALTERNATIVES * L)
    out[rows, rows // N_ALTERNATIVES] = alternatives(codes).ravel()
    return out


def neighbor_triplet_counts(codes: np.ndarray) -> np.ndarray:
    """
    Triplet counts of every neighbor of every read in a (B, L) batch, shaped
    (B * 4L, 64) with rows in read, position, symbol order.

    A substitution at position i touches only the windows starting at i-2, i-1
    and i, so each neighbor row is the parent's counts with at most three
    windows swapped.
    """
    codes = np.asarray(codes, dtype=np.int64)
    B, L = codes.shape
    per_read = N_ALTERNATIVES * L
    out = np.repeat(triplet_counts(codes), per_read, axis=0)
    if L < 3:
        return out
    n_windows = L - 2
    windows = window_codes(codes)
    alts = alternatives(codes)
    rows = np.arange(B * per_read).reshape(B, L, N_ALTERNATIVES)
    k = np.arange(n_windows)
    spans = k[:, None] + np.arange(3)
    for offset in range(3):
        # substituted position i = k + offset lies inside window k
        i = k + offset
        trip = np.repeat(codes[:, spans][:, :, None, :], N_ALTERNATIVES, axis=2)
        trip[:, :, :, offset] = alts[:, i, :]
        new = 16 * trip[..., 0] + 4 * trip[..., 1] + trip[..., 2]
        new = np.where((trip == N_CODE).any(axis=-1), -1, new)
        old = np.broadcast_to(windows[:, :, None], new.shape)
        r = rows[:, i, :]
        # each row is touched once per offset
        hit = old >= 0
        out[r[hit], old[hit]] -= 1
        hit = new >= 0
        out[r[hit], new[hit]] += 1
    return out


def split_counts(counts: np.ndarray):
    """Counts -> (features, valid window counts)."""
    valid = counts.sum(axis=1)
    safe = np.where(valid > 0, valid, 1.0)
    return counts / safe[:, None], valid.astype(np.int64)
