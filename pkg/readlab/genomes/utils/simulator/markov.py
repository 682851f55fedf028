from dataclasses import dataclass
from typing import Optional

import numpy as np

from readlab.genomes.utils.sequence.alphabet import BASES
from readlab.genomes.utils.sequence.records import DnaSequence

N_CONTEXTS = 16  # ordered pairs over ACGT
_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MarkovParams:
    """
    Order-2 chain over ACGT: weights[4*b1 + b2, b3] = P(b3 | b1 b2).
    """

    weights: np.ndarray
    seed: int = 0
    order: int = 2

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if self.order != 2:
            raise ValueError("only order-2 chains are supported")
        if w.shape != (N_CONTEXTS, 4):
            raise ValueError(f"transition weights must be 16x4, got {w.shape}")
        if (w < 0).any() or np.abs(w.sum(axis=1) - 1.0).max() > _TOL:
            raise ValueError("each conditional distribution must sum to 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def random(cls, seed: int, concentration: float = 0.5) -> "MarkovParams":
        """Dirichlet-drawn transition table; small concentration gives skewed chains."""
        rng = np.random.default_rng(seed)
        w = rng.dirichlet(np.full(4, concentration), size=N_CONTEXTS)
        w /= w.sum(axis=1, keepdims=True)
        return cls(weights=w, seed=seed)

    @classmethod
    def gc_biased(cls, gc: float, seed: int = 0) -> "MarkovParams":
        row = np.array([(1 - gc) / 2, gc / 2, gc / 2, (1 - gc) / 2])
        return cls(weights=np.tile(row, (N_CONTEXTS, 1)), seed=seed)

    @classmethod
    def constant(cls, base: str, seed: int = 0) -> "MarkovParams":
        w = np.zeros((N_CONTEXTS, 4))
        w[:, BASES.index(base)] = 1.0
        return cls(weights=w, seed=seed)

    def pair_stationary(self, iterations: int = 2000) -> np.ndarray:
        """Stationary distribution over the 16 (b1, b2) states by power iteration."""
        transition = np.zeros((N_CONTEXTS, N_CONTEXTS))
        for ctx in range(N_CONTEXTS):
            b2 = ctx % 4
            for b3 in range(4):
                transition[ctx, 4 * b2 + b3] += self.weights[ctx, b3]
        pi = np.full(N_CONTEXTS, 1 / N_CONTEXTS)
        for _ in range(iterations):
            nxt = pi @ transition
            if np.abs(nxt - pi).max() < 1e-15:
                pi = nxt
                break
            pi = nxt
        return pi / pi.sum()

    def base_stationary(self) -> np.ndarray:
        """Stationary single-base frequencies (marginal of the pair chain)."""
        return self.pair_stationary().reshape(4, 4).sum(axis=0)

    def to_params(self) -> dict:
        return {"weights": self.weights.tolist(), "seed": int(self.seed)}


@dataclass(frozen=True)
class GenomeSpec:
    """Where a genome comes from: a FASTA record or a Markov chain of given length."""

    id: str
    length: int = 0
    fasta: Optional[str] = None
    markov: Optional[MarkovParams] = None

    def __post_init__(self):
        if (self.fasta is None) == (self.markov is None):
            raise ValueError(f"genome {self.id}: exactly one of fasta/markov required")


def generate_genome(p: MarkovParams, length: int) -> DnaSequence:
    """Sample `length` bases from the chain; deterministic given p.seed."""
    if length < 3:
        raise ValueError(f"genome length must be >= 3, got {length}")
    rng = np.random.default_rng(p.seed)
    pair_cum = np.cumsum(p.pair_stationary())
    cum = np.cumsum(p.weights, axis=1)
    u = rng.random(length - 1)

    first = min(int(np.searchsorted(pair_cum, u[0] * pair_cum[-1], side="right")), 15)
    out = np.empty(length, dtype=np.uint8)
    out[0], out[1] = divmod(first, 4)
    ctx = first
    for i in range(2, length):
        b = min(int(np.searchsorted(cum[ctx], u[i - 1] * cum[ctx, -1], side="right")), 3)
        out[i] = b
        ctx = 4 * (ctx % 4) + b
    return DnaSequence.from_codes(out)
