from typing import Sequence

import numpy as np

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK64 = 0xFFFFFFFFFFFFFFFF

# Fixed stream layout shared by every degradation mechanism.
SELECTION, SUBSTITUTION, BRANCH, RELABEL = range(4)


def canonical_params(params: Sequence[float]) -> str:
    return ",".join(format(float(v), ".6f") for v in params)


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & MASK64
    return h


def derive_seed(
    master: int, mechanism: str, params: Sequence[float] = (), replicate: int = 0
) -> int:
    """
    Stable 64-bit seed for one unit of work.
    FNV-1a over "master|mechanism|p1,p2,...|replicate", parameters printed with
    six fixed decimals so the result never depends on float repr or locale.
    """
    text = f"{int(master)}|{mechanism}|{canonical_params(params)}|{int(replicate)}"
    return fnv1a_64(text.encode("utf-8"))


def streams(seed: int, n: int = 4) -> list[np.random.Generator]:
    """Independent generators in the fixed SELECTION/SUBSTITUTION/BRANCH/RELABEL order."""
    children = np.random.SeedSequence(int(seed)).spawn(n)
    return [np.random.default_rng(child) for child in children]


def child_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for the index-th member of a family, e.g. one forest tree."""
    return np.random.default_rng(
        np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    )
