from enum import Enum

import numpy as np

from readlab.utils.errors import SequenceError


class Nucleotide(str, Enum):
    A = "A"
    C = "C"
    G = "G"
    T = "T"
    # undetermined base; a full member of the read alphabet
    N = "N"

    @property
    def code(self) -> int:
        return SYMBOLS.index(self.value)


SYMBOLS = "ACGTN"
BASES = "ACGT"
N_CODE = 4
ALPHABET_SIZE = len(SYMBOLS)

_ENCODE = np.full(256, 255, dtype=np.uint8)
for _i, _s in enumerate(SYMBOLS):
    _ENCODE[ord(_s)] = _i
    _ENCODE[ord(_s.lower())] = _i
_DECODE = np.frombuffer(SYMBOLS.encode("ascii"), dtype=np.uint8)


def encode(text: str) -> np.ndarray:
    """ACGTN (either case) -> uint8 codes 0..4."""
    raw = np.frombuffer(text.encode("ascii", errors="replace"), dtype=np.uint8)
    codes = _ENCODE[raw]
    bad = np.flatnonzero(codes == 255)
    if bad.size:
        raise SequenceError(f"illegal character {text[bad[0]]!r}")
    return codes


def decode(codes: np.ndarray) -> str:
    return _DECODE[np.asarray(codes, dtype=np.uint8)].tobytes().decode("ascii")


def first_illegal(text: str) -> int:
    """Index of the first character outside ACGTN/acgtn, or -1."""
    for i, ch in enumerate(text):
        if ch not in "ACGTNacgtn":
            return i
    return -1
