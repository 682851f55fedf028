import os
from typing import Optional

import pandas as pd

FORMAT_VERSION = 1


def header_line(kind: str) -> str:
    return f"# readlab {kind} v{FORMAT_VERSION}\n"


def save_dataframe_as_csv(df: pd.DataFrame, path: str, kind: str) -> str:
    """Write df to path behind a versioned header comment line, return the path.

    Creates the parent directory if it doesn't exist.
    """
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(header_line(kind))
        df.to_csv(f, index=False, lineterminator="\n")
    return path


def read_versioned_csv(path: str, dtype: Optional[dict] = None) -> pd.DataFrame:
    """Read a CSV written by save_dataframe_as_csv (or a plain CSV without header line)."""
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline()
    skip = 1 if first.startswith("#") else 0
    return pd.read_csv(
        path, skiprows=skip, dtype=dtype, keep_default_na=False, na_values=[""]
    )
