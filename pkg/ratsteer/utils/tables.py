"""CSV and plain-text table output"""

import logging
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd
from tabulate import tabulate

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.6g"


def write_csv(df: pd.DataFrame, path: Path, columns: Optional[Sequence[str]] = None) -> Path:
    """
    Write ``df`` with a fixed column order and 6 significant digits.

    Missing values are written as empty fields.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if columns is not None:
        df = df.reindex(columns=list(columns))
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(df)} rows to {path}")
    return path


def write_summary(df: pd.DataFrame, path: Path, title: str) -> Path:
    """Plain-text summary table next to the CSVs"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = tabulate(df, headers="keys", tablefmt="github", showindex=False, floatfmt=".6g")
    path.write_text(f"{title}\n\n{body}\n")
    logger.info(f"Wrote summary to {path}")
    return path
