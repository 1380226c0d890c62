"""Reading and writing coincidence count matrices as CSV.

The format is d rows of d comma-separated nonnegative numbers, no header.
Rows are signal-arm detector positions and columns idler-arm positions.
Leading '#' lines are comments; three of them carry metadata:

    # accumulation_time_s: 90.0
    # row_positions_um: 0.0, 202.5, 405.0
    # col_positions_um: 0.0, 202.5, 405.0
"""

import io
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union
import numpy as np
import pandas as pd

from py_qutrit_correlations.distributions import CountMatrix
from py_qutrit_correlations.errors import ParseError, ShapeError
from py_qutrit_correlations.utils.data_utils import atomic_write_text, format_positions

import logging

logger = logging.getLogger(__name__)

ACCUMULATION_KEY = "accumulation_time_s"
ROW_POSITIONS_KEY = "row_positions_um"
COL_POSITIONS_KEY = "col_positions_um"
EXPECTED_DIM = 3


def _parse_metadata(lines: List[str]) -> Dict[str, str]:
    meta = {}
    for line in lines:
        body = line.lstrip("#").strip()
        key, sep, value = body.partition(":")
        if sep and key.strip() in (ACCUMULATION_KEY, ROW_POSITIONS_KEY, COL_POSITIONS_KEY):
            meta[key.strip()] = value.strip()
    return meta


def _parse_floats(text: str, key: str, filepath: Path) -> List[float]:
    try:
        return [float(tok) for tok in text.split(",")]
    except ValueError:
        raise ParseError(f"{filepath}: cannot parse {key} '{text}'")


def parse_count_matrix_csv(
    filepath: Union[str, Path], expected_dim: Optional[int] = EXPECTED_DIM
) -> CountMatrix:
    """
    Reads one count matrix.

    Args:
        filepath (Union[str, Path]): the CSV file
        expected_dim (Optional[int], optional): required number of rows and
            columns, or None to accept any square matrix. Defaults to 3.

    Raises:
        ParseError: for unreadable files, non-numeric or missing cells and
            malformed metadata
        ShapeError: for a matrix that is not expected_dim x expected_dim

    Returns:
        CountMatrix: the counts and their metadata
    """
    filepath = Path(filepath)
    try:
        text = filepath.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError(f"Cannot read {filepath}: {e}")

    comment_lines = [ln for ln in text.splitlines() if ln.lstrip().startswith("#")]
    meta = _parse_metadata(comment_lines)

    try:
        df = pd.read_csv(
            io.StringIO(text),
            header=None,
            comment="#",
            skip_blank_lines=True,
            float_precision="round_trip",
        )
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise ParseError(f"{filepath}: {e}")
    assert isinstance(df, pd.DataFrame)

    try:
        values = df.apply(pd.to_numeric, errors="raise").to_numpy(dtype=float)
    except (ValueError, TypeError) as e:
        raise ParseError(f"{filepath}: non-numeric cell ({e})")
    if np.any(np.isnan(values)):
        raise ParseError(f"{filepath}: missing cells")
    if not np.all(np.isfinite(values)):
        raise ParseError(f"{filepath}: non-finite cells")

    n_rows, n_cols = values.shape
    if n_rows != n_cols or (expected_dim is not None and n_rows != expected_dim):
        want = f"{expected_dim}x{expected_dim}" if expected_dim else "square"
        raise ShapeError(f"{filepath}: matrix is {n_rows}x{n_cols}, expected {want}")
    if np.any(values < 0):
        raise ParseError(f"{filepath}: negative counts")

    kwargs = {}
    if ACCUMULATION_KEY in meta:
        kwargs["accumulation_time"] = _parse_floats(
            meta[ACCUMULATION_KEY], ACCUMULATION_KEY, filepath
        )[0]
    if ROW_POSITIONS_KEY in meta:
        kwargs["row_positions"] = _parse_floats(
            meta[ROW_POSITIONS_KEY], ROW_POSITIONS_KEY, filepath
        )
    if COL_POSITIONS_KEY in meta:
        kwargs["col_positions"] = _parse_floats(
            meta[COL_POSITIONS_KEY], COL_POSITIONS_KEY, filepath
        )
    counts = CountMatrix(values, **kwargs)
    logger.debug(f"Loaded {n_rows}x{n_cols} count matrix from {filepath}")
    return counts


def parse_count_matrices(filepaths: Sequence[Union[str, Path]]) -> List[CountMatrix]:
    return [parse_count_matrix_csv(fp) for fp in filepaths]


def format_count_matrix_csv(counts: CountMatrix) -> str:
    """CSV text for a count matrix, integers written without a decimal point"""
    header = [f"# {ACCUMULATION_KEY}: {counts.accumulation_time!r}"]
    if counts.row_positions is not None:
        header.append(f"# {ROW_POSITIONS_KEY}: {format_positions(counts.row_positions)}")
    if counts.col_positions is not None:
        header.append(f"# {COL_POSITIONS_KEY}: {format_positions(counts.col_positions)}")

    cells = counts.counts.astype(np.int64) if counts.is_integral else counts.counts
    df = pd.DataFrame(cells)
    body = df.to_csv(header=False, index=False, lineterminator="\n")
    return "\n".join(header) + "\n" + body


def save_count_matrix_csv(counts: CountMatrix, filepath: Union[str, Path]) -> Path:
    """
    Writes a count matrix atomically.

    Args:
        counts (CountMatrix): the counts
        filepath (Union[str, Path]): destination file

    Returns:
        Path: the written file
    """
    return atomic_write_text(filepath, format_count_matrix_csv(counts))
