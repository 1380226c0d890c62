"""Profile and Delta Q scan tables as CSV, for external plotting."""

import io
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union
import numpy as np
import pandas as pd

from py_qutrit_correlations.errors import ParseError
from py_qutrit_correlations.optics import Profile
from py_qutrit_correlations.utils.data_utils import atomic_write_text, format_positions

import logging

logger = logging.getLogger(__name__)

PROFILE_COLUMNS = ["position_um", "value"]
SCAN_COLUMNS = ["c0", "c1", "E", "N", "Q_E", "Q_N", "delta_Q"]
SCAN_DECIMALS = 6


def format_profile_csv(
    profile: Profile,
    plane: str,
    eigen_positions: Optional[Sequence[float]] = None,
) -> str:
    """Two-column CSV with the plane, fringe period and eigen positions as
    leading comment lines"""
    header = [f"# plane: {plane}"]
    if profile.fringe_period is not None:
        header.append(f"# fringe_period_um: {profile.fringe_period!r}")
    if eigen_positions is not None:
        header.append(f"# eigen_positions_um: {format_positions(eigen_positions)}")
    df = pd.DataFrame({"position_um": profile.positions, "value": profile.values})
    body = df.to_csv(index=False, lineterminator="\n")
    return "\n".join(header) + "\n" + body


def save_profile_csv(
    profile: Profile,
    filepath: Union[str, Path],
    plane: str,
    eigen_positions: Optional[Sequence[float]] = None,
) -> Path:
    path = atomic_write_text(filepath, format_profile_csv(profile, plane, eigen_positions))
    logger.info(f"Saved {plane}-plane profile with {len(profile.positions)} samples to {path}")
    return path


def parse_profile_csv(filepath: Union[str, Path]) -> Profile:
    """
    Reads a profile written by save_profile_csv.

    Args:
        filepath (Union[str, Path]): the CSV file

    Raises:
        ParseError: if the columns are not position_um, value

    Returns:
        Profile: the profile, with its fringe period if recorded
    """
    filepath = Path(filepath)
    try:
        text = filepath.read_text(encoding="utf-8")
        df = pd.read_csv(io.StringIO(text), comment="#", float_precision="round_trip")
    except (OSError, UnicodeDecodeError, pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise ParseError(f"Cannot read profile {filepath}: {e}")
    if list(df.columns) != PROFILE_COLUMNS:
        raise ParseError(f"{filepath}: columns {list(df.columns)}, expected {PROFILE_COLUMNS}")

    period = None
    for line in text.splitlines():
        if line.startswith("# fringe_period_um:"):
            period = float(line.partition(":")[2])
    return Profile(
        df["position_um"].to_numpy(dtype=float),
        df["value"].to_numpy(dtype=float),
        period,
    )


def format_scan_csv(table: np.ndarray, maximum: Tuple[float, float, float]) -> str:
    """The Delta Q grid, with the located maximum as a leading comment"""
    c0, c1, value = maximum
    header = f"# max_delta_Q: {value:.{SCAN_DECIMALS}f} at c0={c0:.{SCAN_DECIMALS}f}, c1={c1:.{SCAN_DECIMALS}f}"
    df = pd.DataFrame(table, columns=SCAN_COLUMNS)
    body = df.to_csv(index=False, float_format=f"%.{SCAN_DECIMALS}f", lineterminator="\n")
    return header + "\n" + body


def save_scan_csv(
    table: np.ndarray, maximum: Tuple[float, float, float], filepath: Union[str, Path]
) -> Path:
    path = atomic_write_text(filepath, format_scan_csv(table, maximum))
    logger.info(f"Saved {table.shape[0]} scan rows to {path}")
    return path
