import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Union

import logging

logger = logging.getLogger(__name__)


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """
    Writes text to a temporary file next to path and renames it into place,
    so readers never see a partially written file.

    Args:
        path (Union[str, Path]): destination file
        text (str): the full file contents

    Returns:
        Path: the destination
    """
    path = Path(path)
    assert path.parent.is_dir(), f"{path.parent} is not a directory"
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise
    logger.debug(f"Wrote {path}")
    return path


def canonical_json(data) -> str:
    """Key-sorted, compact JSON of plain data"""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def sha256_of_json(data) -> str:
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def format_positions(values) -> str:
    """Comma-separated shortest round-trip floats"""
    return ", ".join(repr(float(v)) for v in values)
