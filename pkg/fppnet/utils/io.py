"""File helpers shared by persistence code."""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Union

from .logging import get_logger

logger = get_logger(__name__)


def write_json_atomic(file_path: Union[str, Path], data: Any) -> Path:
    """Write JSON through a temporary file and rename it into place.

    Output is UTF-8, indented and newline-terminated.

    Args:
        file_path: Destination path. Parent directories are created.
        data: JSON-serialisable object.

    Returns:
        The destination path.
    """
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(dir=file_path.parent, prefix=f".{file_path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, ensure_ascii=False, default=str)
            f.write("\n")
        os.replace(tmp_name, file_path)
    except Exception as e:
        logger.error("json_write_failed", path=str(file_path), error=str(e))
        Path(tmp_name).unlink(missing_ok=True)
        raise

    logger.debug("json_written", path=str(file_path))
    return file_path


def read_json(file_path: Union[str, Path]) -> Any:
    """Read a JSON file.

    Raises:
        FileNotFoundError: If the file does not exist.
    """
    file_path = Path(file_path)
    if not file_path.exists():
        raise FileNotFoundError(f"File not found: {file_path}")
    with open(file_path, "r", encoding="utf-8") as f:
        return json.load(f)
