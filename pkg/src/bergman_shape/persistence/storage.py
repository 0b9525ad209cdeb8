#!/usr/bin/env python3
"""
Output directory resolution and atomic file writes.
"""

import os
from pathlib import Path

OUTPUT_DIR_ENV = "BERGMAN_SHAPE_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "bergman-shape-output"


def get_output_dir(override: Path | None = None) -> Path:
    """Explicit directory, else $BERGMAN_SHAPE_OUTPUT_DIR, else ./bergman-shape-output."""
    if override is not None:
        return Path(override)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env)
    return Path.cwd() / DEFAULT_OUTPUT_DIR


def ensure_output_directory(directory: Path) -> bool:
    """Create the directory if needed and check that it is writable.

    Returns:
        bool: True if directory is accessible, False otherwise
    """
    try:
        directory.mkdir(parents=True, exist_ok=True)
        marker = directory / ".write_test"
        marker.write_text("test")
        marker.unlink()
        return True
    except (OSError, PermissionError):
        return False


def atomic_write_text(path: Path, text: str) -> None:
    """Write through a temporary sibling and replace, so readers never see a partial file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = path.with_name(path.name + ".tmp")
    with open(temp_file, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    temp_file.replace(path)
