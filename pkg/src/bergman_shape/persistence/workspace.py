#!/usr/bin/env python3
"""
Thread-safe writer for the artifacts of one run.
Every file goes through an atomic write and is indexed in manifest.json.
"""

import hashlib
import logging
import threading
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from bergman_shape.persistence.models import ArtifactRecord, RunManifest
from bergman_shape.persistence.storage import atomic_write_text, ensure_output_directory, get_output_dir

MANIFEST_FILE = "manifest.json"


class OutputWorkspace:
    """Collects the files of one subcommand run in a single output directory."""

    def __init__(
        self,
        command: str,
        precision_bits: int,
        directory: Path | None = None,
        parameters: dict[str, Any] | None = None,
    ):
        self._lock = threading.RLock()
        self._directory = get_output_dir(directory)
        if not ensure_output_directory(self._directory):
            raise PermissionError(f"output directory {self._directory} is not writable")
        self._manifest = RunManifest(command=command, precision_bits=precision_bits, parameters=parameters or {})

    @property
    def directory(self) -> Path:
        return self._directory

    @property
    def artifacts(self) -> list[ArtifactRecord]:
        with self._lock:
            return list(self._manifest.artifacts)

    def path_for(self, name: str | Path) -> Path:
        path = Path(name)
        return path if path.is_absolute() else self._directory / path

    def write_text(self, kind: str, name: str | Path, text: str) -> Path:
        """Write a file atomically and record it; a rewrite replaces the earlier record."""
        with self._lock:
            path = self.path_for(name)
            atomic_write_text(path, text)
            data = text.encode("utf-8")
            record = ArtifactRecord(
                kind=kind,
                file=self._relative(path),
                sha256=hashlib.sha256(data).hexdigest(),
                bytes=len(data),
            )
            self._manifest.artifacts = [a for a in self._manifest.artifacts if a.file != record.file]
            self._manifest.artifacts.append(record)
            logging.info(f"wrote {kind} to {path}")
            return path

    def write_json(self, kind: str, name: str | Path, document: BaseModel) -> Path:
        return self.write_text(kind, name, document.model_dump_json(indent=2) + "\n")

    def save_manifest(self) -> Path:
        with self._lock:
            path = self._directory / MANIFEST_FILE
            atomic_write_text(path, self._manifest.model_dump_json(indent=2) + "\n")
            return path

    def _relative(self, path: Path) -> str:
        try:
            return path.resolve().relative_to(self._directory.resolve()).as_posix()
        except ValueError:
            return str(path)
