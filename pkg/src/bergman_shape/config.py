#!/usr/bin/env python3
"""
Run configuration: defaults, BERGMAN_SHAPE_* environment overrides and
command-line flags, in increasing order of precedence.
"""

from __future__ import annotations

import math
import os
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, Field

from bergman_shape.polynomials import MIN_MANTISSA_BITS, PrecisionContext

ENV_PREFIX = "BERGMAN_SHAPE_"

# precision for validation runs up to n = 200 (about 64 decimal digits)
HIGH_PRECISION_BITS = 212
SMALL_N_LIMIT = 30
MIN_DECIMAL_DIGITS = 17

Command = Literal["moments", "reconstruct", "validate", "spectra"]

_ENV_FIELDS = {
    "PRECISION": "precision_bits",
    "QUAD_NODES": "quad_nodes",
    "WORKERS": "workers",
    "STRICT_PRECISION": "strict_precision",
    "DIGITS": "digits",
    "LOG_LEVEL": "log_level",
    "OUTPUT_DIR": "output_dir",
}


class RunConfig(BaseModel):
    """Settings shared by every subcommand of one run."""

    precision_bits: int | None = Field(
        default=None, ge=MIN_MANTISSA_BITS, description="Binary working precision; None picks a per-command default"
    )
    quad_nodes: int | None = Field(default=None, ge=1, description="Trapezoid nodes for parametric moments")
    workers: int = Field(default=1, ge=1, description="Process-pool size for rate tables")
    strict_precision: bool = Field(default=False, description="Refuse to run below the precision policy")
    digits: int | None = Field(
        default=None, ge=MIN_DECIMAL_DIGITS, description="Significant digits in decimal output files; None follows the precision"
    )
    log_level: str = Field(default="INFO", description="Logging level name")
    output_dir: Path | None = Field(default=None, description="Directory for written artifacts")

    def precision_for(self, command: Command, n: int | None = None) -> PrecisionContext:
        """Explicit precision if set, else the command default."""
        if self.precision_bits is not None:
            return PrecisionContext(self.precision_bits)
        return PrecisionContext(default_precision(command, n))

    def digits_for(self, bits: int) -> int:
        """Explicit digits if set, else enough to read back a bits-bit mantissa unchanged."""
        if self.digits is not None:
            return self.digits
        return decimal_digits(bits)


def decimal_digits(bits: int) -> int:
    """ceil(bits log10 2) + 1 significant digits, never fewer than 17."""
    return max(MIN_DECIMAL_DIGITS, math.ceil(bits * math.log10(2)) + 1)


def default_precision(command: Command, n: int | None = None) -> int:
    """53 bits for reconstructions with n <= 30, 212 bits otherwise."""
    if command in ("reconstruct", "spectra") and n is not None and n <= SMALL_N_LIMIT:
        return MIN_MANTISSA_BITS
    return HIGH_PRECISION_BITS


def environment_overrides(environ: Mapping[str, str] | None = None) -> dict[str, Any]:
    """Read BERGMAN_SHAPE_* variables; values are validated by RunConfig."""
    env = os.environ if environ is None else environ
    overrides: dict[str, Any] = {}
    for suffix, name in _ENV_FIELDS.items():
        raw = env.get(ENV_PREFIX + suffix)
        if raw is None or raw == "":
            continue
        if name == "strict_precision":
            overrides[name] = raw.strip().lower() in ("1", "true", "yes", "on")
        else:
            overrides[name] = raw
    return overrides


def load_config(flags: Mapping[str, Any] | None = None, environ: Mapping[str, str] | None = None) -> RunConfig:
    """Merge defaults < environment < flags; flags left as None do not override."""
    values = environment_overrides(environ)
    for key, value in (flags or {}).items():
        if value is not None:
            values[key] = value
    return RunConfig(**values)
