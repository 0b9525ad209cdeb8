#!/usr/bin/env python3
"""
Test cases for run configuration: defaults, environment overrides and flag
precedence.
"""

from pathlib import Path

import pytest
from pydantic import ValidationError

from bergman_shape.config import (
    HIGH_PRECISION_BITS,
    RunConfig,
    decimal_digits,
    default_precision,
    environment_overrides,
    load_config,
)


# === PRECISION DEFAULTS ===

@pytest.mark.parametrize(
    "command,n,expected",
    [
        ("reconstruct", 20, 53),
        ("reconstruct", 30, 53),
        ("reconstruct", 31, HIGH_PRECISION_BITS),
        ("spectra", 10, 53),
        ("validate", None, HIGH_PRECISION_BITS),
        ("moments", None, HIGH_PRECISION_BITS),
    ],
)
def test_default_precision(command, n, expected):
    """53 bits for small reconstructions, 212 bits otherwise."""
    assert default_precision(command, n) == expected


def test_explicit_precision_wins():
    """A configured precision overrides the command default."""
    ctx = RunConfig(precision_bits=128).precision_for("reconstruct", 10)
    assert ctx.mantissa_bits == 128
    assert RunConfig().precision_for("validate").mantissa_bits == HIGH_PRECISION_BITS


# === OUTPUT DIGITS ===

@pytest.mark.parametrize("bits,expected", [(53, 17), (128, 40), (212, 65), (256, 79)])
def test_digits_follow_precision(bits, expected):
    """Unset digits cover the mantissa: ceil(bits log10 2) + 1, at least 17."""
    assert decimal_digits(bits) == expected
    assert RunConfig().digits_for(bits) == expected


def test_explicit_digits_win():
    assert RunConfig(digits=30).digits_for(212) == 30
    assert load_config(environ={"BERGMAN_SHAPE_DIGITS": "50"}).digits_for(53) == 50


# === ENVIRONMENT AND FLAGS ===

def test_environment_overrides():
    """BERGMAN_SHAPE_* variables map onto config fields."""
    env = {
        "BERGMAN_SHAPE_PRECISION": "128",
        "BERGMAN_SHAPE_WORKERS": "4",
        "BERGMAN_SHAPE_STRICT_PRECISION": "yes",
        "BERGMAN_SHAPE_OUTPUT_DIR": "/tmp/shapes",
        "BERGMAN_SHAPE_DIGITS": "",
        "UNRELATED": "1",
    }
    overrides = environment_overrides(env)
    assert overrides == {
        "precision_bits": "128",
        "workers": "4",
        "strict_precision": True,
        "output_dir": "/tmp/shapes",
    }
    config = load_config(environ=env)
    assert config.precision_bits == 128
    assert config.workers == 4
    assert config.strict_precision is True
    assert config.output_dir == Path("/tmp/shapes")


def test_flags_beat_environment():
    """Flags take precedence; None flags fall through to the environment."""
    env = {"BERGMAN_SHAPE_PRECISION": "128", "BERGMAN_SHAPE_LOG_LEVEL": "DEBUG"}
    config = load_config({"precision_bits": 256, "log_level": None}, env)
    assert config.precision_bits == 256
    assert config.log_level == "DEBUG"


def test_defaults():
    """No flags and an empty environment give the documented defaults."""
    config = load_config(environ={})
    assert config.precision_bits is None
    assert config.workers == 1
    assert config.strict_precision is False
    assert config.digits is None
    assert config.log_level == "INFO"
    assert config.output_dir is None


@pytest.mark.parametrize(
    "values",
    [
        {"precision_bits": 40},
        {"workers": 0},
        {"digits": 10},
        {"quad_nodes": 0},
    ],
)
def test_invalid_values_rejected(values):
    """Out-of-range settings fail validation."""
    with pytest.raises(ValidationError):
        RunConfig(**values)


def test_invalid_environment_value():
    """A malformed environment value surfaces as a validation error."""
    with pytest.raises(ValidationError):
        load_config(environ={"BERGMAN_SHAPE_WORKERS": "many"})
