#!/usr/bin/env python3
"""
Shared fixtures: working precision scopes, closed-form moment tables and
isolated output directories.
"""

import pytest
from mpmath import mp

from bergman_shape.moments import MomentMatrix
from bergman_shape.polynomials import PrecisionContext


@pytest.fixture
def double_precision():
    """Run the test at 53 bits and restore the caller's precision afterwards."""
    ctx = PrecisionContext(53)
    with ctx.activate():
        yield ctx


@pytest.fixture
def high_precision():
    """Run the test at 212 bits, the validation default."""
    ctx = PrecisionContext(212)
    with ctx.activate():
        yield ctx


def disk_moments(degree: int) -> MomentMatrix:
    """μ_kj = π/(k+1) δ_kj for the unit disk."""
    return MomentMatrix.from_raw(
        [[mp.pi / (k + 1) if k == j else 0 for j in range(degree + 1)] for k in range(degree + 1)]
    )


@pytest.fixture
def unit_disk_moments(double_precision):
    return disk_moments(11)


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Isolated output directory, also exported through the environment."""
    target = tmp_path / "out"
    monkeypatch.setenv("BERGMAN_SHAPE_OUTPUT_DIR", str(target))
    monkeypatch.chdir(tmp_path)
    return target
