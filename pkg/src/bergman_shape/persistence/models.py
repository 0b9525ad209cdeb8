#!/usr/bin/env python3
"""
Pydantic models for the JSON documents written next to the CSV outputs.
Numbers are carried as decimal strings so no precision is lost to floats.
"""

from typing import Any

from mpmath import mp
from pydantic import BaseModel, Field

from bergman_shape.faber import LaurentMap
from bergman_shape.reconstruction import RateRow, ReconstructionReport


def _text(value: Any, digits: int) -> str:
    return mp.nstr(value, digits, strip_zeros=False)


def _optional_text(value: Any, digits: int) -> str | None:
    return None if value is None else _text(value, digits)


class LaurentMapRecord(BaseModel):
    """Laurent map file: capacity and coefficients b_0..b_m."""

    b: str = Field(description="Capacity b > 0 as a decimal string")
    coeffs: list[tuple[str, str]] = Field(default_factory=list, description="b_0..b_m as [re, im]")
    order: int = Field(description="Truncation order m")

    @classmethod
    def from_map(cls, L: LaurentMap, digits: int = 40) -> "LaurentMapRecord":
        return cls(
            b=_text(L.b, digits),
            coeffs=[(_text(c.real, digits), _text(c.imag, digits)) for c in L.coeffs],
            order=L.order,
        )

    def to_map(self) -> LaurentMap:
        return LaurentMap.from_values(self.b, [list(c) for c in self.coeffs])


class RateRowRecord(BaseModel):
    """One row of an error/rate table."""

    n: int = Field(description="Degree of the Hessenberg column")
    k: int = Field(description="Index of the tracked coefficient")
    b: str = Field(description="Capacity estimate b^(n)")
    t: str | None = Field(default=None, description="Error b - b^(n)")
    s: float | None = Field(default=None, description="Observed rate for t")
    b_k: tuple[str, str] = Field(description="Coefficient estimate b_k^(n) as [re, im]")
    t_k: tuple[str, str] | None = Field(default=None, description="Error b_k - b_k^(n)")
    s_k: float | None = Field(default=None, description="Observed rate for t_k")
    symmetry_defect: str | None = Field(default=None, description="Relative symmetry-zeroing defect")

    @classmethod
    def from_row(cls, row: RateRow, digits: int = 40) -> "RateRowRecord":
        return cls(
            n=row.n,
            k=row.k,
            b=_text(row.b, digits),
            t=_optional_text(row.t, digits),
            s=row.s,
            b_k=(_text(row.b_k.real, digits), _text(row.b_k.imag, digits)),
            t_k=None if row.t_k is None else (_text(row.t_k.real, digits), _text(row.t_k.imag, digits)),
            s_k=row.s_k,
            symmetry_defect=_optional_text(row.symmetry_defect, 6),
        )


class ReportRecord(BaseModel):
    """Reconstruction report: the estimated map and its diagnostics."""

    n: int = Field(description="Hessenberg column used")
    m: int = Field(description="Truncation order of the map")
    precision_bits: int = Field(description="Working precision of the run")
    laurent: LaurentMapRecord = Field(description="Estimated exterior map")
    samples: int = Field(description="Number of curve samples written")
    sup_error: str | None = Field(default=None, description="Sup distance to the reference map, if given")
    imag_residue: str = Field(description="Imaginary part discarded from the capacity estimate")
    hermitian_deviation: str = Field(description="Relative Hermitian deviation of the input moments")
    rate_rows: list[RateRowRecord] = Field(default_factory=list, description="Optional rate table")

    @classmethod
    def from_report(
        cls, report: ReconstructionReport, precision_bits: int, hermitian_deviation: Any, digits: int = 40
    ) -> "ReportRecord":
        return cls(
            n=report.n,
            m=report.m,
            precision_bits=precision_bits,
            laurent=LaurentMapRecord.from_map(report.laurent, digits),
            samples=len(report.curve),
            sup_error=_optional_text(report.sup_error, 12),
            imag_residue=_text(report.laurent.imag_residue, 6),
            hermitian_deviation=_text(hermitian_deviation, 6),
            rate_rows=[RateRowRecord.from_row(r, digits) for r in report.rate_rows],
        )


class CheckRecord(BaseModel):
    """Outcome of one acceptance check."""

    name: str = Field(description="Check identifier")
    passed: bool = Field(description="Whether the check passed")
    detail: str = Field(default="", description="Measured value against its target")


class ValidationRecord(BaseModel):
    """All checks of one validate run."""

    domain: str = Field(description="Reference domain name")
    passed: bool = Field(description="True when every check passed")
    checks: list[CheckRecord] = Field(default_factory=list, description="Individual checks")
    rate_rows: list[RateRowRecord] = Field(default_factory=list, description="Rate table rows")


class ArtifactRecord(BaseModel):
    """A file written by a run."""

    kind: str = Field(description="Artifact kind (moments, curve, report, ...)")
    file: str = Field(description="File name relative to the output directory")
    sha256: str = Field(description="SHA-256 of the file contents")
    bytes: int = Field(description="File size in bytes")


class RunManifest(BaseModel):
    """Index of the artifacts of one run. Carries no timestamps."""

    version: str = Field(default="1.0", description="Schema version")
    command: str = Field(description="Subcommand that produced the artifacts")
    precision_bits: int = Field(description="Working precision")
    parameters: dict[str, Any] = Field(default_factory=dict, description="Subcommand parameters")
    artifacts: list[ArtifactRecord] = Field(default_factory=list, description="Written files, in write order")
