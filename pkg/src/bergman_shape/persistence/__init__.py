#!/usr/bin/env python3
"""
Persistence layer: JSON document models, file codecs and the run workspace.
"""

from bergman_shape.persistence.formats import (
    dump_laurent_json,
    format_decimal,
    load_domain_spec,
    load_laurent_json,
    read_hessenberg_csv,
    read_moments_csv,
    read_real_moments_csv,
    write_curve_csv,
    write_hessenberg_csv,
    write_moments_csv,
    write_rate_table_csv,
    write_real_moments_csv,
    write_spectrum_csv,
)
from bergman_shape.persistence.models import (
    ArtifactRecord,
    CheckRecord,
    LaurentMapRecord,
    RateRowRecord,
    ReportRecord,
    RunManifest,
    ValidationRecord,
)
from bergman_shape.persistence.storage import atomic_write_text, ensure_output_directory, get_output_dir
from bergman_shape.persistence.workspace import OutputWorkspace

__all__ = [
    "ArtifactRecord",
    "CheckRecord",
    "LaurentMapRecord",
    "OutputWorkspace",
    "RateRowRecord",
    "ReportRecord",
    "RunManifest",
    "ValidationRecord",
    "atomic_write_text",
    "dump_laurent_json",
    "ensure_output_directory",
    "format_decimal",
    "get_output_dir",
    "load_domain_spec",
    "load_laurent_json",
    "read_hessenberg_csv",
    "read_moments_csv",
    "read_real_moments_csv",
    "write_curve_csv",
    "write_hessenberg_csv",
    "write_moments_csv",
    "write_rate_table_csv",
    "write_real_moments_csv",
    "write_spectrum_csv",
]
