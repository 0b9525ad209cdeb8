#!/usr/bin/env python3
"""
Test cases for the bergman-shape command line: subcommand outputs, the
manifest and exit codes.
"""

import json

import pytest
from mpmath import mpf

from bergman_shape.cli import build_parser, main
from bergman_shape.moments import DomainSpec, domain_moments
from bergman_shape.persistence import read_moments_csv


def write_json(path, document):
    path.write_text(json.dumps(document))
    return str(path)


@pytest.fixture
def disk_moments_file(tmp_path, output_dir):
    """Moments of the unit disk up to degree 11, written by the moments command."""
    spec = write_json(tmp_path / "disk.json", {"type": "named", "name": "unit-disk"})
    target = tmp_path / "disk_moments.csv"
    assert main(["moments", "--domain", spec, "--degree", "11", "--output", str(target)]) == 0
    return str(target)


# === MOMENTS ===

def test_moments_of_square(tmp_path, output_dir, capsys):
    """The [-1, 1]^2 square has area 4; moments.csv and the manifest are written."""
    spec = write_json(tmp_path / "square.json", {"type": "named", "name": "square"})
    assert main(["moments", "--domain", spec, "--degree", "4"]) == 0
    assert capsys.readouterr().out.startswith("mu_00 = 4.0")
    assert (output_dir / "moments.csv").exists()
    manifest = json.loads((output_dir / "manifest.json").read_text())
    assert manifest["command"] == "moments"
    assert manifest["precision_bits"] == 212
    assert manifest["artifacts"][0]["kind"] == "moments"


def test_degenerate_polygon_is_usage_error(tmp_path, output_dir, capsys):
    """Two vertices do not make a polygon."""
    spec = write_json(tmp_path / "segment.json", {"type": "polygon", "vertices": [[0, 0], [1, 0]]})
    assert main(["moments", "--domain", spec]) == 2
    assert "InvalidPolygon" in capsys.readouterr().err


def test_missing_file_is_usage_error(tmp_path, output_dir, capsys):
    assert main(["moments", "--domain", str(tmp_path / "absent.json")]) == 2
    assert "FileNotFoundError" in capsys.readouterr().err


def test_moments_file_keeps_full_precision(tmp_path, output_dir, high_precision):
    """Without --digits the CSV carries every bit of a 212-bit moment table."""
    spec = write_json(tmp_path / "triangle.json", {"type": "named", "name": "equilateral-triangle"})
    assert main(["moments", "--domain", spec, "--degree", "30"]) == 0
    restored = read_moments_csv((output_dir / "moments.csv").read_text())
    exact = domain_moments(DomainSpec.from_name("equilateral-triangle"), 30)
    for k in range(31):
        for j in range(k, 31):
            assert abs(restored.entry(k, j) - exact.entry(k, j)) <= mpf(2) ** -205 * abs(exact.entry(k, j))


@pytest.mark.slow
def test_reconstruct_from_written_moments_at_n_100(tmp_path, output_dir, capsys):
    """b^(100) from the written triangle moments matches the in-memory run to 12 digits."""
    spec = write_json(tmp_path / "triangle.json", {"type": "named", "name": "equilateral-triangle"})
    assert main(["moments", "--domain", spec, "--degree", "101"]) == 0
    capsys.readouterr()
    assert main(["reconstruct", "--moments", str(output_dir / "moments.csv"), "--n", "100", "--samples", "64"]) == 0
    assert "b = 0.730522874602" in capsys.readouterr().out


# === RECONSTRUCT ===

def test_reconstruct_disk(disk_moments_file, output_dir, capsys):
    """The disk reconstructs to b = 1 with every artifact in the manifest."""
    capsys.readouterr()
    assert main(["reconstruct", "--moments", disk_moments_file, "--n", "10", "--m", "5", "--samples", "16"]) == 0
    assert "b = 1.0" in capsys.readouterr().out
    for name in ("laurent.json", "curve.csv", "hessenberg.csv", "report.json", "manifest.json"):
        assert (output_dir / name).exists()
    report = json.loads((output_dir / "report.json").read_text())
    assert report["n"] == 10
    assert report["m"] == 5
    assert report["samples"] == 16
    assert report["sup_error"] is None
    kinds = [a["kind"] for a in json.loads((output_dir / "manifest.json").read_text())["artifacts"]]
    assert kinds == ["laurent", "curve", "hessenberg", "report"]


def test_reconstruct_with_reference(tmp_path, disk_moments_file, output_dir, capsys):
    """A reference domain adds the sup error to the report."""
    reference = write_json(tmp_path / "ref.json", {"type": "named", "name": "unit-disk"})
    assert main(["reconstruct", "--moments", disk_moments_file, "--n", "10", "--reference", reference]) == 0
    assert "sup_error = " in capsys.readouterr().out
    assert json.loads((output_dir / "report.json").read_text())["sup_error"] is not None


def test_reconstruct_truncation_out_of_range(disk_moments_file, output_dir, capsys):
    assert main(["reconstruct", "--moments", disk_moments_file, "--n", "10", "--m", "10"]) == 2
    assert "1 < m < n" in capsys.readouterr().err


def test_strict_precision_exit_code(disk_moments_file, output_dir, capsys):
    """53 bits is below the policy for n = 10; strict mode refuses to run."""
    code = main([
        "reconstruct", "--moments", disk_moments_file, "--n", "10",
        "--strict-precision", "--precision", "53",
    ])
    assert code == 4
    assert "PrecisionTooLow" in capsys.readouterr().err


# === SPECTRA ===

def test_spectra_of_ellipse_toeplitz(tmp_path, output_dir, capsys):
    """Toeplitz eigenvalues of the ellipse symbol match the Faber zeros."""
    laurent = write_json(
        tmp_path / "ellipse.json",
        {"b": "1.125", "coeffs": [["0", "0"], ["0.125", "0"]], "order": 1},
    )
    assert main(["spectra", "--laurent", laurent, "--n", "6", "--compare"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("PASS")
    assert len(out.strip().splitlines()) == 1 + 6
    assert json.loads((output_dir / "comparison.json").read_text())["passed"] is True
    assert (output_dir / "spectrum.csv").exists()


def test_spectra_from_reconstructed_hessenberg(disk_moments_file, output_dir, capsys):
    """The disk's Hessenberg block is nilpotent."""
    assert main(["reconstruct", "--moments", disk_moments_file, "--n", "10"]) == 0
    capsys.readouterr()
    assert main(["spectra", "--hessenberg", str(output_dir / "hessenberg.csv"), "--n", "4"]) == 0
    values = capsys.readouterr().out.strip().splitlines()
    assert len(values) == 4


# === VALIDATE ===

def test_validate_disk(output_dir, capsys):
    assert main(["validate", "disk"]) == 0
    out = capsys.readouterr().out
    assert out.strip().splitlines()[-1] == "PASS"
    record = json.loads((output_dir / "validation.json").read_text())
    assert record["domain"] == "disk"
    assert record["passed"] is True


def test_validate_ellipse_exit_code(output_dir, capsys):
    """The default (20, 10) ellipse run passes every check."""
    assert main(["validate", "ellipse"]) == 0
    assert capsys.readouterr().out.strip().splitlines()[-1] == "PASS"


# === CONFIGURATION AND PARSING ===

def test_invalid_precision_from_environment(output_dir, monkeypatch, capsys):
    """An out-of-range precision in the environment is a usage error."""
    monkeypatch.setenv("BERGMAN_SHAPE_PRECISION", "10")
    assert main(["validate", "disk"]) == 2
    assert "ValidationError" in capsys.readouterr().err


def test_output_dir_flag(tmp_path, output_dir):
    """--output-dir beats the environment."""
    spec = write_json(tmp_path / "square.json", {"type": "named", "name": "square"})
    target = tmp_path / "flagged"
    assert main(["moments", "--domain", spec, "--degree", "2", "--output-dir", str(target)]) == 0
    assert (target / "moments.csv").exists()
    assert not (output_dir / "moments.csv").exists()


def test_subcommand_required():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_unknown_validation_domain_rejected():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["validate", "pentagon"])
