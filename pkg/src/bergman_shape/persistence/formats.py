#!/usr/bin/env python3
"""
Text codecs for moment, Hessenberg, spectrum, curve and rate-table files.

Every decimal is printed with ``mpmath.nstr`` at a fixed digit count and
rows are emitted in a fixed order, so equal inputs give byte-identical
files.
"""

import csv
import io
from collections.abc import Iterable, Sequence

from mpmath import mp, mpc

from bergman_shape.arnoldi import HessenbergMatrix
from bergman_shape.errors import IncompleteRealMoments, InvalidParameter
from bergman_shape.faber import LaurentMap
from bergman_shape.moments import DomainSpec, MomentMatrix, RealMomentArray
from bergman_shape.persistence.models import LaurentMapRecord
from bergman_shape.reconstruction import CurveSample, RateRow
from bergman_shape.spectra import Spectrum

DEFAULT_DIGITS = 40


def format_decimal(value: object, digits: int = DEFAULT_DIGITS) -> str:
    return mp.nstr(value, digits, strip_zeros=False)


def _table(header: Sequence[str], rows: Iterable[Sequence[str]], comments: Sequence[str] = ()) -> str:
    out = io.StringIO()
    for line in comments:
        out.write(f"# {line}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def _parse(text: str) -> tuple[dict[str, str], list[dict[str, str]]]:
    """Split '# key=value' header lines from CSV records."""
    meta: dict[str, str] = {}
    body = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            key, _, value = stripped.lstrip("#").strip().partition("=")
            meta[key.strip()] = value.strip()
        else:
            body.append(stripped)
    reader = csv.DictReader(body)
    return meta, list(reader)


# === MOMENTS ===

def write_moments_csv(M: MomentMatrix, digits: int = DEFAULT_DIGITS) -> str:
    """Rows k <= j; the lower half follows from Hermitian symmetry."""
    rows = []
    for k in range(M.degree + 1):
        for j in range(k, M.degree + 1):
            v = M.entry(k, j)
            rows.append((str(k), str(j), format_decimal(v.real, digits), format_decimal(v.imag, digits)))
    return _table(("k", "j", "re", "im"), rows)


def read_moments_csv(text: str) -> MomentMatrix:
    _, records = _parse(text)
    if not records:
        raise InvalidParameter("moment file has no rows")
    values = {
        (int(r["k"]), int(r["j"])): mpc(mp.mpf(r["re"]), mp.mpf(r["im"]))
        for r in records
    }
    degree = max(max(k, j) for k, j in values)
    return MomentMatrix.from_upper(values, degree)


def write_real_moments_csv(tau: RealMomentArray, digits: int = DEFAULT_DIGITS) -> str:
    rows = [(str(m), str(n), format_decimal(v, digits)) for (m, n), v in sorted(tau.entries.items())]
    return _table(("m", "n", "value"), rows)


def read_real_moments_csv(text: str) -> RealMomentArray:
    """Infer the layout: a full square of indices is rectangular, anything else triangular."""
    _, records = _parse(text)
    entries = {(int(r["m"]), int(r["n"])): mp.mpf(r["value"]) for r in records}
    if (0, 0) not in entries:
        raise IncompleteRealMoments("real moment file lacks tau_0,0")
    top = max(max(m, n) for m, n in entries)
    total = max(m + n for m, n in entries)
    if total > top and len(entries) == (top + 1) ** 2:
        return RealMomentArray(top, entries, "rectangular")
    degree = total // 2
    for t in range(2 * degree + 1):
        for m in range(t + 1):
            if (m, t - m) not in entries:
                raise IncompleteRealMoments(f"real moment tau_{m},{t - m} missing for degree {degree}")
    return RealMomentArray(degree, entries, "triangular")


# === HESSENBERG MATRICES AND SPECTRA ===

def write_hessenberg_csv(H: HessenbergMatrix, precision_bits: int, digits: int = DEFAULT_DIGITS) -> str:
    rows = [
        (str(k), str(j), format_decimal(v.real, digits), format_decimal(v.imag, digits))
        for k, j, v in H.structural_entries()
    ]
    return _table(("k", "j", "re", "im"), rows, (f"order={H.order}", f"precision_bits={precision_bits}"))


def read_hessenberg_csv(text: str) -> HessenbergMatrix:
    meta, records = _parse(text)
    entries = {(int(r["k"]), int(r["j"])): mpc(mp.mpf(r["re"]), mp.mpf(r["im"])) for r in records}
    if not entries:
        raise InvalidParameter("Hessenberg file has no rows")
    size = int(meta["order"]) + 1 if "order" in meta else max(j for _, j in entries) + 1
    return HessenbergMatrix.from_entries(entries, size)


def write_spectrum_csv(spectrum: Spectrum, digits: int = DEFAULT_DIGITS) -> str:
    rows = [
        (str(i), format_decimal(v.real, digits), format_decimal(v.imag, digits))
        for i, v in enumerate(spectrum.sorted())
    ]
    return _table(("index", "re", "im"), rows, (f"residual={mp.nstr(spectrum.residual, 6)}",))


# === CURVES AND TABLES ===

def write_curve_csv(samples: Sequence[CurveSample], digits: int = DEFAULT_DIGITS) -> str:
    rows = [
        (format_decimal(s.theta, digits), format_decimal(s.point.real, digits), format_decimal(s.point.imag, digits))
        for s in samples
    ]
    return _table(("theta", "re", "im"), rows)


def _fixed(value: object, spec: str) -> str:
    return "" if value is None else format(float(value), spec)  # type: ignore[arg-type]


def write_rate_table_csv(rows: Sequence[RateRow]) -> str:
    """Columns n, b, t, s, b_k, t_k, s_k: 9 decimals for b, 3 significant digits for t, 4 decimals for s."""
    k = rows[0].k if rows else 0
    body = [
        (
            str(r.n),
            _fixed(r.b, ".9f"),
            _fixed(r.t, ".2e"),
            _fixed(r.s, ".4f"),
            _fixed(r.b_k.real, ".9f"),
            _fixed(None if r.t_k is None else r.t_k.real, ".2e"),
            _fixed(r.s_k, ".4f"),
        )
        for r in rows
    ]
    return _table(("n", "b", "t", "s", f"b{k}", f"t{k}", f"s{k}"), body)


# === JSON DOCUMENTS ===

def dump_laurent_json(L: LaurentMap, digits: int = DEFAULT_DIGITS) -> str:
    return LaurentMapRecord.from_map(L, digits).model_dump_json(indent=2) + "\n"


def load_laurent_json(text: str) -> LaurentMap:
    return LaurentMapRecord.model_validate_json(text).to_map()


def load_domain_spec(text: str) -> DomainSpec:
    return DomainSpec.model_validate_json(text)
