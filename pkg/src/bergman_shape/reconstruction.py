#!/usr/bin/env python3
"""
Moments to boundary: Arnoldi, scaled diagonals, truncated Laurent map and
sampled curve, plus the error and rate tables over a grid of n.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from mpmath import mp, mpc, mpf

from bergman_shape.arnoldi import HessenbergMatrix, arnoldi_orthonormalize, rotational_symmetry_defect, scaled_diagonals
from bergman_shape.errors import InvalidParameter
from bergman_shape.faber import LaurentMap, laurent_eval
from bergman_shape.moments import DomainSpec, MomentMatrix, domain_moments
from bergman_shape.polynomials import PrecisionContext, current_context, precision_scope

DEFAULT_CURVE_SAMPLES = 720
DEFAULT_SUP_SAMPLES = 1024
MIN_SUP_SAMPLES = 64


@dataclass(frozen=True)
class CurveSample:
    theta: mpf
    point: mpc


@dataclass(frozen=True)
class RateRow:
    """One row of the error table; error and rate columns are None without a reference."""

    n: int
    k: int
    b: mpf
    b_k: mpc
    t: mpf | None = None
    t_k: mpc | None = None
    s: float | None = None
    s_k: float | None = None
    symmetry_defect: mpf | None = None


@dataclass(frozen=True)
class ReconstructionReport:
    n: int
    m: int
    laurent: LaurentMap
    curve: tuple[CurveSample, ...] = ()
    sup_error: mpf | None = None
    rate_rows: tuple[RateRow, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        _check_truncation(self.n, self.m)


def default_truncation(n: int) -> int:
    return n // 2


def _check_truncation(n: int, m: int) -> None:
    if not 1 < m < n:
        raise InvalidParameter(f"m must satisfy 1 < m < n (got m={m}, n={n})")


# === RECONSTRUCTION ===

def reconstruct_from_hessenberg(H: HessenbergMatrix, n: int, m: int | None = None) -> LaurentMap:
    """Ψ^(n)_m from column n of an existing Hessenberg matrix."""
    m = default_truncation(n) if m is None else m
    _check_truncation(n, m)
    b_est, coeffs = scaled_diagonals(H, n, m)
    return LaurentMap.from_estimates(b_est, coeffs)


def reconstruct(
    M: MomentMatrix,
    n: int,
    m: int | None = None,
    ctx: PrecisionContext | None = None,
    strict: bool = False,
) -> LaurentMap:
    """Run Arnoldi to column n and read the truncated exterior map off its scaled diagonals."""
    m = default_truncation(n) if m is None else m
    _check_truncation(n, m)
    with precision_scope(ctx):
        _, H = arnoldi_orthonormalize(M, n, strict=strict)
        return reconstruct_from_hessenberg(H, n, m)


def curve_points(L: LaurentMap, K: int = DEFAULT_CURVE_SAMPLES) -> list[CurveSample]:
    """Ψ(e^{iθ}) at K equispaced angles starting from θ = 0."""
    if K < 3:
        raise InvalidParameter(f"curve needs at least 3 samples, got {K}")
    samples = []
    for i in range(K):
        theta = 2 * mp.pi * i / K
        samples.append(CurveSample(theta, laurent_eval(L, mp.expj(theta))))
    return samples


def sup_distance(L_ref: LaurentMap, L_est: LaurentMap, K: int = DEFAULT_SUP_SAMPLES) -> mpf:
    """max |Ψ_ref(w) - Ψ_est(w)| over K equispaced points of the unit circle."""
    if K < MIN_SUP_SAMPLES:
        raise InvalidParameter(f"sup distance needs at least {MIN_SUP_SAMPLES} samples, got {K}")
    worst = mpf(0)
    for i in range(K):
        w = mp.expj(2 * mp.pi * i / K)
        worst = max(worst, abs(laurent_eval(L_ref, w) - laurent_eval(L_est, w)))
    return worst


def run_reconstruction(
    M: MomentMatrix,
    n: int,
    m: int | None = None,
    samples: int = DEFAULT_CURVE_SAMPLES,
    reference: LaurentMap | None = None,
    ctx: PrecisionContext | None = None,
    strict: bool = False,
) -> tuple[ReconstructionReport, HessenbergMatrix]:
    """Full pipeline; also returns the Hessenberg matrix for export."""
    m = default_truncation(n) if m is None else m
    _check_truncation(n, m)
    with precision_scope(ctx):
        _, H = arnoldi_orthonormalize(M, n, strict=strict)
        laurent = reconstruct_from_hessenberg(H, n, m)
        curve = tuple(curve_points(laurent, samples))
        sup_error = sup_distance(reference, laurent) if reference is not None else None
    logging.info(f"reconstructed n={n}, m={m}: b = {mp.nstr(laurent.b, 12)}")
    return ReconstructionReport(n, m, laurent, curve, sup_error), H


# === RATE TABLES ===

def _rate_row(
    M: MomentMatrix, n: int, k: int, bits: int, strict: bool, fold: int | None, column_offset: int
) -> tuple[int, mpc, mpc, mpf | None]:
    with PrecisionContext(bits).activate():
        _, H = arnoldi_orthonormalize(M, n, strict=strict)
        b_est, coeffs = scaled_diagonals(H, n, k, column_offset)
        defect = None
        if fold is not None:
            defect = rotational_symmetry_defect(H, n, fold) / H.max_norm()
        return n, b_est, coeffs[k], defect


def _rate(t_now: object, t_next: object, n_now: int, n_next: int) -> float | None:
    if t_now is None or t_next is None:
        return None
    a, b = abs(t_now), abs(t_next)
    if a == 0 or b == 0:
        return None
    return float(mp.log(a / b) / mp.log(mpf(n_next) / n_now))


def rate_table(
    domain: DomainSpec,
    reference: LaurentMap | None,
    n_list: Sequence[int],
    k: int,
    ctx: PrecisionContext | None = None,
    workers: int = 1,
    strict: bool = False,
    moments: MomentMatrix | None = None,
    nodes: int | None = None,
    fold: int | None = None,
    column_offset: int = 0,
) -> list[RateRow]:
    """Rows (n, b^(n), t^(n), b_k^(n), t_k^(n), s, s_k) over an increasing grid.

    Moments are computed once, to degree max(n_list) + 1, and every row runs
    its own Arnoldi pass. With workers > 1 rows are computed in a process
    pool; the rows are identical either way.

    Args:
        domain: Domain whose moments feed the rows (ignored when ``moments`` is given)
        reference: Exact map for the errors t and t_k, or None to skip them
        n_list: Strictly increasing degrees, one row each
        k: Index of the coefficient tracked in the b_k columns
        ctx: Precision for the moments and every row
        workers: Size of the process pool; 1 runs the rows serially
        strict: Refuse rows whose precision violates the policy
        moments: Precomputed moments of degree at least max(n_list) + 1
        nodes: Quadrature nodes for parametric moments
        fold: Rotational symmetry order for the per-row zeroing defect
        column_offset: Hessenberg column read for row n is n - column_offset;
            the tabulated triangle rows use 1, see ``scaled_diagonals``

    Returns:
        One RateRow per n, with s and s_k set between consecutive rows
    """
    grid = list(n_list)
    if not grid:
        raise InvalidParameter("rate table needs at least one n")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParameter(f"n values must be strictly increasing, got {grid}")
    if column_offset < 0:
        raise InvalidParameter(f"column offset must be nonnegative, got {column_offset}")
    if not 0 <= k <= grid[0] - column_offset:
        raise InvalidParameter(f"k={k} must lie in 0..{grid[0] - column_offset}")
    if workers < 1:
        raise InvalidParameter(f"workers must be at least 1, got {workers}")

    with precision_scope(ctx):
        bits = current_context().mantissa_bits
        M = moments if moments is not None else domain_moments(domain, grid[-1] + 1, nodes)
        if workers == 1:
            raw = [_rate_row(M, n, k, bits, strict, fold, column_offset) for n in grid]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(_rate_row, M, n, k, bits, strict, fold, column_offset) for n in grid]
                raw = [f.result() for f in futures]

        rows = []
        for n, b_est, bk_est, defect in raw:
            b = b_est.real
            t = reference.b - b if reference is not None else None
            t_k = reference.coefficient(k) - bk_est if reference is not None else None
            rows.append(RateRow(n, k, b, bk_est, t, t_k, symmetry_defect=defect))
            logging.info(f"rate table row n={n}: b = {mp.nstr(b, 12)}")

        out = []
        for i, row in enumerate(rows):
            s = s_k = None
            if i + 1 < len(rows):
                nxt = rows[i + 1]
                s = _rate(row.t, nxt.t, row.n, nxt.n)
                s_k = _rate(row.t_k, nxt.t_k, row.n, nxt.n)
            out.append(RateRow(row.n, row.k, row.b, row.b_k, row.t, row.t_k, s, s_k, row.symmetry_defect))
        return out


def fitted_rate(rows: Sequence[RateRow], column: Literal["t", "t_k"] = "t") -> float:
    """Least-squares exponent s in |t^(n)| ≈ C / n^s over the rows."""
    points = []
    for row in rows:
        value = row.t if column == "t" else row.t_k
        if value is not None and abs(value) > 0:
            points.append((math.log(row.n), float(mp.log(abs(value)))))
    if len(points) < 2:
        raise InvalidParameter(f"fitting a rate needs at least two rows with nonzero {column}")
    x, y = np.array(points).T
    slope, _ = np.polyfit(x, y, 1)
    return float(-slope)


def decay_envelope_violations(rows: Sequence[RateRow]) -> list[int]:
    """n values breaking |t| <= C/n or |t_k| <= C_k/sqrt(n), with C and C_k fit on the first row."""
    if not rows or rows[0].t is None:
        return []
    first = rows[0]
    c = abs(first.t) * first.n
    c_k = abs(first.t_k) * mp.sqrt(first.n) if first.t_k is not None else None
    slack = 1 + current_context().tolerance
    bad = []
    for row in rows:
        if row.t is not None and abs(row.t) > slack * c / row.n:
            bad.append(row.n)
        elif c_k is not None and row.t_k is not None and abs(row.t_k) > slack * c_k / mp.sqrt(row.n):
            bad.append(row.n)
    return bad
