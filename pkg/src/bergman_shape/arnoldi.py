#!/usr/bin/env python3
"""
Bergman polynomials by Arnoldi Gram-Schmidt on the moment inner product.

Step k orthonormalizes {p_0, ..., p_{k-1}, z p_{k-1}} rather than the
monomials, and the projection coefficients are the columns of the upper
Hessenberg matrix b_{k,j} = <z p_j, p_k> of the Bergman shift.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

from mpmath import mp, mpc, mpf

from bergman_shape.errors import (
    DegreeExceedsMoments,
    IndexOutOfRange,
    InvalidParameter,
    MomentsNotPositiveDefinite,
    PrecisionTooLow,
)
from bergman_shape.polynomials import (
    ComplexPolynomial,
    PrecisionContext,
    current_context,
    linear_combination,
    moment_functional,
    multiply_by_z,
    pair_with_functional,
    precision_scope,
    weighted_inner_product,
)

if TYPE_CHECKING:
    from bergman_shape.moments import MomentMatrix


# === DOMAIN TYPES ===

@dataclass(frozen=True)
class OrthonormalBasis:
    """Bergman polynomials p_0..p_n with positive leading coefficients."""

    polys: tuple[ComplexPolynomial, ...]
    lambdas: tuple[mpf, ...]

    @property
    def order(self) -> int:
        return len(self.polys) - 1


@dataclass(frozen=True)
class HessenbergMatrix:
    """Upper Hessenberg matrix stored by columns.

    Column j holds rows 0..j+1, so a matrix with columns 0..n also carries
    the subdiagonal entry (n+1, n) just below its last square block.
    """

    columns: tuple[tuple[mpc, ...], ...]

    def __post_init__(self) -> None:
        cols = tuple(tuple(mpc(v) for v in col) for col in self.columns)
        for j, col in enumerate(cols):
            if len(col) != j + 2:
                raise InvalidParameter(f"Hessenberg column {j} must hold {j + 2} entries, got {len(col)}")
        object.__setattr__(self, "columns", cols)

    @classmethod
    def from_entries(cls, entries: dict[tuple[int, int], object], size: int) -> HessenbergMatrix:
        """Build from sparse (k, j) entries; absent structural entries are zero."""
        columns = []
        for j in range(size):
            columns.append(tuple(mpc(entries.get((k, j), 0)) for k in range(j + 2)))  # type: ignore[arg-type]
        return cls(tuple(columns))

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]]) -> HessenbergMatrix:
        """Square matrix; entries below the first subdiagonal are ignored."""
        n = len(rows)
        columns = []
        for j in range(n):
            col = [mpc(rows[k][j]) for k in range(min(j + 2, n))]  # type: ignore[arg-type]
            if len(col) < j + 2:
                col.append(mpc(0))
            columns.append(tuple(col))
        return cls(tuple(columns))

    @property
    def size(self) -> int:
        return len(self.columns)

    @property
    def order(self) -> int:
        return len(self.columns) - 1

    def entry(self, k: int, j: int) -> mpc:
        if not 0 <= j < self.size or k < 0:
            raise IndexOutOfRange(f"entry ({k}, {j}) outside a Hessenberg matrix with columns 0..{self.order}")
        if k > j + 1:
            return mpc(0)
        return self.columns[j][k]

    def principal(self, n: int) -> list[list[mpc]]:
        """Dense n x n leading block."""
        if not 1 <= n <= self.size:
            raise IndexOutOfRange(f"principal block of order {n} from {self.size} columns")
        return [[self.entry(k, j) for j in range(n)] for k in range(n)]

    def conjugate(self) -> HessenbergMatrix:
        return HessenbergMatrix(tuple(tuple(mp.conj(v) for v in col) for col in self.columns))

    def max_norm(self) -> mpf:
        return max((abs(v) for col in self.columns for v in col), default=mpf(0))

    def structural_entries(self) -> list[tuple[int, int, mpc]]:
        return [(k, j, v) for j, col in enumerate(self.columns) for k, v in enumerate(col)]


# === PRECISION POLICY ===

def estimate_diameter(M: MomentMatrix) -> mpf:
    """2 (μ_NN / μ_00)^(1/2N), a moment-based stand-in for diam(Γ)."""
    N = M.degree
    if N == 0:
        return 2 * mp.sqrt(M.area / mp.pi)
    return 2 * (M.entry(N, N).real / M.area) ** (mpf(1) / (2 * N))


def required_precision(n: int, diameter: object) -> int:
    """Bits needed to absorb monomial coefficient growth up to degree n."""
    return 53 + math.ceil(2 * n * math.log2(float(diameter) + 2))


def _check_precision(M: MomentMatrix, n: int, active: PrecisionContext, strict: bool, diameter: object | None) -> None:
    diam = estimate_diameter(M) if diameter is None else diameter
    needed = required_precision(n, diam)
    if active.mantissa_bits >= needed:
        return
    message = f"precision {active.mantissa_bits} bits is below the {needed} bits suggested for n={n}"
    if strict:
        raise PrecisionTooLow(message)
    logging.warning(f"{message}; continuing (strict mode off)")


# === ARNOLDI GRAM-SCHMIDT ===

def arnoldi_orthonormalize(
    M: MomentMatrix,
    n: int,
    ctx: PrecisionContext | None = None,
    strict: bool = False,
    diameter: object | None = None,
) -> tuple[OrthonormalBasis, HessenbergMatrix]:
    """Build p_0..p_n and the Hessenberg columns 0..n from the moments.

    Each step runs classical Gram-Schmidt followed by exactly one
    re-orthogonalization pass. The residual norm is re-evaluated from the
    moment bilinear form.

    Args:
        M: Moment table of degree at least n + 1
        n: Degree of the last Bergman polynomial
        ctx: Working precision, or None for the active one
        strict: Raise instead of warning when the precision policy is violated
        diameter: Domain diameter for the policy; estimated from M when None

    Returns:
        The orthonormal basis p_0..p_n and the Hessenberg columns 0..n

    Raises:
        DegreeExceedsMoments: if M does not reach degree n+1
        MomentsNotPositiveDefinite: if a residual norm vanishes
        PrecisionTooLow: in strict mode, if the precision policy is violated
    """
    if n < 0:
        raise InvalidParameter(f"n must be nonnegative, got {n}")
    if M.degree < n + 1:
        raise DegreeExceedsMoments(f"n={n} needs moments up to degree {n + 1}, table has degree {M.degree}")

    with precision_scope(ctx):
        active = current_context()
        _check_precision(M, n, active, strict, diameter)
        tol = active.tolerance
        rows = n + 2

        area = M.area
        if area <= 0:
            raise MomentsNotPositiveDefinite(f"mu_00 must be positive, got {mp.nstr(area, 10)}")
        p0 = ComplexPolynomial.constant(1 / mp.sqrt(area))
        polys = [p0]
        lambdas = [p0.leading_coefficient.real]
        functionals = [moment_functional(p0, M, rows)]
        columns: list[tuple[mpc, ...]] = []

        for k in range(1, n + 2):
            v = multiply_by_z(polys[k - 1])
            h = [pair_with_functional(v, functionals[j]) for j in range(k)]
            r = v - linear_combination(list(zip(h, polys)))
            correction = [pair_with_functional(r, functionals[j]) for j in range(k)]
            r = r - linear_combination(list(zip(correction, polys)))
            h = [a + c for a, c in zip(h, correction)]

            norm2 = weighted_inner_product(r, r, M)
            scale = weighted_inner_product(v, v, M).real
            if norm2.real <= tol * scale:
                raise MomentsNotPositiveDefinite(
                    f"residual norm^2 {mp.nstr(norm2.real, 6)} at step {k} is not positive; "
                    "moments are degenerate or inconsistent"
                )
            sub = mp.sqrt(norm2.real)
            columns.append(tuple(h) + (mpc(sub),))

            if k <= n:
                p_k = r.scale(1 / sub)
                polys.append(p_k)
                lambdas.append(p_k.leading_coefficient.real)
                functionals.append(moment_functional(p_k, M, rows))
            if k % 25 == 0:
                logging.debug(f"Arnoldi step {k}/{n + 1}: b_{k},{k - 1} = {mp.nstr(sub, 12)}")

        return OrthonormalBasis(tuple(polys), tuple(lambdas)), HessenbergMatrix(tuple(columns))


def leading_coefficients(basis: OrthonormalBasis) -> list[mpf]:
    return list(basis.lambdas)


def leading_ratio_defect(basis: OrthonormalBasis, H: HessenbergMatrix) -> mpf:
    """max_k |λ_k/λ_{k+1} - b_{k+1,k}| over the stored range."""
    defect = mpf(0)
    for k in range(min(basis.order, H.size)):
        defect = max(defect, abs(basis.lambdas[k] / basis.lambdas[k + 1] - H.entry(k + 1, k)))
    return defect


def scaled_diagonals(
    H: HessenbergMatrix, n: int, m: int, column_offset: int = 0
) -> tuple[mpc, list[mpc]]:
    """b^(n) = sqrt((n+2)/(n+1)) b_{c+1,c}, b_k^(n) = sqrt((n-k+1)/(n+1)) b_{c-k,c} with c = n - column_offset.

    ``column_offset=0`` is the estimate used by the reconstruction. The
    tabulated triangle rows pair the factors of row n with column n - 1,
    which is ``column_offset=1``.
    """
    if n > H.order or n < 0:
        raise IndexOutOfRange(f"n={n} needs column {n}, matrix has columns 0..{H.order}")
    if column_offset < 0:
        raise IndexOutOfRange(f"column offset must be nonnegative, got {column_offset}")
    c = n - column_offset
    if not 0 <= m <= c:
        raise IndexOutOfRange(f"m={m} must lie in 0..{c} (n={n}, column offset {column_offset})")
    b_est = mp.sqrt(mpf(n + 2) / (n + 1)) * H.entry(c + 1, c)
    coeffs = [mp.sqrt(mpf(n - k + 1) / (n + 1)) * H.entry(c - k, c) for k in range(m + 1)]
    return mpc(b_est), coeffs


# === DIAGNOSTICS ===

def orthonormality_residual(basis: OrthonormalBasis, M: MomentMatrix) -> mpf:
    """max_{j,k} |<p_j, p_k> - δ_jk|."""
    rows = basis.order + 1
    worst = mpf(0)
    for k, pk in enumerate(basis.polys):
        u = moment_functional(pk, M, rows)
        for j, pj in enumerate(basis.polys):
            target = 1 if j == k else 0
            worst = max(worst, abs(pair_with_functional(pj, u) - target))
    return worst


def structural_residual(basis: OrthonormalBasis, M: MomentMatrix) -> mpf:
    """max |<z p_j, p_k>| over k >= j+2, recomputed from the moments."""
    rows = min(M.degree + 1, basis.order + 2)
    functionals = [moment_functional(pk, M, rows) for pk in basis.polys]
    worst = mpf(0)
    for j, pj in enumerate(basis.polys):
        zp = multiply_by_z(pj)
        if zp.degree >= rows:
            continue
        for k in range(j + 2, basis.order + 1):
            worst = max(worst, abs(pair_with_functional(zp, functionals[k])))
    return worst


def polynomials_from_hessenberg(H: HessenbergMatrix, n: int, p0: object = 1) -> list[ComplexPolynomial]:
    """Rebuild p_0..p_n from b_{k+1,k} p_{k+1} = z p_k - Σ_{j<=k} b_{j,k} p_j."""
    if n > H.size:
        raise IndexOutOfRange(f"p_{n} needs columns 0..{n - 1}, matrix has {H.size}")
    polys = [ComplexPolynomial.constant(p0)]
    for k in range(n):
        sub = H.entry(k + 1, k)
        if sub == 0:
            raise MomentsNotPositiveDefinite(f"zero subdiagonal b_{k + 1},{k} stops the recursion")
        combo = linear_combination([(H.entry(j, k), polys[j]) for j in range(k + 1)])
        polys.append((multiply_by_z(polys[k]) - combo).scale(1 / sub))
    return polys


def rotational_symmetry_defect(H: HessenbergMatrix, n: int, fold: int) -> mpf:
    """max |b_{n-k,n}| over k in 0..n with k ≢ -1 (mod fold).

    For a domain with fold-fold rotational symmetry about the origin these
    entries vanish; fold=3 leaves only k in {2, 5, 8, ...}.
    """
    if fold < 2:
        raise InvalidParameter(f"fold must be at least 2, got {fold}")
    if n > H.order:
        raise IndexOutOfRange(f"column {n} outside columns 0..{H.order}")
    return max(
        (abs(H.entry(n - k, n)) for k in range(n + 1) if (k + 1) % fold != 0),
        default=mpf(0),
    )
