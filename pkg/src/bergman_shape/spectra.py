#!/usr/bin/env python3
"""
Eigenvalues of complex upper Hessenberg matrices by shifted QR.

The n x n leading block of the Bergman shift matrix has the zeros of p_n as
eigenvalues, and the same block of the Toeplitz matrix has the zeros of
G_n. Companion matrices give an independent route to polynomial zeros.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpc, mpf
from scipy.optimize import linear_sum_assignment

from bergman_shape.arnoldi import HessenbergMatrix
from bergman_shape.errors import InvalidParameter, NoConvergence
from bergman_shape.polynomials import ComplexPolynomial, PrecisionContext, precision_scope

ITERATIONS_PER_EIGENVALUE = 40
EXCEPTIONAL_SHIFT_PERIOD = 10


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicity, and the largest subdiagonal dropped by deflation."""

    values: tuple[mpc, ...]
    residual: mpf
    iterations: int = 0

    def __len__(self) -> int:
        return len(self.values)

    def sorted(self) -> list[mpc]:
        """Values ordered by real part, then imaginary part."""
        return sorted(self.values, key=lambda v: (float(v.real), float(v.imag)))


# === SHIFTED QR ===

def _wilkinson_shift(A: list[list[mpc]], hi: int) -> mpc:
    a, b = A[hi - 1][hi - 1], A[hi - 1][hi]
    c, d = A[hi][hi - 1], A[hi][hi]
    half_trace = (a + d) / 2
    root = mp.sqrt(((a - d) / 2) ** 2 + b * c)
    first, second = half_trace + root, half_trace - root
    return first if abs(first - d) <= abs(second - d) else second


def _qr_sweep(A: list[list[mpc]], lo: int, hi: int, shift: mpc) -> None:
    """One explicitly shifted QR step A - σ = QR, A <- RQ + σ on rows/columns lo..hi."""
    for i in range(lo, hi + 1):
        A[i][i] -= shift
    rotations = []
    for k in range(lo, hi):
        x, y = A[k][k], A[k + 1][k]
        r = mp.sqrt(abs(x) ** 2 + abs(y) ** 2)
        c, s = (mpc(1), mpc(0)) if r == 0 else (x / r, y / r)
        cc, cs = mp.conj(c), mp.conj(s)
        for j in range(k, hi + 1):
            top, bottom = A[k][j], A[k + 1][j]
            A[k][j] = cc * top + cs * bottom
            A[k + 1][j] = c * bottom - s * top
        rotations.append((k, c, s))
    for k, c, s in rotations:
        cc, cs = mp.conj(c), mp.conj(s)
        for i in range(lo, k + 2):
            left, right = A[i][k], A[i][k + 1]
            A[i][k] = left * c + right * s
            A[i][k + 1] = right * cc - left * cs
    for i in range(lo, hi + 1):
        A[i][i] += shift


def _shifted_qr(matrix: Sequence[Sequence[mpc]]) -> Spectrum:
    A = [[mpc(v) for v in row] for row in matrix]
    n = len(A)
    eps = mpf(2) ** (-(mp.prec - 8))
    budget = ITERATIONS_PER_EIGENVALUE * n
    values: list[mpc] = [mpc(0)] * n
    residual = mpf(0)
    iterations = 0
    since_deflation = 0
    hi = n - 1

    while hi > 0:
        lo = hi
        while lo > 0:
            sub = abs(A[lo][lo - 1])
            if sub == 0 or sub <= eps * (abs(A[lo - 1][lo - 1]) + abs(A[lo][lo])):
                residual = max(residual, sub)
                A[lo][lo - 1] = mpc(0)
                break
            lo -= 1
        if lo == hi:
            values[hi] = A[hi][hi]
            hi -= 1
            since_deflation = 0
            continue

        iterations += 1
        since_deflation += 1
        if iterations > budget:
            raise NoConvergence(f"shifted QR did not converge within {budget} iterations for order {n}")
        if since_deflation % EXCEPTIONAL_SHIFT_PERIOD == 0:
            shift = A[hi][hi] + mpf("0.75") * abs(A[hi][hi - 1])
        else:
            shift = _wilkinson_shift(A, hi)
        _qr_sweep(A, lo, hi, shift)

    if n:
        values[0] = A[0][0]
    logging.debug(f"shifted QR on order {n}: {iterations} iterations, residual {mp.nstr(residual, 3)}")
    return Spectrum(tuple(values), residual, iterations)


def hessenberg_eigenvalues(H: HessenbergMatrix, n: int, ctx: PrecisionContext | None = None) -> Spectrum:
    """All eigenvalues of the n x n leading block of H.

    Raises:
        IndexOutOfRange: if n is outside 1..H.size
        NoConvergence: after 40n QR iterations
    """
    with precision_scope(ctx):
        return _shifted_qr(H.principal(n))


# === COMPANION MATRICES ===

def balance_matrix(A: Sequence[Sequence[mpc]], radix: int = 2) -> list[list[mpc]]:
    """Parlett-Reinsch balancing by powers of ``radix``; a diagonal similarity."""
    B = [[mpc(v) for v in row] for row in A]
    n = len(B)
    square = radix * radix
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            col = mp.fsum(abs(B[j][i]) for j in range(n) if j != i)
            row = mp.fsum(abs(B[i][j]) for j in range(n) if j != i)
            if col == 0 or row == 0:
                continue
            total = col + row
            f = mpf(1)
            limit = row / radix
            while col < limit:
                f *= radix
                col *= square
            limit = row * radix
            while col > limit:
                f /= radix
                col /= square
            if (col + row) / f < mpf("0.95") * total:
                converged = False
                for j in range(n):
                    B[i][j] /= f
                    B[j][i] *= f
    return B


def companion_matrix(p: ComplexPolynomial) -> list[list[mpc]]:
    """Monic companion matrix: ones on the subdiagonal, last column -c_k/c_n."""
    n = p.degree
    if n < 1:
        raise InvalidParameter(f"companion matrix needs degree >= 1, got {n}")
    lead = p.leading_coefficient
    C = [[mpc(0)] * n for _ in range(n)]
    for i in range(1, n):
        C[i][i - 1] = mpc(1)
    for i in range(n):
        C[i][n - 1] = -p.coefficient(i) / lead
    return C


def polynomial_zeros_oracle(p: ComplexPolynomial, ctx: PrecisionContext | None = None) -> Spectrum:
    """Zeros of p from its balanced companion matrix."""
    with precision_scope(ctx):
        return _shifted_qr(balance_matrix(companion_matrix(p)))


# === COMPARISON ===

def match_spectra(a: Spectrum | Sequence[object], b: Spectrum | Sequence[object]) -> mpf:
    """Largest distance under the optimal one-to-one pairing of two multisets."""
    left = [mpc(v) for v in (a.values if isinstance(a, Spectrum) else a)]
    right = [mpc(v) for v in (b.values if isinstance(b, Spectrum) else b)]
    if len(left) != len(right):
        raise InvalidParameter(f"cannot pair spectra of sizes {len(left)} and {len(right)}")
    if not left:
        return mpf(0)
    cost = np.array([[float(abs(x - y)) for y in right] for x in left])
    rows, cols = linear_sum_assignment(cost)
    return max(abs(left[i] - right[j]) for i, j in zip(rows, cols))
