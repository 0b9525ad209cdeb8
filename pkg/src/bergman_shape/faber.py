#!/usr/bin/env python3
"""
Exterior Laurent maps, Faber polynomials of the second kind and the Toeplitz
symbol matrix, plus the exact reference maps used by the test shapes.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Literal

from mpmath import mp, mpc, mpf

from bergman_shape.arnoldi import HessenbergMatrix
from bergman_shape.errors import EvaluationOverflow, InvalidParameter, ZeroArgument
from bergman_shape.polynomials import (
    ComplexPolynomial,
    current_context,
    linear_combination,
    multiply_by_z,
    to_complex,
)

# cap of the equilateral triangle with vertices 1, e^{2πi/3}, e^{4πi/3};
# closed form 3 Γ(1/3)^3 / (8 π^2)
TRIANGLE_CAPACITY = "0.730499243103"

FaberSeed = Literal["gamma", "capacity"]


# === LAURENT MAPS ===

@dataclass(frozen=True)
class LaurentMap:
    """Truncated exterior map Ψ(w) = b w + b_0 + b_1/w + ... + b_m/w^m."""

    b: mpf
    coeffs: tuple[mpc, ...] = (mpc(0),)
    imag_residue: mpf = field(default_factory=lambda: mpf(0))

    def __post_init__(self) -> None:
        b = mpf(self.b)
        if not b > 0:
            raise InvalidParameter(f"capacity b must be positive, got {mp.nstr(b, 12)}")
        coeffs = tuple(to_complex(c) for c in self.coeffs) or (mpc(0),)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "imag_residue", mpf(self.imag_residue))

    @classmethod
    def from_values(cls, b: object, coeffs: Iterable[object] = ()) -> LaurentMap:
        return cls(mp.mpf(b), tuple(to_complex(c) for c in coeffs))

    @classmethod
    def from_estimates(cls, b_est: object, coeffs: Sequence[object]) -> LaurentMap:
        """Build from Hessenberg estimates, keeping only the real part of b."""
        b_complex = to_complex(b_est)
        residue = abs(b_complex.imag)
        if residue > current_context().tolerance * abs(b_complex.real):
            logging.warning(f"capacity estimate has imaginary part {mp.nstr(residue, 6)}; using its real part")
        return cls(b_complex.real, tuple(to_complex(c) for c in coeffs), residue)

    @property
    def gamma(self) -> mpf:
        return 1 / self.b

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, j: int) -> mpc:
        """b_j, zero beyond the truncation order."""
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else mpc(0)

    def truncated(self, m: int) -> LaurentMap:
        if m < 0:
            raise InvalidParameter(f"truncation order must be nonnegative, got {m}")
        return LaurentMap(self.b, self.coeffs[: m + 1], self.imag_residue)


def laurent_eval(L: LaurentMap, w: object) -> mpc:
    """b w + b_0 + Σ_{k=1..m} b_k w^{-k}."""
    x = to_complex(w)
    if x == 0:
        raise ZeroArgument("Laurent series cannot be evaluated at w = 0")
    u = 1 / x
    tail = mpc(0)
    for c in reversed(L.coeffs[1:]):
        tail = (tail + c) * u
    value = L.b * x + L.coeffs[0] + tail
    if not (mp.isfinite(value.real) and mp.isfinite(value.imag)):
        raise EvaluationOverflow(f"Laurent map overflowed at w = {mp.nstr(x, 8)}")
    return value


def laurent_derivative(L: LaurentMap, w: object) -> mpc:
    """Ψ'(w) = b - Σ_{k=1..m} k b_k w^{-k-1}."""
    x = to_complex(w)
    if x == 0:
        raise ZeroArgument("Laurent series cannot be differentiated at w = 0")
    u = 1 / x
    tail = mpc(0)
    for k in range(L.order, 0, -1):
        tail = (tail + k * L.coeffs[k]) * u
    return L.b - tail * u


# === REFERENCE MAPS ===

def unit_disk_map() -> LaurentMap:
    return LaurentMap(mpf(1))


def ellipse_map(a: object, b: object) -> LaurentMap:
    """Joukowski map onto the exterior of the ellipse with semiaxes a >= b."""
    a_, b_ = mp.mpf(a), mp.mpf(b)
    if not (a_ > 0 and b_ > 0):
        raise InvalidParameter(f"ellipse semiaxes must be positive, got ({a}, {b})")
    return LaurentMap((a_ + b_) / 2, (mpc(0), mpc((a_ - b_) / 2)))


def hypocycloid_map() -> LaurentMap:
    """Ψ(w) = w + 1/(2 w^2), the 3-cusped hypocycloid."""
    return LaurentMap(mpf(1), (mpc(0), mpc(0), mpc(mpf(1) / 2)))


def _binomial_two_thirds(m: int) -> mpf:
    value = mpf(1)
    alpha = mpf(2) / 3
    for i in range(m):
        value = value * (alpha - i) / (i + 1)
    return value


def triangle_coefficients(m_max: int) -> LaurentMap:
    """Exterior map of the equilateral triangle with vertices at the cube roots of unity.

    b_n = cap (-1)^{j+1} C(2/3, j) / n when n = 3j - 1, otherwise 0.
    """
    if m_max < 0:
        raise InvalidParameter(f"m_max must be nonnegative, got {m_max}")
    cap = mp.mpf(TRIANGLE_CAPACITY)
    coeffs = [mpc(0)] * (m_max + 1)
    for n in range(2, m_max + 1, 3):
        j = (n + 1) // 3
        coeffs[n] = mpc((-1) ** (j + 1) * cap * _binomial_two_thirds(j) / n)
    return LaurentMap(cap, tuple(coeffs))


# === FABER POLYNOMIALS OF THE SECOND KIND ===

@dataclass(frozen=True)
class FaberSequence:
    """G_0..G_n; ``truncated`` marks a map that ran out of coefficients."""

    polys: tuple[ComplexPolynomial, ...]
    truncated: bool = False

    @property
    def order(self) -> int:
        return len(self.polys) - 1


def faber_second_kind(L: LaurentMap, n: int, seed: FaberSeed = "gamma") -> FaberSequence:
    """G_{k+1} = (z G_k - Σ_{j=0..k} b_j G_{k-j}) / b for k = 0..n-1.

    ``seed="gamma"`` starts from G_0 = 1/b so that G_k has leading
    coefficient b^{-(k+1)}; ``seed="capacity"`` starts from G_0 = b.
    Pass ``seed="capacity"`` when the sequence must open with the constant
    G_0 = b; the default gives G_0 = 1/b.
    """
    if n < 0:
        raise InvalidParameter(f"n must be nonnegative, got {n}")
    if seed == "gamma":
        g0 = L.gamma
    elif seed == "capacity":
        g0 = L.b
    else:
        raise InvalidParameter(f"seed must be 'gamma' or 'capacity', got {seed!r}")

    polys = [ComplexPolynomial.constant(g0)]
    inv_b = 1 / L.b
    for k in range(n):
        tail = linear_combination([(L.coefficient(j), polys[k - j]) for j in range(k + 1)])
        polys.append((multiply_by_z(polys[k]) - tail).scale(inv_b))
    return FaberSequence(tuple(polys), truncated=L.order < n)


def recurrence_residual(L: LaurentMap, seq: FaberSequence) -> mpf:
    """max |coeff of z G_k - b G_{k+1} - Σ b_j G_{k-j}|, relative to the largest coefficient."""
    worst = mpf(0)
    scale = max((abs(c) for g in seq.polys for c in g.coeffs), default=mpf(1))
    for k in range(seq.order):
        rhs = seq.polys[k + 1].scale(L.b) + linear_combination(
            [(L.coefficient(j), seq.polys[k - j]) for j in range(k + 1)]
        )
        diff = multiply_by_z(seq.polys[k]) - rhs
        worst = max([worst] + [abs(c) for c in diff.coeffs])
    return worst / scale


def toeplitz_matrix(L: LaurentMap, n: int) -> HessenbergMatrix:
    """Columns 0..n-1 of T_Ψ: (k, j) = b_{j-k} for k <= j and b on the subdiagonal."""
    if n < 1:
        raise InvalidParameter(f"Toeplitz order must be at least 1, got {n}")
    b = mpc(L.b)
    columns = [tuple(L.coefficient(j - k) for k in range(j + 1)) + (b,) for j in range(n)]
    return HessenbergMatrix(tuple(columns))
