#!/usr/bin/env python3
"""
Arbitrary-precision complex polynomials and the moment inner product.

Scalars are mpmath ``mpc`` values evaluated under a single working precision
per pipeline run. Polynomials are dense in the monomial basis, which is
exactly what the moment bilinear form consumes.
"""

from __future__ import annotations

import contextlib
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

from mpmath import mp, mpc, mpf

from bergman_shape.errors import DegreeExceedsMoments, EvaluationOverflow, InvalidParameter

if TYPE_CHECKING:
    from bergman_shape.moments import MomentMatrix


MIN_MANTISSA_BITS = 53


# === PRECISION CONTEXT ===

@dataclass(frozen=True)
class PrecisionContext:
    """Binary working precision shared by every operation of one run.

    Rounding is mpmath's default round-to-nearest.
    """

    mantissa_bits: int = MIN_MANTISSA_BITS

    def __post_init__(self) -> None:
        if self.mantissa_bits < MIN_MANTISSA_BITS:
            raise InvalidParameter(
                f"mantissa_bits must be at least {MIN_MANTISSA_BITS}, got {self.mantissa_bits}"
            )

    def activate(self) -> contextlib.AbstractContextManager[None]:
        """Run the enclosed block at this precision."""
        return mp.workprec(self.mantissa_bits)

    @property
    def tolerance(self) -> mpf:
        """Relative tolerance 2^-(bits-10) used by symmetry checks."""
        return mpf(2) ** (-(self.mantissa_bits - 10))

    @property
    def epsilon(self) -> mpf:
        return mpf(2) ** (-self.mantissa_bits)


@contextlib.contextmanager
def precision_scope(ctx: PrecisionContext | None) -> Iterator[None]:
    """Activate ``ctx`` if given, otherwise keep the caller's precision."""
    if ctx is None:
        yield
    else:
        with ctx.activate():
            yield


def current_context() -> PrecisionContext:
    return PrecisionContext(max(mp.prec, MIN_MANTISSA_BITS))


def to_complex(value: object) -> mpc:
    """Convert numbers, decimal strings or ``[re, im]`` pairs to ``mpc``."""
    if isinstance(value, (list, tuple)):
        re, im = value
        return mpc(mp.mpf(re), mp.mpf(im))
    if isinstance(value, str):
        return mpc(mp.mpf(value))
    return mpc(value)


# === POLYNOMIALS ===

@dataclass(frozen=True)
class ComplexPolynomial:
    """Dense polynomial, coefficients ascending by degree.

    Trailing exact zeros are stripped, so the zero polynomial has no
    coefficients and degree -1.
    """

    coeffs: tuple[mpc, ...] = ()

    def __post_init__(self) -> None:
        coeffs = tuple(mpc(c) for c in self.coeffs)
        end = len(coeffs)
        while end > 0 and coeffs[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", coeffs[:end])

    @classmethod
    def from_coefficients(cls, values: Iterable[object]) -> ComplexPolynomial:
        return cls(tuple(to_complex(v) for v in values))

    @classmethod
    def constant(cls, value: object) -> ComplexPolynomial:
        return cls((to_complex(value),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading_coefficient(self) -> mpc:
        return self.coeffs[-1] if self.coeffs else mpc(0)

    def coefficient(self, k: int) -> mpc:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else mpc(0)

    def scale(self, alpha: object) -> ComplexPolynomial:
        a = to_complex(alpha)
        return ComplexPolynomial(tuple(a * c for c in self.coeffs))

    def conjugate(self) -> ComplexPolynomial:
        return ComplexPolynomial(tuple(mp.conj(c) for c in self.coeffs))

    def __add__(self, other: ComplexPolynomial) -> ComplexPolynomial:
        size = max(len(self.coeffs), len(other.coeffs))
        return ComplexPolynomial(tuple(self.coefficient(k) + other.coefficient(k) for k in range(size)))

    def __sub__(self, other: ComplexPolynomial) -> ComplexPolynomial:
        size = max(len(self.coeffs), len(other.coeffs))
        return ComplexPolynomial(tuple(self.coefficient(k) - other.coefficient(k) for k in range(size)))

    def __neg__(self) -> ComplexPolynomial:
        return self.scale(-1)


def multiply_by_z(p: ComplexPolynomial) -> ComplexPolynomial:
    """Shift coefficients up one degree (the Bergman shift action)."""
    if p.is_zero:
        return p
    return ComplexPolynomial((mpc(0),) + p.coeffs)


def evaluate(p: ComplexPolynomial, z: object) -> mpc:
    """Horner evaluation at the active precision."""
    x = to_complex(z)
    acc = mpc(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    if not (mp.isfinite(acc.real) and mp.isfinite(acc.imag)):
        raise EvaluationOverflow(f"evaluation of degree-{p.degree} polynomial at {mp.nstr(x, 8)} overflowed")
    return acc


def linear_combination(terms: Sequence[tuple[object, ComplexPolynomial]]) -> ComplexPolynomial:
    """Σ α_i p_i, accumulated per coefficient with one rounding each."""
    size = max((len(p.coeffs) for _, p in terms), default=0)
    alphas = [to_complex(a) for a, _ in terms]
    coeffs = []
    for k in range(size):
        coeffs.append(mp.fdot([(a, p.coefficient(k)) for a, (_, p) in zip(alphas, terms)]))
    return ComplexPolynomial(tuple(coeffs))


# === MOMENT INNER PRODUCT ===

def _require_degree(p: ComplexPolynomial, M: MomentMatrix) -> None:
    if p.degree > M.degree:
        raise DegreeExceedsMoments(
            f"polynomial of degree {p.degree} needs moments up to degree {p.degree}, table has {M.degree}"
        )


def moment_functional(q: ComplexPolynomial, M: MomentMatrix, rows: int | None = None) -> tuple[mpc, ...]:
    """Row sums u[a] = Σ_b μ_{a,b} conj(q_b), for a < rows.

    With these, ⟨p, q⟩ = Σ_a p_a u[a], so one pass over the moment table
    serves every later projection onto q.
    """
    _require_degree(q, M)
    rows = M.degree + 1 if rows is None else rows
    if rows > M.degree + 1:
        raise DegreeExceedsMoments(f"requested {rows} rows from a degree-{M.degree} moment table")
    width = len(q.coeffs)
    if width == 0:
        return tuple(mpc(0) for _ in range(rows))
    return tuple(mpc(mp.fdot(M.row(a)[:width], q.coeffs, conjugate=True)) for a in range(rows))


def pair_with_functional(p: ComplexPolynomial, u: Sequence[mpc]) -> mpc:
    """Σ_a p_a u[a]."""
    if p.is_zero:
        return mpc(0)
    if p.degree >= len(u):
        raise DegreeExceedsMoments(f"polynomial of degree {p.degree} paired with {len(u)} moment rows")
    return mpc(mp.fdot(p.coeffs, u[: len(p.coeffs)]))


def weighted_inner_product(p: ComplexPolynomial, q: ComplexPolynomial, M: MomentMatrix) -> mpc:
    """⟨p, q⟩ = Σ_a Σ_b p_a conj(q_b) μ_{a,b}."""
    _require_degree(p, M)
    u = moment_functional(q, M, rows=len(p.coeffs))
    return pair_with_functional(p, u)
