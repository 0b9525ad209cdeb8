#!/usr/bin/env python3
"""
Exception hierarchy for the shape-recovery pipeline.

Input problems subclass ValueError and numerical breakdowns subclass
ArithmeticError, so callers that only know the builtin families still catch
them. Every class carries the exit code the command-line front door returns.
"""


class ShapeRecoveryError(Exception):
    """Base class for all pipeline errors."""

    exit_code = 3


# === SPECIFICATION / USAGE ERRORS (exit 2) ===

class SpecificationError(ShapeRecoveryError, ValueError):
    """Input data or parameters violate an operation's precondition."""

    exit_code = 2


class InvalidPolygon(SpecificationError):
    """Polygon has fewer than 3 vertices, self-intersects or is clockwise."""


class NonJordanBoundary(SpecificationError):
    """Sampled boundary curve crosses itself."""


class InsufficientNodes(SpecificationError):
    """Quadrature node count is below the accuracy precondition."""


class IncompleteRealMoments(SpecificationError):
    """Real moment array lacks entries required for the requested degree."""


class DegreeExceedsMoments(SpecificationError):
    """A polynomial degree needs moments beyond the table's degree."""


class IndexOutOfRange(SpecificationError):
    """Requested Hessenberg entry or diagonal is outside the stored matrix."""


class ZeroArgument(SpecificationError):
    """Laurent series evaluated at w = 0."""


class InvalidParameter(SpecificationError):
    """A scalar parameter (n, m, K, precision, ...) is out of range."""


# === NUMERICAL ERRORS (exit 3) ===

class NumericalError(ShapeRecoveryError, ArithmeticError):
    """A computation broke down numerically."""

    exit_code = 3


class MomentsNotPositiveDefinite(NumericalError):
    """Residual norm vanished: moments are degenerate or inconsistent."""


class NonHermitianInput(NumericalError):
    """Moment table deviates from Hermitian symmetry beyond tolerance."""


class EvaluationOverflow(NumericalError):
    """Result left the finite range of the working precision."""


class NoConvergence(NumericalError):
    """Shifted QR iteration exhausted its iteration budget."""


# === PRECISION POLICY (exit 4) ===

class PrecisionTooLow(ShapeRecoveryError):
    """Working precision is below the strict-mode requirement."""

    exit_code = 4
