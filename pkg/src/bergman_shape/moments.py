#!/usr/bin/env python3
"""
Complex area moments μ_kj = ∫_G z^k conj(z)^j dA.

Moments are computed on the boundary through the complex Green identity

    μ_kj = 1 / (2i (j+1)) ∮_Γ z^k conj(z)^{j+1} dz,

exactly on polygon edges (Gauss-Legendre with enough nodes to integrate the
polynomial integrand) and by the periodic trapezoid rule on parametric
boundaries.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Literal

from mpmath import mp, mpc, mpf
from mpmath.calculus.quadrature import GaussLegendre
from pydantic import BaseModel, Field, model_validator

from bergman_shape.errors import (
    DegreeExceedsMoments,
    IncompleteRealMoments,
    InsufficientNodes,
    InvalidParameter,
    InvalidPolygon,
    NonHermitianInput,
    NonJordanBoundary,
)
from bergman_shape.faber import (
    LaurentMap,
    ellipse_map,
    hypocycloid_map,
    laurent_derivative,
    laurent_eval,
    triangle_coefficients,
    unit_disk_map,
)
from bergman_shape.polynomials import PrecisionContext, current_context, precision_scope, to_complex

NamedShape = Literal["unit-disk", "ellipse", "equilateral-triangle", "hypocycloid-3", "square"]
NumberText = float | str

DEFAULT_SEMIAXES = (1.25, 1.0)
JORDAN_RESOLUTION = 256

# (z, dz/dθ) at θ_g = 2πg/nodes, g = 0..nodes-1
BoundaryPath = Callable[[int], list[tuple[mpc, mpc]]]

_gauss_legendre = GaussLegendre(mp)


# === DOMAIN SPECIFICATION ===

class DomainSpec(BaseModel):
    """Test domain: a polygon, an exact Laurent boundary or a named shape."""

    type: Literal["polygon", "laurent", "named"] = Field(description="Domain variant")
    vertices: list[tuple[NumberText, NumberText]] | None = Field(
        default=None, description="Polygon vertices [re, im], counterclockwise"
    )
    b: NumberText | None = Field(default=None, description="Capacity of a Laurent boundary")
    coeffs: list[tuple[NumberText, NumberText]] = Field(
        default_factory=list, description="Laurent coefficients b_0..b_m as [re, im]"
    )
    name: NamedShape | None = Field(default=None, description="Named reference shape")
    semiaxes: tuple[NumberText, NumberText] = Field(
        default=DEFAULT_SEMIAXES, description="Ellipse semiaxes (a, b), a >= b"
    )

    @model_validator(mode="after")
    def _check_variant(self) -> DomainSpec:
        if self.type == "polygon" and self.vertices is None:
            raise ValueError("polygon domains need 'vertices'")
        if self.type == "laurent" and self.b is None:
            raise ValueError("laurent domains need 'b'")
        if self.type == "named":
            if self.name is None:
                raise ValueError("named domains need 'name'")
            if self.name == "ellipse":
                a, b = (float(s) for s in self.semiaxes)
                if not (a > 0 and b > 0):
                    raise ValueError(f"ellipse semiaxes must be positive, got {self.semiaxes}")
        return self

    @classmethod
    def from_vertices(cls, vertices: Sequence[complex]) -> DomainSpec:
        return cls(type="polygon", vertices=[(float(v.real), float(v.imag)) for v in vertices])

    @classmethod
    def from_name(cls, name: NamedShape, semiaxes: tuple[NumberText, NumberText] = DEFAULT_SEMIAXES) -> DomainSpec:
        return cls(type="named", name=name, semiaxes=semiaxes)

    @property
    def is_polygonal(self) -> bool:
        return self.type == "polygon" or self.name in ("equilateral-triangle", "square")

    def polygon_vertices(self) -> list[mpc]:
        """Vertices at the active precision."""
        if self.type == "polygon":
            return [to_complex(list(v)) for v in self.vertices or []]
        if self.name == "equilateral-triangle":
            return [mp.expj(2 * mp.pi * k / 3) for k in range(3)]
        if self.name == "square":
            return [mpc(1, -1), mpc(1, 1), mpc(-1, 1), mpc(-1, -1)]
        raise InvalidParameter(f"domain {self.label} is not a polygon")

    def boundary_map(self) -> LaurentMap:
        """Exterior map tracing a smooth boundary on |w| = 1."""
        if self.type == "laurent":
            return LaurentMap.from_values(self.b, [list(c) for c in self.coeffs])
        if self.name == "unit-disk":
            return unit_disk_map()
        if self.name == "ellipse":
            return ellipse_map(*self.semiaxes)
        if self.name == "hypocycloid-3":
            return hypocycloid_map()
        raise InvalidParameter(f"domain {self.label} has no Laurent boundary")

    def reference_map(self, m_max: int) -> LaurentMap | None:
        """Exact exterior map when one is known, otherwise None."""
        if self.name == "equilateral-triangle":
            return triangle_coefficients(m_max)
        if self.type == "polygon" or self.name == "square":
            return None
        return self.boundary_map()

    @property
    def label(self) -> str:
        if self.type == "named":
            return str(self.name)
        return self.type


# === MOMENT TABLES ===

@dataclass(frozen=True)
class MomentMatrix:
    """Hermitian table μ_kj for 0 <= k, j <= degree."""

    degree: int
    entries: tuple[tuple[mpc, ...], ...]
    hermitian_deviation: mpf = field(default_factory=lambda: mpf(0))

    @classmethod
    def from_raw(cls, rows: Sequence[Sequence[object]]) -> MomentMatrix:
        """Enforce Hermitian symmetry by conjugate averaging and record the deviation."""
        size = len(rows)
        raw = [[to_complex(rows[k][j]) for j in range(size)] for k in range(size)]
        scale = max((abs(v) for row in raw for v in row), default=mpf(0)) or mpf(1)
        deviation = mpf(0)
        entries = [[mpc(0)] * size for _ in range(size)]
        for k in range(size):
            for j in range(k, size):
                a, b = raw[k][j], mp.conj(raw[j][k])
                deviation = max(deviation, abs(a - b))
                avg = (a + b) / 2
                if k == j:
                    avg = mpc(avg.real)
                entries[k][j] = avg
                entries[j][k] = mp.conj(avg)
        deviation = deviation / scale
        if deviation > current_context().tolerance:
            logging.warning(f"moment table deviates from Hermitian symmetry by {mp.nstr(deviation, 6)} (relative)")
        return cls(size - 1, tuple(tuple(row) for row in entries), deviation)

    @classmethod
    def from_upper(cls, values: dict[tuple[int, int], object], degree: int) -> MomentMatrix:
        """Complete a table given by its k <= j entries (lower entries, if present, are averaged in)."""
        rows: list[list[object]] = [[mpc(0)] * (degree + 1) for _ in range(degree + 1)]
        for k in range(degree + 1):
            for j in range(k, degree + 1):
                if (k, j) not in values:
                    raise DegreeExceedsMoments(f"moment ({k}, {j}) missing from a degree-{degree} table")
                upper = to_complex(values[(k, j)])
                lower = to_complex(values[(j, k)]) if (j, k) in values else mp.conj(upper)
                rows[k][j] = upper
                rows[j][k] = lower
        return cls.from_raw(rows)

    def entry(self, k: int, j: int) -> mpc:
        if not (0 <= k <= self.degree and 0 <= j <= self.degree):
            raise DegreeExceedsMoments(f"moment ({k}, {j}) beyond table degree {self.degree}")
        return self.entries[k][j]

    def row(self, k: int) -> tuple[mpc, ...]:
        if not 0 <= k <= self.degree:
            raise DegreeExceedsMoments(f"moment row {k} beyond table degree {self.degree}")
        return self.entries[k]

    @property
    def area(self) -> mpf:
        return self.entries[0][0].real

    def max_norm(self) -> mpf:
        return max(abs(v) for row in self.entries for v in row)

    def truncated(self, degree: int) -> MomentMatrix:
        if not 0 <= degree <= self.degree:
            raise DegreeExceedsMoments(f"cannot truncate a degree-{self.degree} table to degree {degree}")
        rows = tuple(row[: degree + 1] for row in self.entries[: degree + 1])
        return MomentMatrix(degree, rows, self.hermitian_deviation)

    def scaled(self, rho: object) -> MomentMatrix:
        """Moments of ρG: μ_kj ρ^{k+j+2}."""
        r = mp.mpf(rho)
        if not r > 0:
            raise InvalidParameter(f"scale factor must be positive, got {rho}")
        rows = tuple(
            tuple(v * r ** (k + j + 2) for j, v in enumerate(row)) for k, row in enumerate(self.entries)
        )
        return MomentMatrix(self.degree, rows, self.hermitian_deviation)

    def rotated(self, phi: object) -> MomentMatrix:
        """Moments of e^{iφ}G: μ_kj e^{i(k-j)φ}."""
        angle = mp.mpf(phi)
        rows = tuple(
            tuple(v * mp.expj((k - j) * angle) for j, v in enumerate(row)) for k, row in enumerate(self.entries)
        )
        return MomentMatrix(self.degree, rows, self.hermitian_deviation)

    def gram_pivots(self) -> list[mpf]:
        """LDL^H pivots of the monomial Gram matrix; stops at the first nonpositive pivot."""
        size = self.degree + 1
        L = [[mpc(0)] * size for _ in range(size)]
        pivots: list[mpf] = []
        for k in range(size):
            d = (self.entries[k][k] - mp.fsum(abs(L[k][i]) ** 2 * pivots[i] for i in range(k))).real
            pivots.append(d)
            if d <= 0:
                break
            L[k][k] = mpc(1)
            for j in range(k + 1, size):
                s = self.entries[j][k] - mp.fsum(L[j][i] * mp.conj(L[k][i]) * pivots[i] for i in range(k))
                L[j][k] = s / d
        return pivots

    def is_positive_semidefinite(self) -> bool:
        tol = current_context().tolerance
        pivots = self.gram_pivots()
        return all(d > -tol * abs(self.entries[k][k]) for k, d in enumerate(pivots))


@dataclass(frozen=True)
class RealMomentArray:
    """τ_mn = ∫_G x^m y^n dA.

    ``triangular`` covers m + n <= 2 * degree, ``rectangular`` covers
    m, n <= degree.
    """

    degree: int
    entries: dict[tuple[int, int], mpf] = field(default_factory=dict)
    layout: Literal["triangular", "rectangular"] = "triangular"

    def __post_init__(self) -> None:
        for key, value in self.entries.items():
            if not mp.isfinite(value):
                raise InvalidParameter(f"real moment {key} is not finite")
        if self.entries.get((0, 0), mpf(0)) <= 0:
            raise InvalidParameter("real moment tau_00 (area) must be positive")

    def entry(self, m: int, n: int) -> mpf:
        try:
            return self.entries[(m, n)]
        except KeyError:
            raise IncompleteRealMoments(f"real moment tau_{m},{n} is missing") from None

    @property
    def complex_degree(self) -> int:
        """Largest N whose complex moments these entries determine."""
        return self.degree if self.layout == "triangular" else self.degree // 2


# === POLYGONS ===

def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


def _segments_touch(p1: complex, p2: complex, q1: complex, q2: complex, proper_only: bool) -> bool:
    d1 = _cross(q2 - q1, p1 - q1)
    d2 = _cross(q2 - q1, p2 - q1)
    d3 = _cross(p2 - p1, q1 - p1)
    d4 = _cross(p2 - p1, q2 - p1)
    if ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4)):
        return True
    if proper_only:
        return False

    def on_segment(a: complex, b: complex, c: complex, d: float) -> bool:
        return d == 0 and min(a.real, b.real) <= c.real <= max(a.real, b.real) and min(
            a.imag, b.imag
        ) <= c.imag <= max(a.imag, b.imag)

    return (
        on_segment(q1, q2, p1, d1)
        or on_segment(q1, q2, p2, d2)
        or on_segment(p1, p2, q1, d3)
        or on_segment(p1, p2, q2, d4)
    )


def _closed_polyline_crosses(points: Sequence[complex], proper_only: bool) -> bool:
    count = len(points)
    for a in range(count):
        p1, p2 = points[a], points[(a + 1) % count]
        for c in range(a + 2, count):
            if a == 0 and c == count - 1:
                continue
            if _segments_touch(p1, p2, points[c], points[(c + 1) % count], proper_only):
                return True
    return False


def validate_polygon(vertices: Sequence[mpc]) -> None:
    """Raise InvalidPolygon unless the polygon is simple, counterclockwise and has >= 3 vertices."""
    if len(vertices) < 3:
        raise InvalidPolygon(f"polygon needs at least 3 vertices, got {len(vertices)}")
    points = [complex(v) for v in vertices]
    for a in range(len(points)):
        if points[a] == points[(a + 1) % len(points)]:
            raise InvalidPolygon(f"polygon has a repeated vertex at index {a}")
    if _closed_polyline_crosses(points, proper_only=False):
        raise InvalidPolygon("polygon edges intersect")
    doubled_area = mp.fsum(
        (mp.conj(vertices[a]) * vertices[(a + 1) % len(vertices)]).imag for a in range(len(vertices))
    )
    if doubled_area <= 0:
        raise InvalidPolygon("polygon vertices must be listed counterclockwise")


def _gauss_legendre_rule(points: int) -> list[tuple[mpf, mpf]]:
    """Smallest cached rule on [-1, 1] with at least ``points`` nodes."""
    degree = 1
    while 3 * 2 ** (degree - 1) < points:
        degree += 1
    return _gauss_legendre.get_nodes(-1, 1, degree, mp.prec)


def polygon_moments(spec: DomainSpec, N: int, ctx: PrecisionContext | None = None) -> MomentMatrix:
    """Moments of a polygon up to degree N.

    On each edge z = c + s h, s in [-1, 1], the integrand is a polynomial of
    degree <= 2N+1 in s, so an (N+1)-point Gauss-Legendre rule is exact.
    """
    if N < 0:
        raise InvalidParameter(f"moment degree must be nonnegative, got {N}")
    with precision_scope(ctx):
        vertices = spec.polygon_vertices()
        validate_polygon(vertices)
        rule = _gauss_legendre_rule(N + 1)

        nodes: list[mpc] = []
        weights: list[mpc] = []
        for a, z0 in enumerate(vertices):
            z1 = vertices[(a + 1) % len(vertices)]
            c, h = (z0 + z1) / 2, (z1 - z0) / 2
            for s, w in rule:
                nodes.append(c + s * h)
                weights.append(w * h)

        raw = _contour_table(nodes, weights, N)
        logging.debug(f"polygon moments to degree {N}: {len(vertices)} edges, {len(rule)} nodes per edge")
        return MomentMatrix.from_raw(raw)


def _contour_table(nodes: Sequence[mpc], weights: Sequence[mpc], N: int) -> list[list[mpc]]:
    """μ_kj = Σ_g weights_g z_g^k conj(z_g)^{j+1} / (2i(j+1))."""
    left: list[list[mpc]] = [list(weights)]
    for _ in range(N):
        left.append([v * z for v, z in zip(left[-1], nodes)])
    conj_nodes = [mp.conj(z) for z in nodes]
    right: list[list[mpc]] = [conj_nodes]
    for _ in range(N):
        right.append([v * z for v, z in zip(right[-1], conj_nodes)])

    rows = []
    for k in range(N + 1):
        rows.append(
            [mpc(mp.fdot(left[k], right[j])) / (2j * (j + 1)) for j in range(N + 1)]
        )
    return rows


# === PARAMETRIC BOUNDARIES ===

def laurent_path(L: LaurentMap) -> BoundaryPath:
    """z = Ψ(e^{iθ}), dz/dθ = i w Ψ'(w)."""

    def sample(nodes: int) -> list[tuple[mpc, mpc]]:
        out = []
        for g in range(nodes):
            w = mp.expj(2 * mp.pi * g / nodes)
            out.append((laurent_eval(L, w), 1j * w * laurent_derivative(L, w)))
        return out

    return sample


def polygon_path(vertices: Sequence[mpc]) -> BoundaryPath:
    """Piecewise-linear trace, each edge taking an equal share of θ.

    The edge parameter t(s) = s - sin(2πs)/(2π) has vanishing derivatives at
    the corners, so the trapezoid rule converges at high order.
    """
    verts = [to_complex(v) for v in vertices]
    edges = len(verts)

    def sample(nodes: int) -> list[tuple[mpc, mpc]]:
        out = []
        speed = mpf(edges) / (2 * mp.pi)
        for g in range(nodes):
            e = g * edges // nodes
            s = mpf(g * edges - e * nodes) / nodes
            z0, z1 = verts[e], verts[(e + 1) % edges]
            t = s - mp.sin(2 * mp.pi * s) / (2 * mp.pi)
            dt = 1 - mp.cos(2 * mp.pi * s)
            out.append((z0 + t * (z1 - z0), (z1 - z0) * dt * speed))
        return out

    return sample


def check_jordan(path: BoundaryPath, resolution: int = JORDAN_RESOLUTION) -> None:
    """Raise NonJordanBoundary if the sampled closed curve crosses itself."""
    points = [complex(z) for z, _ in path(resolution)]
    if _closed_polyline_crosses(points, proper_only=True):
        raise NonJordanBoundary(f"boundary curve self-intersects at sampling resolution {resolution}")


def default_nodes(N: int) -> int:
    return max(256, 8 * (N + 2))


def contour_moments(path: BoundaryPath, N: int, nodes: int) -> MomentMatrix:
    """Trapezoid rule on a 2π-periodic parametrization."""
    if nodes < 4 * (N + 2):
        raise InsufficientNodes(f"{nodes} quadrature nodes is below the required {4 * (N + 2)} for degree {N}")
    samples = path(nodes)
    step = 2 * mp.pi / nodes
    raw = _contour_table([z for z, _ in samples], [dz * step for _, dz in samples], N)
    return MomentMatrix.from_raw(raw)


def parametric_moments(
    spec: DomainSpec,
    N: int,
    nodes: int | None = None,
    ctx: PrecisionContext | None = None,
    jordan_resolution: int = JORDAN_RESOLUTION,
) -> MomentMatrix:
    """Moments of a Laurent-bounded or named domain by contour quadrature.

    Polygonal specs are traced with :func:`polygon_path`.

    Args:
        spec: Domain to integrate over
        N: Largest moment index; the table holds μ_kj for k, j <= N
        nodes: Quadrature nodes along the boundary, at least 4(N + 2); None picks ``default_nodes(N)``
        ctx: Working precision, or None for the active one
        jordan_resolution: Samples used to check the boundary for self-intersection

    Returns:
        The Hermitian moment table of degree N

    Raises:
        InsufficientNodes: if ``nodes`` is below 4(N + 2)
        NonJordanBoundary: if the sampled Laurent boundary crosses itself
    """
    if N < 0:
        raise InvalidParameter(f"moment degree must be nonnegative, got {N}")
    nodes = default_nodes(N) if nodes is None else nodes
    if nodes < 4 * (N + 2):
        raise InsufficientNodes(f"{nodes} quadrature nodes is below the required {4 * (N + 2)} for degree {N}")
    with precision_scope(ctx):
        if spec.is_polygonal:
            vertices = spec.polygon_vertices()
            validate_polygon(vertices)
            path = polygon_path(vertices)
        else:
            path = laurent_path(spec.boundary_map())
            check_jordan(path, jordan_resolution)
        return contour_moments(path, N, nodes)


def domain_moments(
    spec: DomainSpec, N: int, nodes: int | None = None, ctx: PrecisionContext | None = None
) -> MomentMatrix:
    """Exact polygon moments when possible, quadrature otherwise."""
    if spec.is_polygonal:
        return polygon_moments(spec, N, ctx)
    return parametric_moments(spec, N, nodes, ctx)


# === REAL <-> COMPLEX CONVERSION ===

def _i_power(p: int) -> mpc:
    return (mpc(1), mpc(0, 1), mpc(-1), mpc(0, -1))[p % 4]


def real_to_complex(tau: RealMomentArray, degree: int | None = None) -> MomentMatrix:
    """μ_mn = Σ_j Σ_k C(m,j) C(n,k) i^{m-j} (-i)^{n-k} τ_{j+k, m+n-j-k}."""
    N = tau.complex_degree if degree is None else degree
    if N < 0:
        raise InvalidParameter(f"moment degree must be nonnegative, got {N}")
    rows: list[list[mpc]] = [[mpc(0)] * (N + 1) for _ in range(N + 1)]
    for m in range(N + 1):
        for n in range(N + 1):
            terms = []
            for j in range(m + 1):
                for k in range(n + 1):
                    coeff = math.comb(m, j) * math.comb(n, k) * _i_power(m - j) * _i_power(3 * (n - k))
                    terms.append((coeff, tau.entry(j + k, m + n - j - k)))
            rows[m][n] = mpc(mp.fdot(terms))
    return MomentMatrix.from_raw(rows)


def complex_to_real(mu: MomentMatrix) -> RealMomentArray:
    """τ_mn = (-i)^n 2^{-m-n} Σ_j Σ_k (-1)^{n-k} C(m,j) C(n,k) μ_{j+k, m+n-j-k}, for m + n <= N."""
    bits = current_context().mantissa_bits
    limit = mpf(2) ** (-bits / 2)
    if mu.hermitian_deviation > limit:
        raise NonHermitianInput(
            f"moment table Hermitian deviation {mp.nstr(mu.hermitian_deviation, 6)} exceeds {mp.nstr(limit, 3)}"
        )
    N = mu.degree
    entries: dict[tuple[int, int], mpf] = {}
    worst_residue = mpf(0)
    for m in range(N + 1):
        for n in range(N + 1 - m):
            terms = []
            for j in range(m + 1):
                for k in range(n + 1):
                    sign = -1 if (n - k) % 2 else 1
                    terms.append((sign * math.comb(m, j) * math.comb(n, k), mu.entry(j + k, m + n - j - k)))
            value = _i_power(3 * n) * mp.fdot(terms) / mpf(2) ** (m + n)
            worst_residue = max(worst_residue, abs(value.imag) / max(abs(value), mpf(1)))
            entries[(m, n)] = value.real
    if worst_residue > limit:
        raise NonHermitianInput(f"real moments carry imaginary residue {mp.nstr(worst_residue, 6)}")
    return RealMomentArray(N // 2, entries, "triangular")
