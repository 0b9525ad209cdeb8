#!/usr/bin/env python3
"""
Test cases for moment tables: exact polygon quadrature, parametric
boundaries, domain validation and the real/complex moment conversion.
"""

import random

import pytest
from mpmath import mp, mpc, mpf
from pydantic import ValidationError

from bergman_shape.errors import (
    DegreeExceedsMoments,
    IncompleteRealMoments,
    InsufficientNodes,
    InvalidParameter,
    InvalidPolygon,
    NonJordanBoundary,
)
from bergman_shape.moments import (
    DomainSpec,
    MomentMatrix,
    RealMomentArray,
    complex_to_real,
    default_nodes,
    domain_moments,
    parametric_moments,
    polygon_moments,
    real_to_complex,
    validate_polygon,
)

TIGHT = mpf("1e-13")


def close(a, b, tol=TIGHT):
    return abs(mpc(a) - mpc(b)) <= tol


@pytest.fixture
def unit_square():
    return DomainSpec.from_vertices([0, 1, 1 + 1j, 1j])


# === POLYGON MOMENTS ===

def test_unit_square_low_moments(double_precision, unit_square):
    """Area, first moment and polar moment of [0, 1]^2."""
    M = polygon_moments(unit_square, 3)
    assert close(M.entry(0, 0), 1)
    assert close(M.entry(1, 0), mpc(0.5, 0.5))
    assert close(M.entry(1, 1), mpf(2) / 3)
    assert M.area > 0


def test_moment_table_is_hermitian(double_precision, unit_square):
    """μ_jk = conj(μ_kj) exactly after symmetrization."""
    M = polygon_moments(unit_square, 4)
    for k in range(5):
        for j in range(5):
            assert M.entry(j, k) == mp.conj(M.entry(k, j))
        assert M.entry(k, k).imag == 0


def test_named_square_moments(double_precision):
    """[-1, 1]^2: area 4, μ_20 = 0, μ_11 = 8/3."""
    M = domain_moments(DomainSpec.from_name("square"), 4)
    assert close(M.area, 4)
    assert close(M.entry(2, 0), 0)
    assert close(M.entry(1, 1), mpf(8) / 3)


def test_triangle_moments_have_threefold_symmetry(double_precision):
    """μ_kj vanishes unless k ≡ j (mod 3)."""
    M = domain_moments(DomainSpec.from_name("equilateral-triangle"), 6)
    assert close(M.area, 3 * mp.sqrt(3) / 4)
    assert close(M.entry(1, 0), 0)
    assert close(M.entry(2, 1), 0)
    assert abs(M.entry(3, 0)) > mpf("1e-3")


def test_polygon_moments_agree_with_quadrature(high_precision):
    """Exact edge quadrature and the smoothed trapezoid rule agree."""
    spec = DomainSpec.from_vertices([0, 2, 2 + 1j, 0.5 + 1.5j])
    exact = polygon_moments(spec, 5)
    approx = parametric_moments(spec, 5, nodes=8192)
    assert exact.max_norm() > 0
    for k in range(6):
        for j in range(6):
            assert close(exact.entry(k, j), approx.entry(k, j), mpf("1e-10"))


def test_negative_degree_rejected(unit_square):
    """Moment degree must be nonnegative."""
    with pytest.raises(InvalidParameter):
        polygon_moments(unit_square, -1)


# === POLYGON VALIDATION ===

def test_too_few_vertices():
    """Two vertices is not a polygon."""
    with pytest.raises(InvalidPolygon, match="at least 3 vertices"):
        polygon_moments(DomainSpec.from_vertices([0, 1]), 2)


def test_clockwise_polygon_rejected():
    """Vertices must run counterclockwise."""
    with pytest.raises(InvalidPolygon, match="counterclockwise"):
        validate_polygon([mpc(0), mpc(0, 1), mpc(1, 1), mpc(1)])


def test_self_intersecting_polygon_rejected():
    """A bow tie has crossing edges."""
    with pytest.raises(InvalidPolygon, match="intersect"):
        validate_polygon([mpc(0), mpc(1, 1), mpc(1), mpc(0, 1)])


def test_repeated_vertex_rejected():
    """Consecutive duplicate vertices are refused."""
    with pytest.raises(InvalidPolygon, match="repeated"):
        validate_polygon([mpc(0), mpc(1), mpc(1), mpc(0, 1)])


# === PARAMETRIC BOUNDARIES ===

def test_unit_disk_parametric_moments(double_precision):
    """μ_kj = π/(k+1) δ_kj from the trapezoid rule."""
    M = domain_moments(DomainSpec.from_name("unit-disk"), 6)
    for k in range(7):
        for j in range(7):
            target = mp.pi / (k + 1) if k == j else 0
            assert close(M.entry(k, j), target, mpf("1e-12"))


def test_ellipse_area(double_precision):
    """Area of the ellipse with semiaxes 1.25 and 1 is 1.25 π."""
    M = domain_moments(DomainSpec.from_name("ellipse"), 4)
    assert close(M.area, 1.25 * mp.pi, mpf("1e-12"))


def test_default_nodes():
    """max(256, 8(N+2)) nodes."""
    assert default_nodes(10) == 256
    assert default_nodes(100) == 816


def test_insufficient_nodes():
    """Fewer than 4(N+2) nodes is refused."""
    with pytest.raises(InsufficientNodes):
        parametric_moments(DomainSpec.from_name("unit-disk"), 10, nodes=10)


def test_self_intersecting_laurent_boundary():
    """w + 1/w^2 loops around its own cusps."""
    spec = DomainSpec(type="laurent", b=1, coeffs=[(0, 0), (0, 0), (1, 0)])
    with pytest.raises(NonJordanBoundary):
        parametric_moments(spec, 4)


def test_domain_spec_variants_validated():
    """Each variant needs its own fields."""
    with pytest.raises(ValidationError):
        DomainSpec(type="polygon")
    with pytest.raises(ValidationError):
        DomainSpec(type="laurent")
    with pytest.raises(ValidationError):
        DomainSpec(type="named")
    with pytest.raises(ValidationError):
        DomainSpec(type="named", name="ellipse", semiaxes=(1, -1))


def test_reference_map_availability():
    """Closed-form maps exist for smooth shapes and the triangle only."""
    assert DomainSpec.from_name("unit-disk").reference_map(4) is not None
    assert DomainSpec.from_name("equilateral-triangle").reference_map(4).order == 4
    assert DomainSpec.from_name("square").reference_map(4) is None
    assert DomainSpec.from_vertices([0, 1, 1j]).reference_map(4) is None


# === MOMENT TABLE OPERATIONS ===

def test_from_upper_requires_full_triangle():
    """A missing k <= j entry is reported."""
    with pytest.raises(DegreeExceedsMoments):
        MomentMatrix.from_upper({(0, 0): 1, (0, 1): 0}, 1)


def test_entry_beyond_degree(unit_disk_moments):
    """Reads past the table degree raise."""
    with pytest.raises(DegreeExceedsMoments):
        unit_disk_moments.entry(12, 0)


def test_scaled_and_rotated(unit_disk_moments):
    """Scaling by ρ multiplies μ_kj by ρ^{k+j+2}; rotation keeps the diagonal."""
    scaled = unit_disk_moments.scaled(2)
    assert close(scaled.area, 4 * mp.pi)
    assert close(scaled.entry(1, 1), 16 * mp.pi / 2, mpf("1e-12"))
    rotated = unit_disk_moments.rotated(mp.pi / 5)
    assert close(rotated.entry(3, 3), unit_disk_moments.entry(3, 3))


def test_truncated(unit_disk_moments):
    """Leading block of a smaller degree."""
    small = unit_disk_moments.truncated(3)
    assert small.degree == 3
    assert small.entry(3, 3) == unit_disk_moments.entry(3, 3)
    with pytest.raises(DegreeExceedsMoments):
        unit_disk_moments.truncated(20)


def test_gram_pivots_of_disk(unit_disk_moments):
    """Monomials are already orthogonal on the disk, so pivots equal μ_kk."""
    pivots = unit_disk_moments.gram_pivots()
    assert len(pivots) == 12
    assert all(close(d, mp.pi / (k + 1)) for k, d in enumerate(pivots))
    assert unit_disk_moments.is_positive_semidefinite()


def test_indefinite_table_detected(double_precision):
    """A negative pivot marks the table as not positive semidefinite."""
    M = MomentMatrix.from_raw([[1, 2], [2, 1]])
    assert not M.is_positive_semidefinite()


@pytest.mark.parametrize(
    "name", ["unit-disk", "ellipse", "equilateral-triangle", "hypocycloid-3", "square"]
)
def test_gram_matrix_positive_definite_on_reference_domains(high_precision, name):
    """Every reference domain gives 31 positive pivots at degree 30."""
    pivots = domain_moments(DomainSpec.from_name(name), 30).gram_pivots()
    assert len(pivots) == 31
    assert all(d > 0 for d in pivots)


# === REAL MOMENTS ===

def test_complex_to_real_unit_square(double_precision, unit_square):
    """τ_mn = ∫ x^m y^n dA on [0, 1]^2."""
    tau = complex_to_real(polygon_moments(unit_square, 4))
    assert tau.layout == "triangular"
    assert close(tau.entry(0, 0), 1)
    assert close(tau.entry(1, 0), 0.5)
    assert close(tau.entry(1, 1), 0.25)
    assert close(tau.entry(2, 0), mpf(1) / 3)
    assert close(tau.entry(1, 2), mpf(1) / 6)


def test_real_to_complex_recovers_table(double_precision, unit_square):
    """Complex moments rebuilt from real ones match up to the covered degree."""
    M = polygon_moments(unit_square, 4)
    tau = complex_to_real(M)
    rebuilt = real_to_complex(tau)
    assert rebuilt.degree == tau.complex_degree == 2
    for k in range(3):
        for j in range(3):
            assert close(rebuilt.entry(k, j), M.entry(k, j), mpf("1e-12"))


@pytest.mark.parametrize("degree", [1, 2, 5, 8, 10])
def test_real_complex_round_trip_on_random_arrays(high_precision, degree):
    """τ to μ and back reproduces τ on every entry the complex table covers."""
    rng = random.Random(degree)
    entries = {
        (m, n): mpf(rng.uniform(-1, 1)) for m in range(2 * degree + 1) for n in range(2 * degree + 1 - m)
    }
    entries[(0, 0)] = mpf(1) + mpf(rng.random())
    tau = RealMomentArray(degree, entries)
    back = complex_to_real(real_to_complex(tau))
    for m in range(degree + 1):
        for n in range(degree + 1 - m):
            assert abs(back.entry(m, n) - tau.entry(m, n)) < mpf("1e-50"), (m, n)


def test_real_to_complex_missing_entries():
    """Asking for a degree the real array cannot supply raises."""
    tau = RealMomentArray(0, {(0, 0): mpf(1)})
    with pytest.raises(IncompleteRealMoments):
        real_to_complex(tau, 1)


def test_real_moment_array_requires_positive_area():
    """τ_00 is the area."""
    with pytest.raises(InvalidParameter):
        RealMomentArray(0, {(0, 0): mpf(0)})


def test_rectangular_complex_degree():
    """A rectangular array of side N covers complex degree N // 2."""
    entries = {(m, n): mpf(1) for m in range(5) for n in range(5)}
    assert RealMomentArray(4, entries, "rectangular").complex_degree == 2
