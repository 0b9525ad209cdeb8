#!/usr/bin/env python3
"""
Test cases for the shifted QR eigenvalue solver, companion-matrix zeros and
spectrum pairing.
"""

import random

import pytest
from mpmath import mp, mpc, mpf

from bergman_shape import spectra
from bergman_shape.arnoldi import HessenbergMatrix, arnoldi_orthonormalize, polynomials_from_hessenberg
from bergman_shape.errors import IndexOutOfRange, InvalidParameter, NoConvergence
from bergman_shape.faber import ellipse_map, faber_second_kind, hypocycloid_map, toeplitz_matrix, triangle_coefficients
from bergman_shape.moments import DomainSpec, domain_moments
from bergman_shape.polynomials import ComplexPolynomial
from bergman_shape.spectra import (
    Spectrum,
    balance_matrix,
    companion_matrix,
    hessenberg_eigenvalues,
    match_spectra,
    polynomial_zeros_oracle,
)


def disk_hessenberg(n: int) -> HessenbergMatrix:
    """Closed-form shift matrix of the unit disk: only b_{k+1,k} = sqrt((k+1)/(k+2))."""
    return HessenbergMatrix.from_entries(
        {(k + 1, k): mp.sqrt(mpf(k + 1) / (k + 2)) for k in range(n)}, n
    )


# === SHIFTED QR ===

def test_triangular_block(double_precision):
    """Upper triangular input deflates immediately to its diagonal."""
    H = HessenbergMatrix.from_dense([[1, 5, 6], [0, 2, 7], [0, 0, 3]])
    spectrum = hessenberg_eigenvalues(H, 3)
    assert len(spectrum) == 3
    assert spectrum.sorted() == [1, 2, 3]
    assert spectrum.iterations == 0


def test_symmetric_two_by_two(double_precision):
    """[[0, 1], [1, 0]] has eigenvalues ±1."""
    spectrum = hessenberg_eigenvalues(HessenbergMatrix.from_dense([[0, 1], [1, 0]]), 2)
    assert match_spectra(spectrum, [1, -1]) < mpf("1e-14")


def test_disk_block_is_nilpotent(double_precision):
    """Every eigenvalue of the disk's leading block is zero."""
    spectrum = hessenberg_eigenvalues(disk_hessenberg(12), 10)
    assert len(spectrum) == 10
    assert max(abs(v) for v in spectrum.values) < mpf("1e-10")


def test_ellipse_toeplitz_closed_form(double_precision):
    """Tridiagonal symbol: eigenvalues 2 sqrt(b b_1) cos(jπ/(n+1))."""
    L = ellipse_map(1.25, 1)
    n = 6
    spectrum = hessenberg_eigenvalues(toeplitz_matrix(L, n), n)
    expected = [2 * mp.sqrt(L.b * L.coefficient(1).real) * mp.cos(j * mp.pi / (n + 1)) for j in range(1, n + 1)]
    assert match_spectra(spectrum, expected) < mpf("1e-12")


def test_toeplitz_eigenvalues_are_faber_zeros(double_precision):
    """The n x n Toeplitz block has the zeros of G_n as eigenvalues."""
    L = ellipse_map(1.25, 1)
    eigen = hessenberg_eigenvalues(toeplitz_matrix(L, 8), 8)
    zeros = polynomial_zeros_oracle(faber_second_kind(L, 8).polys[8])
    assert match_spectra(eigen, zeros) < mpf("1e-8")


def test_hessenberg_eigenvalues_are_bergman_zeros(high_precision):
    """The n x n block of the shift has the zeros of p_n as eigenvalues."""
    M = domain_moments(DomainSpec.from_vertices([0, 2, 2 + 1j, 0.5 + 1.5j]), 9)
    _, H = arnoldi_orthonormalize(M, 8)
    eigen = hessenberg_eigenvalues(H, 8)
    zeros = polynomial_zeros_oracle(polynomials_from_hessenberg(H, 8)[8])
    assert match_spectra(eigen, zeros) < mpf("1e-8")


def test_hypocycloid_toeplitz_cube_roots(double_precision):
    """T_3 of w + 1/(2w^2) is the companion of z^3 - 1/2."""
    eigen = hessenberg_eigenvalues(toeplitz_matrix(hypocycloid_map(), 3), 3)
    root = mp.cbrt(mpf(1) / 2)
    expected = [root * mp.expjpi(mpf(2 * j) / 3) for j in range(3)]
    assert match_spectra(eigen, expected) < mpf("1e-12")


def test_triangle_toeplitz_eigenvalues_are_faber_zeros(high_precision):
    """Faber duality on the triangle symbol for every n up to 12."""
    L = triangle_coefficients(12)
    for n in range(1, 13):
        eigen = hessenberg_eigenvalues(toeplitz_matrix(L, n), n)
        zeros = polynomial_zeros_oracle(faber_second_kind(L, n).polys[n])
        assert match_spectra(eigen, zeros) < mpf("1e-15"), n


def test_ellipse_hessenberg_eigenvalues_are_bergman_zeros(high_precision):
    """Bergman duality on the ellipse for every n up to 15."""
    M = domain_moments(DomainSpec.from_name("ellipse"), 16)
    _, H = arnoldi_orthonormalize(M, 15)
    polys = polynomials_from_hessenberg(H, 15)
    for n in range(1, 16):
        eigen = hessenberg_eigenvalues(H, n)
        zeros = polynomial_zeros_oracle(polys[n])
        assert match_spectra(eigen, zeros) < mpf("1e-20"), n


@pytest.mark.parametrize("order", range(2, 9))
def test_conjugate_matrix_has_conjugate_spectrum(double_precision, order):
    """Eigenvalues of conj(H) are the conjugates of those of H."""
    rng = random.Random(order)
    H = HessenbergMatrix.from_dense(
        [[mpc(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(order)] for _ in range(order)]
    )
    eigen = hessenberg_eigenvalues(H, order)
    conjugated = hessenberg_eigenvalues(H.conjugate(), order)
    assert match_spectra(conjugated, [mp.conj(v) for v in eigen.values]) < mpf("1e-9")


def test_block_order_checked(double_precision):
    """n outside 1..size is rejected."""
    H = HessenbergMatrix.from_dense([[1, 2], [3, 4]])
    with pytest.raises(IndexOutOfRange):
        hessenberg_eigenvalues(H, 3)


def test_iteration_budget(double_precision, monkeypatch):
    """Exhausting the iteration budget raises NoConvergence."""
    monkeypatch.setattr(spectra, "ITERATIONS_PER_EIGENVALUE", 0)
    with pytest.raises(NoConvergence):
        hessenberg_eigenvalues(HessenbergMatrix.from_dense([[0, 1], [1, 0]]), 2)


# === COMPANION MATRICES ===

def test_companion_zeros(double_precision):
    """(z-1)(z-2)(z+3) = z^3 - 7z + 6."""
    p = ComplexPolynomial.from_coefficients([6, -7, 0, 1])
    zeros = polynomial_zeros_oracle(p)
    assert match_spectra(zeros, [1, 2, -3]) < mpf("1e-12")


def test_companion_is_monic():
    """Scaling p does not change its companion matrix."""
    p = ComplexPolynomial.from_coefficients([6, -7, 0, 1])
    assert companion_matrix(p) == companion_matrix(p.scale(5))
    with pytest.raises(InvalidParameter):
        companion_matrix(ComplexPolynomial.constant(2))


def test_balancing_evens_out_norms(double_precision):
    """Balancing brings mismatched off-diagonal entries to comparable size."""
    A = [[mpc(1), mpc(10) ** 6], [mpc(10) ** -6, mpc(2)]]
    B = balance_matrix(A)
    assert abs(B[0][1]) < 10
    assert abs(B[1][0]) < 10
    assert B[0][0] == A[0][0] and B[1][1] == A[1][1]


# === COMPARISON ===

def test_match_spectra_pairs_optimally():
    """Order does not matter; the worst paired distance is returned."""
    assert abs(match_spectra([1, 2], [mpf("2.1"), mpf("0.9")]) - mpf("0.1")) < mpf("1e-12")
    assert match_spectra(Spectrum((), mpf(0)), []) == 0


def test_match_spectra_size_mismatch():
    with pytest.raises(InvalidParameter):
        match_spectra([1, 2], [1])
