"""Eigendecomposition ordering/residual contracts and characteristic
polynomials."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ptspectra import (
    CoefficientOverflowError,
    InputError,
    char_poly,
    eig,
)


def test_default_ordering_descending_real_part():
    es = eig(np.diag([1.0, 5.0, -2.0, 3.0]))
    assert es.ordering == "by_real_part"
    assert_allclose(es.values.real, [5.0, 3.0, 1.0, -2.0])


def test_by_magnitude_ordering():
    es = eig(np.diag([1.0, -4.0, 2.0]), by_magnitude=True)
    assert es.ordering == "by_magnitude"
    assert_allclose(es.values.real, [-4.0, 2.0, 1.0])


def test_ties_broken_by_ascending_imag():
    es = eig(np.diag([2.0 + 1.0j, 2.0 - 1.0j]))
    assert es.values[0].imag < es.values[1].imag
    es = eig(np.diag([2.0 + 1.0j, 2.0 - 1.0j]), by_magnitude=True)
    assert es.values[0].imag < es.values[1].imag


def test_eigenvectors_match_values():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        es = eig(a)
        assert_allclose(
            a @ es.right_vectors,
            es.right_vectors * es.values,
            atol=1e-10 * np.linalg.norm(a),
        )
        assert_allclose(np.linalg.norm(es.right_vectors, axis=0), 1.0)


def test_condition_estimate_normal_matrix():
    # Hermitian matrices have orthonormal eigenvectors: cond(V) ~ 1
    rng = np.random.default_rng(5)
    a = rng.standard_normal((6, 6))
    es = eig(a + a.T)
    assert es.condition_estimate < 1.0 + 1e-8


def test_condition_estimate_near_defective():
    # Jordan-like block: eigenvectors nearly parallel
    a = np.array([[1.0, 1.0], [1e-12, 1.0]])
    es = eig(a)
    assert es.condition_estimate > 1e4


def test_input_rejection():
    with pytest.raises(InputError):
        eig(np.ones((2, 3)))
    with pytest.raises(InputError):
        eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(InputError):
        eig(np.empty((0, 0)))


def test_char_poly_matches_numpy():
    rng = np.random.default_rng(17)
    for n in (2, 5, 11):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        got = char_poly(a)
        want = np.poly(np.linalg.eigvals(a))
        assert_allclose(got, want, rtol=1e-8, atol=1e-8)
        assert got[0] == 1.0


def test_char_poly_known_values():
    # det(lambda I - A) = lambda^2 - tr lambda + det
    a = np.array([[2.0, 1.0], [3.0, 4.0]])
    assert_allclose(char_poly(a), [1.0, -6.0, 5.0], atol=1e-14)


def test_char_poly_large_matrix_route():
    # above the recurrence cutoff the eigenvalue product takes over and
    # must stay consistent
    rng = np.random.default_rng(29)
    a = rng.standard_normal((70, 70)) / np.sqrt(70)
    got = char_poly(a)
    assert got.shape == (71,)
    assert np.all(np.isfinite(got.view(np.float64)))


def test_char_poly_overflow():
    with pytest.raises(CoefficientOverflowError, match="rescale"):
        char_poly(np.diag(np.full(40, 1e300)))
