"""Dense non-Hermitian eigendecomposition and characteristic polynomials.

Matrices here are small (a few hundred rows at most) and dense, so the
eigensolve delegates to LAPACK's QR-based routine; the value added is
the deterministic ordering, the residual verification, and the
characteristic-polynomial recurrences used by the reality tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CoefficientOverflowError, ConvergenceError, InputError
from .util import as_square_matrix

__all__ = ["EigenSystem", "eig", "char_poly"]

MAX_DIM = 10_000
FADDEEV_MAX_DIM = 64


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues with matched unit-norm right eigenvectors.

    Attributes
    ----------
    values : ndarray
        Complex eigenvalues; column j of `right_vectors` pairs with
        `values[j]`.
    right_vectors : ndarray
        Unit-norm right eigenvectors, one per column.
    condition_estimate : float
        2-norm condition number of the eigenvector matrix. Large values
        signal a nearly defective (close to exceptional) spectrum.
    ordering : str
        "by_real_part" (descending real part) or "by_magnitude"
        (descending absolute value); ties broken by ascending
        imaginary part either way.
    """

    values: np.ndarray
    right_vectors: np.ndarray
    condition_estimate: float
    ordering: str = "by_real_part"
    residuals: np.ndarray = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return self.values.shape[0]


def _order(values: np.ndarray, by_magnitude: bool) -> np.ndarray:
    # lexsort: last key is primary; ascending Im breaks exact ties
    if by_magnitude:
        primary = -np.abs(values)
    else:
        primary = -values.real
    return np.lexsort((values.imag, primary))


def eig(a, by_magnitude: bool = False, residual_tol: float = 1e-10) -> EigenSystem:
    """Eigendecompose a general complex matrix with verified residuals.

    Parameters
    ----------
    a : array_like
        Square matrix, finite entries, dim <= 10^4.
    by_magnitude : bool
        Order eigenvalues by descending |lambda| (transfer-matrix
        convention) instead of descending real part.
    residual_tol : float
        Per-vector bound: ||A v - lambda v|| <= residual_tol * ||A||.

    Returns
    -------
    EigenSystem

    Raises
    ------
    InputError
        Non-square, empty, or non-finite input, or dim > 10^4.
    ConvergenceError
        LAPACK failure or a residual above `residual_tol * ||A||`.
    """
    arr = as_square_matrix(a)
    n = arr.shape[0]
    if n > MAX_DIM:
        raise InputError(f"dimension {n} exceeds supported maximum {MAX_DIM}")
    try:
        values, vectors = np.linalg.eig(arr)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"eigensolver did not converge on {n}x{n} matrix: {exc}"
        ) from exc

    norms = np.linalg.norm(vectors, axis=0)
    if np.any(norms == 0):
        raise ConvergenceError("eigensolver returned a zero eigenvector")
    vectors = vectors / norms

    order = _order(values, by_magnitude)
    values = values[order]
    vectors = vectors[:, order]

    scale = np.linalg.norm(arr)
    residuals = np.linalg.norm(arr @ vectors - vectors * values, axis=0)
    bound = residual_tol * max(scale, np.finfo(float).tiny)
    if np.any(residuals > bound):
        worst = int(np.argmax(residuals))
        raise ConvergenceError(
            f"eigenpair {worst} residual {residuals[worst]:.3e} exceeds "
            f"{bound:.3e} (tol {residual_tol:g} * ||A||)"
        )

    # cond(V) of the normalized eigenvector matrix; inf for a defective
    # matrix whose vectors are numerically dependent
    sv = np.linalg.svd(vectors, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf

    return EigenSystem(
        values=values,
        right_vectors=vectors,
        condition_estimate=cond,
        ordering="by_magnitude" if by_magnitude else "by_real_part",
        residuals=residuals,
    )


def _faddeev_leverrier(arr: np.ndarray) -> np.ndarray:
    """det[lambda I - A] coefficients by the Faddeev-LeVerrier recurrence."""
    n = arr.shape[0]
    coeffs = np.empty(n + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    m = np.zeros_like(arr)
    ident = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        m = arr @ m + coeffs[k - 1] * ident
        coeffs[k] = -np.trace(arr @ m) / k
    return coeffs


def char_poly(a) -> np.ndarray:
    """Characteristic polynomial coefficients, descending powers, monic.

    Uses the Faddeev-LeVerrier recurrence up to dim 64 and the
    eigenvalue-product form above that (the recurrence accumulates
    rounding in long chains; the product form stays stable).

    Raises
    ------
    CoefficientOverflowError
        A coefficient left float range; rescale A (e.g. divide by its
        norm) and map coefficients back.
    """
    arr = as_square_matrix(a)
    n = arr.shape[0]
    with np.errstate(over="ignore", invalid="ignore"):
        if n <= FADDEEV_MAX_DIM:
            coeffs = _faddeev_leverrier(arr)
        else:
            coeffs = np.poly(np.linalg.eigvals(arr)).astype(np.complex128)
    if not np.all(np.isfinite(coeffs.view(np.float64))):
        raise CoefficientOverflowError(
            f"characteristic polynomial of {n}x{n} matrix overflowed float "
            "range; rescale the matrix (divide by its norm) and rescale "
            "coefficients back by norm**k"
        )
    return coeffs
