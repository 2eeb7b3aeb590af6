"""Generalized-PT machinery: symmetry witnesses, conjugate pairing,
region classification, PT-invariant real bases, region-I Hermitization.

Throughout, T is the antilinear conjugation, so PT symmetry of A with
respect to a unitary involution P reads P A P = A*.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BasisConstructionError,
    BrokenSymmetryError,
    DegenerateSpectrumError,
    InputError,
    PairingError,
)
from .linalg import EigenSystem, char_poly, eig
from .util import as_square_matrix

__all__ = [
    "PtWitness",
    "PairedSpectrum",
    "RegionLabel",
    "check_pt",
    "bender_mannheim_test",
    "pair_and_classify",
    "real_basis",
    "hermitize",
]

PT_RESIDUAL_TOL = 1e-10
INVOLUTION_TOL = 1e-12
NEAR_EXCEPTIONAL_TOL = 1e-6


@dataclass(frozen=True)
class PtWitness:
    """Outcome of a PT-symmetry check: P A P = A* up to `residual`."""

    parity: np.ndarray
    residual: float
    satisfied: bool
    tolerance: float = PT_RESIDUAL_TOL


@dataclass(frozen=True)
class PairedSpectrum:
    """Eigenvalues split into reals and conjugate pairs.

    `pairs` holds one representative per pair, imaginary part positive;
    the conjugate partner is implied. reals + pairs + conj(pairs)
    reproduces the input multiset within pairing_tolerance.
    """

    reals: np.ndarray
    pairs: np.ndarray
    pairing_tolerance: float
    ordering: str
    notes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RegionLabel:
    """Spectral region: Ia/Ib (all real), II (subdominant pairs), III
    (dominant pair). For by_real_part ordering region I is unsplit."""

    label: str
    dominant_eigenvalues: tuple
    evidence: dict


def _involution_check(p: np.ndarray, name: str = "parity") -> None:
    n = p.shape[0]
    scale = max(1.0, float(np.linalg.norm(p)))
    dev_inv = np.linalg.norm(p @ p - np.eye(n))
    if dev_inv > INVOLUTION_TOL * scale * np.sqrt(n):
        raise InputError(
            f"{name} is not an involution: ||P^2 - 1|| = {dev_inv:.3e}"
        )
    dev_u = np.linalg.norm(p.conj().T @ p - np.eye(n))
    if dev_u > INVOLUTION_TOL * scale * np.sqrt(n):
        raise InputError(f"{name} is not unitary: ||P'P - 1|| = {dev_u:.3e}")


def check_pt(a, p, tol: float = PT_RESIDUAL_TOL) -> PtWitness:
    """Test P A P = A* for a unitary involution P.

    Raises InputError when P fails the involution/unitarity
    precondition; a large residual is reported, not raised.
    """
    arr = as_square_matrix(a, "A")
    par = as_square_matrix(p, "parity")
    if par.shape != arr.shape:
        raise InputError(
            f"parity shape {par.shape} does not match matrix {arr.shape}"
        )
    _involution_check(par)
    scale = float(np.linalg.norm(arr))
    residual = float(np.linalg.norm(par @ arr @ par - arr.conj()))
    residual = residual / scale if scale > 0 else residual
    return PtWitness(
        parity=par, residual=residual, satisfied=bool(residual <= tol), tolerance=tol
    )


def bender_mannheim_test(a, tol: float = 1e-9):
    """Characteristic-polynomial reality test.

    A matrix has real-or-conjugate-paired spectrum iff det[lambda I - A]
    has real coefficients; this checks that directly.

    Returns
    -------
    (bool, float)
        Pass flag and the max imaginary coefficient residual, measured
        relative to the largest coefficient magnitude.
    """
    coeffs = char_poly(a)
    scale = float(np.max(np.abs(coeffs)))
    residual = float(np.max(np.abs(coeffs.imag))) / scale
    return residual <= tol, residual


def _split_pairs(values: np.ndarray, tol: float):
    """Partition eigenvalues into snapped reals and conjugate pairs."""
    near_real = np.abs(values.imag) <= tol
    reals = np.sort(values.real[near_real])[::-1]
    complexes = values[~near_real]
    ups = sorted(
        (v for v in complexes if v.imag > 0), key=lambda v: (v.real, v.imag)
    )
    downs = sorted(
        (v for v in complexes if v.imag < 0), key=lambda v: (v.real, -v.imag)
    )
    if len(ups) != len(downs):
        extra = ups if len(ups) > len(downs) else downs
        raise PairingError(
            f"conjugate pairing impossible: {len(ups)} eigenvalues with "
            f"Im > 0 vs {len(downs)} with Im < 0 (e.g. {extra[-1]})"
        )
    pairs = []
    for up, down in zip(ups, downs):
        if abs(up - down.conjugate()) > 2 * tol:
            raise PairingError(
                f"eigenvalue {up} has no conjugate partner within "
                f"{2 * tol:.3e}; closest candidate {down.conjugate()}"
            )
        pairs.append((up + down.conjugate()) / 2.0)
    return reals, np.asarray(pairs, dtype=np.complex128)


def pair_and_classify(
    es: EigenSystem, ordering: str | None = None, tol: float | None = None
):
    """Pair a PT-symmetric spectrum and name its region.

    Parameters
    ----------
    es : EigenSystem
        Spectrum to classify (from `eig`).
    ordering : {"by_magnitude", "by_real_part"}, optional
        Dominance convention; defaults to the EigenSystem's own. Under
        by_magnitude (transfer matrices) the dominant eigenvalue is
        the one of largest |lambda| and region I splits into Ia (all
        reals positive) and Ib. Under by_real_part (Hamiltonians) the
        dominant eigenvalue is the ground state, i.e. smallest real
        part, and region I is unsplit.
    tol : float, optional
        Pairing tolerance; defaults to 1e-8 times the spectral radius.
        Eigenvalues with |Im| below it are snapped to real.

    Returns
    -------
    (PairedSpectrum, RegionLabel)

    Raises
    ------
    PairingError
        If some complex eigenvalue has no conjugate partner within tol
        (the input was not PT-symmetric).
    """
    values = np.asarray(es.values, dtype=np.complex128)
    if ordering is None:
        ordering = es.ordering
    if ordering not in ("by_magnitude", "by_real_part"):
        raise InputError(f"unknown ordering {ordering!r}")
    radius = float(np.max(np.abs(values))) if values.size else 0.0
    if tol is None:
        tol = 1e-8 * radius
    tol = max(tol, np.finfo(float).tiny)

    reals, pairs = _split_pairs(values, tol)

    # entries on the verge of coalescing: real gaps or pair splittings
    # inside NEAR_EXCEPTIONAL_TOL * radius, where classification is
    # numerically fragile
    near = []
    margin = NEAR_EXCEPTIONAL_TOL * radius
    for i in range(len(reals) - 1):
        if abs(reals[i] - reals[i + 1]) <= margin:
            near.append(complex(reals[i]))
    for v in pairs:
        if v.imag <= margin:
            near.append(complex(v))

    notes = {"near_exceptional": near, "spectral_radius": radius}
    paired = PairedSpectrum(
        reals=reals,
        pairs=pairs,
        pairing_tolerance=float(tol),
        ordering=ordering,
        notes=notes,
    )

    by_magnitude = ordering == "by_magnitude"
    best_real = None
    if reals.size:
        best_real = max(reals, key=abs) if by_magnitude else min(reals)
    best_pair = None
    if pairs.size:
        best_pair = (
            max(pairs, key=abs) if by_magnitude else min(pairs, key=lambda v: v.real)
        )

    def pair_wins() -> bool:
        if best_pair is None:
            return False
        if best_real is None:
            return True
        if by_magnitude:
            return abs(best_pair) > abs(best_real)
        return best_pair.real < best_real

    evidence = {
        "real_count": int(reals.size),
        "pair_count": int(pairs.size),
        "near_exceptional": near,
    }
    if pair_wins():
        label = "III"
        dominant = (best_pair, best_pair.conjugate())
    elif pairs.size:
        label = "II"
        dominant = (complex(best_real),)
    elif by_magnitude:
        label = "Ia" if np.all(reals > 0) else "Ib"
        dominant = (complex(best_real),)
    else:
        label = "I"
        dominant = (complex(best_real),)
    return paired, RegionLabel(
        label=label, dominant_eigenvalues=dominant, evidence=evidence
    )


def real_basis(a, p, tol: float = 1e-10):
    """Orthonormal PT-invariant basis making a PT-symmetric matrix real.

    Each basis column satisfies P conj(v) = v; in that basis all matrix
    elements of A are real up to rounding. Candidate vectors alpha*e_k
    + P conj(alpha*e_k) are accumulated by Gram-Schmidt over phases
    alpha in {1, i}; inner products between PT-invariant vectors are
    automatically real, so the orthogonalization never reintroduces
    complex mixing.

    Returns
    -------
    (basis, a_real)
        Unitary basis matrix and basis^dagger A basis, whose imaginary
        entries are bounded by 1e-9 * ||A||.

    Raises
    ------
    InputError
        If check_pt(A, P) is not satisfied or (PT)^2 != 1.
    BasisConstructionError
        If the Gram-Schmidt sweep cannot produce a full basis.
    """
    arr = as_square_matrix(a, "A")
    par = as_square_matrix(p, "parity")
    witness = check_pt(arr, par)
    if not witness.satisfied:
        raise InputError(
            f"matrix is not PT-symmetric for this parity: residual "
            f"{witness.residual:.3e} > {witness.tolerance:g}"
        )
    n = arr.shape[0]
    # (PT)^2 v = P conj(P conj(v)) = P P* v must be the identity
    dev = np.linalg.norm(par @ par.conj() - np.eye(n))
    if dev > INVOLUTION_TOL * np.sqrt(n) * max(1.0, np.linalg.norm(par)):
        raise InputError(f"(PT)^2 != 1 for this parity: ||P P* - 1|| = {dev:.3e}")

    columns = []
    for k in range(n):
        for alpha in (1.0, 1.0j):
            seed = np.zeros(n, dtype=np.complex128)
            seed[k] = alpha
            v = seed + par @ seed.conj()
            for b in columns:
                v = v - (b.conj() @ v).real * b
            norm = np.linalg.norm(v)
            if norm > 1e-6:
                columns.append(v / norm)
                if len(columns) == n:
                    break
        if len(columns) == n:
            break
    if len(columns) < n:
        raise BasisConstructionError(
            f"PT-invariant basis incomplete: {len(columns)} of {n} vectors"
        )
    basis = np.column_stack(columns)

    fix_dev = np.linalg.norm(par @ basis.conj() - basis)
    ortho_dev = np.linalg.norm(basis.conj().T @ basis - np.eye(n))
    if fix_dev > tol * np.sqrt(n) or ortho_dev > 1e-10 * np.sqrt(n):
        raise BasisConstructionError(
            f"basis check failed: PT-fix deviation {fix_dev:.3e}, "
            f"orthonormality deviation {ortho_dev:.3e}"
        )

    a_real = basis.conj().T @ arr @ basis
    im_max = float(np.max(np.abs(a_real.imag)))
    if im_max > 1e-9 * max(np.linalg.norm(arr), np.finfo(float).tiny):
        raise BasisConstructionError(
            f"transformed matrix not real: max |Im| = {im_max:.3e}"
        )
    return basis, a_real


def hermitize(a, gap_tol: float | None = None):
    """Similarity-transform a region-I matrix to an isospectral
    Hermitian one.

    Uses S = (V V^dagger)^(-1/2) built from the right-eigenvector
    matrix V; for an all-real nondegenerate spectrum, S A S^-1 is
    Hermitian up to rounding.

    Returns
    -------
    (S, H_h)

    Raises
    ------
    BrokenSymmetryError
        Spectrum has complex pairs (regions II/III); cites one pair.
    DegenerateSpectrumError
        Minimum eigenvalue gap at or below `gap_tol` (possible Jordan
        structure; the construction needs a complete eigenbasis).
    """
    arr = as_square_matrix(a, "A")
    es = eig(arr, by_magnitude=True)
    paired, region = pair_and_classify(es)
    if paired.pairs.size:
        worst = paired.pairs[np.argmax(np.abs(paired.pairs.imag))]
        raise BrokenSymmetryError(
            f"spectrum is in region {region.label}; complex pair "
            f"{worst:.6g} / {worst.conjugate():.6g} obstructs Hermitization"
        )
    radius = max(paired.notes["spectral_radius"], np.finfo(float).tiny)
    if gap_tol is None:
        gap_tol = 1e-8 * radius
    sorted_reals = np.sort(paired.reals)
    if sorted_reals.size > 1:
        min_gap = float(np.min(np.diff(sorted_reals)))
        if min_gap <= gap_tol:
            raise DegenerateSpectrumError(
                f"minimum eigenvalue gap {min_gap:.3e} <= {gap_tol:.3e}; "
                "spectrum too close to degenerate for a stable similarity"
            )

    v = es.right_vectors
    gram = v @ v.conj().T
    evals, evecs = np.linalg.eigh(gram)
    if np.min(evals) <= 0:
        raise DegenerateSpectrumError(
            "eigenvector Gram matrix not positive definite; matrix is "
            "numerically defective"
        )
    s = (evecs * (evals**-0.5)) @ evecs.conj().T
    s_inv = (evecs * (evals**0.5)) @ evecs.conj().T
    h_h = s @ arr @ s_inv

    defect = np.linalg.norm(h_h - h_h.conj().T) / max(
        np.linalg.norm(h_h), np.finfo(float).tiny
    )
    if defect > 1e-8:
        raise DegenerateSpectrumError(
            f"Hermiticity defect {defect:.3e} exceeds 1e-8; eigenbasis too "
            "ill-conditioned (near-exceptional spectrum)"
        )
    return s, h_h
