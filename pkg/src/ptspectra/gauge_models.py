"""Character-basis Hamiltonians for one-plaquette gauge models with
static quarks: irrep lattices, Casimir energies, fundamental-character
raising/lowering matrices, and the finite-density Hamiltonian whose
spectrum is real or conjugate-paired.

Bases are truncated by tensor reachability: every irrep obtainable
from the trivial one by at most `cutoff` tensorings with the
fundamental or antifundamental. This keeps the character matrices free
of dangling rows and is the truncation the stability (drift) check
escalates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InvariantError, SizeCapError, TruncationError
from .ptsym import check_pt
from .spin_models import ModelBundle
from .util import map_ordered

__all__ = [
    "IrrepBasis",
    "GaugeSpec",
    "TrajectoryTable",
    "irrep_basis",
    "character_matrices",
    "truncation_report",
    "build_gauge_hamiltonian",
    "su3_block",
    "eigen_trajectory",
]

MAX_IRREPS = 10_000
GROUPS = ("u1", "su2", "su3")

NORMALIZATION_NOTES = {
    "u1": "C2(n) = n^2",
    "su2": "C2(j) = j(j+1); convention choice, no displayed reference values",
    "su3": "C2(p,q) = (p^2+q^2+pq+3p+3q)/3, giving {0, 4/3, 4/3, 3} "
    "for the singlet, fundamental, antifundamental, adjoint",
}


@dataclass(frozen=True)
class IrrepBasis:
    """Irrep labels with Casimirs and dimensions, closed under
    conjugation, ordered by (Casimir, label)."""

    group: str
    labels: tuple
    casimirs: np.ndarray
    dims: np.ndarray
    normalization: str

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"label {label!r} not in {self.group} basis") from None

    def conjugate_label(self, label):
        if self.group == "u1":
            return -label
        if self.group == "su2":
            return label
        p, q = label
        return (q, p)


@dataclass(frozen=True)
class GaugeSpec:
    """Parameters of the static-quark gauge Hamiltonian.

    coupling_scale multiplies the Casimir diagonal; h is the quark
    coupling (its sign encodes the quark boundary condition); beta_mu
    the dimensionless chemical potential; cutoff the tensor-
    reachability truncation depth. high_density drops the lowering
    term (antiquark contribution negligible at large beta_mu).
    """

    group: str
    coupling_scale: float
    h: float
    beta_mu: float
    cutoff: int
    high_density: bool = False

    def __post_init__(self):
        if self.group not in GROUPS:
            raise InputError(f"group must be one of {GROUPS}, got {self.group!r}")
        if self.cutoff < 1:
            raise InputError(f"cutoff must be >= 1, got {self.cutoff}")
        for name in ("coupling_scale", "h", "beta_mu"):
            if not math.isfinite(getattr(self, name)):
                raise InputError(f"{name} must be finite")

    @property
    def quark_sign(self) -> str:
        if self.h > 0:
            return "antiperiodic"
        if self.h < 0:
            return "periodic"
        return "none"


def _fusion_targets(group: str, label):
    """Labels in label x fundamental and label x antifundamental."""
    if group == "u1":
        return [label + 1], [label - 1]
    if group == "su2":
        j = label
        up = [j + 0.5] if j == 0 else [j - 0.5, j + 0.5]
        return up, list(up)
    p, q = label
    plus = [(p + 1, q), (p - 1, q + 1), (p, q - 1)]
    minus = [(p, q + 1), (p + 1, q - 1), (p - 1, q)]
    keep = lambda pairs: [t for t in pairs if t[0] >= 0 and t[1] >= 0]
    return keep(plus), keep(minus)


def _casimir(group: str, label) -> float:
    if group == "u1":
        return float(label * label)
    if group == "su2":
        return float(label * (label + 1))
    p, q = label
    return (p * p + q * q + p * q + 3 * p + 3 * q) / 3.0


def _dimension(group: str, label) -> int:
    if group == "u1":
        return 1
    if group == "su2":
        return int(round(2 * label + 1))
    p, q = label
    return (p + 1) * (q + 1) * (p + q + 2) // 2


def _sort_key(group: str, label):
    if group == "u1":
        return (_casimir(group, label), -label)
    if group == "su2":
        return (_casimir(group, label),)
    p, q = label
    return (_casimir(group, label), q, p)


def irrep_basis(group: str, cutoff: int) -> IrrepBasis:
    """All irreps within `cutoff` fundamental/antifundamental
    tensorings of the trivial one.

    Raises SizeCapError beyond 10^4 irreps.
    """
    group = group.lower()
    if group not in GROUPS:
        raise InputError(f"group must be one of {GROUPS}, got {group!r}")
    if cutoff < 1:
        raise InputError(f"cutoff must be >= 1, got {cutoff}")

    trivial = 0 if group == "u1" else (0.0 if group == "su2" else (0, 0))
    frontier = {trivial}
    seen = {trivial}
    for _ in range(cutoff):
        nxt = set()
        for lab in frontier:
            up, down = _fusion_targets(group, lab)
            nxt.update(up)
            nxt.update(down)
        frontier = nxt - seen
        seen |= nxt
        if len(seen) > MAX_IRREPS:
            raise SizeCapError(
                f"cutoff {cutoff} yields more than {MAX_IRREPS} irreps"
            )

    labels = tuple(sorted(seen, key=lambda lab: _sort_key(group, lab)))
    casimirs = np.array([_casimir(group, lab) for lab in labels])
    dims = np.array([_dimension(group, lab) for lab in labels], dtype=np.int64)
    basis = IrrepBasis(
        group=group,
        labels=labels,
        casimirs=casimirs,
        dims=dims,
        normalization=NORMALIZATION_NOTES[group],
    )
    for lab in labels:
        if basis.conjugate_label(lab) not in seen:
            raise InvariantError(f"basis not closed under conjugation at {lab}")
    if casimirs[0] != 0.0:
        raise InvariantError("trivial irrep must carry Casimir 0")
    return basis


def character_matrices(basis: IrrepBasis):
    """Raising/lowering matrices of the fundamental characters.

    (Wplus)_{RS} = multiplicity of R in S x fundamental, and Wminus
    the antifundamental analog; targets outside the basis are dropped
    (see truncation_report). For a conjugation-closed basis
    Wminus = Wplus^T exactly.
    """
    n = basis.size
    index = {lab: i for i, lab in enumerate(basis.labels)}
    wplus = np.zeros((n, n))
    wminus = np.zeros((n, n))
    for s, lab in enumerate(basis.labels):
        up, down = _fusion_targets(basis.group, lab)
        for t in up:
            r = index.get(t)
            if r is not None:
                wplus[r, s] += 1.0
        for t in down:
            r = index.get(t)
            if r is not None:
                wminus[r, s] += 1.0
    if not np.array_equal(wminus, wplus.T):
        raise InvariantError("Wminus != Wplus^T on a conjugation-closed basis")
    return wplus, wminus


def truncation_report(basis: IrrepBasis) -> dict:
    """Fusion targets dropped at the basis boundary.

    Returns {"dropped": [(source, target), ...], "boundary": labels
    with at least one dropped target}.
    """
    index = set(basis.labels)
    dropped = []
    for lab in basis.labels:
        up, down = _fusion_targets(basis.group, lab)
        for t in up + down:
            if t not in index:
                dropped.append((lab, t))
    boundary = sorted(
        {src for src, _ in dropped}, key=lambda lab: _sort_key(basis.group, lab)
    )
    return {"dropped": dropped, "boundary": boundary}


def _conjugation_swap(basis: IrrepBasis) -> np.ndarray:
    swap = np.zeros((basis.size, basis.size))
    for i, lab in enumerate(basis.labels):
        swap[basis.index(basis.conjugate_label(lab)), i] = 1.0
    return swap


def build_gauge_hamiltonian(spec: GaugeSpec) -> ModelBundle:
    """H = coupling_scale * diag(C2) - h (e^{beta_mu} Wplus +
    e^{-beta_mu} Wminus) on the tensor-reachability basis.

    H is real, so PT symmetry holds with the identity parity; the
    conjugation-swap permutation (R <-> Rbar) is carried as a site
    operator instead, and satisfies swap H(beta_mu) swap =
    H(-beta_mu) (charge conjugation). With high_density set, the
    Wminus term is dropped.
    """
    basis = irrep_basis(spec.group, spec.cutoff)
    wplus, wminus = character_matrices(basis)
    matrix = spec.coupling_scale * np.diag(basis.casimirs) - spec.h * (
        math.exp(spec.beta_mu) * wplus
        + (0.0 if spec.high_density else math.exp(-spec.beta_mu)) * wminus
    )
    matrix = matrix.astype(np.complex128)
    parity = np.eye(basis.size, dtype=np.complex128)
    residual = check_pt(matrix, parity).residual
    if residual > 1e-10:
        raise InvariantError(f"gauge H failed PT check: residual {residual:.3e}")
    swap = _conjugation_swap(basis)
    return ModelBundle(
        matrix=matrix,
        parity=parity,
        site_operators={
            "conjugation_swap": swap.astype(np.complex128),
            "wplus": wplus.astype(np.complex128),
            "wminus": wminus.astype(np.complex128),
        },
        spec=spec,
        kind="hamiltonian",
        metadata={
            "model": "gauge",
            "basis": basis,
            "quark_sign": spec.quark_sign,
            "truncation": truncation_report(basis),
            "normalization": basis.normalization,
            "parity_note": "H is real, so P = identity realizes PT exactly; "
            "the R <-> Rbar swap maps beta_mu to -beta_mu and is kept as a "
            "site operator",
            "pt_residual": residual,
        },
    )


SU3_BLOCK_LABELS = ((0, 0), (1, 0), (0, 1), (1, 1))


def su3_block(bundle: ModelBundle, labels=SU3_BLOCK_LABELS) -> np.ndarray:
    """Submatrix of an su3 Hamiltonian on the given labels, in order
    (default: singlet, fundamental, antifundamental, adjoint)."""
    basis = bundle.metadata.get("basis")
    if basis is None or basis.group != "su3":
        raise InputError("su3_block requires an su3 gauge bundle")
    idx = [basis.index(lab) for lab in labels]
    return bundle.matrix[np.ix_(idx, idx)]


@dataclass(frozen=True)
class TrajectoryTable:
    """Lowest-K eigenvalues along a chemical-potential grid.

    energies[i, k] is the k-th lowest eigenvalue (by real part) at
    beta_mu_grid[i]; pair_flags marks entries living in a conjugate
    pair (|Im| above 1e-8 of the local spectral radius). cutoff is the
    basis depth whose lowest-K values moved less than drift under
    cutoff+1; drift is that movement.
    """

    beta_mu: np.ndarray
    energies: np.ndarray
    pair_flags: np.ndarray
    cutoff: int
    drift: float
    basis_size: int


def _lowest_k(spec: GaugeSpec, basis, wplus, wminus, beta_mu: float, k: int):
    matrix = spec.coupling_scale * np.diag(basis.casimirs) - spec.h * (
        math.exp(beta_mu) * wplus
        + (0.0 if spec.high_density else math.exp(-beta_mu)) * wminus
    )
    values = np.linalg.eigvals(matrix)
    order = np.lexsort((values.imag, values.real))
    return values[order][:k]


def _grid_energies(spec: GaugeSpec, cutoff: int, grid, k: int, threads):
    basis = irrep_basis(spec.group, cutoff)
    wplus, wminus = character_matrices(basis)
    rows = map_ordered(
        lambda bm: _lowest_k(spec, basis, wplus, wminus, bm, k), grid, threads
    )
    return np.asarray(rows), basis.size


def eigen_trajectory(
    spec: GaugeSpec,
    beta_mu_grid,
    n_levels: int = 8,
    drift_tol: float = 1e-6,
    max_cutoff: int = 40,
    threads: int | None = 1,
) -> TrajectoryTable:
    """Track the lowest eigenvalues of the gauge Hamiltonian along an
    ascending beta_mu grid, escalating the basis cutoff until the
    tracked levels are truncation-stable.

    The spec's beta_mu field is ignored; the grid supplies it.

    Raises
    ------
    TruncationError
        If the drift between consecutive cutoffs never falls below
        drift_tol up to max_cutoff.
    """
    grid = np.asarray(list(beta_mu_grid), dtype=float)
    if grid.size == 0 or not np.all(np.isfinite(grid)):
        raise InputError("beta_mu grid must be nonempty and finite")
    if np.any(np.diff(grid) <= 0):
        raise InputError("beta_mu grid must be strictly ascending")

    cutoff = spec.cutoff
    current, size = _grid_energies(spec, cutoff, grid, n_levels, threads)
    drift = math.inf
    while cutoff < max_cutoff:
        bigger, big_size = _grid_energies(spec, cutoff + 1, grid, n_levels, threads)
        drift = float(np.max(np.abs(bigger - current)))
        if drift < drift_tol:
            radius = np.max(np.abs(current), axis=1, keepdims=True)
            flags = np.abs(current.imag) > 1e-8 * radius
            return TrajectoryTable(
                beta_mu=grid,
                energies=current,
                pair_flags=flags,
                cutoff=cutoff,
                drift=drift,
                basis_size=size,
            )
        cutoff += 1
        current, size = bigger, big_size
    raise TruncationError(
        f"lowest {n_levels} eigenvalues still drift {drift:.3e} (> {drift_tol:g}) "
        f"at cutoff {max_cutoff}"
    )
