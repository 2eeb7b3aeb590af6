"""Measurements on built matrices: partition functions, one- and
two-point functions, decay/modulation extraction, phase-diagram scans,
and Lee-Yang zero location along parameter paths.

Conventions: for a transfer bundle, Z(L) = Tr T^L over the periodic
chain of length L. PT symmetry makes Z and the correlators real; the
imaginary residue is measured and bounded, never silently discarded,
except in the partition-zero bisection where Z is made exactly real by
construction (conjugate pairs cancel the imaginary part).
"""

from __future__ import annotations

import cmath
import contextlib
import math
from dataclasses import dataclass, field, replace

import mpmath
import numpy as np

from .errors import (
    DegenerateSpectrumError,
    InputError,
    InvariantError,
    PartitionZeroError,
)
from .linalg import eig
from .ptsym import PairedSpectrum, pair_and_classify
from .spin_models import ModelBundle, build_family
from .util import map_ordered

__all__ = [
    "PartitionValue",
    "CorrelatorSeries",
    "FitResult",
    "ScanGrid",
    "FreeEnergySet",
    "LeeYangResult",
    "partition_function",
    "one_point",
    "two_point",
    "fit_decay",
    "phase_scan",
    "lee_yang_zeros",
]

ZERO_VICINITY = 1e-12
REALITY_TOL = 1e-9


def _matrix_of(bundle) -> np.ndarray:
    if isinstance(bundle, ModelBundle):
        return bundle.matrix
    return np.asarray(bundle, dtype=np.complex128)


@dataclass(frozen=True)
class PartitionValue:
    """Z(L) = sum_j lambda_j^L with its pair/real decomposition.

    All *_over_scale quantities are divided by s^L, s the largest
    eigenvalue magnitude, so they stay finite for any L; log_abs and
    sign reconstruct Z itself. pair_sum_over_scale < 0 is the sign
    problem becoming visible.
    """

    L: int
    scale: float
    z_over_scale: float
    real_sum_over_scale: float
    pair_sum_over_scale: float
    norm_sum_over_scale: float
    imag_residual: float
    sign: float
    log_abs: float
    trace_check_rel: float

    @property
    def value(self) -> float:
        if self.sign == 0.0:
            return 0.0
        if self.log_abs > 709.0:
            return self.sign * math.inf
        return self.sign * math.exp(self.log_abs)

    @property
    def near_zero(self) -> bool:
        return abs(self.z_over_scale) < ZERO_VICINITY * self.norm_sum_over_scale


def partition_function(bundle, L: int) -> PartitionValue:
    """Spectral partition function of a periodic chain of length L.

    Computed from the eigenvalues as the exactly-real combination
    (real sum) + (2 Re pair sum), cross-checked against the trace of
    the L-th scaled matrix power to 1e-8 relative.

    Raises
    ------
    InvariantError
        Imaginary residue above 1e-9 of the magnitude sum, or trace
        cross-check failure (input spectrum not conjugate-closed).
    """
    if L < 1:
        raise InputError(f"L must be >= 1, got {L}")
    matrix = _matrix_of(bundle)
    es = eig(matrix, by_magnitude=True)
    paired, _ = pair_and_classify(es)
    scale = float(np.abs(es.values[0]))
    if scale == 0.0:
        raise InputError("zero matrix: partition function is trivially 0")

    mu = es.values / scale
    z_complex = complex(np.sum(mu**L))
    reals = np.asarray(paired.reals, dtype=float) / scale
    pairs = np.asarray(paired.pairs, dtype=np.complex128) / scale
    real_sum = float(np.sum(reals**L)) if reals.size else 0.0
    pair_sum = float(np.sum(2.0 * (pairs**L).real)) if pairs.size else 0.0
    norm_sum = float(np.sum(np.abs(mu) ** L))
    z_real = real_sum + pair_sum

    tiny = np.finfo(float).tiny
    imag_residual = abs(z_complex.imag) / max(norm_sum, tiny)
    if imag_residual > REALITY_TOL:
        raise InvariantError(
            f"Z({L}) imaginary residue {imag_residual:.3e} above "
            f"{REALITY_TOL:g}: spectrum is not conjugate-closed"
        )

    power = np.linalg.matrix_power(matrix / scale, L)
    trace_rel = abs(complex(np.trace(power)) - z_real) / max(norm_sum, tiny)
    if trace_rel > 1e-8:
        raise InvariantError(
            f"spectral Z and Tr(T^L) disagree: rel dev {trace_rel:.3e}"
        )

    sign = math.copysign(1.0, z_real) if z_real != 0.0 else 0.0
    log_abs = (
        math.log(abs(z_real)) + L * math.log(scale)
        if z_real != 0.0
        else -math.inf
    )
    return PartitionValue(
        L=L,
        scale=scale,
        z_over_scale=z_real,
        real_sum_over_scale=real_sum,
        pair_sum_over_scale=pair_sum,
        norm_sum_over_scale=norm_sum,
        imag_residual=imag_residual,
        sign=sign,
        log_abs=log_abs,
        trace_check_rel=trace_rel,
    )


def _operator(bundle: ModelBundle, name: str) -> np.ndarray:
    if not isinstance(bundle, ModelBundle):
        raise InputError("site operators require a ModelBundle")
    try:
        return bundle.site_operators[name]
    except KeyError:
        raise InputError(
            f"bundle has no site operator {name!r}; available: "
            f"{sorted(bundle.site_operators)}"
        ) from None


def _is_real_valued(m) -> bool:
    m = np.asarray(m)
    if not np.iscomplexobj(m):
        return True
    top = float(np.max(np.abs(m)))
    return top == 0.0 or float(np.max(np.abs(m.imag))) <= 1e-14 * top


def _require_reality_cover(bundle: ModelBundle, matrix, named_ops) -> None:
    """Refuse operator pairs whose correlator may be complex.

    The trace construction gives a real series in two situations: every
    factor in the trace is real, or the bundle parity conjugates both
    operators (P phi P = phi*) the same way it conjugates the matrix.
    A pair covered by neither, such as the complex clock operators on a
    chirally asymmetric real matrix, has genuinely complex G(r) whose
    actual symmetry is G(r)* = G(L - r); CorrelatorSeries cannot carry
    that, so the request is rejected up front.
    """
    if _is_real_valued(matrix) and all(
        _is_real_valued(phi) for _, phi in named_ops
    ):
        return
    p = bundle.parity
    for name, phi in named_ops:
        dev = float(np.max(np.abs(p @ phi @ p - np.conj(phi))))
        if dev > 1e-12 * max(float(np.max(np.abs(phi))), 1.0):
            raise InputError(
                f"correlator of {name!r} on this bundle is not covered by a "
                f"reality argument: the parity does not conjugate it "
                f"(deviation {dev:.3e}) and the inputs are not all real, "
                "so G(r) is generally complex"
            )


def _guard_partition(z_scaled: complex, norm_sum: float, what: str) -> None:
    if abs(z_scaled) < ZERO_VICINITY * norm_sum:
        raise PartitionZeroError(
            f"{what} refused: |Z| = {abs(z_scaled):.3e} (scaled) is below "
            f"{ZERO_VICINITY:g} of the magnitude sum {norm_sum:.3e}; "
            "correlators are ill-behaved near partition zeros"
        )


def one_point(bundle: ModelBundle, operator_name: str, L: int) -> float:
    """<phi> = Tr[phi T^L] / Z on the length-L periodic chain."""
    if L < 1:
        raise InputError(f"L must be >= 1, got {L}")
    phi = _operator(bundle, operator_name)
    matrix = _matrix_of(bundle)
    rho = float(np.max(np.abs(np.linalg.eigvals(matrix))))
    if rho == 0.0:
        raise InputError("nilpotent matrix: Z vanishes for all L")
    mu_norms = np.abs(np.linalg.eigvals(matrix / rho))
    norm_sum = float(np.sum(mu_norms**L))
    power = np.linalg.matrix_power(matrix / rho, L)
    z_scaled = complex(np.trace(power))
    _guard_partition(z_scaled, norm_sum, f"one_point({operator_name!r})")
    value = complex(np.trace(phi @ power)) / z_scaled
    if abs(value.imag) > REALITY_TOL * (1.0 + abs(value)):
        raise InvariantError(
            f"<{operator_name}> has imaginary part {value.imag:.3e} beyond "
            "the reality tolerance"
        )
    return float(value.real)


@dataclass(frozen=True)
class CorrelatorSeries:
    """G(r) on integer separations of a length-L periodic chain."""

    separations: tuple
    values: np.ndarray
    L: int
    operators: tuple
    method: str
    connected: bool
    imag_residual: float


def _direct_correlator(matrix, phi1, phi2, seps, L):
    values = np.linalg.eigvals(matrix)
    rho = float(np.max(np.abs(values)))
    if rho == 0.0:
        raise InputError("nilpotent matrix: correlators undefined")
    base = matrix / rho
    powers = [np.eye(matrix.shape[0], dtype=np.complex128)]
    for _ in range(L):
        powers.append(powers[-1] @ base)
    z_scaled = complex(np.trace(powers[L]))
    norm_sum = float(np.sum(np.abs(values / rho) ** L))
    _guard_partition(z_scaled, norm_sum, "two_point")
    raw = (
        np.asarray(
            [
                complex(np.trace(phi1 @ powers[r] @ phi2 @ powers[L - r]))
                for r in seps
            ]
        )
        / z_scaled
    )
    disconnected = (
        complex(np.trace(phi1 @ powers[L]))
        * complex(np.trace(phi2 @ powers[L]))
        / z_scaled**2
    )
    return raw, disconnected


def _spectral_correlator(matrix, phi1, phi2, seps, L):
    es = eig(matrix, by_magnitude=True)
    values = es.values
    radius = float(np.abs(values[0]))
    diff = np.abs(values[:, None] - values[None, :])
    gaps = diff[~np.eye(values.size, dtype=bool)]
    if gaps.size and float(np.min(gaps)) <= 1e-8 * radius:
        raise DegenerateSpectrumError(
            f"spectral two-point method refused: minimum eigenvalue gap "
            f"{float(np.min(gaps)):.3e} within 1e-8 of the spectral radius "
            "(exceptional point); use the direct_trace method"
        )
    v = es.right_vectors
    v_inv = np.linalg.inv(v)
    a = v_inv @ phi1 @ v
    b = v_inv @ phi2 @ v
    mu = values / radius
    z = complex(np.sum(mu**L))
    norm_sum = float(np.sum(np.abs(mu) ** L))
    _guard_partition(z, norm_sum, "two_point")
    weights = a * b.T  # weights[j, k] = A_{jk} B_{kj}
    raw = np.asarray(
        [complex(np.sum(weights * np.outer(mu ** (L - r), mu**r))) / z for r in seps]
    )
    mean1 = complex(np.sum(np.diag(a) * mu**L)) / z
    mean2 = complex(np.sum(np.diag(b) * mu**L)) / z
    return raw, mean1 * mean2


def two_point(
    bundle: ModelBundle,
    op1: str,
    op2: str,
    L: int,
    method: str = "direct_trace",
    separations=None,
    connected: bool = False,
) -> CorrelatorSeries:
    """Two-point function G(r) = Tr[phi1 T^r phi2 T^{L-r}] / Z.

    method "direct_trace" multiplies scaled matrix powers; "spectral"
    sums eigenvector matrix elements weighted by eigenvalue ratios and
    refuses near-degenerate spectra, where the eigenbasis is
    unreliable. The two agree to 1e-7 relative on nondegenerate input.
    With connected=True the product <phi1><phi2> is subtracted; that
    combination is the one whose large-distance behavior the region
    taxonomy (decay / alternation / modulation / persistent
    oscillation) describes.

    Pairs covered by no reality argument (inputs not all real, parity
    does not conjugate the operators) are refused with InputError: for
    those the series is genuinely complex, obeying G(r)* = G(L - r)
    rather than realness, and the real-valued series type cannot carry
    it.
    """
    if L < 1:
        raise InputError(f"L must be >= 1, got {L}")
    if separations is None:
        separations = range(L + 1)
    seps = [int(r) for r in separations]
    if any(r < 0 or r > L for r in seps):
        raise InputError(f"separations must lie in [0, {L}], got {seps}")
    if method not in ("direct_trace", "spectral"):
        raise InputError(f"unknown method {method!r}")
    phi1 = _operator(bundle, op1)
    phi2 = _operator(bundle, op2)
    matrix = _matrix_of(bundle)
    _require_reality_cover(bundle, matrix, ((op1, phi1), (op2, phi2)))

    if method == "direct_trace":
        raw, disconnected = _direct_correlator(matrix, phi1, phi2, seps, L)
    else:
        raw, disconnected = _spectral_correlator(matrix, phi1, phi2, seps, L)

    if connected:
        raw = raw - disconnected
    gmax = float(np.max(np.abs(raw))) if raw.size else 0.0
    imag_residual = float(np.max(np.abs(raw.imag))) / max(
        gmax, np.finfo(float).tiny
    )
    if gmax > 0 and imag_residual > REALITY_TOL:
        raise InvariantError(
            f"G(r) imaginary residue {imag_residual:.3e} beyond {REALITY_TOL:g}"
        )
    return CorrelatorSeries(
        separations=tuple(seps),
        values=raw.real.copy(),
        L=L,
        operators=(op1, op2),
        method=method,
        connected=connected,
        imag_residual=imag_residual,
    )


@dataclass(frozen=True)
class FitResult:
    """Asymptotic decay parameters from the two leading eigenvalues."""

    inverse_correlation_length: float
    wavenumber: float
    decay_class: str
    tie_flag: bool
    lambda0: complex
    lambda1: complex


def fit_decay(spectrum: PairedSpectrum) -> FitResult:
    """Correlation decay/modulation from the top two eigenvalues by
    magnitude: xi^-1 = ln|lambda0/lambda1|, k = |arg lambda1 -
    arg lambda0|.

    Classes: "monotonic" (k = 0); "monotonic_alternating" (subleading
    eigenvalue real with sign opposite to lambda0: period-2
    alternation, k = pi, integer-separation values still one-signed in
    the cases of interest); "modulated" (subleading conjugate pair);
    "undamped" (lambda0 itself in a pair, oscillation without decay).
    tie_flag marks |lambda1| ~ |lambda2| within 1e-8 relative, where
    the subleading choice is ambiguous.
    """
    tagged = [(complex(v), False) for v in spectrum.reals]
    for v in spectrum.pairs:
        tagged.append((complex(v), True))
        tagged.append((complex(v).conjugate(), True))
    if len(tagged) < 2:
        raise InputError("fit_decay needs at least 2 eigenvalues")
    tagged.sort(key=lambda item: (-abs(item[0]), item[0].real, item[0].imag))
    (lam0, in_pair0), (lam1, in_pair1) = tagged[0], tagged[1]
    tie = len(tagged) > 2 and abs(abs(tagged[2][0]) - abs(lam1)) <= 1e-8 * abs(
        lam1
    )

    xi_inv = math.inf if abs(lam1) == 0.0 else math.log(abs(lam0) / abs(lam1))
    k = abs(cmath.phase(lam1) - cmath.phase(lam0))
    if in_pair0:
        klass = "undamped"
        xi_inv = 0.0
    elif in_pair1:
        klass = "modulated"
    elif k > 1e-9:
        klass = "monotonic_alternating"
    else:
        klass = "monotonic"
        k = 0.0
    return FitResult(
        inverse_correlation_length=xi_inv,
        wavenumber=k,
        decay_class=klass,
        tie_flag=bool(tie),
        lambda0=lam0,
        lambda1=lam1,
    )


@dataclass(frozen=True)
class ScanGrid:
    """Classification of a 2-axis parameter scan.

    labels[i, j] names the region at (axis_values[0][i],
    axis_values[1][j]); lambda0/lambda1 hold the two largest-magnitude
    eigenvalues per cell. failures lists (i, j, message) for cells
    whose solve raised; their label is "error". notes carries
    post-scan diagnostics that are worth surfacing but are not errors.
    """

    model: str
    fixed: dict
    axis_names: tuple
    axis_values: tuple
    labels: np.ndarray
    lambda0: np.ndarray
    lambda1: np.ndarray
    failures: list = field(default_factory=list)
    notes: tuple = ()

    @property
    def shape(self):
        return self.labels.shape


def _axis(definition):
    name, start, stop, steps = definition
    steps = int(steps)
    if steps < 1:
        raise InputError(f"axis {name!r} needs >= 1 steps")
    return str(name), np.linspace(float(start), float(stop), steps)


def phase_scan(
    model: str,
    fixed: dict,
    axis1,
    axis2,
    threads: int | None = None,
) -> ScanGrid:
    """Classify every cell of a 2-axis grid of model parameters.

    axis1/axis2 are (param_name, start, stop, steps), endpoints
    included. Cell failures are recorded in the result, not raised.
    For the Z(3) family at J = 0.2 a post-scan check watches where
    region-III cells fall: the genuine sliver at h_R >= 0 is noted,
    anything deeper into positive h_R raises.
    """
    name1, vals1 = _axis(axis1)
    name2, vals2 = _axis(axis2)
    if vals1.size * vals2.size > 10**6:
        raise InputError(
            f"grid of {vals1.size * vals2.size} cells exceeds the 1e6 cap"
        )

    def cell(idx):
        i, j = divmod(idx, vals2.size)
        params = dict(fixed)
        params[name1] = float(vals1[i])
        params[name2] = float(vals2[j])
        try:
            bundle = build_family(model, params)
            es = eig(bundle.matrix, by_magnitude=True)
            _, region = pair_and_classify(es)
            lam = es.values
            lam1 = complex(lam[1]) if lam.size > 1 else complex(np.nan)
            return region.label, complex(lam[0]), lam1, None
        except Exception as exc:  # per-cell failures recorded, not fatal
            return "error", complex(np.nan), complex(np.nan), str(exc)

    flat = map_ordered(cell, range(vals1.size * vals2.size), threads)
    labels = np.array([c[0] for c in flat], dtype=object).reshape(
        vals1.size, vals2.size
    )
    lam0 = np.array([c[1] for c in flat]).reshape(labels.shape)
    lam1 = np.array([c[2] for c in flat]).reshape(labels.shape)
    failures = [
        (idx // vals2.size, idx % vals2.size, c[3])
        for idx, c in enumerate(flat)
        if c[3] is not None
    ]

    grid = ScanGrid(
        model=model,
        fixed=dict(fixed),
        axis_names=(name1, name2),
        axis_values=(vals1, vals2),
        labels=labels,
        lambda0=lam0,
        lambda1=lam1,
        failures=failures,
    )
    note = _check_zn_third_region(grid)
    if note is not None:
        grid = replace(grid, notes=grid.notes + (note,))
    return grid


# Z(3), J = 0.2: the dominant-pair region crosses the h_R = 0 axis in a
# narrow sliver near h_I ~ 1.2-1.45, reaching at most h_R ~ +0.017
# (confirmed in 40-digit arithmetic and against brute-force enumeration).
# Region III beyond this guard means a field sign is wrong somewhere.
_THIRD_REGION_GUARD = 0.05


def _check_zn_third_region(grid: ScanGrid) -> str | None:
    """Post-scan placement check for region III in Z(3) at J = 0.2.

    Returns a note when III cells sit in the genuine sliver at
    0 <= h_R < the guard; raises InvariantError past the guard.
    """
    if grid.model != "zn":
        return None
    if int(grid.fixed.get("N", 0)) != 3:
        return None
    if float(grid.fixed.get("J", math.nan)) != 0.2:
        return None
    mask = grid.labels == "III"
    if not np.any(mask):
        return None
    if "h_R" in grid.axis_names:
        ax = grid.axis_names.index("h_R")
        hrs = [
            float(grid.axis_values[ax][(i, j)[ax]])
            for i, j in zip(*np.nonzero(mask))
        ]
    else:
        hrs = [float(grid.fixed["h_R"])] * int(np.count_nonzero(mask))
    nonneg = [h for h in hrs if h >= 0]
    if not nonneg:
        return None
    worst = max(nonneg)
    if worst >= _THIRD_REGION_GUARD:
        raise InvariantError(
            f"region III at h_R = {worst:.6g} lies beyond the axis sliver "
            "expected for Z(3) at J = 0.2; check the field signs"
        )
    return (
        f"{len(nonneg)} region-III cells at 0 <= h_R <= {worst:.6g}: the "
        "dominant-pair region crosses the h_R = 0 axis in a narrow sliver "
        "near h_I ~ 1.3"
    )


@dataclass(frozen=True)
class FreeEnergySet:
    """Complex free energies f_m = -ln lambda_m; stable entries have
    minimal real part."""

    free_energies: np.ndarray
    stable: np.ndarray
    param: float

    def __post_init__(self):
        if not bool(np.any(self.stable)):
            raise InvariantError("free-energy set has no stable entry")


@dataclass(frozen=True)
class LeeYangResult:
    """Zeros of Z along a one-parameter path.

    zeros: bisection-refined parameters where the exactly-real Z
    changes sign. predicted: (p, parameter) solutions of the
    dominant-pair phase condition theta = (2p+1) pi / (2L).
    matched_gaps[i] is the distance from zeros[i] to the nearest
    predictor (computed before any precision-losing conversion). When
    the path never changes sign, zeros is empty and note says so.
    """

    zeros: np.ndarray
    predicted: tuple
    matched_gaps: np.ndarray
    free_energy_sets: tuple
    L: int
    note: str


def _eigenvalues_any(obj, use_mp: bool):
    if use_mp:
        res = mpmath.mp.eig(obj, left=False, right=False)
        return list(res[0]) if isinstance(res, tuple) else list(res)
    return np.linalg.eigvals(_matrix_of(obj))


def _real_z_scaled(values, L: int, use_mp: bool):
    """Re sum (lambda/s)^L with s = max |lambda|; exactly real by
    construction (the conjugate pairs cancel the imaginary part)."""
    if use_mp:
        s = max(abs(v) for v in values)
        return mpmath.re(mpmath.fsum((v / s) ** L for v in values))
    mu = np.asarray(values) / np.max(np.abs(values))
    return float(np.sum(mu**L).real)


def _dominant_phase(values, use_mp: bool):
    lam = max(values, key=abs)
    if use_mp:
        return abs(mpmath.arg(lam))
    return abs(cmath.phase(lam))


def _bisect(fun, lo, hi, flo, width_goal, max_iter):
    """Sign-change bisection; arguments may be float or mpf and the
    arithmetic stays in that type."""
    for _ in range(max_iter):
        mid = (lo + hi) / 2
        if mid == lo or mid == hi or (hi - lo) <= width_goal:
            break
        fm = fun(mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def lee_yang_zeros(
    family,
    L: int,
    path,
    n_grid: int = 64,
    dps: int | None = None,
) -> LeeYangResult:
    """Locate partition-function zeros of a one-parameter family.

    Parameters
    ----------
    family : callable
        t -> ModelBundle or matrix; with dps set it must return an
        mpmath matrix and accept mpf parameters.
    L : int
        Chain length; Z(t) = sum_i lambda_i(t)^L.
    path : (t0, t1)
        Parameter interval, scanned on n_grid points for sign changes
        of the exactly-real Z, each bracket refined by bisection.
    dps : int, optional
        Run the search in mpmath arithmetic at this precision. Needed
        when zero-to-predictor gaps fall below double-precision
        resolution of the parameter axis (large L).

    Returns
    -------
    LeeYangResult
        Includes predictor locations solved from theta(t) =
        (2p+1) pi/(2L) and free energies f = -ln lambda at each zero.
    """
    t0, t1 = float(path[0]), float(path[1])
    if not (math.isfinite(t0) and math.isfinite(t1)) or t1 <= t0:
        raise InputError(f"path must be a finite ascending pair, got {path}")
    if L < 1:
        raise InputError(f"L must be >= 1, got {L}")
    if n_grid < 2:
        raise InputError("n_grid must be >= 2")
    use_mp = dps is not None

    with mpmath.mp.workdps(dps) if use_mp else contextlib.nullcontext():
        if use_mp:
            lo_t, span = mpmath.mpf(t0), mpmath.mpf(t1) - mpmath.mpf(t0)
            pi = mpmath.pi
            width_goal = mpmath.mpf(10) ** (-(dps - 5)) * max(1.0, abs(t1))
            max_iter = 8 * dps
        else:
            lo_t, span = t0, t1 - t0
            pi = math.pi
            width_goal = 0.0
            max_iter = 200
        grid = [lo_t + span * i / (n_grid - 1) for i in range(n_grid)]

        cache: dict = {}

        def eigs_at(t):
            if t not in cache:
                cache[t] = _eigenvalues_any(family(t), use_mp)
            return cache[t]

        def z_at(t):
            return _real_z_scaled(eigs_at(t), L, use_mp)

        def theta_at(t):
            return _dominant_phase(eigs_at(t), use_mp)

        z_grid = [z_at(t) for t in grid]

        zeros = []
        for a, b, za, zb in zip(grid, grid[1:], z_grid, z_grid[1:]):
            if za == 0:
                zeros.append(a)
                continue
            if za * zb >= 0:
                continue
            lo, hi = _bisect(z_at, a, b, za, width_goal, max_iter)
            zeros.append((lo + hi) / 2)
        if z_grid[-1] == 0:
            zeros.append(grid[-1])

        theta_grid = [theta_at(t) for t in grid]
        theta_max = max(theta_grid)
        predicted = []
        p = 0
        while True:
            target = (2 * p + 1) * pi / (2 * L)
            if target > theta_max:
                break
            for a, b, ta, tb in zip(grid, grid[1:], theta_grid, theta_grid[1:]):
                fa, fb = ta - target, tb - target
                if fa == 0:
                    predicted.append((p, a))
                    continue
                if fa * fb >= 0:
                    continue
                lo, hi = _bisect(
                    lambda t: theta_at(t) - target, a, b, fa, width_goal, max_iter
                )
                predicted.append((p, (lo + hi) / 2))
            p += 1

        gaps = []
        fsets = []
        for z in zeros:
            if predicted:
                gaps.append(float(min(abs(z - loc) for _, loc in predicted)))
            else:
                gaps.append(math.nan)
            values = eigs_at(z)
            if use_mp:
                fe = np.asarray([complex(-mpmath.log(v)) for v in values])
            else:
                fe = -np.log(np.asarray(values, dtype=np.complex128))
            remin = float(fe.real.min())
            stable = fe.real <= remin + 1e-9 * max(1.0, abs(remin))
            fsets.append(
                FreeEnergySet(free_energies=fe, stable=stable, param=float(z))
            )

        return LeeYangResult(
            zeros=np.asarray([float(z) for z in zeros]),
            predicted=tuple((int(pp), float(loc)) for pp, loc in predicted),
            matched_gaps=np.asarray(gaps, dtype=float),
            free_energy_sets=tuple(fsets),
            L=L,
            note="ok" if zeros else "no zeros bracketed",
        )
