"""Brute-force ground truth: exhaustive configuration sums for short
periodic chains, plus combinatorial checks of the SU(3) tensor algebra.

Nothing here touches the transfer-matrix builders; agreement between
the two routes is what the test suite asserts, so this module must stay
an independent computation of the same quantities.

Sums are reduced with math.fsum (exact compensated summation): near
partition-function zeros the cancellation between configuration weights
is the signal, and naive accumulation would destroy it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InvariantError, SizeCapError
from .util import map_ordered

__all__ = [
    "EnumerationResult",
    "enumerate_zn_chain",
    "enumerate_annni_chain",
    "enumerate_annni_bonds",
    "su3_tensor_check",
]

CONFIG_CAP = 10**8
CHUNK_ROWS = 1 << 16


@dataclass(frozen=True)
class EnumerationResult:
    """Exhaustive sum over configurations of a periodic chain.

    Z keeps its imaginary part (it should cancel to rounding level for
    symmetric parameter sets; keeping it lets tests measure that).
    correlators maps separation r to the unnormalized two-point sum
    divided by Z. weight_mass is sum |weight| over configurations: the
    conditioning scale of the sum. fsum reduces the terms exactly, so
    the only error left in Z is the rounding of each exp(), a small
    multiple of machine epsilon times weight_mass; comparisons against
    other routes should be measured against this scale.
    """

    Z: complex
    correlators: dict
    config_count: int
    weight_mass: float


def _check_cap(base: int, length: int) -> int:
    if length < 1:
        raise InputError(f"chain length must be >= 1, got {length}")
    total = base**length
    if total > CONFIG_CAP:
        raise SizeCapError(
            f"{base}^{length} = {total} configurations exceeds cap {CONFIG_CAP}"
        )
    return total


def _digit_chunks(base: int, ndigits: int, chunk_rows: int):
    """Yield mixed-radix digit tables (rows, ndigits) covering base**ndigits."""
    total = base**ndigits
    weights = base ** np.arange(ndigits - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk_rows):
        idx = np.arange(start, min(start + chunk_rows, total), dtype=np.int64)
        yield ((idx[:, None] // weights) % base).astype(np.int8)


def _fsum_pairs(parts) -> complex:
    return complex(
        math.fsum(p[0] for p in parts), math.fsum(p[1] for p in parts)
    )


def enumerate_zn_chain(
    N: int,
    L: int,
    J: float,
    h_R: float,
    h_I: float,
    separations=None,
    threads: int | None = 1,
) -> EnumerationResult:
    """Exact partition sum of a periodic Z(N) chain with complex field.

    The per-configuration weight is exp of the summed bond action
    (J/2)(z^{j_i} z^{-j_{i+1}} + z^{-j_i} z^{j_{i+1}}) plus per-site
    field terms H1 z^{j} + H2 z^{-j} with H1 = h_R + h_I and
    H2 = h_R - h_I. Correlators are <w_0 w_r^dagger> = <z^{j_0 - j_r}>.

    Parameters
    ----------
    separations : iterable of int, optional
        Correlator separations; defaults to range(L).
    threads : int or None
        Workers over leading-spin blocks; reduction order is fixed by
        block index, so the result is identical for any count.

    Raises
    ------
    SizeCapError
        If N^L exceeds 10^8.
    """
    if N < 2:
        raise InputError(f"N must be >= 2, got {N}")
    config_count = _check_cap(N, L)
    if separations is None:
        separations = range(L)
    seps = [int(r) for r in separations]
    if any(r < 0 or r >= L for r in seps):
        raise InputError(f"separations must lie in [0, {L}), got {seps}")

    z = np.exp(2j * np.pi * np.arange(N) / N)
    h1 = h_R + h_I
    h2 = h_R - h_I

    def block(lead: int):
        z_parts = []
        mass_parts = []
        corr_parts = {r: [] for r in seps}
        for tail in _digit_chunks(N, L - 1, CHUNK_ROWS) if L > 1 else [
            np.empty((1, 0), dtype=np.int8)
        ]:
            digits = np.concatenate(
                [np.full((tail.shape[0], 1), lead, dtype=np.int8), tail], axis=1
            )
            zc = z[digits]
            zcc = zc.conj()
            nxt = np.roll(zc, -1, axis=1)
            action = (
                (J / 2.0) * (zc * nxt.conj() + zcc * nxt) + h1 * zc + h2 * zcc
            ).sum(axis=1)
            w = np.exp(action)
            z_parts.append((math.fsum(w.real), math.fsum(w.imag)))
            mass_parts.append(math.fsum(np.abs(w)))
            for r in seps:
                g = zc[:, 0] * zcc[:, r] * w
                corr_parts[r].append((math.fsum(g.real), math.fsum(g.imag)))
        return (
            _fsum_pairs(z_parts),
            math.fsum(mass_parts),
            {r: _fsum_pairs(parts) for r, parts in corr_parts.items()},
        )

    results = map_ordered(block, range(N), threads)
    Z = _fsum_pairs([(res[0].real, res[0].imag) for res in results])
    mass = math.fsum(res[1] for res in results)
    correlators = {
        r: _fsum_pairs([(res[2][r].real, res[2][r].imag) for res in results]) / Z
        for r in seps
    }
    return EnumerationResult(
        Z=Z, correlators=correlators, config_count=config_count, weight_mass=mass
    )


def enumerate_annni_chain(
    K1: float,
    K2: float,
    L: int,
    separations=None,
    threads: int | None = 1,
) -> EnumerationResult:
    """Exact spin sum of the periodic chain with nearest- and
    next-nearest-neighbor couplings K1, K2.

    Weight per configuration: exp(sum_i K1 s_i s_{i+1} + K2 s_i s_{i+2}).
    Correlators are <s_0 s_r>.
    """
    config_count = _check_cap(2, L)
    if separations is None:
        separations = range(L)
    seps = [int(r) for r in separations]
    if any(r < 0 or r >= L for r in seps):
        raise InputError(f"separations must lie in [0, {L}), got {seps}")

    def block(lead: int):
        z_parts = []
        corr_parts = {r: [] for r in seps}
        for tail in _digit_chunks(2, L - 1, CHUNK_ROWS) if L > 1 else [
            np.empty((1, 0), dtype=np.int8)
        ]:
            digits = np.concatenate(
                [np.full((tail.shape[0], 1), lead, dtype=np.int8), tail], axis=1
            )
            s = 1.0 - 2.0 * digits  # 0 -> +1, 1 -> -1
            action = K1 * (s * np.roll(s, -1, axis=1)).sum(axis=1)
            action += K2 * (s * np.roll(s, -2, axis=1)).sum(axis=1)
            w = np.exp(action)
            z_parts.append((math.fsum(w), 0.0))
            for r in seps:
                g = s[:, 0] * s[:, r] * w
                corr_parts[r].append((math.fsum(g), 0.0))
        return (
            _fsum_pairs(z_parts),
            {r: _fsum_pairs(parts) for r, parts in corr_parts.items()},
        )

    results = map_ordered(block, range(2), threads)
    Z = _fsum_pairs([(res[0].real, res[0].imag) for res in results])
    correlators = {
        r: _fsum_pairs([(res[1][r].real, res[1][r].imag) for res in results]) / Z
        for r in seps
    }
    # all weights are positive: the sum is perfectly conditioned
    return EnumerationResult(
        Z=Z, correlators=correlators, config_count=config_count, weight_mass=Z.real
    )


def enumerate_annni_bonds(K1: float, K2: float, L: int) -> EnumerationResult:
    """Constrained bond-variable sum for the same chain.

    Substituting sigma_i = s_i s_{i+1} maps the spin sum onto bond
    variables subject to the global constraint prod_i sigma_i = 1; the
    unconstrained sum weighted by (1 + prod sigma) counts each spin
    configuration exactly once times 2 for the overall flip, so it must
    reproduce the spin-sum Z. No correlators here: the map scrambles
    fixed-separation spin products.
    """
    config_count = _check_cap(2, L)

    parts = []
    for digits in _digit_chunks(2, L, CHUNK_ROWS):
        sigma = 1.0 - 2.0 * digits
        action = K1 * sigma.sum(axis=1)
        if L > 1:
            action += K2 * (sigma * np.roll(sigma, -1, axis=1)).sum(axis=1)
        w = (1.0 + sigma.prod(axis=1)) * np.exp(action)
        parts.append((math.fsum(w), 0.0))
    Z = _fsum_pairs(parts)
    # the constraint projector keeps every term >= 0
    return EnumerationResult(
        Z=Z, correlators={}, config_count=config_count, weight_mass=Z.real
    )


def su3_tensor_check(basis, W) -> dict:
    """Verify the fundamental-character matrices against the tensor algebra.

    For every interior irrep S (all fusion targets of S x fundamental
    inside the basis), the column sum weighted by dimensions must obey
    3 * dim(S) = sum_R Wplus[R, S] * dim(R); and conjugation symmetry
    requires Wplus[R, S] = Wminus[Rbar, Sbar] entrywise.

    Parameters
    ----------
    basis : IrrepBasis
        Must carry (p, q) Dynkin labels and integer dimensions.
    W : (Wplus, Wminus)
        Character matrices in the same label order.

    Returns
    -------
    dict with keys "interior", "checked", "skipped" (truncation
    boundary), and "conjugation_pairs".

    Raises
    ------
    InvariantError
        Naming the first irrep S that violates either identity.
    """
    if getattr(basis, "group", None) != "su3":
        raise InputError(f"tensor check is defined for su3 bases, got {basis!r}")
    wplus, wminus = (np.asarray(m) for m in W)
    labels = list(basis.labels)
    dims = np.asarray(basis.dims, dtype=np.int64)
    index = {lab: i for i, lab in enumerate(labels)}

    def fusion_targets(p: int, q: int):
        cands = [(p + 1, q), (p - 1, q + 1), (p, q - 1)]
        return [(a, b) for a, b in cands if a >= 0 and b >= 0]

    checked, skipped = [], []
    for s, (p, q) in enumerate(labels):
        targets = fusion_targets(p, q)
        if not all(t in index for t in targets):
            skipped.append((p, q))
            continue
        lhs = 3 * int(dims[s])
        rhs = int(np.sum(wplus[:, s] * dims))
        if lhs != rhs:
            raise InvariantError(
                f"dimension sum rule fails at S={p, q}: 3*dim={lhs}, "
                f"sum_R Wplus[R,S]*dim(R)={rhs}"
            )
        checked.append((p, q))

    conj_pairs = 0
    for (p, q), s in index.items():
        sbar = index.get((q, p))
        if sbar is None:
            continue
        for (a, b), r in index.items():
            rbar = index.get((b, a))
            if rbar is None:
                continue
            if wplus[r, s] != wminus[rbar, sbar]:
                raise InvariantError(
                    f"conjugation symmetry fails: Wplus[{a, b},{p, q}] = "
                    f"{wplus[r, s]} but Wminus[{b, a},{q, p}] = {wminus[rbar, sbar]}"
                )
            conj_pairs += 1

    return {
        "interior": len(checked),
        "checked": checked,
        "skipped": skipped,
        "conjugation_pairs": conj_pairs,
    }
