"""Partition functions, correlators, decay fits, scans, and zero
location, cross-checked against the enumeration oracle."""

import math
from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ptspectra import (
    AnnniSpec,
    DegenerateSpectrumError,
    InputError,
    InvariantError,
    PartitionZeroError,
    ZnModelSpec,
    build_annni,
    build_family,
    build_zn_transfer,
    eig,
    enumerate_zn_chain,
    fit_decay,
    lee_yang_zeros,
    one_point,
    pair_and_classify,
    partition_function,
    phase_scan,
    two_point,
)
from ptspectra.spin_models import zn_transfer_mp

ANCHOR_A = dict(N=3, J=0.2, h_R=-0.45, h_I=0.5)
ANCHOR_D = dict(N=3, J=0.2, h_R=-0.5, h_I=0.875)


def test_partition_matches_oracle():
    rng = np.random.default_rng(14)
    for _ in range(10):
        params = {
            "N": int(rng.integers(2, 5)),
            "J": float(rng.uniform(-1, 1)),
            "h_R": float(rng.uniform(-1.5, 0.5)),
            "h_I": float(rng.uniform(0, 1.5)),
        }
        L = int(rng.integers(3, 8))
        b = build_zn_transfer(ZnModelSpec(**params))
        pv = partition_function(b, L)
        res = enumerate_zn_chain(params["N"], L, params["J"], params["h_R"],
                                 params["h_I"])
        got = pv.z_over_scale * pv.scale**L
        assert_allclose(got, res.Z.real, rtol=1e-9)
        assert pv.imag_residual <= 1e-9
        assert pv.trace_check_rel <= 1e-8


def test_partition_value_reconstruction():
    b = build_zn_transfer(ZnModelSpec(**ANCHOR_A))
    pv = partition_function(b, 10)
    assert pv.sign == 1.0
    assert_allclose(pv.value, pv.z_over_scale * pv.scale**10, rtol=1e-12)
    assert not pv.near_zero


def test_sign_problem_visible_in_region_three():
    # dominant pair: the pair sum oscillates in L and goes negative
    b = build_zn_transfer(ZnModelSpec(**ANCHOR_D))
    pair_sums = [partition_function(b, L).pair_sum_over_scale for L in range(2, 14)]
    assert min(pair_sums) < 0
    signs = {partition_function(b, L).sign for L in range(2, 14)}
    assert -1.0 in signs


def test_one_point_matches_enumeration():
    # test-local enumeration of <w> for a small chain
    import cmath
    import itertools

    params = dict(N=3, J=0.4, h_R=-0.3, h_I=0.7)
    L = 4
    z = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]
    h1 = params["h_R"] + params["h_I"]
    h2 = params["h_R"] - params["h_I"]
    num = 0.0 + 0.0j
    den = 0.0 + 0.0j
    for cfg in itertools.product(range(3), repeat=L):
        action = sum(
            (params["J"] / 2)
            * (z[cfg[i]] * z[cfg[(i + 1) % L]].conjugate()
               + z[cfg[i]].conjugate() * z[cfg[(i + 1) % L]])
            + h1 * z[cfg[i]]
            + h2 * z[cfg[i]].conjugate()
            for i in range(L)
        )
        w = cmath.exp(action)
        den += w
        num += z[cfg[0]] * w
    b = build_zn_transfer(ZnModelSpec(**params))
    assert_allclose(one_point(b, "w", L), (num / den).real, rtol=1e-9, atol=1e-12)


def test_two_point_matches_oracle():
    params = dict(N=3, J=0.2, h_R=0.25, h_I=1.25)
    L = 6
    b = build_zn_transfer(ZnModelSpec(**params))
    res = enumerate_zn_chain(
        params["N"], L, params["J"], params["h_R"], params["h_I"],
        separations=range(L),
    )
    series = two_point(b, "w", "w_dagger", L, separations=range(L))
    for i, r in enumerate(series.separations):
        assert_allclose(series.values[i], res.correlators[r].real,
                        rtol=1e-9, atol=1e-12)


def test_two_point_methods_agree():
    rng = np.random.default_rng(21)
    for _ in range(10):
        b = build_zn_transfer(
            ZnModelSpec(
                N=int(rng.integers(2, 5)),
                J=float(rng.uniform(-1, 1)),
                h_R=float(rng.uniform(-1.5, 0.5)),
                h_I=float(rng.uniform(0, 1.5)),
            )
        )
        L = int(rng.integers(6, 20))
        seps = range(0, L + 1, 2)
        direct = two_point(b, "w", "w_dagger", L, separations=seps)
        spectral = two_point(
            b, "w", "w_dagger", L, method="spectral", separations=seps
        )
        scale = max(np.max(np.abs(direct.values)), 1e-30)
        assert np.max(np.abs(direct.values - spectral.values)) <= 1e-7 * scale


def test_two_point_connected_subtracts_means():
    b = build_zn_transfer(ZnModelSpec(**ANCHOR_A))
    L = 12
    raw = two_point(b, "w", "w_dagger", L)
    conn = two_point(b, "w", "w_dagger", L, connected=True)
    prod = one_point(b, "w", L) * one_point(b, "w_dagger", L)
    assert_allclose(conn.values, raw.values - prod, rtol=1e-9, atol=1e-12)


def test_two_point_periodicity():
    # G(r) on the ring satisfies G(r) = G(L - r) for w, w_dagger swap
    b = build_zn_transfer(ZnModelSpec(**ANCHOR_A))
    L = 8
    fwd = two_point(b, "w", "w_dagger", L)
    rev = two_point(b, "w_dagger", "w", L)
    assert_allclose(fwd.values, rev.values[::-1], rtol=1e-9)


def test_two_point_validation():
    b = build_zn_transfer(ZnModelSpec(**ANCHOR_A))
    with pytest.raises(InputError):
        two_point(b, "w", "w_dagger", 4, separations=[5])
    with pytest.raises(InputError):
        two_point(b, "nope", "w", 4)
    with pytest.raises(InputError):
        two_point(b, "w", "w_dagger", 4, method="magic")


def test_two_point_refuses_uncovered_chiral_pair():
    # clock operators on the twisted family: trivial parity does not
    # conjugate them and the operators are complex, so no reality
    # argument covers the pair; the true symmetry is G(r)* = G(L - r)
    b = build_family("chiral_potts", {"N": 5, "J": 0.5, "delta": 0.8})
    L = 6
    with pytest.raises(InputError, match="reality"):
        two_point(b, "w", "w_dagger", L)

    w = b.site_operators["w"]
    wd = b.site_operators["w_dagger"]
    powers = [np.linalg.matrix_power(b.matrix, k) for k in range(L + 1)]
    z = complex(np.trace(powers[L]))
    g = np.asarray(
        [
            complex(np.trace(w @ powers[r] @ wd @ powers[L - r])) / z
            for r in range(L + 1)
        ]
    )
    top = float(np.max(np.abs(g)))
    assert float(np.max(np.abs(g.imag))) > 1e-3 * top  # genuinely complex
    assert float(np.max(np.abs(np.conj(g) - g[::-1]))) <= 1e-12 * top

    # N = 2 keeps real operators, so the all-real route still applies
    b2 = build_family("chiral_potts", {"N": 2, "J": 0.5, "delta": 0.8})
    series = two_point(b2, "w", "w_dagger", L)
    assert series.imag_residual <= 1e-12


def test_spectral_method_refuses_degenerate():
    _, blk = build_annni(AnnniSpec(K1=0.0, K2=0.0))
    t4, _ = build_annni(AnnniSpec(K1=0.0, K2=0.0))
    with pytest.raises(DegenerateSpectrumError):
        two_point(t4, "s", "s", 6, method="spectral")


def test_partition_zero_guard():
    # bisected Lee-Yang zero: correlators must refuse there
    def family(t):
        return build_family(
            "zn", {"N": 3, "J": 0.2, "h_R": -0.5, "h_I": float(t)}
        )

    res = lee_yang_zeros(family, 8, (0.7, 1.0))
    assert len(res.zeros) >= 1
    b = build_family("zn", {"N": 3, "J": 0.2, "h_R": -0.5, "h_I": res.zeros[0]})
    with pytest.raises(PartitionZeroError):
        two_point(b, "w", "w_dagger", 8)
    with pytest.raises(PartitionZeroError):
        one_point(b, "w", 8)


def test_fit_decay_classes():
    es = eig(np.diag([3.0, 1.0 + 1.0j, 1.0 - 1.0j]), by_magnitude=True)
    paired, _ = pair_and_classify(es)
    fit = fit_decay(paired)
    assert fit.decay_class == "modulated"
    assert_allclose(fit.inverse_correlation_length, math.log(3 / math.sqrt(2)))
    assert_allclose(fit.wavenumber, math.pi / 4)

    es = eig(np.diag([2.0 + 1.0j, 2.0 - 1.0j, 1.0]), by_magnitude=True)
    paired, _ = pair_and_classify(es)
    fit = fit_decay(paired)
    assert fit.decay_class == "undamped"
    assert fit.inverse_correlation_length == 0.0
    assert_allclose(fit.wavenumber, 2 * math.atan(0.5))

    es = eig(np.diag([3.0, 2.0, 1.0]), by_magnitude=True)
    paired, _ = pair_and_classify(es)
    assert fit_decay(paired).decay_class == "monotonic"

    es = eig(np.diag([3.0, -2.0, 1.0]), by_magnitude=True)
    paired, _ = pair_and_classify(es)
    fit = fit_decay(paired)
    assert fit.decay_class == "monotonic_alternating"
    assert_allclose(fit.wavenumber, math.pi)


def test_fit_decay_tie_flag():
    es = eig(np.diag([3.0, 2.0, -2.0]), by_magnitude=True)
    paired, _ = pair_and_classify(es)
    assert fit_decay(paired).tie_flag
    es = eig(np.diag([3.0, 2.0, 1.0]), by_magnitude=True)
    paired, _ = pair_and_classify(es)
    assert not fit_decay(paired).tie_flag


def test_phase_scan_labels_and_anchors():
    grid = phase_scan(
        "zn",
        {"N": 3, "J": 0.2},
        ("h_R", -0.5, 0.25, 4),
        ("h_I", 0.5, 1.25, 7),
    )
    assert grid.shape == (4, 7)
    assert grid.labels[0, 0] != "error"
    # anchors: (-0.5, 0.875) region III, (0.25, 1.25) region II
    i = list(np.round(grid.axis_values[0], 10)).index(-0.5)
    j = list(np.round(grid.axis_values[1], 10)).index(0.875)
    assert grid.labels[i, j] == "III"
    assert grid.labels[3, 6] == "II"
    assert not grid.failures
    # the dominant-pair sliver at (h_R, h_I) = (0, 1.25) is genuine:
    # |lambda_pair| = 0.676350 beats the real eigenvalue 0.664020
    assert grid.labels[2, 6] == "III"
    assert len(grid.notes) == 1
    assert "h_R = 0" in grid.notes[0]


def test_phase_scan_third_region_guard():
    from ptspectra.observables import ScanGrid, _check_zn_third_region

    def synthetic(hr_values, labels):
        arr = np.array(labels, dtype=object).reshape(len(hr_values), 1)
        return ScanGrid(
            model="zn",
            fixed={"N": 3, "J": 0.2, "h_I": 1.3},
            axis_names=("h_R",),
            axis_values=(np.asarray(hr_values, dtype=float),),
            labels=arr,
            lambda0=np.zeros_like(arr, dtype=complex),
            lambda1=np.zeros_like(arr, dtype=complex),
        )

    note = _check_zn_third_region(synthetic([-0.5, 0.01], ["III", "III"]))
    assert note is not None and "0.01" in note
    with pytest.raises(InvariantError, match="field signs"):
        _check_zn_third_region(synthetic([0.2], ["III"]))
    # other couplings are unconstrained
    other = synthetic([0.2], ["III"])
    other = replace(other, fixed={"N": 3, "J": 0.5, "h_I": 1.3})
    assert _check_zn_third_region(other) is None


def test_phase_scan_records_failures():
    # delta beyond [0, 1] fails per cell without killing the scan
    grid = phase_scan(
        "chiral_potts",
        {"N": 3, "J": 0.5},
        ("delta", 0.8, 1.2, 3),
        ("J", 0.2, 0.4, 2),
    )
    labels = set(grid.labels.ravel())
    assert "error" in labels
    assert grid.failures


def test_phase_scan_grid_cap():
    with pytest.raises(InputError):
        phase_scan(
            "zn",
            {"N": 3, "J": 0.2},
            ("h_R", -1, 0, 2000),
            ("h_I", 0, 1, 2000),
        )


def test_phase_scan_thread_invariance():
    kwargs = dict(
        model="zn",
        fixed={"N": 3, "J": 0.2},
        axis1=("h_R", -1.0, 0.0, 5),
        axis2=("h_I", 0.0, 1.5, 5),
    )
    a = phase_scan(**kwargs, threads=1)
    b = phase_scan(**kwargs, threads=4)
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(a.lambda0, b.lambda0)


def test_lee_yang_synthetic_family():
    def family(bparam):
        c, s = math.cos(bparam), math.sin(bparam)
        return math.exp(-0.2) * np.array([[c, s], [-s, c]])

    L = 8
    res = lee_yang_zeros(family, L, (0.05, 0.95), n_grid=96)
    want = [(2 * p + 1) * math.pi / (2 * L) for p in range(5)]
    want = [w for w in want if 0.05 < w < 0.95]
    assert len(res.zeros) == len(want)
    assert_allclose(res.zeros, want, atol=1e-10)
    assert res.note == "ok"
    # predictor coincides with the exact zeros for this family
    assert np.max(res.matched_gaps) <= 1e-10


def test_lee_yang_no_zeros():
    def family(t):
        return build_family("zn", {"N": 3, "J": 0.2, "h_R": -0.45, "h_I": float(t)})

    res = lee_yang_zeros(family, 6, (0.1, 0.3), n_grid=16)
    assert res.zeros.size == 0
    assert res.note == "no zeros bracketed"


def test_lee_yang_free_energies_at_zero():
    def family(t):
        return build_family("zn", {"N": 3, "J": 0.2, "h_R": -0.5, "h_I": float(t)})

    res = lee_yang_zeros(family, 8, (0.7, 1.0))
    assert res.free_energy_sets
    for fset in res.free_energy_sets:
        assert fset.stable.any()
        stable_re = fset.free_energies.real[fset.stable]
        assert np.all(stable_re <= fset.free_energies.real.min() + 1e-9)


def test_lee_yang_mp_mode_matches_float_where_resolvable():
    def fam_float(t):
        return build_family("zn", {"N": 3, "J": 0.2, "h_R": -0.5, "h_I": float(t)})

    def fam_mp(t):
        return zn_transfer_mp(
            ZnModelSpec(N=3, J=0.2, h_R=-0.5, h_I=t), dps=30
        )

    a = lee_yang_zeros(fam_float, 8, (0.7, 1.0))
    b = lee_yang_zeros(fam_mp, 8, (0.7, 1.0), dps=30)
    assert len(a.zeros) == len(b.zeros)
    assert_allclose(a.zeros, b.zeros, atol=1e-12)


def test_lee_yang_validation():
    fam = lambda t: np.eye(2)
    with pytest.raises(InputError):
        lee_yang_zeros(fam, 4, (1.0, 0.5))
    with pytest.raises(InputError):
        lee_yang_zeros(fam, 0, (0.0, 1.0))
    with pytest.raises(InputError):
        lee_yang_zeros(fam, 4, (0.0, 1.0), n_grid=1)
