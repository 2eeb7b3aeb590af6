"""Command-line entry point: parse a JSON config and/or flags,
dispatch the computation, and emit CSV/JSON artifacts.

Behavior contracts: flags override config values; unknown config keys
are rejected; outputs are written atomically (temp file + rename) with
a header row and a JSON metadata sidecar carrying the resolved
parameters and library version (no timestamps, so identical inputs
give byte-identical outputs); exit code 0 on success, 1 on computation
errors, 2 on config errors. All text output is UTF-8 with LF endings.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import ConfigError, PtSpectraError
from .gauge_models import GaugeSpec, build_gauge_hamiltonian, eigen_trajectory
from .linalg import eig
from .observables import lee_yang_zeros, phase_scan, two_point
from .oracle import enumerate_annni_bonds, enumerate_annni_chain, enumerate_zn_chain
from .ptsym import hermitize, pair_and_classify, real_basis
from .spin_models import (
    AnnniSpec,
    ZnModelSpec,
    build_annni,
    build_family,
    zn_transfer_mp,
)
from .util import multiset_match_dev, resolve_threads

FMT = "%.17g"

MODEL_PARAM_ORDER = {
    "zn": ("N", "J", "h_R", "h_I"),
    "chiral_potts": ("N", "J", "delta"),
    "annni": ("K1", "K2"),
}


def _fmt(x) -> str:
    return FMT % float(x)


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_sidecar(path: str, subcommand: str, params: dict, extra=None) -> None:
    doc = {
        "version": __version__,
        "subcommand": subcommand,
        "parameters": params,
    }
    if extra:
        doc.update(extra)
    _atomic_write(
        path + ".meta.json", json.dumps(doc, sort_keys=True, indent=2) + "\n"
    )


def _emit(doc: dict, out: str | None, subcommand: str, params: dict, extra=None):
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        _atomic_write(out, text)
        _write_sidecar(out, subcommand, params, extra)
    else:
        sys.stdout.write(text)


def _emit_csv(
    rows, header, out: str, subcommand: str, params: dict, extra=None
) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    _atomic_write(out, "\n".join(lines) + "\n")
    _write_sidecar(out, subcommand, params, extra)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def _merge_config(args: argparse.Namespace, allowed: tuple) -> dict:
    """Config file values overridden by non-None flags; unknown config
    keys rejected."""
    cfg = _load_config(getattr(args, "config", None))
    unknown = sorted(set(cfg) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    merged = dict(cfg)
    for key in allowed:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    return merged


def _require(cfg: dict, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise ConfigError(f"missing required parameter(s): {', '.join(missing)}")
    return [cfg[k] for k in keys]


def _parse_range(text, parts: int):
    """\"a:b\" (paths) or \"a:b:n\" (axes); plain numbers pass through."""
    if not isinstance(text, str) or ":" not in text:
        return None
    bits = text.split(":")
    if len(bits) != parts:
        raise ConfigError(
            f"range {text!r} must have {parts} colon-separated fields"
        )
    try:
        head = [float(b) for b in bits[:2]]
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r}: {exc}") from exc
    if parts == 2:
        return tuple(head)
    try:
        steps = int(bits[2])
    except ValueError as exc:
        raise ConfigError(f"bad step count in {text!r}") from exc
    return (head[0], head[1], steps)


def _model_params(cfg: dict):
    """Split merged config into (model, scalar params, ranged params)."""
    model = cfg.get("model")
    if model not in MODEL_PARAM_ORDER:
        raise ConfigError(
            f"model must be one of {sorted(MODEL_PARAM_ORDER)}, got {model!r}"
        )
    scalars: dict = {}
    ranged: dict = {}
    for name in MODEL_PARAM_ORDER[model]:
        value = cfg.get(name)
        if value is None:
            raise ConfigError(f"model {model!r} needs parameter {name}")
        rng = _parse_range(value, 3) if isinstance(value, str) else None
        if rng is not None:
            ranged[name] = rng
        else:
            scalars[name] = int(value) if name == "N" else float(value)
    if cfg.get("route") is not None:
        scalars["route"] = str(cfg["route"])
    return model, scalars, ranged


def _spectrum_doc(bundle, residual_tol: float) -> dict:
    es = eig(bundle.matrix, by_magnitude=True, residual_tol=residual_tol)
    paired, region = pair_and_classify(es)
    return {
        "model": bundle.metadata.get("model"),
        "kind": bundle.kind,
        "dim": bundle.dim,
        "ordering": "by_magnitude",
        "eigenvalues": [[v.real, v.imag] for v in es.values],
        "region": region.label,
        "dominant": [[v.real, v.imag] for v in region.dominant_eigenvalues],
        "evidence": {
            "real_count": region.evidence["real_count"],
            "pair_count": region.evidence["pair_count"],
            "near_exceptional": [
                [v.real, v.imag] for v in region.evidence["near_exceptional"]
            ],
        },
        "pairing_tolerance": paired.pairing_tolerance,
        "pt_residual": bundle.metadata.get("pt_residual"),
        "condition_estimate": es.condition_estimate,
    }


SPIN_KEYS = ("model", "N", "J", "h_R", "h_I", "delta", "K1", "K2", "route")
GAUGE_KEYS = ("group", "coupling_scale", "h", "beta_mu", "cutoff", "high_density")


def cmd_spectrum(args) -> int:
    cfg = _merge_config(args, SPIN_KEYS + ("out", "residual_tol"))
    model, scalars, ranged = _model_params(cfg)
    if ranged:
        raise ConfigError("spectrum takes scalar parameters, not ranges")
    bundle = build_family(model, scalars)
    tol = float(cfg.get("residual_tol") or 1e-10)
    doc = _spectrum_doc(bundle, tol)
    doc["parameters"] = scalars
    _emit(doc, cfg.get("out"), "spectrum", {"model": model, **scalars})
    return 0


def cmd_classify(args) -> int:
    cfg = _merge_config(args, SPIN_KEYS + ("out", "residual_tol"))
    model, scalars, ranged = _model_params(cfg)
    if ranged:
        raise ConfigError("classify takes scalar parameters, not ranges")
    bundle = build_family(model, scalars)
    tol = float(cfg.get("residual_tol") or 1e-10)
    full = _spectrum_doc(bundle, tol)
    doc = {
        "model": model,
        "parameters": scalars,
        "region": full["region"],
        "dominant": full["dominant"],
        "evidence": full["evidence"],
    }
    _emit(doc, cfg.get("out"), "classify", {"model": model, **scalars})
    return 0


def cmd_correlator(args) -> int:
    keys = SPIN_KEYS + (
        "L",
        "op1",
        "op2",
        "method",
        "connected",
        "rmax",
        "label",
        "out",
    )
    cfg = _merge_config(args, keys)
    model, scalars, ranged = _model_params(cfg)
    if ranged:
        raise ConfigError("correlator takes scalar parameters, not ranges")
    (length,) = _require(cfg, "L")
    length = int(length)
    if model == "annni" and "route" not in scalars:
        scalars["route"] = "pair_transfer"
    bundle = build_family(model, scalars)
    op1 = cfg.get("op1") or ("s" if model == "annni" else "w")
    op2 = cfg.get("op2") or ("s" if model == "annni" else "w_dagger")
    method = cfg.get("method") or "direct_trace"
    connected = bool(cfg.get("connected"))
    rmax = int(cfg["rmax"]) if cfg.get("rmax") is not None else length
    series = two_point(
        bundle,
        op1,
        op2,
        length,
        method=method,
        separations=range(min(rmax, length) + 1),
        connected=connected,
    )
    rows = [
        (str(r), _fmt(g), series.method)
        for r, g in zip(series.separations, series.values)
    ]
    params = {
        "model": model,
        **scalars,
        "L": length,
        "op1": op1,
        "op2": op2,
        "method": method,
        "connected": connected,
    }
    if cfg.get("label"):
        params["label"] = str(cfg["label"])
    out = cfg.get("out")
    if not out:
        raise ConfigError("correlator requires --out for its CSV")
    _emit_csv(
        rows,
        ("r", "G", "method"),
        out,
        "correlator",
        params,
        extra={"kind": "correlator"},
    )
    return 0


def cmd_scan(args) -> int:
    cfg = _merge_config(args, SPIN_KEYS + ("out", "threads"))
    model, scalars, ranged = _model_params(cfg)
    if len(ranged) != 2:
        raise ConfigError(
            f"scan needs exactly 2 ranged parameters (a:b:n), got {len(ranged)}"
        )
    out = cfg.get("out")
    if not out:
        raise ConfigError("scan requires --out for its CSV")
    order = [n for n in MODEL_PARAM_ORDER[model] if n in ranged]
    name1, name2 = order
    axis1 = (name1, *ranged[name1])
    axis2 = (name2, *ranged[name2])
    threads = resolve_threads(cfg.get("threads"))
    grid = phase_scan(model, scalars, axis1, axis2, threads=threads)
    vals1, vals2 = grid.axis_values
    rows = []
    for i in range(vals1.size):
        for j in range(vals2.size):
            l0 = grid.lambda0[i, j]
            l1 = grid.lambda1[i, j]
            rows.append(
                (
                    _fmt(vals1[i]),
                    _fmt(vals2[j]),
                    str(grid.labels[i, j]),
                    _fmt(l0.real),
                    _fmt(l0.imag),
                    _fmt(l1.real),
                    _fmt(l1.imag),
                )
            )
    params = {"model": model, **scalars}
    extra = {
        "kind": "scan",
        "axes": {
            "param1": {"name": name1, "range": ranged[name1]},
            "param2": {"name": name2, "range": ranged[name2]},
        },
        "failures": len(grid.failures),
        "notes": list(grid.notes),
    }
    _emit_csv(
        rows,
        (
            "param1",
            "param2",
            "region",
            "re_lambda0",
            "im_lambda0",
            "re_lambda1",
            "im_lambda1",
        ),
        out,
        "scan",
        params,
        extra,
    )
    return 0


def cmd_zeros(args) -> int:
    cfg = _merge_config(args, SPIN_KEYS + ("L", "dps", "n_grid", "out"))
    model = cfg.get("model")
    if model != "zn":
        raise ConfigError("zeros currently supports the zn family")
    (length,) = _require(cfg, "L")
    length = int(length)
    path_params = {}
    scalars = {}
    for name in MODEL_PARAM_ORDER["zn"]:
        value = cfg.get(name)
        if value is None:
            raise ConfigError(f"model 'zn' needs parameter {name}")
        rng = _parse_range(value, 2) if isinstance(value, str) else None
        if rng is not None:
            path_params[name] = rng
        else:
            scalars[name] = int(value) if name == "N" else float(value)
    if len(path_params) != 1:
        raise ConfigError(
            "zeros needs exactly 1 path parameter in a:b form, got "
            f"{len(path_params)}"
        )
    (path_name, path), = path_params.items()
    dps = int(cfg["dps"]) if cfg.get("dps") is not None else None
    n_grid = int(cfg.get("n_grid") or 64)

    def family(t):
        params = dict(scalars)
        params[path_name] = t
        spec = ZnModelSpec(
            N=int(params["N"]),
            J=params["J"],
            h_R=params["h_R"],
            h_I=params["h_I"],
        )
        if dps is not None:
            return zn_transfer_mp(spec, dps)
        return build_family(
            "zn",
            {k: (int(v) if k == "N" else float(v)) for k, v in params.items()},
        )

    result = lee_yang_zeros(family, length, path, n_grid=n_grid, dps=dps)
    rows = []
    for z, gap in zip(result.zeros, result.matched_gaps):
        p_near = -1
        if result.predicted:
            p_near = min(result.predicted, key=lambda pl: abs(pl[1] - z))[0]
        rows.append(("exact", str(p_near), _fmt(z), _fmt(gap)))
    for p, loc in result.predicted:
        rows.append(("predicted", str(p), _fmt(loc), _fmt(math.nan)))
    params = {
        "model": model,
        **scalars,
        "path_param": path_name,
        "path": list(path),
        "L": length,
        "n_grid": n_grid,
        "dps": dps,
    }
    out = cfg.get("out")
    if out:
        _emit_csv(
            rows,
            ("kind", "p", "param", "gap"),
            out,
            "zeros",
            params,
            extra={"kind": "zeros", "note": result.note},
        )
    else:
        doc = {
            "zeros": list(map(float, result.zeros)),
            "predicted": [[p, loc] for p, loc in result.predicted],
            "gaps": list(map(float, result.matched_gaps)),
            "note": result.note,
        }
        _emit(doc, None, "zeros", params)
    return 0


def _gauge_spec(cfg: dict) -> GaugeSpec:
    group, coupling, h, cutoff = _require(
        cfg, "group", "coupling_scale", "h", "cutoff"
    )
    return GaugeSpec(
        group=str(group).lower(),
        coupling_scale=float(coupling),
        h=float(h),
        beta_mu=float(cfg.get("beta_mu") or 0.0),
        cutoff=int(cutoff),
        high_density=bool(cfg.get("high_density")),
    )


def cmd_gauge_spectrum(args) -> int:
    cfg = _merge_config(args, GAUGE_KEYS + ("out", "residual_tol"))
    spec = _gauge_spec(cfg)
    bundle = build_gauge_hamiltonian(spec)
    tol = float(cfg.get("residual_tol") or 1e-10)
    es = eig(bundle.matrix, by_magnitude=False, residual_tol=tol)
    paired, region = pair_and_classify(es, ordering="by_real_part")
    values = es.values[::-1]  # ground state first
    doc = {
        "group": spec.group,
        "dim": bundle.dim,
        "quark_sign": spec.quark_sign,
        "ordering": "ascending real part",
        "eigenvalues": [[v.real, v.imag] for v in values],
        "region": region.label,
        "dominant": [[v.real, v.imag] for v in region.dominant_eigenvalues],
        "pairing_tolerance": paired.pairing_tolerance,
        "truncation_boundary": [
            list(map(str, lab)) if isinstance(lab, tuple) else str(lab)
            for lab in bundle.metadata["truncation"]["boundary"]
        ],
    }
    params = {
        "group": spec.group,
        "coupling_scale": spec.coupling_scale,
        "h": spec.h,
        "beta_mu": spec.beta_mu,
        "cutoff": spec.cutoff,
        "high_density": spec.high_density,
    }
    _emit(doc, cfg.get("out"), "gauge-spectrum", params)
    return 0


def cmd_trajectory(args) -> int:
    cfg = _merge_config(
        args, GAUGE_KEYS + ("beta_mu_grid", "levels", "out", "threads")
    )
    spec = _gauge_spec(cfg)
    (grid_text,) = _require(cfg, "beta_mu_grid")
    rng = _parse_range(str(grid_text), 3)
    if rng is None:
        raise ConfigError("beta_mu_grid must be a:b:n")
    start, stop, steps = rng
    grid = np.linspace(start, stop, steps)
    levels = int(cfg.get("levels") or 8)
    threads = resolve_threads(cfg.get("threads"))
    table = eigen_trajectory(
        spec, grid, n_levels=levels, threads=threads
    )
    rows = []
    for i, bm in enumerate(table.beta_mu):
        for k in range(table.energies.shape[1]):
            e = table.energies[i, k]
            rows.append((_fmt(bm), str(k), _fmt(e.real), _fmt(e.imag)))
    params = {
        "group": spec.group,
        "coupling_scale": spec.coupling_scale,
        "h": spec.h,
        "cutoff": spec.cutoff,
        "high_density": spec.high_density,
        "beta_mu_grid": [start, stop, steps],
        "levels": levels,
    }
    out = cfg.get("out")
    if not out:
        raise ConfigError("trajectory requires --out for its CSV")
    _emit_csv(
        rows,
        ("beta_mu", "k", "re_E", "im_E"),
        out,
        "trajectory",
        params,
        extra={
            "kind": "trajectory",
            "cutoff_used": table.cutoff,
            "drift": table.drift,
            "basis_size": table.basis_size,
        },
    )
    return 0


def cmd_oracle(args) -> int:
    cfg = _merge_config(args, SPIN_KEYS + ("L", "threads", "out"))
    model, scalars, ranged = _model_params(cfg)
    if ranged:
        raise ConfigError("oracle takes scalar parameters, not ranges")
    (length,) = _require(cfg, "L")
    length = int(length)
    threads = resolve_threads(cfg.get("threads"))
    if model == "zn":
        res = enumerate_zn_chain(
            int(scalars["N"]),
            length,
            scalars["J"],
            scalars["h_R"],
            scalars["h_I"],
            separations=(),
            threads=threads,
        )
        bundle = build_family("zn", scalars)
        trace = complex(
            np.trace(np.linalg.matrix_power(bundle.matrix, length))
        )
        # measured against the enumeration's conditioning scale: the
        # exact sum cancels weight mass down to |Z|, and each weight
        # carries its own rounding
        scale = max(abs(res.Z), abs(trace), res.weight_mass, 1e-300)
        doc = {
            "model": "zn",
            "L": length,
            "config_count": res.config_count,
            "Z": [res.Z.real, res.Z.imag],
            "trace": [trace.real, trace.imag],
            "weight_mass": res.weight_mass,
            "rel_deviation": abs(res.Z - trace) / scale,
        }
    elif model == "annni":
        spin = enumerate_annni_chain(
            scalars["K1"], scalars["K2"], length, separations=(), threads=threads
        )
        bonds = enumerate_annni_bonds(scalars["K1"], scalars["K2"], length)
        t4_bundle, block_bundle = build_annni(
            AnnniSpec(K1=scalars["K1"], K2=scalars["K2"])
        )
        trace_block = complex(
            np.trace(np.linalg.matrix_power(block_bundle.matrix, length))
        )
        doc = {
            "model": "annni",
            "L": length,
            "config_count": spin.config_count,
            "Z_spin": [spin.Z.real, spin.Z.imag],
            "Z_bonds": [bonds.Z.real, bonds.Z.imag],
            "trace_block": [trace_block.real, trace_block.imag],
            "spin_vs_bonds_rel": abs(spin.Z - bonds.Z) / abs(spin.Z),
            "spin_vs_trace_rel": abs(spin.Z - trace_block) / abs(spin.Z),
        }
        if length % 2 == 0:
            trace_t4 = complex(
                np.trace(np.linalg.matrix_power(t4_bundle.matrix, length // 2))
            )
            doc["trace_t4"] = [trace_t4.real, trace_t4.imag]
            doc["spin_vs_t4_rel"] = abs(spin.Z - trace_t4) / abs(spin.Z)
    else:
        raise ConfigError("oracle supports models zn and annni")
    _emit(doc, cfg.get("out"), "oracle", {"model": model, **scalars, "L": length})
    return 0


def cmd_hermitize(args) -> int:
    cfg = _merge_config(args, SPIN_KEYS + ("out", "full"))
    model, scalars, ranged = _model_params(cfg)
    if ranged:
        raise ConfigError("hermitize takes scalar parameters, not ranges")
    bundle = build_family(model, scalars)
    s, h_h = hermitize(bundle.matrix)
    herm_defect = float(
        np.linalg.norm(h_h - h_h.conj().T) / np.linalg.norm(h_h)
    )
    ev_in = np.sort(np.linalg.eigvals(bundle.matrix).real)
    ev_out = np.sort(np.linalg.eigvalsh((h_h + h_h.conj().T) / 2))
    iso_dev = float(
        np.max(np.abs(ev_in - ev_out)) / max(np.max(np.abs(ev_in)), 1e-300)
    )
    doc = {
        "model": model,
        "parameters": scalars,
        "dim": bundle.dim,
        "hermiticity_defect": herm_defect,
        "isospectral_rel_dev": iso_dev,
    }
    if cfg.get("full"):
        doc["S"] = [[[v.real, v.imag] for v in row] for row in s]
        doc["H_h"] = [[[v.real, v.imag] for v in row] for row in h_h]
    _emit(doc, cfg.get("out"), "hermitize", {"model": model, **scalars})
    return 0


def cmd_realbasis(args) -> int:
    cfg = _merge_config(args, SPIN_KEYS + ("out", "full"))
    model, scalars, ranged = _model_params(cfg)
    if ranged:
        raise ConfigError("realbasis takes scalar parameters, not ranges")
    bundle = build_family(model, scalars)
    basis, a_real = real_basis(bundle.matrix, bundle.parity)
    ev_in = np.linalg.eigvals(bundle.matrix)
    ev_out = np.linalg.eigvals(a_real)
    scale = float(np.max(np.abs(ev_in)))
    doc = {
        "model": model,
        "parameters": scalars,
        "dim": bundle.dim,
        "max_imag_entry": float(np.max(np.abs(a_real.imag))),
        "spectrum_rel_dev": multiset_match_dev(ev_in, ev_out) / scale,
    }
    if cfg.get("full"):
        doc["basis"] = [[[v.real, v.imag] for v in row] for row in basis]
        doc["A_real"] = [[float(v.real) for v in row] for row in a_real]
    _emit(doc, cfg.get("out"), "realbasis", {"model": model, **scalars})
    return 0


def _add_spin_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--model", choices=sorted(MODEL_PARAM_ORDER))
    sub.add_argument("--N", dest="N", type=int)
    sub.add_argument("--J", dest="J", type=str)
    sub.add_argument("--hR", dest="h_R", type=str)
    sub.add_argument("--hI", dest="h_I", type=str)
    sub.add_argument("--delta", dest="delta", type=str)
    sub.add_argument("--K1", dest="K1", type=str)
    sub.add_argument("--K2", dest="K2", type=str)
    sub.add_argument("--route", choices=("pair_transfer", "block_diagonal"))


def _add_gauge_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--group", choices=("u1", "su2", "su3"))
    sub.add_argument("--coupling-scale", dest="coupling_scale", type=float)
    sub.add_argument("--h", dest="h", type=float)
    sub.add_argument("--beta-mu", dest="beta_mu", type=float)
    sub.add_argument("--cutoff", dest="cutoff", type=int)
    sub.add_argument(
        "--high-density", dest="high_density", action="store_const", const=True
    )


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file; flags override it")
    sub.add_argument("--out", help="output path (stdout for JSON if omitted)")
    sub.add_argument("--threads", type=int, help="worker cap (PTSPECTRA_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptspectra",
        description="PT-symmetric transfer matrices and Hamiltonians: "
        "spectra, regions, correlators, scans, zeros, oracles.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sp = subs.add_parser("spectrum", help="eigenvalues + region label (JSON)")
    _add_spin_flags(sp)
    _add_common(sp)
    sp.add_argument("--residual-tol", dest="residual_tol", type=float)
    sp.set_defaults(func=cmd_spectrum)

    cl = subs.add_parser("classify", help="region label only (JSON)")
    _add_spin_flags(cl)
    _add_common(cl)
    cl.add_argument("--residual-tol", dest="residual_tol", type=float)
    cl.set_defaults(func=cmd_classify)

    co = subs.add_parser("correlator", help="two-point function CSV")
    _add_spin_flags(co)
    _add_common(co)
    co.add_argument("--L", dest="L", type=int)
    co.add_argument("--op1")
    co.add_argument("--op2")
    co.add_argument("--method", choices=("direct_trace", "spectral"))
    co.add_argument("--connected", action="store_const", const=True)
    co.add_argument("--rmax", type=int)
    co.add_argument("--label", help="tag recorded in the sidecar (e.g. A)")
    co.set_defaults(func=cmd_correlator)

    sc = subs.add_parser("scan", help="2-axis region scan CSV")
    _add_spin_flags(sc)
    _add_common(sc)
    sc.set_defaults(func=cmd_scan)

    ze = subs.add_parser("zeros", help="partition zeros along a path")
    _add_spin_flags(ze)
    _add_common(ze)
    ze.add_argument("--L", dest="L", type=int)
    ze.add_argument("--dps", type=int, help="mpmath digits (optional)")
    ze.add_argument("--n-grid", dest="n_grid", type=int)
    ze.set_defaults(func=cmd_zeros)

    gs = subs.add_parser("gauge-spectrum", help="gauge Hamiltonian spectrum")
    _add_gauge_flags(gs)
    _add_common(gs)
    gs.add_argument("--residual-tol", dest="residual_tol", type=float)
    gs.set_defaults(func=cmd_gauge_spectrum)

    tr = subs.add_parser("trajectory", help="eigenvalues vs beta_mu CSV")
    _add_gauge_flags(tr)
    _add_common(tr)
    tr.add_argument("--beta-mu-grid", dest="beta_mu_grid", help="a:b:n")
    tr.add_argument("--levels", type=int)
    tr.set_defaults(func=cmd_trajectory)

    orc = subs.add_parser("oracle", help="brute-force enumeration check")
    _add_spin_flags(orc)
    _add_common(orc)
    orc.add_argument("--L", dest="L", type=int)
    orc.set_defaults(func=cmd_oracle)

    he = subs.add_parser("hermitize", help="region-I Hermitization report")
    _add_spin_flags(he)
    _add_common(he)
    he.add_argument("--full", action="store_const", const=True)
    he.set_defaults(func=cmd_hermitize)

    rb = subs.add_parser("realbasis", help="PT-invariant real basis report")
    _add_spin_flags(rb)
    _add_common(rb)
    rb.add_argument("--full", action="store_const", const=True)
    rb.set_defaults(func=cmd_realbasis)

    return parser


def _merge_negative_values(argv):
    """Join "--flag -2.5:1.0:141" into "--flag=-2.5:1.0:141".

    argparse treats any token starting with "-" as an option unless it
    parses as a plain negative number, which colon ranges do not.
    """
    merged = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if (
            tok.startswith("--")
            and "=" not in tok
            and len(nxt) > 1
            and nxt[0] == "-"
            and (nxt[1].isdigit() or nxt[1] == ".")
        ):
            merged.append(f"{tok}={nxt}")
            i += 2
        else:
            merged.append(tok)
            i += 1
    return merged


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_negative_values(list(argv)))
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"ptspectra: config error: {exc}", file=sys.stderr)
        return 2
    except PtSpectraError as exc:
        print(f"ptspectra: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
