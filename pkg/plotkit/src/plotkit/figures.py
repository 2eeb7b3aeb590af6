"""Figure builders: one per kind, all pure CSV-to-glyph mappings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib as mpl
import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.colors import ListedColormap
from matplotlib.figure import Figure
from matplotlib.patches import Patch

from .errors import SchemaError
from .io import load_sidecar, load_table

REGION_ORDER = ("Ia", "Ib", "II", "III")
REGION_COLORS = {
    "Ia": "#4477aa",
    "Ib": "#66ccee",
    "II": "#ccbb44",
    "III": "#ee6677",
}

# pinned so figures do not drift with ambient matplotlib configuration
_RC = {
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.titlesize": 11,
    "figure.facecolor": "white",
    "savefig.facecolor": "white",
    "svg.hashsalt": "plotkit",
}

_LEVEL_COLORS = (
    "#332288",
    "#88ccee",
    "#44aa99",
    "#117733",
    "#999933",
    "#ddcc77",
    "#cc6677",
    "#882255",
    "#aa4499",
    "#dddddd",
)


@dataclass(frozen=True)
class FigureRequest:
    """One rendering job: which CSVs, which kind, where to, how styled."""

    kind: str
    paths: tuple
    out: str
    annotations: tuple = field(default=())  # (label, x, y) triples
    log_scale: bool = False
    dpi: int = 100
    xlabel: str | None = None
    ylabel: str | None = None


def _sidecar_params(path) -> dict:
    doc = load_sidecar(path)
    return doc.get("parameters", {}) if isinstance(doc, dict) else {}


def _axis_steps(values) -> np.ndarray:
    # distinct coordinates in plotted order; CSV floats round-trip
    # exactly (17 significant digits), so equality grouping is safe
    return np.asarray(sorted(set(values)))


def _build_phase_diagram(fig: Figure, request: FigureRequest) -> None:
    if len(request.paths) != 1:
        raise SchemaError(
            f"phase_diagram takes exactly one CSV, got {len(request.paths)}"
        )
    path = request.paths[0]
    table = load_table(path, "phase_diagram")
    xs = _axis_steps(table["param1"])
    ys = _axis_steps(table["param2"])
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    index = {label: k for k, label in enumerate(REGION_ORDER)}
    grid = np.full((ys.size, xs.size), -1, dtype=int)
    for x, y, label in zip(table["param1"], table["param2"], table["region"]):
        try:
            grid[yi[y], xi[x]] = index[label]
        except KeyError:
            raise SchemaError(
                f"{path}: unknown region label {label!r}; expected one of "
                f"{', '.join(REGION_ORDER)}"
            ) from None
    if np.any(grid < 0):
        raise SchemaError(f"{path}: grid is not a complete param1 x param2 table")

    dx = (xs[-1] - xs[0]) / max(xs.size - 1, 1) or 1.0
    dy = (ys[-1] - ys[0]) / max(ys.size - 1, 1) or 1.0
    ax = fig.add_subplot(1, 1, 1)
    ax.imshow(
        grid,
        origin="lower",
        interpolation="nearest",
        aspect="auto",
        cmap=ListedColormap([REGION_COLORS[r] for r in REGION_ORDER]),
        vmin=-0.5,
        vmax=len(REGION_ORDER) - 0.5,
        extent=(
            xs[0] - dx / 2.0,
            xs[-1] + dx / 2.0,
            ys[0] - dy / 2.0,
            ys[-1] + dy / 2.0,
        ),
    )
    for label, x, y in request.annotations:
        ax.plot([x], [y], marker="o", color="black", markersize=5)
        ax.annotate(
            label,
            (x, y),
            xytext=(5, 5),
            textcoords="offset points",
            fontweight="bold",
        )
    ax.legend(
        handles=[
            Patch(facecolor=REGION_COLORS[r], label=r) for r in REGION_ORDER
        ],
        loc="upper right",
        framealpha=0.9,
        title="region",
    )

    doc = load_sidecar(path) or {}
    axes_meta = doc.get("axes", {})
    ax.set_xlabel(axes_meta.get("param1", {}).get("name", "param1"))
    ax.set_ylabel(axes_meta.get("param2", {}).get("name", "param2"))
    params = doc.get("parameters", {})
    fixed = ", ".join(
        f"{k} = {params[k]}" for k in sorted(params) if k != "model"
    )
    ax.set_title(
        f"{params.get('model', 'scan')} regions" + (f" ({fixed})" if fixed else "")
    )


def _build_correlators(fig: Figure, request: FigureRequest) -> None:
    n = len(request.paths)
    ncols = 2 if n > 1 else 1
    nrows = math.ceil(n / ncols)
    for panel, path in enumerate(request.paths):
        table = load_table(path, "correlators")
        ax = fig.add_subplot(nrows, ncols, panel + 1)
        r = np.asarray(table["r"])
        g = np.asarray(table["G"])
        if request.log_scale:
            keep = np.abs(g) > 0
            ax.semilogy(
                r[keep], np.abs(g[keep]), marker="o", markersize=3, lw=1.0
            )
            ax.set_ylabel("|G(r)|")
        else:
            ax.axhline(0.0, color="0.6", lw=0.6)
            ax.plot(r, g, marker="o", markersize=3, lw=1.0)
            ax.set_ylabel("G(r)")
        ax.set_xlabel("r")
        params = _sidecar_params(path)
        ax.set_title(str(params.get("label", Path(path).stem)))


def _build_trajectory(fig: Figure, request: FigureRequest) -> None:
    for panel, path in enumerate(request.paths):
        table = load_table(path, "trajectory")
        ax = fig.add_subplot(len(request.paths), 1, panel + 1)
        beta_mu = np.asarray(table["beta_mu"])
        level = np.asarray(table["k"], dtype=int)
        re_e = np.asarray(table["re_E"])
        im_e = np.asarray(table["im_E"])
        for k in sorted(set(level.tolist())):
            rows = level == k
            color = _LEVEL_COLORS[k % len(_LEVEL_COLORS)]
            ax.plot(beta_mu[rows], re_e[rows], color=color, lw=1.0)
            real = rows & (im_e == 0.0)
            paired = rows & (im_e != 0.0)
            # marker style switches where the level joins a complex pair
            ax.plot(
                beta_mu[real], re_e[real], linestyle="none",
                marker=".", markersize=3, color=color,
            )
            ax.plot(
                beta_mu[paired], re_e[paired], linestyle="none",
                marker="x", markersize=4, color=color,
            )
        ax.set_ylabel("Re E")
        if panel == len(request.paths) - 1:
            ax.set_xlabel(r"$\beta\mu$")
        params = _sidecar_params(path)
        bits = [
            f"{key} = {params[key]}"
            for key in ("group", "h", "coupling_scale")
            if key in params
        ]
        ax.set_title(", ".join(bits) if bits else Path(path).stem)


_BUILDERS = {
    "phase_diagram": (_build_phase_diagram, (7.0, 5.0)),
    "correlators": (_build_correlators, (9.0, 6.5)),
    "trajectory": (_build_trajectory, (7.0, 7.5)),
}


def build_figure(request: FigureRequest) -> Figure:
    """Assemble the figure for a request without writing anything."""
    try:
        builder, size = _BUILDERS[request.kind]
    except KeyError:
        raise SchemaError(
            f"unknown figure kind {request.kind!r}; expected one of "
            f"{', '.join(sorted(_BUILDERS))}"
        ) from None
    if not request.paths:
        raise SchemaError(f"{request.kind} needs at least one CSV")
    with mpl.rc_context(_RC):
        fig = Figure(figsize=size, dpi=request.dpi)
        FigureCanvasAgg(fig)
        builder(fig, request)
        for ax in fig.axes:
            if request.xlabel is not None:
                ax.set_xlabel(request.xlabel)
            if request.ylabel is not None:
                ax.set_ylabel(request.ylabel)
        fig.tight_layout()
    return fig


# volatile metadata keys written by default, per output format
_METADATA_OFF = {
    ".png": {"Software": None},
    ".svg": {"Date": None},
    ".pdf": {"CreationDate": None, "Producer": None, "Creator": None},
}


def render(request: FigureRequest) -> str:
    """Build and write the requested figure; returns the output path.

    Identical inputs produce identical output bytes: the only
    timestamp-like metadata the writers would embed is suppressed.
    """
    fig = build_figure(request)
    suffix = Path(request.out).suffix.lower()
    with mpl.rc_context(_RC):
        fig.savefig(
            request.out,
            dpi=request.dpi,
            metadata=_METADATA_OFF.get(suffix),
        )
    return request.out
