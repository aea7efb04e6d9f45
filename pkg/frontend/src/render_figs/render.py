"""Turn the experiment CSVs into multi-panel figure images.

Rendering is strict about inputs: a missing file, a header that does not
match the documented schema, or a data-less CSV aborts with a named
error and writes nothing.  Colors and line styles are assigned by curve
value in sorted order so repeated runs of the same data look identical.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .specs import FIGURE_SPECS, FigureSpec, PanelSpec

_COLORS = plt.rcParams["axes.prop_cycle"].by_key()["color"]

# estimator series get fixed styles; the averaging estimator is magenta
_SERIES_STYLE = {"avg": {"color": "magenta"}, "svm": {"linestyle": "--"}}


class RenderError(RuntimeError):
    pass


def read_panel_rows(path: Path, panel: PanelSpec) -> list[dict]:
    if not path.exists():
        raise RenderError(f"missing input CSV: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise RenderError(f"{path.name}: empty file") from None
        missing = [c for c in panel.columns if c not in header]
        if missing:
            raise RenderError(f"{path.name}: missing column(s) {missing}")
        rows = []
        for raw in reader:
            row = dict(zip(header, raw))
            for key in panel.columns:
                if key not in ("case", "series"):
                    row[key] = float(row[key])
            rows.append(row)
    if not rows:
        raise RenderError(f"{path.name}: no data rows")
    return rows


def _style_for(curve_value, index, panel: PanelSpec):
    style = {"color": _COLORS[index % len(_COLORS)], "linestyle": "-"}
    if isinstance(curve_value, str) and curve_value in _SERIES_STYLE:
        style.update(_SERIES_STYLE[curve_value])
    return style


def _plot_panel(ax, rows: list[dict], panel: PanelSpec):
    # values in one column share a type, so native order is well defined
    curves = sorted({row[panel.curve_key] for row in rows})
    for i, curve in enumerate(curves):
        pts = sorted(
            ((row[panel.x], row) for row in rows if row[panel.curve_key] == curve),
            key=lambda t: t[0],
        )
        xs = [x for x, _ in pts]

        def series(col, transform=panel.transform):
            vals = [row[col] for _, row in pts]
            if transform == "per_snr":
                vals = [v / row["snr"] for v, (_, row) in zip(vals, pts)]
            elif transform == "per_snr_sq":
                vals = [v / row["snr"] ** 2 for v, (_, row) in zip(vals, pts)]
            return vals

        style = _style_for(curve, i, panel)
        label = f"{panel.curve_key}={curve}"
        if panel.transform == "ls_and_svm":
            ax.plot(xs, [row["risk_ls_mean"] for _, row in pts],
                    label=f"LS {label}", linestyle="-", color=style["color"])
            ax.plot(xs, [row["risk_svm_mean"] for _, row in pts],
                    label=f"SVM {label}", linestyle="--", color=style["color"])
        else:
            ax.plot(xs, series(panel.y), label=label, **style)
    if panel.logx:
        ax.set_xscale("log")
    if panel.logy:
        ax.set_yscale("log")
    ax.set_xlabel(panel.xlabel)
    ax.set_ylabel(panel.ylabel)
    if panel.title:
        ax.set_title(panel.title)
    ax.legend(fontsize="x-small")


def render(
    figure_id: str,
    in_dir,
    out_dir,
    fmt: str = "png",
    dpi: int = 150,
):
    """Render one figure; returns (matplotlib figure, written path)."""
    if figure_id not in FIGURE_SPECS:
        raise RenderError(f"unknown figure id {figure_id!r}; valid: {tuple(FIGURE_SPECS)}")
    if fmt not in ("png", "svg"):
        raise RenderError(f"unsupported format {fmt!r}; use png or svg")
    spec: FigureSpec = FIGURE_SPECS[figure_id]
    in_dir = Path(in_dir)
    panel_rows = [
        (panel, read_panel_rows(in_dir / panel.csv, panel)) for panel in spec.panels
    ]
    n_panels = len(spec.panels)
    fig, axes = plt.subplots(1, n_panels, figsize=(4.2 * n_panels, 3.6))
    if n_panels == 1:
        axes = [axes]
    for ax, (panel, rows) in zip(axes, panel_rows):
        _plot_panel(ax, rows, panel)
    if spec.suptitle:
        fig.suptitle(spec.suptitle)
    fig.tight_layout()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{figure_id}.{fmt}"
    fig.savefig(path, dpi=dpi)
    return fig, path
