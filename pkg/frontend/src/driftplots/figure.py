"""Stacked log10 panels of drift errors versus time, read from the solver
harness CSV (header: t,H,dH_rel,K,Khat,errK,errMK,errI,errMI).

Rendering is read-only over that contract: nothing is recomputed, zero and
NaN entries are simply dropped from the log plots and counted in the caption.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

DEFAULT_PANELS: Tuple[Tuple[str, ...], ...] = (("errK", "errMK"),
                                               ("errI", "errMI"))


class MissingColumnError(ValueError):
    """A requested series is absent from the CSV header."""

    def __init__(self, column: str, path: str):
        self.column = column
        self.path = path
        super().__init__(f"column {column!r} not found in {path}")


@dataclass(frozen=True)
class FigureSpec:
    """What to render: input CSVs, output image, and panel column groups."""

    csv_paths: Tuple[str, ...]
    out_path: str
    panels: Tuple[Tuple[str, ...], ...] = DEFAULT_PANELS

    def __post_init__(self):
        if not self.csv_paths:
            raise ValueError("at least one input CSV is required")
        if not self.panels or any(not p for p in self.panels):
            raise ValueError("panels must be nonempty column groups")


@dataclass
class RenderResult:
    """Structural summary of a finished figure, for checks and captions."""

    row_count: int
    plotted: Dict[str, int]
    dropped: Dict[str, int]
    omitted: List[str]
    panel_labels: List[List[str]]
    caption: str
    data_extents: List[Tuple[float, float, float, float]]
    pixel_size: Tuple[int, int]


def _read_columns(path: str, wanted: Sequence[str]) -> Dict[str, np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        for col in wanted:
            if col not in header:
                raise MissingColumnError(col, path)
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: rows do not match the header width")
    return {col: data[:, header.index(col)] for col in wanted}


def render_figure(spec: FigureSpec) -> RenderResult:
    """Render stacked log10 panels and write the image; returns counts.

    Each panel draws its columns against t with a log10-transformed y-axis.
    Zero or NaN values cannot appear on a log scale and are dropped; the
    caption records how many points each series lost, and series with no
    plottable points at all are omitted (and noted).
    """
    cols = sorted({c for panel in spec.panels for c in panel})
    tables = [_read_columns(p, ["t"] + cols) for p in spec.csv_paths]
    t = np.concatenate([tb["t"] for tb in tables])
    series = {c: np.concatenate([tb[c] for tb in tables]) for c in cols}

    fig, axes = plt.subplots(len(spec.panels), 1, sharex=True,
                             figsize=(7.0, 2.8 * len(spec.panels)),
                             squeeze=False)
    plotted: Dict[str, int] = {}
    dropped: Dict[str, int] = {}
    omitted: List[str] = []
    panel_labels: List[List[str]] = []
    extents: List[Tuple[float, float, float, float]] = []

    for ax, panel in zip(axes[:, 0], spec.panels):
        labels = []
        for col in panel:
            vals = series[col]
            keep = np.isfinite(vals) & (vals > 0)
            plotted[col] = int(np.count_nonzero(keep))
            dropped[col] = int(vals.size - plotted[col])
            if plotted[col] == 0:
                omitted.append(col)
                continue
            ax.plot(t[keep], np.log10(vals[keep]), label=col, linewidth=0.9)
            labels.append(col)
        if labels:
            ax.legend(loc="best")
        ax.set_ylabel("log10 error")
        panel_labels.append(labels)
        extents.append(tuple(np.ravel(ax.dataLim.get_points())))
    axes[-1, 0].set_xlabel("t")

    parts = [f"{c}: {dropped[c]} of {series[c].size} dropped (zero/NaN)"
             for c in cols if dropped[c]]
    if omitted:
        parts.append("omitted entirely: " + ", ".join(omitted))
    caption = "; ".join(parts) if parts else "no points dropped"
    fig.suptitle("drift errors against t")
    fig.text(0.01, 0.005, caption, fontsize=7)
    fig.tight_layout(rect=(0, 0.03, 1, 0.97))
    fig.savefig(spec.out_path, dpi=120)
    width, height = fig.canvas.get_width_height()
    plt.close(fig)

    return RenderResult(row_count=int(t.size), plotted=plotted,
                        dropped=dropped, omitted=omitted,
                        panel_labels=panel_labels, caption=caption,
                        data_extents=extents,
                        pixel_size=(int(width), int(height)))
