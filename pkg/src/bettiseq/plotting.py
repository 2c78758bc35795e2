"""Figure rendering for the report-producing CLI commands.

Curves are plateau-constant between integer scales, so everything is drawn
as post-step lines. Figures land next to the delimited output files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .mutscan import CurveSeries  # noqa: E402
from .seqdata import TOKEN_CLASSES  # noqa: E402

_STYLE = {
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
}

_TAG_STYLE = {"REF": "-", "MUT": "--"}


def _step(ax, series: CurveSeries, label: str, style: str, color=None):
    xs = [e for e, _ in series.samples]
    ys = [v for _, v in series.samples]
    ax.step(xs, ys, style, where="post", label=label, color=color, linewidth=1.3)


def save_curves_figure(series: list[CurveSeries], path: str | Path, title: str = "") -> None:
    """One row per token class: whole-graph Betti panel plus graded panel."""
    classes = [c for c in TOKEN_CLASSES if any(s.token_class == c for s in series)]
    tags = sorted({s.sequence_tag for s in series}, key=lambda t: (t != "REF", t))
    with plt.rc_context(_STYLE):
        fig, axes = plt.subplots(
            len(classes), 2, figsize=(9, 2.3 * len(classes)), squeeze=False
        )
        for row, cls in enumerate(classes):
            ph_ax, graded_ax = axes[row]
            for tag in tags:
                style = _TAG_STYLE.get(tag, "-")
                for kind, color in (("ph_b0", "tab:blue"), ("ph_b1", "tab:red")):
                    for s in series:
                        if (s.sequence_tag, s.token_class, s.series_kind) == (tag, cls, kind):
                            label = f"{kind[3:]} {tag}" if len(tags) > 1 else kind[3:]
                            _step(ph_ax, s, label, style, color)
            graded = [s for s in series if s.token_class == cls and s.series_kind == "graded"]
            keys = sorted({s.key for s in graded})
            cmap = plt.get_cmap("viridis", max(len(keys), 2))
            for ki, key in enumerate(keys):
                for tag in tags:
                    style = _TAG_STYLE.get(tag, "-")
                    for s in graded:
                        if s.sequence_tag == tag and s.key == key:
                            label = f"({key[0]},{key[1]}) {tag}" if len(tags) > 1 else f"({key[0]},{key[1]})"
                            _step(graded_ax, s, label, style, cmap(ki))
            ph_ax.set_title(f"{cls}: components / cycles")
            graded_ax.set_title(f"{cls}: graded Betti entries")
            for ax in (ph_ax, graded_ax):
                ax.set_xlabel("epsilon")
                if ax.has_data():
                    ax.legend(ncol=2, frameon=False)
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def save_scatter_figure(
    y_true, y_pred, pearson_r: float, rmse_value: float, path: str | Path, title: str = ""
) -> None:
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 4.5))
        ax.scatter(y_true, y_pred, s=14, alpha=0.7, edgecolors="none")
        lo = min(min(y_true), min(y_pred))
        hi = max(max(y_true), max(y_pred))
        pad = 0.05 * (hi - lo or 1.0)
        ax.plot([lo - pad, hi + pad], [lo - pad, hi + pad], "k--", linewidth=0.8)
        ax.set_xlim(lo - pad, hi + pad)
        ax.set_ylim(lo - pad, hi + pad)
        ax.set_xlabel("experimental")
        ax.set_ylabel("predicted")
        ax.set_title(title or f"Rp={pearson_r:.3f}  RMSE={rmse_value:.3f}")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
