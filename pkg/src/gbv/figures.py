"""Render report rows to a PNG next to the delimited output.

One figure per report: the subcommand picks an abscissa column and one or
two measured series.  Positive series on wide ranges go on log axes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import ExperimentReport  # noqa: E402

# subcommand -> (x column, y columns)
_AXES = {
    "ls-ratio": ("N", ["ratio"]),
    "char-ls": ("N", ["ratio"]),
    "bilinear": ("Q", ["lhs", "rhs"]),
    "bmvt": ("x", ["lhs", "bound"]),
    "bv-classical": ("x", ["normalized"]),
    "bv-gaussian": ("x", ["sum_over_x"]),
    "density": ("Q", ["raw_sum", "sta_sum"]),
    "fi-compare": ("x", ["ratio"]),
    "identities": ("x", ["value"]),
}


def _numeric(rows, col):
    out = []
    for row in rows:
        v = row.get(col)
        if v in (None, ""):
            out.append(float("nan"))
        else:
            try:
                out.append(float(v))
            except (TypeError, ValueError):
                out.append(float("nan"))
    return out


def render_report(report: ExperimentReport, path: str) -> None:
    xcol, ycols = _AXES.get(report.subcommand, (None, []))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if xcol is None or not report.rows:
        ax.set_title(f"{report.subcommand}: nothing to plot")
    else:
        xs = _numeric(report.rows, xcol)
        for ycol in ycols:
            ys = _numeric(report.rows, ycol)
            ax.plot(xs, ys, marker="o", linestyle="-", label=ycol)
        span = [x for x in xs if x == x and x > 0]
        if span and max(span) / min(span) >= 50:
            ax.set_xscale("log")
        ax.set_xlabel(xcol)
        ax.legend()
        ax.set_title(report.subcommand)
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
