"""Tabular and graphical output for bound/strategy sweeps.

Rows are plain dicts keyed by column name holding raw values; rendering
turns them into CSV text (dot decimal separator, six significant digits,
blank for inapplicable or capped entries) or matplotlib figures.  The
figure helpers import matplotlib lazily so the CSV path never pays for a
plotting backend.
"""

from __future__ import annotations

import csv
import os
from typing import Any, Mapping, Sequence, TextIO

__all__ = [
    "SWEEP_COLUMNS",
    "figure_paths",
    "format_cell",
    "render_curves",
    "render_sandwich",
    "shape_label",
    "write_csv",
]

SWEEP_COLUMNS = (
    "shape",
    "lower_2d",
    "per_segment_lower",
    "lower_3d",
    "lower_cube",
    "budget_d",
    "exact_qc",
    "worst_binary1d",
    "worst_grid2d",
    "worst_slicing",
    "best_greedy",
    "best_diagonal",
    "best_plane3d",
    "best_cube",
    "wall_ms",
)

Row = Mapping[str, Any]


def shape_label(dims: Sequence[int]) -> str:
    return "x".join(str(n) for n in dims)


def format_cell(value: Any) -> str:
    """One CSV cell: blank for None, 6 significant digits for floats."""
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, tuple):
        return shape_label(value)
    return str(value)


def write_csv(stream: TextIO, rows: Sequence[Row], columns: Sequence[str] = SWEEP_COLUMNS) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(name)) for name in columns])


def figure_paths(csv_path: str) -> tuple[str, str]:
    """Figure filenames rendered alongside a CSV: (curves, sandwich)."""
    stem = os.path.splitext(csv_path)[0]
    return f"{stem}_curves.png", f"{stem}_sandwich.png"


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_curves(rows: Sequence[Row], path: str) -> str | None:
    """Per-height query-cost curves over width for the 2D rows, or None."""
    by_height: dict[int, list[Row]] = {}
    for row in rows:
        dims = row.get("shape")
        if isinstance(dims, tuple) and len(dims) == 2:
            by_height.setdefault(dims[1], []).append(row)
    if not by_height:
        return None

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for n in sorted(by_height):
        group = sorted(by_height[n], key=lambda r: r["shape"][0])
        for column, style, label in (
            ("budget_d", "-", f"budget, n={n}"),
            ("worst_grid2d", "o--", f"worst case, n={n}"),
            ("exact_qc", "s:", f"exact, n={n}"),
        ):
            pairs = [(r["shape"][0], r[column]) for r in group if r.get(column) is not None]
            if pairs:
                ax.plot([p[0] for p in pairs], [p[1] for p in pairs], style, label=label)
    ax.set_xlabel("width m")
    ax.set_ylabel("queries")
    ax.set_title("Two-axis query cost by width")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_sandwich(rows: Sequence[Row], path: str) -> str | None:
    """Lower bound, exact value, and budget per shape, or None if no row solved."""
    solved = [row for row in rows if row.get("exact_qc") is not None]
    if not solved:
        return None

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(solved)), 4.5))
    xs = range(len(solved))
    lowers = [
        max(
            (row[c] for c in ("lower_2d", "lower_3d", "lower_cube") if row.get(c) is not None),
            default=0.0,
        )
        for row in solved
    ]
    ax.plot(xs, lowers, "v-", label="best lower bound")
    ax.plot(xs, [row["exact_qc"] for row in solved], "o-", label="exact")
    budget_pairs = [(i, row["budget_d"]) for i, row in enumerate(solved) if row.get("budget_d") is not None]
    if budget_pairs:
        ax.plot([p[0] for p in budget_pairs], [p[1] for p in budget_pairs], "^-", label="budget")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([shape_label(row["shape"]) for row in solved], rotation=60, fontsize="small")
    ax.set_ylabel("queries")
    ax.set_title("Bound sandwich per shape")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
