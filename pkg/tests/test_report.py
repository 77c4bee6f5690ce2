"""CSV and figure helpers."""

import io

from gridseek.report import (
    SWEEP_COLUMNS,
    figure_paths,
    format_cell,
    render_curves,
    render_sandwich,
    shape_label,
    write_csv,
)


def test_shape_label():
    assert shape_label((6, 5, 4)) == "6x5x4"
    assert shape_label((8,)) == "8"


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(7) == "7"
    assert format_cell(3.5097750043269373) == "3.50978"
    assert format_cell(36.0) == "36"
    assert format_cell((4, 2)) == "4x2"
    assert format_cell("ok") == "ok"


def test_write_csv_golden():
    rows = [
        {"shape": (2, 2), "exact_qc": 4, "wall_ms": 1},
        {"shape": (3, 2), "budget_d": 19.931568569324174, "wall_ms": 2},
    ]
    sink = io.StringIO()
    write_csv(sink, rows, columns=("shape", "exact_qc", "budget_d", "wall_ms"))
    assert sink.getvalue() == (
        "shape,exact_qc,budget_d,wall_ms\n"
        "2x2,4,,1\n"
        "3x2,,19.9316,2\n"
    )


def test_figure_paths():
    curves, sandwich = figure_paths("/tmp/out/sweep.csv")
    assert curves == "/tmp/out/sweep_curves.png"
    assert sandwich == "/tmp/out/sweep_sandwich.png"


def test_render_skips_when_nothing_applies(tmp_path):
    rows = [{"shape": (5,), "exact_qc": 3}]  # no 2D series to draw
    assert render_curves(rows, str(tmp_path / "c.png")) is None
    assert not (tmp_path / "c.png").exists()


def test_render_writes_files(tmp_path):
    rows = [
        {"shape": (m, 2), "budget_d": 20.0 + m, "worst_grid2d": m + 2,
         "exact_qc": m + 1, "lower_2d": 1.0}
        for m in (2, 3, 4)
    ]
    curves = render_curves(rows, str(tmp_path / "c.png"))
    sandwich = render_sandwich(rows, str(tmp_path / "s.png"))
    assert curves and (tmp_path / "c.png").stat().st_size > 0
    assert sandwich and (tmp_path / "s.png").stat().st_size > 0


def test_sweep_columns_are_pinned():
    assert SWEEP_COLUMNS == (
        "shape", "lower_2d", "per_segment_lower", "lower_3d", "lower_cube",
        "budget_d", "exact_qc", "worst_binary1d", "worst_grid2d",
        "worst_slicing", "best_greedy", "best_diagonal", "best_plane3d",
        "best_cube", "wall_ms",
    )
