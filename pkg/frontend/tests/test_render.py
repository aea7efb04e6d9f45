import matplotlib.pyplot as plt
import pytest

from render_figs import FIGURE_SPECS, RenderError, render
from render_figs.cli import main

from conftest import FIG1_HEADER, write_csv

EXPECTED_PANELS = {"fig1": 2, "fig2": 3, "fig3": 2, "fig4": 3, "fig5": 4, "fig6": 3}


@pytest.mark.parametrize("figure_id", sorted(EXPECTED_PANELS))
def test_panel_counts_and_labels(figure_id, csv_dir, tmp_path):
    fig, path = render(figure_id, csv_dir, tmp_path / "img")
    try:
        assert path.exists() and path.stat().st_size > 0
        assert path.suffix == ".png"
        assert len(fig.axes) == EXPECTED_PANELS[figure_id]
        spec = FIGURE_SPECS[figure_id]
        for ax, panel in zip(fig.axes, spec.panels):
            assert ax.get_xlabel() == panel.xlabel
            assert ax.get_ylabel() == panel.ylabel
    finally:
        plt.close(fig)


def test_svg_output(csv_dir, tmp_path):
    fig, path = render("fig1", csv_dir, tmp_path, fmt="svg")
    plt.close(fig)
    assert path.suffix == ".svg" and path.exists()


def test_fig2_renormalizations(csv_dir, tmp_path):
    fig, _ = render("fig2", csv_dir, tmp_path)
    try:
        left, middle, right = fig.axes
        # synthetic data: neg_log = snr * (1 + p/600); curves sorted by snr
        line = middle.lines[0]  # snr = 3 at p = 150
        assert line.get_ydata()[0] == pytest.approx((1 + 150 / 600))
        line = right.lines[1]  # snr = 10, p in {300, 600}
        assert line.get_ydata()[0] == pytest.approx(10 * (1 + 300 / 600) / 100)
    finally:
        plt.close(fig)


def test_fig3_solid_ls_dashed_svm(csv_dir, tmp_path):
    fig, _ = render("fig3", csv_dir, tmp_path)
    try:
        left = fig.axes[0]
        styles = {line.get_label(): line.get_linestyle() for line in left.lines}
        assert len(left.lines) == 4  # 2 eta values x (LS + SVM)
        for label, style in styles.items():
            assert style == ("--" if label.startswith("SVM") else "-")
    finally:
        plt.close(fig)


def test_fig4_avg_series_magenta(csv_dir, tmp_path):
    fig, _ = render("fig4", csv_dir, tmp_path)
    try:
        for ax in fig.axes:
            colors = {line.get_label(): line.get_color() for line in ax.lines}
            assert colors["series=avg"] == "magenta"
    finally:
        plt.close(fig)


def test_missing_file_named(tmp_path):
    with pytest.raises(RenderError, match="fig1_left.csv"):
        render("fig1", tmp_path, tmp_path / "img")
    assert not (tmp_path / "img" / "fig1.png").exists()


def test_schema_mismatch_names_column(csv_dir, tmp_path):
    bad = [c for c in FIG1_HEADER if c != "x_rescaled"]
    write_csv(csv_dir / "fig1_right.csv", bad, [[0.1, 25, 25, 0.9, 0.01, 5]])
    with pytest.raises(RenderError, match="x_rescaled"):
        render("fig1", csv_dir, tmp_path / "img")


def test_empty_csv_no_image(csv_dir, tmp_path):
    write_csv(csv_dir / "fig1_left.csv", FIG1_HEADER, [])
    with pytest.raises(RenderError, match="no data rows"):
        render("fig1", csv_dir, tmp_path / "img")
    assert not (tmp_path / "img" / "fig1.png").exists()


def test_unknown_figure_id(csv_dir, tmp_path):
    with pytest.raises(RenderError, match="unknown figure id"):
        render("fig9", csv_dir, tmp_path)


def test_cli_roundtrip(csv_dir, tmp_path, capsys):
    assert main(["fig5", "--in", str(csv_dir), "--out", str(tmp_path / "img")]) == 0
    out = capsys.readouterr().out.strip()
    assert out.endswith("fig5.png")
    assert (tmp_path / "img" / "fig5.png").exists()


def test_cli_error_exit(tmp_path, capsys):
    assert main(["fig1", "--in", str(tmp_path), "--out", str(tmp_path)]) == 1
    assert "fig1_left.csv" in capsys.readouterr().err
