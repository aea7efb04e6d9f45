"""Figure specifications: input CSV schemas, panel layout, axis labels.

The CSV schemas mirror the columns documented by the experiment engine's
figure command; rendering consumes only these files.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PanelSpec:
    name: str
    csv: str  # file name inside the input directory
    columns: tuple[str, ...]  # required header, in order
    x: str
    y: str
    xlabel: str
    ylabel: str
    curve_key: str  # column distinguishing curves
    logx: bool = False
    logy: bool = False
    title: str = ""
    transform: str | None = None  # renormalization applied to y
    style_key: str | None = None  # column controlling line style


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    panels: tuple[PanelSpec, ...]
    suptitle: str = ""


_FIG1_COLS = (
    "eta", "n", "x_raw", "x_rescaled", "sv_fraction_mean", "sv_fraction_std", "trials",
)
_FIG2_COLS = (
    "snr", "p", "risk_mean", "risk_std", "neg_log_risk_mean", "neg_log_risk_std", "trials",
)
_FIG4_COLS = ("case", "p", "series", "risk_mean", "risk_std", "trials")
_FIG5_ERR_COLS = ("alpha", "tau", "risk_mean", "risk_std", "trials")
_FIG5_COORD_COLS = ("alpha", "tau", "abs_mean", "abs_std", "trials")
_FIG6B_COLS = ("p", "series", "risk_mean", "risk_std", "trials")

SV_LABEL = "proportion of support vectors"
ERR_LABEL = "classification error"

FIGURE_SPECS: dict[str, FigureSpec] = {
    "fig1": FigureSpec(
        "fig1",
        (
            PanelSpec(
                "left", "fig1_left.csv", _FIG1_COLS,
                x="x_raw", y="sv_fraction_mean",
                xlabel="n", ylabel=SV_LABEL, curve_key="eta",
            ),
            PanelSpec(
                "right", "fig1_right.csv", _FIG1_COLS,
                x="x_rescaled", y="sv_fraction_mean",
                xlabel="n sqrt(log 2n) sigma / ||lambda||_1",
                ylabel=SV_LABEL, curve_key="eta",
            ),
        ),
        suptitle="Support-vector proportion",
    ),
    "fig2": FigureSpec(
        "fig2",
        (
            PanelSpec(
                "left", "fig2_left.csv", _FIG2_COLS,
                x="p", y="neg_log_risk_mean",
                xlabel="p", ylabel="-log(classification error)", curve_key="snr",
            ),
            PanelSpec(
                "middle", "fig2_middle.csv", _FIG2_COLS,
                x="p", y="neg_log_risk_mean",
                xlabel="p", ylabel="-log(classification error) / ||eta||^2",
                curve_key="snr", transform="per_snr",
            ),
            PanelSpec(
                "right", "fig2_right.csv", _FIG2_COLS,
                x="p", y="neg_log_risk_mean",
                xlabel="p", ylabel="-log(classification error) / ||eta||^4",
                curve_key="snr", transform="per_snr_sq",
            ),
        ),
        suptitle="Min-norm interpolator risk, isotropic mixture",
    ),
    "fig3": FigureSpec(
        "fig3",
        (
            PanelSpec(
                "left", "fig3_left.csv",
                ("eta", "p", "risk_ls_mean", "risk_ls_std",
                 "risk_svm_mean", "risk_svm_std", "trials"),
                x="p", y="risk_ls_mean",
                xlabel="p", ylabel=ERR_LABEL, curve_key="eta",
                transform="ls_and_svm", logy=True,
            ),
            PanelSpec(
                "right", "fig3_right.csv",
                ("eta", "p", "sv_fraction_mean", "sv_fraction_std", "trials"),
                x="p", y="sv_fraction_mean",
                xlabel="p", ylabel=SV_LABEL, curve_key="eta",
            ),
        ),
        suptitle="Benign overfitting as p grows",
    ),
    "fig4": FigureSpec(
        "fig4",
        (
            PanelSpec(
                "left", "fig4_left.csv", _FIG4_COLS,
                x="p", y="risk_mean", xlabel="p", ylabel=ERR_LABEL,
                curve_key="series", logy=True, title="mean on last coordinate",
            ),
            PanelSpec(
                "middle", "fig4_middle.csv", _FIG4_COLS,
                x="p", y="risk_mean", xlabel="p", ylabel=ERR_LABEL,
                curve_key="series", logy=True, title="mean on first coordinate",
            ),
            PanelSpec(
                "right", "fig4_right.csv", _FIG4_COLS,
                x="p", y="risk_mean", xlabel="p", ylabel=ERR_LABEL,
                curve_key="series", logy=True, title="equal mean entries",
            ),
        ),
        suptitle="Ridge regularization under the balanced ensemble",
    ),
    "fig5": FigureSpec(
        "fig5",
        (
            PanelSpec(
                "error", "fig5_error.csv", _FIG5_ERR_COLS,
                x="tau", y="risk_mean", xlabel="tau", ylabel=ERR_LABEL,
                curve_key="alpha", logx=True,
            ),
            PanelSpec(
                "eta1", "fig5_eta1.csv", _FIG5_COORD_COLS,
                x="tau", y="abs_mean", xlabel="tau", ylabel="|eta_hat_1|",
                curve_key="alpha", logx=True,
            ),
            PanelSpec(
                "eta2", "fig5_eta2.csv", _FIG5_COORD_COLS,
                x="tau", y="abs_mean", xlabel="tau", ylabel="|eta_hat_2|",
                curve_key="alpha", logx=True,
            ),
            PanelSpec(
                "etap", "fig5_etap.csv", _FIG5_COORD_COLS,
                x="tau", y="abs_mean", xlabel="tau", ylabel="|eta_hat_p|",
                curve_key="alpha", logx=True,
            ),
        ),
        suptitle="Spike-to-tail ratio and the effect of regularization",
    ),
    "fig6": FigureSpec(
        "fig6",
        (
            PanelSpec(
                "a", "fig6a_main.csv",
                ("p", "tau", "tau_over_n", "risk_mean", "risk_std", "trials"),
                x="tau_over_n", y="risk_mean",
                xlabel="tau / n", ylabel=ERR_LABEL, curve_key="p",
                logx=True, logy=True, title="(a)",
            ),
            PanelSpec(
                "b_main", "fig6b_main.csv", _FIG6B_COLS,
                x="p", y="risk_mean", xlabel="p", ylabel=ERR_LABEL,
                curve_key="series", logy=True, title="(b)",
            ),
            PanelSpec(
                "b_zoom", "fig6b_zoom.csv", _FIG6B_COLS,
                x="p", y="risk_mean", xlabel="p (>= 600)", ylabel=ERR_LABEL,
                curve_key="series", logy=True, title="(b, zoom)",
            ),
        ),
        suptitle="Regularization under the bi-level ensemble",
    ),
}

FIGURE_IDS = tuple(FIGURE_SPECS)
