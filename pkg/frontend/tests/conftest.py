"""Synthetic CSV builders matching the documented gmmlab figure schemas."""

import csv

import pytest


def write_csv(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


FIG1_HEADER = ["eta", "n", "x_raw", "x_rescaled", "sv_fraction_mean", "sv_fraction_std", "trials"]
FIG2_HEADER = ["snr", "p", "risk_mean", "risk_std", "neg_log_risk_mean", "neg_log_risk_std", "trials"]
FIG3_LEFT_HEADER = ["eta", "p", "risk_ls_mean", "risk_ls_std", "risk_svm_mean", "risk_svm_std", "trials"]
FIG3_RIGHT_HEADER = ["eta", "p", "sv_fraction_mean", "sv_fraction_std", "trials"]
FIG4_HEADER = ["case", "p", "series", "risk_mean", "risk_std", "trials"]
FIG5_ERR_HEADER = ["alpha", "tau", "risk_mean", "risk_std", "trials"]
FIG5_COORD_HEADER = ["alpha", "tau", "abs_mean", "abs_std", "trials"]
FIG6A_HEADER = ["p", "tau", "tau_over_n", "risk_mean", "risk_std", "trials"]
FIG6B_HEADER = ["p", "series", "risk_mean", "risk_std", "trials"]


def build_fig1(dirpath):
    rows = [
        [eta, n, n, n * eta, 1.0 - 0.001 * n * eta, 0.01, 5]
        for eta in (0.1, 0.3)
        for n in (25, 50, 100)
    ]
    write_csv(dirpath / "fig1_left.csv", FIG1_HEADER, rows)
    write_csv(dirpath / "fig1_right.csv", FIG1_HEADER, rows)


def build_fig2(dirpath):
    for name, ps in (("left", (150, 300, 600)), ("middle", (150,)), ("right", (300, 600))):
        rows = [
            [snr, p, 0.2 / snr, 0.01, snr * (1 + p / 600), 0.05, 5]
            for snr in (3.0, 10.0)
            for p in ps
        ]
        write_csv(dirpath / f"fig2_{name}.csv", FIG2_HEADER, rows)


def build_fig3(dirpath):
    left = [
        [eta, p, 0.2 / (1 + eta * p), 0.01, 0.19 / (1 + eta * p), 0.01, 5]
        for eta in (0.1, 0.2)
        for p in (500, 1000)
    ]
    right = [[eta, p, 0.95, 0.01, 5] for eta in (0.1, 0.2) for p in (500, 1000)]
    write_csv(dirpath / "fig3_left.csv", FIG3_LEFT_HEADER, left)
    write_csv(dirpath / "fig3_right.csv", FIG3_RIGHT_HEADER, right)


def build_fig4(dirpath):
    for name, case in (("left", "last"), ("middle", "first"), ("right", "equal")):
        rows = [
            [case, p, series, 0.1 / (1 + p / 300), 0.01, 5]
            for p in (200, 400)
            for series in ("tau=0", "tau=1e+06", "avg")
        ]
        write_csv(dirpath / f"fig4_{name}.csv", FIG4_HEADER, rows)


def build_fig5(dirpath):
    taus = (1.0, 10.0, 100.0)
    write_csv(
        dirpath / "fig5_error.csv",
        FIG5_ERR_HEADER,
        [[a, t, 0.1 + 0.01 * (t > 10), 0.01, 5] for a in (0.005, 0.8) for t in taus],
    )
    for panel in ("eta1", "eta2", "etap"):
        write_csv(
            dirpath / f"fig5_{panel}.csv",
            FIG5_COORD_HEADER,
            [[a, t, 1.0 / (1 + t), 0.01, 5] for a in (0.005, 0.8) for t in taus],
        )


def build_fig6(dirpath):
    write_csv(
        dirpath / "fig6a_main.csv",
        FIG6A_HEADER,
        [[p, r * 30, r, 0.01 * (1 + r), 0.001, 5] for p in (75, 500) for r in (0.1, 1.0, 10.0)],
    )
    rows = [
        [p, series, 0.05 / (1 + p / 400), 0.005, 5]
        for p in (300, 600, 800)
        for series in ("tau=0", "svm")
    ]
    write_csv(dirpath / "fig6b_main.csv", FIG6B_HEADER, rows)
    write_csv(dirpath / "fig6b_zoom.csv", FIG6B_HEADER, [r for r in rows if r[0] >= 600])


BUILDERS = {
    "fig1": build_fig1,
    "fig2": build_fig2,
    "fig3": build_fig3,
    "fig4": build_fig4,
    "fig5": build_fig5,
    "fig6": build_fig6,
}


@pytest.fixture
def csv_dir(tmp_path):
    for build in BUILDERS.values():
        build(tmp_path)
    return tmp_path
