"""Deterministic Monte Carlo sweep engine and figure reproductions.

A sweep is a grid of points (model, n, estimator set, label mode); every
(point, trial) pair gets its own seed through a SplitMix-style mix of
the base seed, so results are independent of execution order and worker
count.  Records are kept per trial and aggregates (mean / stddev) are
recomputed exactly from them.

Figure presets rebuild the six reference experiments and write one CSV per
panel; column orders are fixed and floats carry 17 significant digits.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import log_ndtr

from . import estimators as est
from . import model as mdl
from . import risk as rk
from .quadforms import QuadformError, certificate_all_positive, duality_certificate

__all__ = [
    "SweepPoint",
    "SweepConfig",
    "TrialRecord",
    "SweepResult",
    "derive_seed",
    "run_sweep",
    "figure",
    "collapse_score",
    "FIGURE_IDS",
]

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6a", "fig6b")

_M64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return (z ^ (z >> 31)) & _M64


def derive_seed(base_seed: int, point_index: int, trial_index: int) -> int:
    """Collision-resistant per-trial seed; pure function of its arguments."""
    s = _splitmix64(base_seed & _M64)
    s = _splitmix64(s ^ _splitmix64((point_index + 1) & _M64))
    s = _splitmix64(s ^ _splitmix64((trial_index + 1) & _M64))
    return s


@dataclass(frozen=True)
class SweepPoint:
    point_id: str
    model: mdl.GmmModel
    n: int
    estimators: tuple[str, ...]  # "ls" | "svm" | "avg" | "ridge:<tau>"
    labels: str = "clean"
    meta: dict = field(default_factory=dict)
    track_coords: tuple[int, ...] = ()


@dataclass(frozen=True)
class SweepConfig:
    points: tuple[SweepPoint, ...]
    trials: int
    base_seed: int = 0
    mc_test_samples: int = 0
    outputs: tuple[str, ...] = ("exact_risk",)
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.points:
            raise ValueError("grid must be non-empty")


@dataclass(frozen=True)
class TrialRecord:
    point_id: str
    trial: int
    seed: int
    values: dict
    failed: bool = False
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    records: tuple[TrialRecord, ...]
    aggregates: dict  # point_id -> key -> (mean, std, count)

    def table(self) -> list[dict]:
        """One row per point: meta columns plus <key>_mean/_std aggregates."""
        rows = []
        for point in self.config.points:
            row = {"point_id": point.point_id, **point.meta}
            for key, (mean, std, count) in self.aggregates.get(point.point_id, {}).items():
                row[f"{key}_mean"] = mean
                row[f"{key}_std"] = std
                row["trials"] = count
            rows.append(row)
        return rows

    def point_values(self, point_id: str, key: str) -> np.ndarray:
        """Per-trial values of one measured quantity at one grid point."""
        vals = [
            r.values[key]
            for r in self.records
            if r.point_id == point_id and not r.failed and key in r.values
        ]
        return np.asarray(vals, dtype=float)


def _fit_estimator(name: str, dataset, labels):
    if name == "ls":
        return est.min_norm_ls(dataset, labels)
    if name == "avg":
        return est.averaging(dataset, labels)
    if name == "svm":
        return est.hard_margin_svm(dataset, labels)
    if name.startswith("ridge:"):
        return est.ridge(dataset, float(name.split(":", 1)[1]), labels)
    raise ValueError(f"unknown estimator {name!r}")


def _run_trial(point: SweepPoint, trial: int, seed: int, config: SweepConfig) -> TrialRecord:
    outputs = config.outputs
    try:
        dataset = mdl.sample_dataset(point.model, point.n, seed)
        needed = list(point.estimators)
        if "svm_ls" in outputs or "sv_fraction" in outputs:
            if "svm" not in needed:
                needed.append("svm")
        if "svm_ls" in outputs and "ls" not in needed:
            needed.append("ls")
        fits = {name: _fit_estimator(name, dataset, point.labels) for name in needed}
        values: dict = {}
        for mc_index, name in enumerate(needed):
            w = fits[name].w
            if "exact_risk" in outputs or "neg_log_risk" in outputs:
                report = rk.model_risk(w, point.model)
                if "exact_risk" in outputs:
                    values[f"risk:{name}"] = report.exact
                    values[f"ratio:{name}"] = report.ratio
                if "neg_log_risk" in outputs:
                    # -log Q(ratio), stable far in the tail
                    values[f"neg_log_risk:{name}"] = -float(log_ndtr(-report.ratio))
            if "mc_risk" in outputs and config.mc_test_samples > 0:
                mc_seed = _splitmix64(seed ^ _splitmix64(0xA7C0 + mc_index))
                mc, se = rk.monte_carlo_risk(w, point.model, config.mc_test_samples, mc_seed)
                values[f"mc:{name}"] = mc
                values[f"mc_se:{name}"] = se
            if "coords" in outputs:
                for i in point.track_coords:
                    values[f"coord:{name}:{i}"] = float(w[i])
                    values[f"abscoord:{name}:{i}"] = abs(float(w[i]))
        if "sv_fraction" in outputs:
            values["sv_fraction"] = est.support_vector_fraction(fits["svm"])
        if "svm_ls" in outputs:
            w_svm, w_ls = fits["svm"].w, fits["ls"].w
            rel = float(np.linalg.norm(w_svm - w_ls) / np.linalg.norm(w_ls))
            values["svm_ls_rel_distance"] = rel
        if "certificate" in outputs:
            cert = duality_certificate(dataset, point.labels)
            values["certificate_all_positive"] = bool(certificate_all_positive(cert))
        return TrialRecord(point.point_id, trial, seed, values)
    except (est.EstimatorError, QuadformError, mdl.ModelError) as exc:
        return TrialRecord(point.point_id, trial, seed, {}, failed=True, error=str(exc))


def run_sweep(config: SweepConfig) -> SweepResult:
    """Execute the sweep; deterministic for any thread count."""
    jobs = [
        (pi, point, trial, derive_seed(config.base_seed, pi, trial))
        for pi, point in enumerate(config.points)
        for trial in range(config.trials)
    ]
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            records = list(
                pool.map(lambda job: _run_trial(job[1], job[2], job[3], config), jobs)
            )
    else:
        records = [_run_trial(point, trial, seed, config) for _, point, trial, seed in jobs]
    order = {point.point_id: i for i, point in enumerate(config.points)}
    records.sort(key=lambda r: (order[r.point_id], r.trial))
    aggregates = _aggregate(config, records)
    return SweepResult(config=config, records=tuple(records), aggregates=aggregates)


def _aggregate(config: SweepConfig, records) -> dict:
    by_point: dict = {p.point_id: {} for p in config.points}
    for record in records:
        if record.failed:
            continue
        bucket = by_point[record.point_id]
        for key, val in record.values.items():
            if isinstance(val, bool):
                val = float(val)
            bucket.setdefault(key, []).append(float(val))
    out = {}
    for point_id, bucket in by_point.items():
        agg = {}
        for key, vals in bucket.items():
            arr = np.asarray(vals)
            std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
            agg[key] = (float(arr.mean()), std, int(arr.size))
        out[point_id] = agg
    return out


# ---------------------------------------------------------------------------
# Figure presets
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def _agg(result: SweepResult, point_id: str, key: str):
    entry = result.aggregates[point_id].get(key)
    if entry is None:
        return float("nan"), float("nan"), 0
    return entry


def _fig1_config(overrides: dict) -> SweepConfig:
    trials = int(overrides.get("trials", 50))
    p = int(overrides.get("p", 1500))
    _, defaults = mdl.preset_model("fig1", p=p)
    n_grid = overrides.get("n_grid", defaults["n_grid"])
    eta_grid = overrides.get("eta_grid", defaults["eta_grid"])
    points = []
    for eta in eta_grid:
        model, _ = mdl.preset_model("fig1", p=p, eta=eta)
        sigma = math.sqrt(mdl.sigma_signal(model))
        for n in n_grid:
            rescaled = n * math.sqrt(math.log(2 * n)) * sigma / model.spectrum.l1
            points.append(
                SweepPoint(
                    point_id=f"fig1/eta={eta}/n={n}",
                    model=model,
                    n=n,
                    estimators=("svm",),
                    meta={
                        "curve": f"eta={eta}",
                        "eta": eta,
                        "n": n,
                        "x_raw": float(n),
                        "x_rescaled": rescaled,
                    },
                )
            )
    return SweepConfig(
        points=tuple(points),
        trials=trials,
        base_seed=int(overrides.get("seed", 0)),
        outputs=("sv_fraction",),
        threads=int(overrides.get("threads", 1)),
    )


def _fig1_csvs(result: SweepResult, out_dir: Path) -> dict:
    header = ["eta", "n", "x_raw", "x_rescaled", "sv_fraction_mean", "sv_fraction_std", "trials"]
    rows = []
    for point in result.config.points:
        mean, std, count = _agg(result, point.point_id, "sv_fraction")
        m = point.meta
        rows.append([m["eta"], m["n"], m["x_raw"], m["x_rescaled"], mean, std, count])
    return {
        "left": _write_csv(out_dir / "fig1_left.csv", header, rows),
        "right": _write_csv(out_dir / "fig1_right.csv", header, rows),
    }


def _fig2_config(overrides: dict) -> SweepConfig:
    trials = int(overrides.get("trials", 50))
    _, defaults = mdl.preset_model("fig2")
    n = int(overrides.get("n", defaults["n"]))
    p_grid = overrides.get("p_grid", defaults["p_grid"])
    snr_grid = overrides.get("snr_grid", defaults["snr_grid"])
    points = []
    for snr in snr_grid:
        for p in p_grid:
            model, _ = mdl.preset_model("fig2", p=p, eta_norm_sq=snr)
            points.append(
                SweepPoint(
                    point_id=f"fig2/snr={snr}/p={p}",
                    model=model,
                    n=n,
                    estimators=("ls",),
                    meta={
                        "curve": f"snr={snr}",
                        "snr": snr,
                        "p": p,
                        "n": n,
                        "regime": "high" if snr > p / n else "low",
                    },
                )
            )
    return SweepConfig(
        points=tuple(points),
        trials=trials,
        base_seed=int(overrides.get("seed", 0)),
        outputs=("exact_risk", "neg_log_risk"),
        threads=int(overrides.get("threads", 1)),
    )


def _fig2_csvs(result: SweepResult, out_dir: Path) -> dict:
    header = [
        "snr", "p", "risk_mean", "risk_std",
        "neg_log_risk_mean", "neg_log_risk_std", "trials",
    ]
    panels = {"left": [], "middle": [], "right": []}
    for point in result.config.points:
        r_mean, r_std, count = _agg(result, point.point_id, "risk:ls")
        nl_mean, nl_std, _ = _agg(result, point.point_id, "neg_log_risk:ls")
        row = [point.meta["snr"], point.meta["p"], r_mean, r_std, nl_mean, nl_std, count]
        panels["left"].append(row)
        if point.meta["regime"] == "high":
            panels["middle"].append(row)
        else:
            panels["right"].append(row)
    return {
        name: _write_csv(out_dir / f"fig2_{name}.csv", header, rows)
        for name, rows in panels.items()
    }


def _fig3_config(overrides: dict) -> SweepConfig:
    trials = int(overrides.get("trials", 50))
    _, defaults = mdl.preset_model("fig3")
    n = int(overrides.get("n", defaults["n"]))
    p_grid = overrides.get("p_grid", defaults["p_grid"])
    eta_grid = overrides.get("eta_grid", defaults["eta_grid"])
    points = []
    for eta in eta_grid:
        for p in p_grid:
            model, _ = mdl.preset_model("fig3", p=p, eta=eta)
            points.append(
                SweepPoint(
                    point_id=f"fig3/eta={eta}/p={p}",
                    model=model,
                    n=n,
                    estimators=("ls", "svm"),
                    meta={"curve": f"eta={eta}", "eta": eta, "p": p, "n": n},
                )
            )
    return SweepConfig(
        points=tuple(points),
        trials=trials,
        base_seed=int(overrides.get("seed", 0)),
        outputs=("exact_risk", "sv_fraction"),
        threads=int(overrides.get("threads", 1)),
    )


def _fig3_csvs(result: SweepResult, out_dir: Path) -> dict:
    left_header = [
        "eta", "p", "risk_ls_mean", "risk_ls_std",
        "risk_svm_mean", "risk_svm_std", "trials",
    ]
    right_header = ["eta", "p", "sv_fraction_mean", "sv_fraction_std", "trials"]
    left_rows, right_rows = [], []
    for point in result.config.points:
        ls_mean, ls_std, count = _agg(result, point.point_id, "risk:ls")
        svm_mean, svm_std, _ = _agg(result, point.point_id, "risk:svm")
        sv_mean, sv_std, _ = _agg(result, point.point_id, "sv_fraction")
        m = point.meta
        left_rows.append([m["eta"], m["p"], ls_mean, ls_std, svm_mean, svm_std, count])
        right_rows.append([m["eta"], m["p"], sv_mean, sv_std, count])
    return {
        "left": _write_csv(out_dir / "fig3_left.csv", left_header, left_rows),
        "right": _write_csv(out_dir / "fig3_right.csv", right_header, right_rows),
    }


def _tau_series(tau: float) -> str:
    return "tau=0" if tau == 0 else f"tau={tau:g}"


def _fig4_config(overrides: dict) -> SweepConfig:
    trials = int(overrides.get("trials", 50))
    _, defaults = mdl.preset_model("fig4")
    n = int(overrides.get("n", defaults["n"]))
    p_grid = overrides.get("p_grid", defaults["p_grid"])
    cases = overrides.get("cases", defaults["cases"])
    taus = overrides.get("taus", defaults["taus"])
    fits = tuple("ls" if t == 0 else f"ridge:{t:g}" for t in taus) + ("avg",)
    points = []
    for case in cases:
        for p in p_grid:
            model, _ = mdl.preset_model("fig4", p=p, case=case)
            points.append(
                SweepPoint(
                    point_id=f"fig4/{case}/p={p}",
                    model=model,
                    n=n,
                    estimators=fits,
                    meta={"curve": case, "case": case, "p": p, "n": n, "taus": tuple(taus)},
                )
            )
    return SweepConfig(
        points=tuple(points),
        trials=trials,
        base_seed=int(overrides.get("seed", 0)),
        outputs=("exact_risk",),
        threads=int(overrides.get("threads", 1)),
    )


def _fig4_csvs(result: SweepResult, out_dir: Path) -> dict:
    header = ["case", "p", "series", "risk_mean", "risk_std", "trials"]
    panels = {"last": "left", "first": "middle", "equal": "right"}
    rows_by_panel: dict = {"left": [], "middle": [], "right": []}
    for point in result.config.points:
        case = point.meta["case"]
        panel = panels[case]
        for name in point.estimators:
            mean, std, count = _agg(result, point.point_id, f"risk:{name}")
            series = "avg" if name == "avg" else (
                "tau=0" if name == "ls" else f"tau={name.split(':', 1)[1]}"
            )
            rows_by_panel[panel].append([case, point.meta["p"], series, mean, std, count])
    return {
        name: _write_csv(out_dir / f"fig4_{name}.csv", header, rows)
        for name, rows in rows_by_panel.items()
    }


def _fig5_config(overrides: dict) -> SweepConfig:
    trials = int(overrides.get("trials", 50))
    _, defaults = mdl.preset_model("fig5")
    n = int(overrides.get("n", defaults["n"]))
    p = int(overrides.get("p", 200))
    alpha_grid = overrides.get("alpha_grid", defaults["alpha_grid"])
    tau_grid = overrides.get("tau_grid", defaults["tau_grid"])
    fits = tuple(f"ridge:{t:g}" for t in tau_grid)
    points = []
    for alpha in alpha_grid:
        model, _ = mdl.preset_model("fig5", alpha=alpha, p=p)
        points.append(
            SweepPoint(
                point_id=f"fig5/alpha={alpha}",
                model=model,
                n=n,
                estimators=fits,
                meta={"curve": f"alpha={alpha}", "alpha": alpha, "p": p, "n": n,
                      "taus": tuple(tau_grid)},
                track_coords=(0, 1, p - 1),
            )
        )
    return SweepConfig(
        points=tuple(points),
        trials=trials,
        base_seed=int(overrides.get("seed", 0)),
        outputs=("exact_risk", "coords"),
        threads=int(overrides.get("threads", 1)),
    )


def _fig5_csvs(result: SweepResult, out_dir: Path) -> dict:
    p = result.config.points[0].meta["p"]
    err_header = ["alpha", "tau", "risk_mean", "risk_std", "trials"]
    coord_header = ["alpha", "tau", "abs_mean", "abs_std", "trials"]
    panels: dict = {"error": [], "eta1": [], "eta2": [], "etap": []}
    coord_map = {"eta1": 0, "eta2": 1, "etap": p - 1}
    for point in result.config.points:
        alpha = point.meta["alpha"]
        for name in point.estimators:
            tau = float(name.split(":", 1)[1])
            mean, std, count = _agg(result, point.point_id, f"risk:{name}")
            panels["error"].append([alpha, tau, mean, std, count])
            for panel, idx in coord_map.items():
                cmean, cstd, ccount = _agg(result, point.point_id, f"abscoord:{name}:{idx}")
                panels[panel].append([alpha, tau, cmean, cstd, ccount])
    out = {"error": _write_csv(out_dir / "fig5_error.csv", err_header, panels["error"])}
    for panel in ("eta1", "eta2", "etap"):
        out[panel] = _write_csv(out_dir / f"fig5_{panel}.csv", coord_header, panels[panel])
    return out


def _fig6a_config(overrides: dict) -> SweepConfig:
    trials = int(overrides.get("trials", 50))
    _, defaults = mdl.preset_model("fig6a")
    n = int(overrides.get("n", defaults["n"]))
    p_grid = overrides.get("p_grid", defaults["p_grid"])
    tau_over_n = overrides.get("tau_over_n_grid", defaults["tau_over_n_grid"])
    taus = [float(r) * n for r in tau_over_n]
    fits = tuple(f"ridge:{t:.12g}" for t in taus)
    points = []
    for p in p_grid:
        model, _ = mdl.preset_model("fig6a", p=p)
        points.append(
            SweepPoint(
                point_id=f"fig6a/p={p}",
                model=model,
                n=n,
                estimators=fits,
                meta={"curve": f"p={p}", "p": p, "n": n, "taus": tuple(taus)},
            )
        )
    return SweepConfig(
        points=tuple(points),
        trials=trials,
        base_seed=int(overrides.get("seed", 0)),
        outputs=("exact_risk",),
        threads=int(overrides.get("threads", 1)),
    )


def _fig6a_csvs(result: SweepResult, out_dir: Path) -> dict:
    header = ["p", "tau", "tau_over_n", "risk_mean", "risk_std", "trials"]
    rows = []
    for point in result.config.points:
        n = point.meta["n"]
        for name in point.estimators:
            tau = float(name.split(":", 1)[1])
            mean, std, count = _agg(result, point.point_id, f"risk:{name}")
            rows.append([point.meta["p"], tau, tau / n, mean, std, count])
    return {"main": _write_csv(out_dir / "fig6a_main.csv", header, rows)}


def _fig6b_config(overrides: dict) -> SweepConfig:
    trials = int(overrides.get("trials", 50))
    _, defaults = mdl.preset_model("fig6b")
    n = int(overrides.get("n", defaults["n"]))
    p_grid = overrides.get("p_grid", defaults["p_grid"])
    taus = overrides.get("taus", defaults["taus"])
    fits = tuple("ls" if t == 0 else f"ridge:{t:g}" for t in taus)
    if overrides.get("include_svm", defaults["include_svm"]):
        fits = fits + ("svm",)
    points = []
    for p in p_grid:
        model, _ = mdl.preset_model("fig6b", p=p)
        points.append(
            SweepPoint(
                point_id=f"fig6b/p={p}",
                model=model,
                n=n,
                estimators=fits,
                meta={"curve": f"p={p}", "p": p, "n": n},
            )
        )
    return SweepConfig(
        points=tuple(points),
        trials=trials,
        base_seed=int(overrides.get("seed", 0)),
        outputs=("exact_risk",),
        threads=int(overrides.get("threads", 1)),
    )


def _fig6b_csvs(result: SweepResult, out_dir: Path) -> dict:
    header = ["p", "series", "risk_mean", "risk_std", "trials"]
    rows, zoom = [], []
    for point in result.config.points:
        p = point.meta["p"]
        for name in point.estimators:
            mean, std, count = _agg(result, point.point_id, f"risk:{name}")
            if name == "svm":
                series = "svm"
            elif name == "ls":
                series = "tau=0"
            else:
                series = f"tau={name.split(':', 1)[1]}"
            row = [p, series, mean, std, count]
            rows.append(row)
            if p >= 600:
                zoom.append(row)
    return {
        "main": _write_csv(out_dir / "fig6b_main.csv", header, rows),
        "zoom": _write_csv(out_dir / "fig6b_zoom.csv", header, zoom),
    }


_FIGURES = {
    "fig1": (_fig1_config, _fig1_csvs),
    "fig2": (_fig2_config, _fig2_csvs),
    "fig3": (_fig3_config, _fig3_csvs),
    "fig4": (_fig4_config, _fig4_csvs),
    "fig5": (_fig5_config, _fig5_csvs),
    "fig6a": (_fig6a_config, _fig6a_csvs),
    "fig6b": (_fig6b_config, _fig6b_csvs),
}


def figure(figure_id: str, out_dir=None, **overrides) -> tuple[SweepResult, dict]:
    """Run one figure preset and write its per-panel CSV files.

    Returns (sweep result, {panel: csv path}).  Overrides shrink or move
    the grids (trials, p_grid, n_grid, seed, threads, ...).
    """
    if figure_id not in _FIGURES:
        raise ValueError(f"unknown figure id {figure_id!r}; valid: {FIGURE_IDS}")
    build, write = _FIGURES[figure_id]
    config = build(dict(overrides))
    result = run_sweep(config)
    files = {}
    if out_dir is not None:
        files = write(result, Path(out_dir))
    return result, files


def significant_sign_changes(means, standard_errors) -> int:
    """Sign changes among successive differences that clear 2 joint SEs.

    Used for the unimodality check on the -log(risk)-versus-p curves:
    an increase-then-decrease shape yields at most one sign change.
    """
    means = np.asarray(means, dtype=float)
    ses = np.asarray(standard_errors, dtype=float)
    if means.shape != ses.shape or means.ndim != 1:
        raise ValueError("means and standard errors must be equal-length vectors")
    diffs = np.diff(means)
    se_diff = np.sqrt(ses[:-1] ** 2 + ses[1:] ** 2)
    signs = [int(np.sign(d)) for d, s in zip(diffs, se_diff) if abs(d) > 2 * s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def collapse_score(
    result: SweepResult,
    x_column: str,
    y_column: str,
    curve_column: str = "curve",
) -> float:
    """Maximum vertical spread between curves on a shared interpolation grid.

    Small score = the curves collapse onto each other in the chosen
    x coordinate.
    """
    curves: dict = {}
    for row in result.table():
        if x_column not in row or y_column not in row or curve_column not in row:
            continue
        curves.setdefault(row[curve_column], []).append((row[x_column], row[y_column]))
    curves = {k: sorted(v) for k, v in curves.items() if len(v) >= 2}
    if len(curves) < 2:
        raise ValueError("collapse_score needs at least two curves with two points each")
    lo = max(min(x for x, _ in pts) for pts in curves.values())
    hi = min(max(x for x, _ in pts) for pts in curves.values())
    if not lo < hi:
        raise ValueError("curves share no overlapping x-range")
    grid = sorted(
        {x for pts in curves.values() for x, _ in pts if lo <= x <= hi} | {lo, hi}
    )
    grid_arr = np.asarray(grid)
    stack = []
    for pts in curves.values():
        xs = np.asarray([x for x, _ in pts])
        ys = np.asarray([y for _, y in pts])
        stack.append(np.interp(grid_arr, xs, ys))
    stack = np.vstack(stack)
    return float(np.max(stack.max(axis=0) - stack.min(axis=0)))
