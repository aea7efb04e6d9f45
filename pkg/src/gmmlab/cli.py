"""Command-line front end.

Subcommands: sample, estimate, risk, check, sweep, figure, verify.
Exit codes: 0 success, 2 input error, 3 computation error (structured
JSON on stderr), 4 verification failure.  All randomness flows from
--seed (default 0); nothing reads the wall clock.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dataio, estimators, experiments, regimes, risk, verification
from .model import (
    ModelError,
    PRESET_IDS,
    model_from_json,
    preset_model,
    sample_dataset,
)
from .quadforms import QuadformError

CHECK_IDS = ("thm1", "thm2", "thm6", "posicorr") + regimes.COROLLARY_IDS


def _load_model(args):
    if getattr(args, "model", None):
        with open(args.model, encoding="utf-8") as fh:
            return model_from_json(fh.read())
    if getattr(args, "preset", None):
        free = {}
        if getattr(args, "p", None) is not None:
            free["p"] = args.p
        if getattr(args, "eta", None) is not None:
            free["eta"] = args.eta
        model, _ = preset_model(args.preset, **free)
        return model
    raise ModelError("provide --model FILE or --preset ID")


def _parse_constants(text: str | None) -> dict:
    out = {}
    for item in (text or "").split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ModelError(f"bad constant {item!r}; expected k=v")
        key, val = item.split("=", 1)
        out[key.strip()] = float(val)
    return out


def cmd_sample(args) -> int:
    model = _load_model(args)
    dataset = sample_dataset(model, args.n, args.seed)
    files = dataio.write_dataset(dataset, args.out, binary=args.binary or None)
    print(json.dumps({"written": [str(f) for f in files], "n": dataset.n, "p": dataset.p}))
    return 0


def cmd_estimate(args) -> int:
    model = _load_model(args) if (args.model or args.preset) else None
    dataset = dataio.read_dataset(args.data, model)
    if args.estimator == "ls":
        clf = estimators.min_norm_ls(dataset, args.labels)
    elif args.estimator == "avg":
        clf = estimators.averaging(dataset, args.labels)
    elif args.estimator == "svm":
        clf = estimators.hard_margin_svm(dataset, args.labels).classifier
    elif args.estimator == "ridge":
        if args.tau is None:
            raise ModelError("ridge needs --tau")
        clf = estimators.ridge(dataset, args.tau, args.labels)
    else:
        raise ModelError(f"unknown estimator {args.estimator!r}")
    if args.out:
        dataio.write_classifier(clf, args.out)
        print(json.dumps({"written": args.out, "kind": clf.kind}))
    else:
        print(clf.to_json())
    return 0


def cmd_risk(args) -> int:
    model = _load_model(args)
    clf = dataio.read_classifier(args.classifier)
    report = risk.model_risk(clf, model)
    doc = report.to_dict()
    if args.mc:
        mc, se = risk.monte_carlo_risk(clf, model, args.mc, args.seed)
        doc["mc"] = mc
        doc["mc_se"] = se
    print(json.dumps(doc))
    return 0


_CHECK_CONSTANTS = {"thm1": ("C1",), "thm2": ("C1",), "thm6": ("C1", "C2"),
                    "posicorr": ("C1", "C2")}


def cmd_check(args) -> int:
    model = _load_model(args)
    constants = _parse_constants(args.constants)
    if args.check_id in _CHECK_CONSTANTS:
        valid = _CHECK_CONSTANTS[args.check_id]
        unknown = set(constants) - set(valid)
        if unknown:
            raise ModelError(
                f"unknown constants {sorted(unknown)} for {args.check_id}; valid: {list(valid)}"
            )
    if args.check_id == "thm1":
        report = regimes.check_thm1(model, args.n, **constants)
    elif args.check_id == "thm2":
        report = regimes.check_thm2(model, args.n, args.p, **constants)
    elif args.check_id == "thm6":
        report = regimes.check_thm6_noisy(model, args.n, args.p, **constants)
    elif args.check_id == "posicorr":
        report = regimes.check_positive_correlation(model, args.n, args.tau or 0.0, **constants)
    else:
        report = regimes.check_benign(
            args.check_id, model, args.n, args.p, constants or None, args.alpha
        )
    if args.format == "csv":
        print(",".join(regimes.ConditionReport.CSV_HEADER))
        print(",".join(f'"{v}"' for v in report.to_csv_row()))
    else:
        print(report.to_json())
    return 0


def _sweep_config_from_json(doc: dict, threads: int) -> experiments.SweepConfig:
    known = {"points", "trials", "base_seed", "mc_test_samples", "outputs"}
    unknown = set(doc) - known
    if unknown:
        raise ModelError(f"unknown sweep keys {sorted(unknown)}; valid: {sorted(known)}")
    points = []
    for i, pt in enumerate(doc.get("points", [])):
        known_pt = {"id", "model", "preset", "preset_params", "n", "estimators", "labels",
                    "meta", "track_coords"}
        unknown = set(pt) - known_pt
        if unknown:
            raise ModelError(f"unknown point keys {sorted(unknown)}; valid: {sorted(known_pt)}")
        if "model" in pt:
            model = model_from_json(json.dumps(pt["model"]))
        elif "preset" in pt:
            model, _ = preset_model(pt["preset"], **pt.get("preset_params", {}))
        else:
            raise ModelError(f"point {i} needs 'model' or 'preset'")
        points.append(
            experiments.SweepPoint(
                point_id=str(pt.get("id", f"point{i}")),
                model=model,
                n=int(pt["n"]),
                estimators=tuple(pt.get("estimators", ("ls",))),
                labels=pt.get("labels", "clean"),
                meta=pt.get("meta", {}),
                track_coords=tuple(pt.get("track_coords", ())),
            )
        )
    return experiments.SweepConfig(
        points=tuple(points),
        trials=int(doc.get("trials", 1)),
        base_seed=int(doc.get("base_seed", 0)),
        mc_test_samples=int(doc.get("mc_test_samples", 0)),
        outputs=tuple(doc.get("outputs", ("exact_risk",))),
        threads=threads,
    )


def cmd_sweep(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"malformed sweep config: {exc}") from exc
    config = _sweep_config_from_json(doc, args.threads)
    result = experiments.run_sweep(config)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    summary = {
        "config": {
            "trials": config.trials,
            "base_seed": config.base_seed,
            "mc_test_samples": config.mc_test_samples,
            "outputs": list(config.outputs),
            "points": [
                {"id": pt.point_id, "n": pt.n, "estimators": list(pt.estimators),
                 "labels": pt.labels}
                for pt in config.points
            ],
        },
        "aggregates": {
            pid: {k: {"mean": m, "std": s, "count": c} for k, (m, s, c) in agg.items()}
            for pid, agg in result.aggregates.items()
        },
    }
    path = out / "sweep_summary.json"
    path.write_text(json.dumps(summary, indent=2), encoding="utf-8")
    print(json.dumps({"written": str(path), "points": len(config.points)}))
    return 0


def cmd_figure(args) -> int:
    overrides = {"seed": args.seed, "threads": args.threads}
    if args.trials is not None:
        overrides["trials"] = args.trials
    _, files = experiments.figure(args.figure_id, out_dir=args.out or ".", **overrides)
    print(json.dumps({"written": {k: str(v) for k, v in files.items()}}))
    return 0


def cmd_verify(args) -> int:
    names = args.suite or list(verification.ALL_SUITES)
    scale = 0.1 if args.quick else 1.0
    sizes = {
        "identity": {"count": max(int(1000 * scale), 10)},
        "interpolation": {"count": max(int(500 * scale), 10)},
        "certificate": {
            "count": max(int(500 * scale), 10),
            "negative_count": max(int(100 * scale), 5),
        },
        "kkt": {"count": max(int(200 * scale), 10)},
        "risk_mc": {"pairs": max(int(20 * scale), 2), "m": 1_000_000 if not args.quick else 100_000},
        "chernoff": {"count": max(int(10_000 * scale), 100)},
    }
    failed = False
    for name in names:
        if name not in verification.ALL_SUITES:
            raise ModelError(f"unknown suite {name!r}; valid: {sorted(verification.ALL_SUITES)}")
        result = verification.ALL_SUITES[name](**sizes[name])
        print(result.line())
        for msg in result.failures[:5]:
            print(f"  FAIL {msg}")
        failed |= not result.ok
    return 4 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmmlab",
        description="Estimators, exact risks and Monte Carlo sweeps for binary Gaussian mixtures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_args(p):
        p.add_argument("--model", help="model JSON file")
        p.add_argument("--preset", choices=PRESET_IDS, help="figure preset id")
        p.add_argument("--p", type=int, help="preset dimension override")
        p.add_argument("--eta", type=float, help="preset mean-scale override")

    p = sub.add_parser("sample", help="sample a dataset file")
    add_model_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--binary", action="store_true", help="force the binary sidecar")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("estimate", help="fit a classifier on a dataset file")
    add_model_args(p)
    p.add_argument("--data", required=True)
    p.add_argument("--estimator", required=True, choices=("ls", "ridge", "avg", "svm"))
    p.add_argument("--tau", type=float)
    p.add_argument("--labels", choices=("clean", "corrupted"), default="clean")
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("risk", help="exact (and optional Monte Carlo) risk of a classifier")
    add_model_args(p)
    p.add_argument("--classifier", required=True)
    p.add_argument("--mc", type=int, default=0, help="Monte Carlo test samples")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("check", help="evaluate theorem/corollary conditions")
    p.add_argument("check_id", choices=CHECK_IDS)
    add_model_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--alpha", type=float, help="corollary exponent")
    p.add_argument("--constants", help="comma-separated k=v pairs, e.g. C1=1,C2=2")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="run a sweep config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="reproduce a reference figure as CSV files")
    p.add_argument("figure_id", choices=experiments.FIGURE_IDS)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", help="run the randomized property suites")
    p.add_argument("--suite", action="append", choices=sorted(verification.ALL_SUITES))
    p.add_argument("--quick", action="store_true", help="reduced instance counts")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (estimators.EstimatorError, QuadformError, risk.RiskError) as exc:
        # computation errors: structured stderr for machine consumption
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 3
    except (ModelError, regimes.RegimeError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
