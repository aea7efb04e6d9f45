"""Randomized property suites behind the CLI verify command.

Each suite draws its instances from a fixed seed, checks one contract
(decomposition identity, interpolation, certificate soundness, SVM KKT
and strong duality, risk against Monte Carlo, Chernoff dominance) and
reports pass counts.  The acceptance tests run these same suites at the
counts and tolerances pinned by the criteria.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import estimators as est
from . import risk as rk
from .model import GmmModel, Spectrum, sample_dataset
from .quadforms import (
    certificate_all_positive,
    decomposition_residual,
    duality_certificate,
    spd_factor,
)
from scipy.linalg import cho_solve

__all__ = [
    "SuiteResult",
    "suite_identity",
    "suite_interpolation",
    "suite_certificate",
    "suite_kkt",
    "suite_risk_mc",
    "suite_chernoff",
    "ALL_SUITES",
]


@dataclass
class SuiteResult:
    name: str
    passed: int
    total: int
    failures: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.passed == self.total and self.total > 0

    def line(self) -> str:
        return f"{self.name}: {self.passed}/{self.total} pass"


def _random_model(rng, p, isotropic=False, eta_scale=None, flip_prob=0.0) -> GmmModel:
    if isotropic:
        lam = np.ones(p)
    else:
        lam = np.sort(rng.uniform(0.2, 3.0, size=p))[::-1]
    scale = rng.uniform(0.2, 2.0) if eta_scale is None else eta_scale
    beta = rng.standard_normal(p) * scale / math.sqrt(p)
    return GmmModel(beta=beta, spectrum=Spectrum(lam), flip_prob=flip_prob)


def _random_instance(rng, n_max=20, p_max=60, gap=(0, 40), **model_kw):
    n = int(rng.integers(1, n_max + 1))
    p = int(min(p_max, n + rng.integers(gap[0], gap[1] + 1)))
    p = max(p, n)
    model = _random_model(rng, p, **model_kw)
    seed = int(rng.integers(0, 2**63))
    return model, sample_dataset(model, n, seed)


def suite_identity(count: int = 1000, seed: int = 101) -> SuiteResult:
    """Inverse-Gram decomposition identity at relative residual 1e-8."""
    rng = np.random.default_rng(seed)
    taus = (0.0, 0.5, 10.0)
    passed, failures = 0, []
    worst = 0.0
    for i in range(count):
        model, dataset = _random_instance(rng)
        tau = taus[i % len(taus)]
        gram = dataset.X @ dataset.X.T + tau * np.eye(dataset.n)
        fac, _ = spd_factor(gram, "gram")
        direct = cho_solve(fac, dataset.y)
        resid = decomposition_residual(dataset, model, tau)
        rel = resid / max(float(np.max(np.abs(direct))), 1e-300)
        worst = max(worst, rel)
        if rel <= 1e-8:
            passed += 1
        else:
            failures.append(f"instance {i}: relative residual {rel:.3e}")
    return SuiteResult("identity", passed, count, failures, {"worst_rel_residual": worst})


def suite_interpolation(count: int = 500, seed: int = 202) -> SuiteResult:
    """min_norm_ls satisfies ||X w - v||_inf <= 1e-8 whenever p >= n + 3."""
    rng = np.random.default_rng(seed)
    passed, failures = 0, []
    worst = 0.0
    for i in range(count):
        model, dataset = _random_instance(rng, n_max=30, p_max=120, gap=(3, 90))
        labels = "clean" if i % 2 == 0 else "corrupted"
        clf = est.min_norm_ls(dataset, labels)
        resid = float(np.max(np.abs(dataset.X @ clf.w - dataset.labels(labels))))
        worst = max(worst, resid)
        if resid <= 1e-8:
            passed += 1
        else:
            failures.append(f"instance {i}: residual {resid:.3e}")
    return SuiteResult("interpolation", passed, count, failures, {"worst_residual": worst})


def suite_certificate(
    count: int = 500, negative_count: int = 100, seed: int = 303, tol: float = 1e-4
) -> SuiteResult:
    """Certificate soundness: all-positive => SVM equals min-norm LS.

    Also collects instances with a non-positive certificate entry and
    checks each has at least one non-support vector.
    """
    rng = np.random.default_rng(seed)
    passed, total, failures = 0, 0, []
    n_positive = 0
    for i in range(count):
        model, dataset = _random_instance(rng, n_max=30, p_max=120, gap=(3, 90))
        cert = duality_certificate(dataset)
        total += 1
        if not certificate_all_positive(cert):
            passed += 1  # nothing claimed when some entry is non-positive
            continue
        n_positive += 1
        res = est.svm_equals_ls(dataset)
        if res["rel_distance"] <= tol:
            passed += 1
        else:
            failures.append(
                f"instance {i}: positive certificate but rel distance {res['rel_distance']:.3e}"
            )
    # High-SNR draws put points strictly behind the margin.
    found = 0
    attempts = 0
    while found < negative_count and attempts < 50 * negative_count:
        attempts += 1
        n = int(rng.integers(5, 31))
        p = int(n + rng.integers(3, 91))
        model = _random_model(rng, p, isotropic=True, eta_scale=rng.uniform(6.0, 12.0))
        dataset = sample_dataset(model, n, int(rng.integers(0, 2**63)))
        cert = duality_certificate(dataset)
        if np.all(cert > 0):
            continue
        found += 1
        total += 1
        svm = est.hard_margin_svm(dataset)
        if svm.support_set.size < dataset.n:
            passed += 1
        else:
            failures.append(f"negative-certificate instance {attempts}: all points support vectors")
    if found < negative_count:
        failures.append(f"only found {found}/{negative_count} negative-certificate instances")
    return SuiteResult(
        "certificate", passed, total, failures,
        {"all_positive_instances": n_positive, "negative_instances": found},
    )


def suite_kkt(count: int = 200, seed: int = 404) -> SuiteResult:
    """SVM KKT conditions and primal-dual gap at convergence."""
    rng = np.random.default_rng(seed)
    kkt_tol = 1e-8
    passed, failures = 0, []
    worst_gap = 0.0
    for i in range(count):
        model, dataset = _random_instance(rng, n_max=25, p_max=100, gap=(3, 75))
        svm = est.hard_margin_svm(dataset, kkt_tol=kkt_tol)
        margins = dataset.y * (dataset.X @ svm.w)
        ok = bool(np.all(margins >= 1 - 2 * kkt_tol))
        active = svm.alpha > svm.classifier.diagnostics["alpha_tol"]
        ok &= bool(np.all(np.abs(margins[active] - 1.0) <= 1e-6))
        primal = svm.classifier.diagnostics["primal_objective"]
        dual = svm.classifier.diagnostics["dual_objective"]
        gap = abs(primal - dual)
        budget = 1e-6 * (1.0 + primal)
        worst_gap = max(worst_gap, gap / budget)
        ok &= gap <= budget
        if ok:
            passed += 1
        else:
            failures.append(f"instance {i}: min margin {margins.min():.9f}, gap {gap:.3e}")
    return SuiteResult("kkt", passed, count, failures, {"worst_gap_over_budget": worst_gap})


def suite_risk_mc(pairs: int = 20, m: int = 1_000_000, seed: int = 505) -> SuiteResult:
    """Exact and noisy risk agree with Monte Carlo within 4 standard errors."""
    rng = np.random.default_rng(seed)
    passed, total, failures = 0, 0, []
    for gamma in (0.0, 0.05, 0.2):
        for i in range(pairs):
            p = int(rng.integers(3, 13))
            model = _random_model(rng, p, flip_prob=gamma, eta_scale=rng.uniform(0.5, 2.0))
            w = rng.standard_normal(p)
            report = rk.model_risk(w, model)
            mc, _ = rk.monte_carlo_risk(w, model, m, int(rng.integers(0, 2**63)))
            tol = 4 * math.sqrt(max(report.exact * (1 - report.exact), 1e-12) / m)
            total += 1
            if abs(report.exact - mc) <= tol:
                passed += 1
            else:
                failures.append(
                    f"gamma={gamma} pair {i}: exact {report.exact:.6f} vs mc {mc:.6f} (tol {tol:.2e})"
                )
    return SuiteResult("risk_mc", passed, total, failures)


def suite_chernoff(count: int = 10_000, seed: int = 606) -> SuiteResult:
    """Chernoff bound dominates the exact risk on positive-correlation pairs."""
    rng = np.random.default_rng(seed)
    passed, total, failures = 0, 0, []
    models = [_random_model(rng, int(rng.integers(2, 10))) for _ in range(100)]
    while total < count:
        model = models[total % len(models)]
        w = rng.standard_normal(model.p)
        if float(w @ model.eta) <= 0:
            w = -w
        if float(w @ model.eta) <= 0:
            continue  # exactly orthogonal draw; resample
        report = rk.exact_risk(w, model)
        bound = rk.chernoff_bound(w, model)
        total += 1
        if bound >= report.exact:
            passed += 1
        else:
            failures.append(f"pair {total}: bound {bound:.6e} < exact {report.exact:.6e}")
    return SuiteResult("chernoff", passed, total, failures)


ALL_SUITES = {
    "identity": suite_identity,
    "interpolation": suite_interpolation,
    "certificate": suite_certificate,
    "kkt": suite_kkt,
    "risk_mc": suite_risk_mc,
    "chernoff": suite_chernoff,
}
