"""The four linear classifiers and the SVM <-> min-norm-LS equivalence test.

Estimators (all without intercept, labels v either clean or corrupted):

    min-norm LS   w = X'(X X')^-1 v          (interpolates X w = v)
    ridge(tau)    w = X'(X X' + tau I)^-1 v
    averaging     w = X' v / n
    hard-margin SVM: min ||w|| s.t. v_i w'x_i >= 1, solved in the dual
        by cyclic coordinate ascent.

The dual kernel runs in the compiled extension when available, with a
NumPy fallback selected at import; set GMMLAB_SVM_BACKEND=fallback to
force the pure-Python path.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve

from .model import Dataset
from .quadforms import (
    QuadformError,
    certificate_all_positive,
    duality_certificate,
    spd_factor,
)

try:
    from . import _svm_core
except ImportError:  # extension not built
    _svm_core = None
from . import _svm_fallback

if _svm_core is not None and os.environ.get("GMMLAB_SVM_BACKEND") != "fallback":
    _default_backend = "cython"
else:
    _default_backend = "fallback"

SVM_BACKEND = _default_backend

INTERPOLATION_TOL = 1e-8
ALPHA_CAP = 1e12

__all__ = [
    "Classifier",
    "SvmSolution",
    "EstimatorError",
    "NotInterpolableError",
    "SvmConvergenceError",
    "SvmInfeasibleError",
    "min_norm_ls",
    "ridge",
    "averaging",
    "hard_margin_svm",
    "support_vector_fraction",
    "svm_equals_ls",
    "SVM_BACKEND",
    "solver_backends",
]


class EstimatorError(RuntimeError):
    pass


class NotInterpolableError(EstimatorError):
    pass


class SvmConvergenceError(EstimatorError):
    pass


class SvmInfeasibleError(EstimatorError):
    pass


@dataclass(frozen=True)
class Classifier:
    w: np.ndarray
    kind: str  # ls | ridge | avg | svm
    tau: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.all(np.isfinite(self.w)):
            raise EstimatorError(f"{self.kind} produced non-finite weights")

    def to_json(self) -> str:
        doc = {"kind": self.kind, "w": self.w.tolist(), "diagnostics": self.diagnostics}
        if self.tau is not None:
            doc["tau"] = self.tau
        return json.dumps(doc)


@dataclass(frozen=True)
class SvmSolution:
    classifier: Classifier
    alpha: np.ndarray
    support_set: np.ndarray
    min_margin: float

    @property
    def w(self) -> np.ndarray:
        return self.classifier.w


def solver_backends() -> tuple[str, ...]:
    """Names of the available dual-solver backends."""
    return ("cython", "fallback") if _svm_core is not None else ("fallback",)


def _get_backend(name: str | None):
    name = name or SVM_BACKEND
    if name == "cython":
        if _svm_core is None:
            raise EstimatorError("compiled SVM backend is not available")
        return _svm_core, "cython"
    if name == "fallback":
        return _svm_fallback, "fallback"
    raise EstimatorError(f"unknown SVM backend {name!r}")


def min_norm_ls(dataset: Dataset, labels: str = "clean") -> Classifier:
    """Least-norm interpolator of the chosen labels.

    One step of iterative refinement keeps the interpolation residual at
    the 1e-8 contract even for poorly conditioned Gram matrices.
    """
    v = dataset.labels(labels)
    gram = dataset.X @ dataset.X.T
    try:
        fac, jitter = spd_factor(gram, "X X'")
    except QuadformError as exc:
        raise NotInterpolableError("not interpolable: X is rank deficient") from exc
    a = cho_solve(fac, v)
    w = dataset.X.T @ a
    resid = v - dataset.X @ w
    w = w + dataset.X.T @ cho_solve(fac, resid)
    resid_inf = float(np.max(np.abs(dataset.X @ w - v)))
    if resid_inf > INTERPOLATION_TOL:
        raise NotInterpolableError(
            f"not interpolable: residual {resid_inf:.3e} exceeds {INTERPOLATION_TOL}"
        )
    return Classifier(
        w=w, kind="ls", diagnostics={"residual_inf": resid_inf, "jitter": jitter}
    )


def ridge(dataset: Dataset, tau: float, labels: str = "clean") -> Classifier:
    """Ridge-regularized least squares, X'(X X' + tau I)^-1 v."""
    if tau <= 0:
        raise EstimatorError("tau must be positive; use min_norm_ls for tau = 0")
    v = dataset.labels(labels)
    gram = dataset.X @ dataset.X.T + tau * np.eye(dataset.n)
    fac, jitter = spd_factor(gram, "X X' + tau I")
    w = dataset.X.T @ cho_solve(fac, v)
    return Classifier(w=w, kind="ridge", tau=float(tau), diagnostics={"jitter": jitter})


def averaging(dataset: Dataset, labels: str = "clean") -> Classifier:
    """Class-mean difference estimator X' v / n."""
    v = dataset.labels(labels)
    return Classifier(w=dataset.X.T @ v / dataset.n, kind="avg")


def hard_margin_svm(
    dataset: Dataset,
    labels: str = "clean",
    kkt_tol: float = 1e-8,
    max_sweeps: int = 10000,
    backend: str | None = None,
) -> SvmSolution:
    """No-bias hard-margin SVM via cyclic dual coordinate ascent.

    Maximizes sum(alpha) - 0.5 alpha' G alpha with G_ij = v_i v_j x_i'x_j
    over alpha >= 0, sweeping coordinates cyclically from alpha = 0 with
    update alpha_i <- max(0, alpha_i + (1 - v_i w'x_i) / ||x_i||^2).
    Raises on sweep exhaustion and on dual blow-up (non-separable data).
    """
    v = dataset.labels(labels)
    solver, backend_name = _get_backend(backend)
    Xv = dataset.X * v[:, None]
    G = np.ascontiguousarray(Xv @ Xv.T)
    alpha = np.zeros(dataset.n)
    sweeps, viol, status = solver.solve_dual(G, alpha, kkt_tol, int(max_sweeps), ALPHA_CAP)
    if status == 2:
        raise SvmInfeasibleError("infeasible: dual iterates diverged; data not separable")
    if status != 0:
        raise SvmConvergenceError(
            f"SVM did not converge in {max_sweeps} sweeps (KKT violation {viol:.3e})"
        )
    w = Xv.T @ alpha
    margins = v * (dataset.X @ w)
    dual_obj = float(alpha.sum() - 0.5 * alpha @ (G @ alpha))
    primal_obj = 0.5 * float(w @ w)
    alpha_tol = 1e-8 * max(float(alpha.max()), 1.0)
    support = np.flatnonzero(alpha > alpha_tol)
    clf = Classifier(
        w=w,
        kind="svm",
        diagnostics={
            "sweeps": int(sweeps),
            "kkt_violation": float(viol),
            "backend": backend_name,
            "dual_objective": dual_obj,
            "primal_objective": primal_obj,
            "alpha_tol": alpha_tol,
        },
    )
    return SvmSolution(
        classifier=clf,
        alpha=alpha,
        support_set=support,
        min_margin=float(margins.min()),
    )


def support_vector_fraction(svm: SvmSolution) -> float:
    return svm.support_set.size / svm.alpha.size


def svm_equals_ls(dataset: Dataset, labels: str = "clean", tol: float = 1e-4) -> dict:
    """Compare the SVM and min-norm LS weights on the same labels.

    The certificate flag reports whether every entry of the duality
    certificate is positive, which is the sufficient condition for exact
    equality of the two optimizers.
    """
    ls = min_norm_ls(dataset, labels)
    svm = hard_margin_svm(dataset, labels)
    rel = float(np.linalg.norm(svm.w - ls.w) / np.linalg.norm(ls.w))
    cert = duality_certificate(dataset, labels)
    return {
        "equal": rel <= tol,
        "rel_distance": rel,
        "certificate_positive": certificate_all_positive(cert),
    }
