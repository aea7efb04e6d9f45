"""Structural condition checkers for the interpolation/benign-overfitting results.

Each checker evaluates the inequalities of one theorem or corollary at
explicit constants (default 1.0, existential in the underlying results) and
reports per-clause lhs/rhs/holds.  Reports are diagnostics, not proofs:
clauses of the form "n sufficiently large" are unverifiable and appear
in the notes instead.  All logarithms are natural.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .model import GmmModel, Spectrum, sigma_signal

__all__ = [
    "RegimeError",
    "Clause",
    "ConditionReport",
    "lambda_star",
    "check_thm1",
    "check_thm2",
    "check_thm6_noisy",
    "check_benign",
    "check_positive_correlation",
    "COROLLARY_IDS",
]

COROLLARY_IDS = ("cor2", "cor3_high", "cor3_low", "cor4", "cor5")

_FLAT_REL_TOL = 1e-9


class RegimeError(ValueError):
    pass


@dataclass(frozen=True)
class Clause:
    name: str
    lhs: float
    rhs: float
    op: str = ">"  # ">", ">=", "<", "<="

    @property
    def holds(self) -> bool:
        if self.op == ">":
            return self.lhs > self.rhs
        if self.op == ">=":
            return self.lhs >= self.rhs
        if self.op == "<":
            return self.lhs < self.rhs
        if self.op == "<=":
            return self.lhs <= self.rhs
        raise RegimeError(f"unknown op {self.op!r}")

    @property
    def margin(self) -> float:
        sign = 1.0 if self.op in (">", ">=") else -1.0
        return sign * (self.lhs - self.rhs)


@dataclass(frozen=True)
class ConditionReport:
    theorem_id: str
    clauses: tuple[Clause, ...]
    constants_used: dict
    notes: tuple[str, ...] = ()

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.clauses)

    def clause(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "all_hold": self.all_hold,
            "clauses": [
                {"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "op": c.op, "holds": c.holds}
                for c in self.clauses
            ],
            "constants_used": self.constants_used,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv_row(self) -> list[str]:
        """Fixed columns: theorem_id, all_hold, clauses, constants."""
        clauses = ";".join(
            f"{c.name}:{c.lhs:.17g}{c.op}{c.rhs:.17g}:{int(c.holds)}" for c in self.clauses
        )
        constants = ",".join(f"{k}={v:.17g}" for k, v in sorted(self.constants_used.items()))
        return [self.theorem_id, str(int(self.all_hold)), clauses, constants]

    CSV_HEADER = ["theorem_id", "all_hold", "clauses", "constants"]


def _const(user: dict | None, names: tuple[str, ...]) -> dict:
    out = {name: 1.0 for name in names}
    for key, val in (user or {}).items():
        if key not in out:
            raise RegimeError(f"unknown constant {key!r}; valid: {list(names)}")
        out[key] = float(val)
    return out


def lambda_star(spectrum: Spectrum, n: int) -> float:
    """Overparameterization threshold 72(||l||_2 n sqrt(log n) + ||l||_inf n^1.5 log n + 1)."""
    if n < 2:
        raise RegimeError("lambda_star needs n >= 2")
    log_n = math.log(n)
    l2 = math.sqrt(spectrum.l2_sq)
    return 72.0 * (l2 * n * math.sqrt(log_n) + spectrum.lmax * n * math.sqrt(n) * log_n + 1.0)


def _require_isotropic(model: GmmModel, who: str):
    if not model.spectrum.is_identity():
        raise RegimeError(f"{who} requires the identity covariance")


def check_thm1(model: GmmModel, n: int, C1: float = 1.0) -> ConditionReport:
    """SVM = min-norm interpolation, general covariance."""
    l1 = model.spectrum.l1
    sigma = math.sqrt(sigma_signal(model))
    clauses = (
        Clause("overparameterization", l1, lambda_star(model.spectrum, n)),
        Clause("snr", l1, C1 * n * math.sqrt(math.log(2 * n)) * sigma),
    )
    return ConditionReport("thm1", clauses, {"C1": C1})


def check_thm2(model: GmmModel, n: int, p: int | None = None, C1: float = 1.0) -> ConditionReport:
    """SVM = min-norm interpolation, isotropic covariance."""
    _require_isotropic(model, "check_thm2")
    p = model.p if p is None else p
    if p != model.p:
        raise RegimeError(f"p={p} disagrees with the model dimension {model.p}")
    clauses = (
        Clause("overparameterization", float(p), 10 * n * math.log(n) + n - 1),
        Clause("snr", float(p), C1 * n * math.sqrt(math.log(2 * n)) * model.eta_norm),
    )
    return ConditionReport("thm2", clauses, {"C1": C1})


def check_thm6_noisy(
    model: GmmModel, n: int, p: int | None = None, C1: float = 1.0, C2: float = 1.0
) -> ConditionReport:
    """SVM = min-norm interpolation with corrupted labels, isotropic."""
    _require_isotropic(model, "check_thm6_noisy")
    p = model.p if p is None else p
    if p != model.p:
        raise RegimeError(f"p={p} disagrees with the model dimension {model.p}")
    norm = model.eta_norm
    branch_a = n * math.sqrt(math.log(2 * n)) * norm
    branch_b = n * norm**2
    binding = "n*||eta||^2" if branch_b >= branch_a else "n*sqrt(log 2n)*||eta||"
    clauses = (
        Clause("overparameterization", float(p), C1 * n * math.log(n) + n - 1),
        Clause("snr_max", float(p), C2 * max(branch_a, branch_b)),
    )
    return ConditionReport(
        "thm6", clauses, {"C1": C1, "C2": C2}, notes=(f"binding max branch: {binding}",)
    )


def check_positive_correlation(
    model: GmmModel, n: int, tau: float = 0.0, C1: float = 1.0, C2: float = 1.0
) -> ConditionReport:
    """Positive-correlation condition for the ridge estimator."""
    sig2 = sigma_signal(model)
    sigma = math.sqrt(sig2)
    rhs = C1 * n * sig2 / (tau + model.spectrum.l1) + C2 * sigma
    clauses = (Clause("positive_correlation", model.eta_norm_sq, rhs),)
    return ConditionReport(
        "posicorr",
        clauses,
        {"C1": C1, "C2": C2},
        notes=("unverifiable clause: n > c log(1/delta) for existential c",),
    )


def _flat_tail(lam: np.ndarray) -> float:
    tail = lam[1:]
    spread = float(tail.max() - tail.min())
    if spread > _FLAT_REL_TOL * float(tail.max()):
        raise RegimeError("cor4 requires a flat tail lambda_2 = ... = lambda_p")
    return float(tail[0])


def _one_sparse(model: GmmModel) -> int:
    if model.basis is not None:
        raise RegimeError("one-sparse checks require a diagonal covariance")
    nz = np.flatnonzero(model.beta)
    if nz.size != 1:
        raise RegimeError("mean vector must be one-sparse")
    if nz[0] == 0:
        raise RegimeError("one-sparse index must differ from the spike index 1")
    return int(nz[0])


def check_benign(
    corollary_id: str,
    model: GmmModel,
    n: int,
    p: int | None = None,
    constants: dict | None = None,
    alpha: float | None = None,
) -> ConditionReport:
    """Benign-overfitting clause sets of the five corollaries.

    ``alpha`` is the growth exponent of the corollary at hand (< 2 for
    cor2, > 1 for cor3_low / cor5, the mean-growth exponent r > 1/2 for
    cor4); it namespaces per corollary and is required where it appears.
    """
    p = model.p if p is None else p
    if p != model.p:
        raise RegimeError(f"p={p} disagrees with the model dimension {model.p}")
    log2n = math.log(2 * n)
    note_n = "unverifiable clause: n sufficiently large (n > C/delta, existential C)"

    if corollary_id == "cor2":
        c = _const(constants, ("C1", "C2"))
        if alpha is None:
            raise RegimeError("cor2 needs the exponent alpha (< 2)")
        beta = model.beta
        if float(np.max(beta) - np.min(beta)) > _FLAT_REL_TOL * max(abs(float(np.max(beta))), 1e-300):
            raise RegimeError("cor2 requires equal mean entries")
        b = float(beta[0])
        l1 = model.spectrum.l1
        clauses = (
            Clause("overparameterization", l1, lambda_star(model.spectrum, n)),
            Clause("snr_lower", l1, c["C1"] * b**2 * n**2 * log2n),
            Clause(
                "snr_upper",
                max(model.spectrum.l2_sq / b**2, l1),
                c["C2"] * b**2 * p**alpha,
                op="<=",
            ),
            Clause("alpha_range", alpha, 2.0, op="<"),
        )
        return ConditionReport("cor2", clauses, c, notes=(note_n,))

    if corollary_id == "cor3_high":
        _require_isotropic(model, "cor3_high")
        c = _const(constants, ("C1", "C2"))
        norm = model.eta_norm
        clauses = (
            Clause("snr_upper", n * norm**2 / c["C1"], float(p)),
            Clause("overparameterization", float(p), 10 * n * math.log(n) + n - 1),
            Clause("snr_lower", float(p), c["C2"] * n * math.sqrt(log2n) * norm),
        )
        return ConditionReport("cor3_high", clauses, c, notes=(note_n,))

    if corollary_id == "cor3_low":
        _require_isotropic(model, "cor3_low")
        c = _const(constants, ("C3", "C4"))
        if alpha is None:
            raise RegimeError("cor3_low needs the exponent alpha (> 1)")
        norm = model.eta_norm
        clauses = (
            Clause("overparameterization", float(p), 10 * n * math.log(n) + n - 1),
            Clause("snr_mid", float(p), c["C3"] * n * math.sqrt(log2n) * norm),
            Clause("snr_upper", float(p), n * norm**2),
            Clause("snr_growth", norm**4, c["C4"] * (p / n) ** alpha, op=">="),
            Clause("alpha_range", alpha, 1.0),
        )
        return ConditionReport("cor3_low", clauses, c, notes=(note_n,))

    if corollary_id == "cor4":
        c = _const(constants, ("C1",))
        if alpha is None:
            raise RegimeError("cor4 needs the mean-growth exponent r (> 1/2) as alpha")
        k = _one_sparse(model)
        lam = model.spectrum.eigenvalues
        lam_tail = _flat_tail(lam)
        eta_k = float(abs(model.beta[k]))
        clauses = (
            Clause("spike_scaling", float(lam[0]), p * lam_tail),
            Clause("exponent_range", alpha, 0.5),
            Clause("mean_growth", eta_k, c["C1"] * math.sqrt(lam_tail) * p**alpha),
        )
        return ConditionReport("cor4", clauses, c, notes=(note_n,))

    if corollary_id == "cor5":
        _require_isotropic(model, "cor5")
        c = _const(constants, ("C2", "C3", "C4"))
        if alpha is None:
            raise RegimeError("cor5 needs the exponent alpha (> 1)")
        norm = model.eta_norm
        clauses = (
            Clause("overparameterization", float(p), c["C2"] * n * math.log(n) + n - 1),
            Clause("snr_mid", float(p), c["C3"] * n * math.sqrt(log2n) * norm),
            Clause("snr_upper", float(p), n * norm**2),
            Clause("snr_growth", norm**4, c["C4"] * (p / n) ** alpha, op=">="),
            Clause("alpha_range", alpha, 1.0),
        )
        return ConditionReport(
            "cor5",
            clauses,
            c,
            notes=(note_n, f"noise level gamma = {model.flip_prob}"),
        )

    raise RegimeError(f"unknown corollary id {corollary_id!r}; valid: {COROLLARY_IDS}")
