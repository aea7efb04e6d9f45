"""Classification risk: exact Q-function formulas, bounds, Monte Carlo.

For any nonzero classifier w the clean risk under the mixture is exactly
Q(w'eta / sqrt(w'Sigma w)) with Q the standard normal upper tail; with
label flips of probability gamma the risk becomes
gamma + (1 - 2 gamma) Q(ratio), which floors at gamma.  The theorem-style
exponential bounds are diagnostic evaluators whose universal constants
are caller-supplied (default 1.0); apart from the Chernoff inequality
they are never asserted to dominate the empirical risk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

from .estimators import Classifier, SvmSolution
from .model import Dataset, GmmModel, sigma_signal

__all__ = [
    "RiskError",
    "RiskReport",
    "BoundReport",
    "q_function",
    "exact_risk",
    "chernoff_bound",
    "noisy_risk",
    "monte_carlo_risk",
    "bound_balanced",
    "bound_isotropic",
    "bound_bilevel",
    "bound_averaging",
    "bound_noisy_isotropic",
    "margin_bound_classic",
    "margin_bound_svm",
]


class RiskError(ValueError):
    pass


def q_function(x):
    """Standard normal upper-tail probability, exact to double precision."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def _weights(w) -> np.ndarray:
    if isinstance(w, SvmSolution):
        return w.w
    if isinstance(w, Classifier):
        return w.w
    return np.asarray(w, dtype=float)


@dataclass(frozen=True)
class RiskReport:
    correlation: float  # w' eta
    noise_power: float  # w' Sigma w
    ratio: float
    exact: float
    kind: str  # "clean" or "noisy"
    gamma: float = 0.0
    chernoff: float | None = None

    def to_dict(self) -> dict:
        return {
            "correlation": self.correlation,
            "noise_power": self.noise_power,
            "ratio": self.ratio,
            "exact": self.exact,
            "kind": self.kind,
            "gamma": self.gamma,
            "chernoff": self.chernoff,
        }


def _ratio(w: np.ndarray, model: GmmModel) -> tuple[float, float, float]:
    corr = float(w @ model.eta)
    power = model.quad_sigma(w)
    if power <= 0.0:
        raise RiskError("degenerate classifier: w' Sigma w = 0")
    return corr, power, corr / math.sqrt(power)


def exact_risk(w, model: GmmModel) -> RiskReport:
    """Clean-label risk Q(w'eta / sqrt(w'Sigma w))."""
    corr, power, ratio = _ratio(_weights(w), model)
    return RiskReport(
        correlation=corr,
        noise_power=power,
        ratio=ratio,
        exact=float(q_function(ratio)),
        kind="clean",
        chernoff=math.exp(-(ratio**2) / 2.0) if corr > 0 else None,
    )


def chernoff_bound(w, model: GmmModel) -> float:
    """exp(-ratio^2 / 2); dominates the exact risk whenever w'eta > 0."""
    corr, _, ratio = _ratio(_weights(w), model)
    if corr <= 0:
        raise RiskError("bound requires positive correlation w'eta > 0")
    return math.exp(-(ratio**2) / 2.0)


def noisy_risk(w, model: GmmModel) -> RiskReport:
    """Risk against flip-corrupted test labels: gamma + (1-2 gamma) Q(ratio).

    Derived from the clean formula plus independence of the flips;
    validated against Monte Carlo in the acceptance suite.
    """
    corr, power, ratio = _ratio(_weights(w), model)
    gamma = model.flip_prob
    return RiskReport(
        correlation=corr,
        noise_power=power,
        ratio=ratio,
        exact=gamma + (1.0 - 2.0 * gamma) * float(q_function(ratio)),
        kind="noisy",
        gamma=gamma,
        chernoff=gamma + math.exp(-(ratio**2) / 2.0) if corr > 0 else None,
    )


def model_risk(w, model: GmmModel) -> RiskReport:
    """exact_risk or noisy_risk according to the model's flip probability."""
    return noisy_risk(w, model) if model.flip_prob > 0 else exact_risk(w, model)


def monte_carlo_risk(
    w, model: GmmModel, m: int, seed: int, batch: int = 100_000
) -> tuple[float, float]:
    """Empirical 0-1 risk on m fresh draws; returns (estimate, std error).

    Test labels are corrupted when the model has flip_prob > 0, matching
    the noisy-risk convention.
    """
    if m < 1:
        raise RiskError("m must be >= 1")
    w = _weights(w)
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    lam_sqrt = np.sqrt(model.spectrum.eigenvalues)
    eta = model.eta
    errors = 0
    done = 0
    while done < m:
        k = min(batch, m - done)
        y = np.where(rng.random(k) < model.prior_plus, 1.0, -1.0)
        q = rng.standard_normal((k, model.p)) * lam_sqrt
        if model.basis is not None:
            q = q @ model.basis.T
        scores = (q @ w) + y * float(eta @ w)
        label = y
        if model.flip_prob > 0:
            flips = rng.random(k) < model.flip_prob
            label = np.where(flips, -y, y)
        guesses = np.where(scores > 0, 1.0, -1.0)
        errors += int(np.sum(guesses != label))
        done += k
    estimate = errors / m
    return estimate, math.sqrt(max(estimate * (1 - estimate), 0.0) / m)


# ---------------------------------------------------------------------------
# Theorem-style exponential bounds (diagnostic evaluators)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    value: float | None
    precondition_ok: bool
    constants_used: dict
    extras: dict = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return self.value is not None and self.value >= 1.0

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "precondition_ok": self.precondition_ok,
            "vacuous": self.vacuous,
            "constants_used": self.constants_used,
            **({"extras": self.extras} if self.extras else {}),
        }


def _constants(user: dict | None, names: tuple[str, ...]) -> dict:
    out = {name: 1.0 for name in names}
    for key, val in (user or {}).items():
        if key not in out:
            raise RiskError(f"unknown constant {key!r}; valid: {list(names)}")
        out[key] = float(val)
    if any(v <= 0 for v in out.values()):
        raise RiskError("constants must be positive")
    return out


def _require_isotropic(model: GmmModel):
    if not model.spectrum.is_identity():
        raise RiskError("this bound requires the identity covariance")


def bound_balanced(
    model: GmmModel, n: int, tau: float = 0.0, constants: dict | None = None
) -> BoundReport:
    """Balanced-ensemble risk bound for the ridge/min-norm estimator."""
    c = _constants(constants, ("C1", "C2", "C3", "C4"))
    sig2 = sigma_signal(model)
    sig = math.sqrt(sig2)
    scale = tau + model.spectrum.l1
    base = model.eta_norm_sq - c["C1"] * n * sig2 / scale - c["C2"] * sig
    if base <= 0:
        return BoundReport(value=None, precondition_ok=False, constants_used=c)
    denom = (
        c["C3"] * max(1.0, n**2 * sig2 / scale**2) * model.spectrum.l2_sq
        + c["C4"] * sig2
    )
    return BoundReport(
        value=math.exp(-(base**2) / denom), precondition_ok=True, constants_used=c
    )


def bound_isotropic(
    model: GmmModel, n: int, p: int, constants: dict | None = None
) -> BoundReport:
    """Isotropic min-norm bound plus its high/low-SNR specializations."""
    _require_isotropic(model)
    c = _constants(constants, ("C1", "C2"))
    norm = model.eta_norm
    ratio = p / n
    base = (1 - n / p) * norm - c["C1"]
    regime = "high" if norm**2 > ratio else "low"
    if base <= 0:
        return BoundReport(
            value=None, precondition_ok=False, constants_used=c, extras={"regime": regime}
        )
    main = math.exp(-(norm**2) * base**2 / (c["C2"] * (ratio + norm**2)))
    reduced = (1 - n / p) - c["C1"] / norm
    high = math.exp(-c["C2"] * norm**2 * reduced**2)
    low = math.exp(-c["C2"] * norm**4 * reduced**2 / ratio)
    return BoundReport(
        value=main,
        precondition_ok=True,
        constants_used=c,
        extras={"regime": regime, "high_snr": high, "low_snr": low},
    )


def _one_sparse_index(model: GmmModel) -> int:
    nz = np.flatnonzero(model.beta)
    if nz.size != 1:
        raise RiskError("mean vector must be one-sparse")
    return int(nz[0])


def bound_bilevel(
    model: GmmModel, n: int, tau: float = 0.0, k: int | None = None,
    constants: dict | None = None,
) -> BoundReport:
    """Bi-level bound under the one-sparse mean assumption (k != 1).

    k is the 1-based index of the nonzero mean coordinate; inferred from
    the model when omitted.
    """
    if model.basis is not None:
        raise RiskError("bi-level bound requires a diagonal covariance")
    idx = _one_sparse_index(model) if k is None else k - 1
    if idx == 0:
        raise RiskError("one-sparse index k must differ from the spike index 1")
    if model.beta[idx] == 0:
        raise RiskError(f"beta[{idx}] is zero; not the one-sparse index")
    c = _constants(constants, ("C1", "C2", "C3", "C4", "C5", "C6"))
    lam = model.spectrum.eigenvalues
    eta_k = float(abs(model.beta[idx]))
    lam_k = float(lam[idx])
    sig = math.sqrt(lam_k) * eta_k
    rest = model.spectrum.lminus1
    base = eta_k**2 * (1 - c["C1"] * n * lam_k / (tau + rest)) - c["C2"] * sig
    if base <= 0:
        return BoundReport(value=None, precondition_ok=False, constants_used=c)
    a_term = c["C3"] * lam[0] ** 2 * (
        (tau + rest + c["C4"] * n * sig) / (tau + rest + n * lam[0])
    ) ** 2
    tail_sq = float(np.sum(lam**2)) - lam[0] ** 2 - lam_k**2
    b_term = c["C5"] * tail_sq * (1 + c["C4"] * n * sig / (tau + rest)) ** 2
    denom = a_term + b_term + c["C6"] * (lam_k**2 + sig**2)
    return BoundReport(
        value=math.exp(-(base**2) / denom),
        precondition_ok=True,
        constants_used=c,
        extras={"A": a_term, "B": b_term},
    )


def bound_averaging(model: GmmModel, constants: dict | None = None) -> BoundReport:
    """Averaging-estimator bound; the tau -> inf limit of bound_balanced."""
    c = _constants(constants, ("C1", "C2", "C3"))
    sig = math.sqrt(sigma_signal(model))
    base = model.eta_norm_sq - c["C1"] * sig
    if base <= 0:
        return BoundReport(value=None, precondition_ok=False, constants_used=c)
    denom = c["C2"] * model.spectrum.l2_sq + c["C3"] * sig**2
    return BoundReport(
        value=math.exp(-(base**2) / denom), precondition_ok=True, constants_used=c
    )


def bound_noisy_isotropic(
    model: GmmModel, n: int, p: int, constants: dict | None = None
) -> BoundReport:
    """Noisy isotropic bound gamma + exp-term (low-SNR form)."""
    _require_isotropic(model)
    c = _constants(constants, ("C1", "C2"))
    norm = model.eta_norm
    base = (1 - n / p) - c["C1"] / norm
    if base <= 0:
        return BoundReport(value=None, precondition_ok=False, constants_used=c)
    exp_term = math.exp(-c["C2"] * norm**4 * base**2 / (p / n))
    return BoundReport(
        value=model.flip_prob + exp_term,
        precondition_ok=True,
        constants_used=c,
        extras={"exp_term": exp_term},
    )


# ---------------------------------------------------------------------------
# Classical margin bounds (vacuity demonstrations)
# ---------------------------------------------------------------------------


def _radius(model: GmmModel, radius_c: float) -> float:
    # whp. bound ||x|| <= ||eta|| + C sqrt(p) for isotropic features
    return model.eta_norm + radius_c * math.sqrt(model.p)


def margin_bound_classic(
    dataset: Dataset,
    model: GmmModel,
    delta: float = 0.05,
    radius_c: float = 1.05,
    clamp: bool = True,
) -> float:
    """Norm-based generalization bound evaluated at the true mean direction.

    2 R ||eta|| / sqrt(n) + (1 + R ||eta||) sqrt(2 log(2/delta) / n) with
    R = ||eta|| + C sqrt(p).  Clamped to [0, 1] for reporting unless
    clamp=False.
    """
    _require_isotropic(model)
    if not 0 < delta <= 1:
        raise RiskError("delta must lie in (0, 1]")
    n = dataset.n
    big_r = _radius(model, radius_c)
    norm = model.eta_norm
    value = 2 * big_r * norm / math.sqrt(n)
    value += (1 + big_r * norm) * math.sqrt(2 * math.log(2 / delta) / n)
    return min(max(value, 0.0), 1.0) if clamp else value


def margin_bound_svm(
    svm: SvmSolution,
    dataset: Dataset,
    model: GmmModel,
    delta: float = 0.05,
    radius_c: float = 1.05,
    clamp: bool = True,
) -> float:
    """Margin-based bound 4 R ||w|| / sqrt(n) + log-log slack term.

    The norm-class count ceil(log2 ||w||) is floored at one class, which
    is the regime that applies when the solver's inverse margin is below
    two.
    """
    _require_isotropic(model)
    if not 0 < delta <= 1:
        raise RiskError("delta must lie in (0, 1]")
    n = dataset.n
    big_r = _radius(model, radius_c)
    w_norm = float(np.linalg.norm(svm.w))
    classes = max(math.ceil(math.log2(w_norm)) if w_norm > 0 else 1, 1)
    value = 4 * big_r * w_norm / math.sqrt(n)
    value += math.sqrt(math.log(4 * classes / delta) / n)
    return min(max(value, 0.0), 1.0) if clamp else value
