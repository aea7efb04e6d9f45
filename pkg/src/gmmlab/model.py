"""Gaussian-mixture population model, covariance ensembles and sampling.

The population law is a symmetric two-class mixture: the label is +1
with probability ``prior_plus``, and the feature vector conditioned on
the label y is N(y * eta, Sigma).  The covariance is stored through its
eigendecomposition Sigma = V diag(lambda) V', with the mean expressed in
the eigenbasis as beta (eta = V beta).  All simulations in this package
use the diagonal default V = I, in which case eta = beta.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "Spectrum",
    "GmmModel",
    "Dataset",
    "Ensemble",
    "sample_dataset",
    "sigma_signal",
    "snr",
    "effective_ranks",
    "classify_ensemble",
    "preset_model",
    "model_to_json",
    "model_from_json",
    "PRESET_IDS",
]

_BASIS_ORTHO_TOL = 1e-10


class ModelError(ValueError):
    """Invalid model construction or query."""


@dataclass(frozen=True)
class Spectrum:
    """Covariance eigenvalues, strictly positive and non-increasing."""

    eigenvalues: np.ndarray

    def __init__(self, eigenvalues):
        lam = np.asarray(eigenvalues, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise ModelError("spectrum must be a non-empty 1-d array")
        if not np.all(lam > 0):
            raise ModelError("spectrum entries must be strictly positive")
        if np.any(np.diff(lam) > 0):
            raise ModelError("spectrum must be non-increasing")
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)

    def __len__(self):
        return self.eigenvalues.size

    @property
    def p(self) -> int:
        return self.eigenvalues.size

    @property
    def l1(self) -> float:
        """Trace of Sigma, sum of all eigenvalues."""
        return float(self.eigenvalues.sum())

    @property
    def l2_sq(self) -> float:
        """Squared Frobenius norm of Sigma."""
        return float(np.sum(self.eigenvalues**2))

    @property
    def lminus1(self) -> float:
        """Sum of eigenvalues except the largest."""
        return float(self.eigenvalues[1:].sum())

    @property
    def lmax(self) -> float:
        return float(self.eigenvalues[0])

    def is_identity(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.eigenvalues - 1.0) <= tol))


@dataclass(frozen=True)
class GmmModel:
    """Population parameters of the binary Gaussian mixture."""

    beta: np.ndarray
    spectrum: Spectrum
    prior_plus: float = 0.5
    flip_prob: float = 0.0
    basis: np.ndarray | None = None

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=float)
        if beta.ndim != 1:
            raise ModelError("beta must be a 1-d array")
        if beta.size != len(self.spectrum):
            raise ModelError("beta and spectrum lengths differ")
        beta.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        if not (0.0 < self.prior_plus < 1.0):
            raise ModelError("prior_plus must lie in (0, 1)")
        if not (0.0 <= self.flip_prob < 0.5):
            raise ModelError("flip_prob must lie in [0, 0.5)")
        if self.basis is not None:
            V = np.asarray(self.basis, dtype=float)
            if V.shape != (beta.size, beta.size):
                raise ModelError("basis must be p x p")
            if np.max(np.abs(V.T @ V - np.eye(beta.size))) > _BASIS_ORTHO_TOL:
                raise ModelError("basis is not orthogonal within 1e-10")
            V.setflags(write=False)
            object.__setattr__(self, "basis", V)

    @property
    def p(self) -> int:
        return self.beta.size

    @property
    def eta(self) -> np.ndarray:
        """Mean vector in the ambient coordinates, eta = V beta."""
        if self.basis is None:
            return self.beta
        return self.basis @ self.beta

    @property
    def eta_norm(self) -> float:
        return float(np.linalg.norm(self.beta))

    @property
    def eta_norm_sq(self) -> float:
        return float(self.beta @ self.beta)

    def covariance(self) -> np.ndarray:
        """Dense Sigma; intended for small p only."""
        lam = self.spectrum.eigenvalues
        if self.basis is None:
            return np.diag(lam)
        return (self.basis * lam) @ self.basis.T

    def quad_sigma(self, w: np.ndarray) -> float:
        """w' Sigma w without forming Sigma."""
        coords = w if self.basis is None else self.basis.T @ w
        return float(np.sum(self.spectrum.eigenvalues * coords**2))


@dataclass(frozen=True)
class Dataset:
    """A training sample: X = y eta' + Q row-wise.

    The noise matrix Q is kept so that Gram-decomposition diagnostics can
    use it without re-deriving it from X (which would re-introduce
    rounding).  Clean labels y and corrupted labels y_c agree unless the
    generating model had flip_prob > 0.
    """

    X: np.ndarray
    y: np.ndarray
    y_c: np.ndarray
    seed: int
    noise: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.X.ndim != 2:
            raise ModelError("X must be n x p")
        n = self.X.shape[0]
        if self.y.shape != (n,) or self.y_c.shape != (n,):
            raise ModelError("label vectors must have length n")
        for v in (self.y, self.y_c):
            if not np.all(np.abs(v) == 1):
                raise ModelError("labels must be +-1")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def labels(self, which: str) -> np.ndarray:
        if which == "clean":
            return self.y
        if which == "corrupted":
            return self.y_c
        raise ModelError(f"unknown label choice {which!r}; use 'clean' or 'corrupted'")


class Ensemble(Enum):
    BALANCED = "balanced"
    BILEVEL = "bilevel"
    NEITHER = "neither"


def sample_dataset(model: GmmModel, n: int, seed: int) -> Dataset:
    """Draw n iid rows from the mixture; bit-reproducible for a fixed seed.

    Row i is y_i eta + V Lambda^{1/2} z_i with z_i standard normal, and
    y_c flips y independently with probability flip_prob.
    """
    if n < 1:
        raise ModelError("n must be >= 1")
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    y = np.where(rng.random(n) < model.prior_plus, 1.0, -1.0)
    z = rng.standard_normal((n, model.p))
    q = z * np.sqrt(model.spectrum.eigenvalues)
    if model.basis is not None:
        q = q @ model.basis.T
    X = y[:, None] * model.eta + q
    if model.flip_prob > 0:
        flips = rng.random(n) < model.flip_prob
        y_c = np.where(flips, -y, y)
    else:
        y_c = y.copy()
    return Dataset(X=X, y=y, y_c=y_c, seed=int(seed), noise=q)


def sigma_signal(model: GmmModel) -> float:
    """Signal strength in the direction of Sigma: sigma^2 = beta' Lambda beta."""
    return float(np.sum(model.spectrum.eigenvalues * model.beta**2))


def snr(model: GmmModel) -> float:
    """Signal-to-noise ratio ||eta||^4 / (eta' Sigma eta)."""
    s2 = sigma_signal(model)
    if s2 <= 0.0:
        raise ModelError("undefined SNR: zero signal")
    return model.eta_norm_sq**2 / s2


def effective_ranks(spectrum: Spectrum, k: int) -> tuple[float, float]:
    """Effective ranks (r_k, R_k) of the tail spectrum beyond index k."""
    lam = spectrum.eigenvalues
    if not 0 <= k < lam.size:
        raise ModelError("k must satisfy 0 <= k < p")
    tail = lam[k:]
    tail_sum = float(tail.sum())
    r_k = tail_sum / float(lam[k])
    big_r_k = tail_sum**2 / float(np.sum(tail**2))
    return r_k, big_r_k


def classify_ensemble(
    spectrum: Spectrum, n: int, b: float = 1.5, b1: float = 1.5, b2: float = 1.5
) -> Ensemble:
    """Classify the spectrum as balanced, bi-level or neither.

    Balanced: b n lam_1 <= sum_{i>=2} lam_i.  Bi-level: b1 n lam_1 >=
    sum_{i>=2} lam_i and b2 n lam_2 <= sum_{i>=3} lam_i (needs p >= 3).
    When both predicate sets hold the tie resolves to balanced so that
    the checker output is deterministic.
    """
    if min(b, b1, b2) <= 1:
        raise ModelError("ensemble constants must exceed 1")
    lam = spectrum.eigenvalues
    balanced = b * n * lam[0] <= spectrum.lminus1
    if balanced:
        return Ensemble.BALANCED
    if lam.size >= 3:
        bilevel = (b1 * n * lam[0] >= spectrum.lminus1) and (
            b2 * n * lam[1] <= float(lam[2:].sum())
        )
        if bilevel:
            return Ensemble.BILEVEL
    return Ensemble.NEITHER


# ---------------------------------------------------------------------------
# Figure presets
# ---------------------------------------------------------------------------

PRESET_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6a", "fig6b")


def _fig1_model(p: int = 1500, eta: float = 0.1) -> GmmModel:
    lam = np.ones(p)
    lam[0] = 7.5
    lam[-1] = 0.2
    return GmmModel(beta=np.full(p, eta), spectrum=Spectrum(lam))


def _fig2_model(p: int, eta_norm_sq: float) -> GmmModel:
    beta = np.full(p, np.sqrt(eta_norm_sq / p))
    return GmmModel(beta=beta, spectrum=Spectrum(np.ones(p)))


def _fig3_model(p: int, eta: float = 0.1) -> GmmModel:
    lam1 = 0.005 * p
    lamp = 0.2 * (0.995 * p) / (p - 1)
    mid = (p - lam1 - lamp) / (p - 2)
    if not lam1 >= mid >= lamp:
        raise ModelError(f"fig3 spectrum needs larger p (got p={p})")
    lam = np.full(p, mid)
    lam[0] = lam1
    lam[-1] = lamp
    return GmmModel(beta=np.full(p, eta), spectrum=Spectrum(lam))


def _fig4_model(p: int, case: str = "equal") -> GmmModel:
    # ||lambda||_2^2 = p with a mildly spiked top and dipped bottom edge.
    lam1_sq = 0.0125 * p
    lamp_sq = 0.000125 * p
    mid = np.sqrt((p - lam1_sq - lamp_sq) / (p - 2))
    lam = np.full(p, mid)
    lam[0] = np.sqrt(lam1_sq)
    lam[-1] = np.sqrt(lamp_sq)
    if not lam[0] >= mid >= lam[-1]:
        raise ModelError(f"fig4 spectrum needs larger p (got p={p})")
    norm_sq = 0.125**2 * p
    beta = np.zeros(p)
    if case == "equal":
        beta[:] = 0.125
    elif case == "first":
        beta[0] = np.sqrt(norm_sq)
    elif case == "last":
        beta[-1] = np.sqrt(norm_sq)
    else:
        raise ModelError(f"unknown fig4 case {case!r}; use equal|first|last")
    return GmmModel(beta=beta, spectrum=Spectrum(lam))


def _fig5_model(alpha: float = 0.8, p: int = 200) -> GmmModel:
    total = p * 150.0
    beta = np.zeros(p)
    beta[-1] = np.sqrt(200.0)
    lam = np.full(p, (1 - alpha) * total / (p - 1))
    lam[0] = alpha * total
    if lam[0] < lam[1]:
        raise ModelError("fig5 spike ratio alpha too small for a valid spectrum")
    return GmmModel(beta=beta, spectrum=Spectrum(lam))


def _fig6_model(p: int, eta_p: float | None = None) -> GmmModel:
    lam = np.full(p, 50.0)
    lam[0] = 10.0 * 50.0 * (p - 1)
    beta = np.zeros(p)
    beta[-1] = 25.0 if eta_p is None else eta_p
    return GmmModel(beta=beta, spectrum=Spectrum(lam))


def preset_model(figure_id: str, **free_params) -> tuple[GmmModel, dict]:
    """Generating configuration for one of the reference figure presets.

    Returns (model, sweep defaults).  Free parameters (p, eta scale, the
    fig5 spike fraction alpha, ...) override the preset defaults.
    """
    if figure_id == "fig1":
        p = int(free_params.pop("p", 1500))
        eta = float(free_params.pop("eta", 0.1))
        _reject_unknown(figure_id, free_params)
        model = _fig1_model(p=p, eta=eta)
        defaults = {
            "n_grid": [25, 50, 75, 100, 125, 150],
            "eta_grid": [0.1, 0.15, 0.2, 0.25, 0.3],
            "trials": 300,
        }
    elif figure_id == "fig2":
        p = int(free_params.pop("p", 600))
        eta_norm_sq = float(free_params.pop("eta_norm_sq", 3.0))
        _reject_unknown(figure_id, free_params)
        model = _fig2_model(p=p, eta_norm_sq=eta_norm_sq)
        defaults = {
            "n": 100,
            "p_grid": [150, 300, 600, 1200, 2400, 4800],
            "snr_grid": [3.0, 5.0, 8.0, 10.0],
            "trials": 300,
        }
    elif figure_id == "fig3":
        p = int(free_params.pop("p", 1000))
        eta = float(free_params.pop("eta", 0.1))
        _reject_unknown(figure_id, free_params)
        model = _fig3_model(p=p, eta=eta)
        defaults = {
            "n": 50,
            "p_grid": [500, 1000, 2000, 4000],
            "eta_grid": [0.1, 0.15, 0.2, 0.25],
            "trials": 300,
        }
    elif figure_id == "fig4":
        p = int(free_params.pop("p", 1000))
        case = str(free_params.pop("case", "equal"))
        _reject_unknown(figure_id, free_params)
        model = _fig4_model(p=p, case=case)
        defaults = {
            "n": 100,
            "p_grid": [200, 400, 600, 800, 1000],
            "cases": ["last", "first", "equal"],
            "taus": [0.0, 100.0, 10000.0, 1e6],
            "trials": 300,
        }
    elif figure_id == "fig5":
        alpha = float(free_params.pop("alpha", 0.8))
        p = int(free_params.pop("p", 200))
        _reject_unknown(figure_id, free_params)
        model = _fig5_model(alpha=alpha, p=p)
        defaults = {
            "n": 100,
            "alpha_grid": [0.005, 0.1, 0.4, 0.8],
            "tau_grid": list(np.logspace(0, 6, 13)),
            "trials": 300,
        }
    elif figure_id == "fig6a":
        p = int(free_params.pop("p", 500))
        _reject_unknown(figure_id, free_params)
        model = _fig6_model(p=p)
        defaults = {
            "n": 30,
            "p_grid": [75, 100, 200, 300, 500],
            "tau_over_n_grid": list(np.logspace(-2, 3, 20)),
            "trials": 300,
        }
    elif figure_id == "fig6b":
        p = int(free_params.pop("p", 600))
        _reject_unknown(figure_id, free_params)
        model = _fig6_model(p=p, eta_p=0.1 * np.sqrt(50.0) * p**0.6)
        defaults = {
            "n": 30,
            "p_grid": [300, 400, 500, 600, 700, 800],
            "taus": [0.0, 30.0, 300.0, 3000.0],
            "include_svm": True,
            "trials": 300,
        }
    else:
        raise ModelError(f"unknown figure id {figure_id!r}; valid: {PRESET_IDS}")
    return model, defaults


def _reject_unknown(figure_id, params):
    if params:
        raise ModelError(f"unknown free parameters for {figure_id}: {sorted(params)}")


# ---------------------------------------------------------------------------
# JSON round trip
# ---------------------------------------------------------------------------


def model_to_json(model: GmmModel) -> str:
    doc = {
        "beta": model.beta.tolist(),
        "spectrum": model.spectrum.eigenvalues.tolist(),
        "basis": None if model.basis is None else model.basis.tolist(),
        "prior_plus": model.prior_plus,
        "flip_prob": model.flip_prob,
    }
    return json.dumps(doc)


def model_from_json(text: str) -> GmmModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"malformed model JSON: {exc}") from exc
    known = {"beta", "spectrum", "basis", "prior_plus", "flip_prob"}
    if not isinstance(doc, dict):
        raise ModelError("model JSON must be an object")
    unknown = set(doc) - known
    if unknown:
        raise ModelError(f"unknown model keys {sorted(unknown)}; valid keys: {sorted(known)}")
    missing = {"beta", "spectrum"} - set(doc)
    if missing:
        raise ModelError(f"model JSON missing keys {sorted(missing)}")
    basis = doc.get("basis")
    return GmmModel(
        beta=np.asarray(doc["beta"], dtype=float),
        spectrum=Spectrum(np.asarray(doc["spectrum"], dtype=float)),
        prior_plus=float(doc.get("prior_plus", 0.5)),
        flip_prob=float(doc.get("flip_prob", 0.0)),
        basis=None if basis is None else np.asarray(basis, dtype=float),
    )
