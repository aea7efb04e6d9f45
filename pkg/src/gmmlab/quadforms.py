"""Gram-matrix algebra on the noise decomposition X = y eta' + Q.

Everything here revolves around the translated Wishart matrix
U_tau = Q Q' + tau I and five primitive quadratic forms of its inverse:

    s = y' U_tau^-1 y      t = d' U_tau^-1 d      h = y' U_tau^-1 d
    g_i = y' U_0^-1 e_i    f_i = d' U_0^-1 e_i        (d = Q eta)

with determinant-like scalar D = s(||eta||^2 - t) + (h + 1)^2.  The
inverse-Gram row y'(X X' + tau I)^-1 decomposes exactly as

    y' U_tau^-1 - (1/D) [ (||eta||^2 s + h^2 + h - s t) y' + s d' ] U_tau^-1

which this module both exposes (primitive_forms) and validates
numerically (decomposition_residual).  g and f are always computed at
tau = 0; only s, t, h follow the context's tau.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, solve_triangular

from .model import Dataset, GmmModel, sigma_signal

__all__ = [
    "QuadformError",
    "GramContext",
    "PrimitiveForms",
    "primitive_forms",
    "decomposition_residual",
    "duality_certificate",
    "linear_separability",
    "lemma5_ratios",
    "spd_factor",
]

CERT_POSITIVITY_REL_TOL = 1e-10
RANK_REL_TOL = 1e-10


class QuadformError(RuntimeError):
    """Singular Gram matrix or invalid quadform context."""


def spd_factor(M: np.ndarray, label: str = "matrix"):
    """Cholesky-factor a symmetric PD matrix with a one-shot jitter retry.

    Returns (factor, jitter).  The jitter, 1e-12 * trace / n, guards
    against borderline indefiniteness from rounding only; a second
    failure raises.
    """
    try:
        return cho_factor(M, lower=True), 0.0
    except LinAlgError:
        jitter = 1e-12 * float(np.trace(M)) / M.shape[0]
        try:
            return cho_factor(M + jitter * np.eye(M.shape[0]), lower=True), jitter
        except LinAlgError as exc:
            raise QuadformError(f"{label} is singular") from exc


class GramContext:
    """Factorizations of U_tau (and U_0) for one dataset realization.

    Immutable after construction; the factorizations are computed once
    and shared by all form evaluations.
    """

    def __init__(self, Q: np.ndarray, y: np.ndarray, eta: np.ndarray, tau: float = 0.0):
        if tau < 0:
            raise QuadformError("tau must be nonnegative")
        n = Q.shape[0]
        if Q.shape[1] < n:
            raise QuadformError("U_0 is singular: p < n")
        self.n = n
        self.tau = float(tau)
        self.y = np.asarray(y, dtype=float)
        self.d = Q @ np.asarray(eta, dtype=float)
        U0 = Q @ Q.T
        self._fac0, jitter0 = spd_factor(U0, "U_0 = Q Q'")
        if tau > 0:
            self._fac_tau, jitter_tau = spd_factor(
                U0 + tau * np.eye(n), "U_tau = Q Q' + tau I"
            )
        else:
            self._fac_tau, jitter_tau = self._fac0, jitter0
        self.diagnostics = {"jitter_u0": jitter0, "jitter_utau": jitter_tau}

    @classmethod
    def from_dataset(cls, dataset: Dataset, model: GmmModel, tau: float = 0.0) -> "GramContext":
        eta = model.eta
        if dataset.noise is not None:
            Q = dataset.noise
        else:
            Q = dataset.X - dataset.y[:, None] * eta
        return cls(Q=Q, y=dataset.y, eta=eta, tau=tau)

    def solve_tau(self, rhs: np.ndarray) -> np.ndarray:
        return cho_solve(self._fac_tau, rhs)

    def solve_zero(self, rhs: np.ndarray) -> np.ndarray:
        return cho_solve(self._fac0, rhs)

    def half_solve_tau(self, rhs: np.ndarray) -> np.ndarray:
        """L^-1 rhs for U_tau = L L'; makes quadratic forms sums of squares."""
        c, lower = self._fac_tau
        return solve_triangular(c, rhs, lower=lower)

    def diagnostics_json(self) -> str:
        return json.dumps(self.diagnostics)


@dataclass(frozen=True)
class PrimitiveForms:
    s: float
    t: float
    h: float
    g: np.ndarray
    f: np.ndarray
    D: float


def primitive_forms(ctx: GramContext, eta_norm_sq: float) -> PrimitiveForms:
    """Evaluate the five primitive quadratic forms and D.

    s and t come out as sums of squares of triangular solves, so they
    are nonnegative by construction.
    """
    zy = ctx.half_solve_tau(ctx.y)
    zd = ctx.half_solve_tau(ctx.d)
    s = float(zy @ zy)
    t = float(zd @ zd)
    h = float(zy @ zd)
    g = ctx.solve_zero(ctx.y)
    f = ctx.solve_zero(ctx.d)
    D = s * (eta_norm_sq - t) + (h + 1.0) ** 2
    return PrimitiveForms(s=s, t=t, h=h, g=g, f=f, D=D)


def inverse_gram_row(ctx: GramContext, eta_norm_sq: float) -> np.ndarray:
    """y'(X X' + tau I)^-1 via the three-term correction of y' U_tau^-1."""
    forms = primitive_forms(ctx, eta_norm_sq)
    uy = ctx.solve_tau(ctx.y)
    ud = ctx.solve_tau(ctx.d)
    coef_y = eta_norm_sq * forms.s + forms.h**2 + forms.h - forms.s * forms.t
    return uy - (coef_y * uy + forms.s * ud) / forms.D


def decomposition_residual(dataset: Dataset, model: GmmModel, tau: float = 0.0) -> float:
    """Max-abs gap between the direct inverse-Gram row and the identity RHS."""
    X, y = dataset.X, dataset.y
    gram = X @ X.T + tau * np.eye(dataset.n)
    fac, _ = spd_factor(gram, "X X' + tau I")
    direct = cho_solve(fac, y)
    ctx = GramContext.from_dataset(dataset, model, tau=tau)
    via_identity = inverse_gram_row(ctx, model.eta_norm_sq)
    return float(np.max(np.abs(direct - via_identity)))


def duality_certificate(dataset: Dataset, labels: str = "clean") -> np.ndarray:
    """Complementary-slackness certificate c_i = y_i e_i'(X X')^-1 y.

    All entries positive means every margin constraint of the
    hard-margin SVM is active, hence the SVM solution equals the
    min-norm interpolator of the same labels.
    """
    v = dataset.labels(labels)
    gram = dataset.X @ dataset.X.T
    fac, _ = spd_factor(gram, "X X'")
    return v * cho_solve(fac, v)


def certificate_all_positive(cert: np.ndarray) -> bool:
    """Positivity up to the 1e-10 * ||c||_inf floating-point floor."""
    return bool(np.all(cert > CERT_POSITIVITY_REL_TOL * np.max(np.abs(cert))))


def linear_separability(dataset: Dataset) -> tuple[bool, float]:
    """Full row rank of X (hence interpolability and separability).

    Returns (separable, smallest singular value of X).
    """
    svals = np.linalg.svd(dataset.X, compute_uv=False)
    smin = float(svals[-1])
    return smin > RANK_REL_TOL * float(svals[0]), smin


def lemma5_ratios(dataset: Dataset, model: GmmModel, tau: float = 0.0) -> dict:
    """Scale-free versions of the primitive forms for constant estimation.

    Ratios involving sigma are None when the model carries no signal in
    the direction of Sigma.
    """
    ctx = GramContext.from_dataset(dataset, model, tau=tau)
    forms = primitive_forms(ctx, model.eta_norm_sq)
    n = dataset.n
    scale = tau + model.spectrum.l1
    sigma = math.sqrt(sigma_signal(model))
    out = {"s_ratio": forms.s * scale / n}
    if sigma > 0:
        out["t_ratio"] = forms.t * scale / (n * sigma**2)
        out["h_ratio"] = forms.h * scale / (n * sigma)
        out["d_ratio"] = float(ctx.d @ ctx.d) / (n * sigma**2)
        out["f_ratio"] = (
            float(np.max(np.abs(forms.f))) * model.spectrum.l1 / (math.sqrt(math.log(2 * n)) * sigma)
        )
    else:
        out.update({"t_ratio": None, "h_ratio": None, "d_ratio": None, "f_ratio": None})
    return out
