"""Shared helpers: hand-built instances and independent oracles.

The oracles here deliberately avoid the library's solve paths: dense
matrix inversion for the quadratic forms, and exhaustive active-set
enumeration for the hard-margin SVM dual.
"""

import itertools

import numpy as np
import pytest

from gmmlab.model import Dataset, GmmModel, Spectrum


def make_model(beta, lam, prior=0.5, flip=0.0, basis=None):
    return GmmModel(
        beta=np.asarray(beta, dtype=float),
        spectrum=Spectrum(np.asarray(lam, dtype=float)),
        prior_plus=prior,
        flip_prob=flip,
        basis=basis,
    )


def make_dataset(X, y, model=None, y_c=None):
    """Dataset from explicit X and labels; noise derived when a model is given."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    y_c = y.copy() if y_c is None else np.asarray(y_c, dtype=float)
    noise = None
    if model is not None:
        noise = X - y[:, None] * model.eta
    return Dataset(X=X, y=y, y_c=y_c, seed=0, noise=noise)


@pytest.fixture
def hand_instance():
    """n=1, p=2, Q=(1,1), eta=(1,0), y=(1): all five forms equal 1/2, D=5/2."""
    model = make_model([1.0, 0.0], [1.0, 1.0])
    Q = np.array([[1.0, 1.0]])
    X = np.array([[2.0, 1.0]])  # y eta' + Q
    y = np.array([1.0])
    ds = Dataset(X=X, y=y, y_c=y.copy(), seed=0, noise=Q)
    return model, ds


def forms_oracle(Q, y, eta, tau):
    """Primitive quadratic forms via dense inversion (independent path)."""
    n = Q.shape[0]
    U0_inv = np.linalg.inv(Q @ Q.T)
    Ut_inv = np.linalg.inv(Q @ Q.T + tau * np.eye(n))
    d = Q @ eta
    return {
        "s": y @ Ut_inv @ y,
        "t": d @ Ut_inv @ d,
        "h": y @ Ut_inv @ d,
        "g": U0_inv @ y,
        "f": U0_inv @ d,
    }


def svm_oracle(X, y):
    """Exact no-bias hard-margin SVM by active-set enumeration (n <= ~12).

    For every candidate support set S solve G_SS a = 1; the optimum is
    the feasible candidate (a >= 0, all margins >= 1) with the smallest
    dual objective value 0.5 a' G_SS a.
    """
    n = X.shape[0]
    G = (y[:, None] * X) @ (y[:, None] * X).T
    best = None
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            idx = list(subset)
            try:
                a = np.linalg.solve(G[np.ix_(idx, idx)], np.ones(size))
            except np.linalg.LinAlgError:
                continue
            if np.any(a < -1e-12):
                continue
            alpha = np.zeros(n)
            alpha[idx] = a
            margins = G @ alpha
            if np.all(margins >= 1 - 1e-9):
                obj = 0.5 * alpha @ margins
                if best is None or obj < best[0] - 1e-12:
                    best = (obj, alpha)
    if best is None:
        raise AssertionError("oracle found no feasible active set (non-separable?)")
    alpha = best[1]
    w = X.T @ (alpha * y)
    return alpha, w
