import numpy as np
import pytest

from gmmlab import estimators as est
from gmmlab.model import preset_model, sample_dataset
from gmmlab.quadforms import certificate_all_positive, duality_certificate

from conftest import make_dataset, make_model, svm_oracle


def random_instance(rng, n_max=10, gap=(2, 12), eta_scale=0.5):
    n = int(rng.integers(1, n_max + 1))
    p = n + int(rng.integers(*gap))
    lam = np.sort(rng.uniform(0.3, 2.0, size=p))[::-1]
    model = make_model(rng.standard_normal(p) * eta_scale, lam)
    return model, sample_dataset(model, n, seed=int(rng.integers(0, 2**62)))


class TestMinNormLs:
    def test_hand_solve(self):
        ds = make_dataset([[2.0, 1.0]], [1.0])
        clf = est.min_norm_ls(ds)
        assert np.allclose(clf.w, [0.4, 0.2])
        assert ds.X @ clf.w == pytest.approx(1.0)

    def test_orthonormal_rows(self):
        ds = make_dataset(np.eye(2), [1.0, -1.0])
        assert np.allclose(est.min_norm_ls(ds).w, [1.0, -1.0])

    def test_interpolates_corrupted_labels(self):
        model = make_model([0.5] * 8, [1.0] * 8, flip=0.4)
        ds = sample_dataset(model, 4, seed=21)
        assert np.any(ds.y_c != ds.y)
        clf = est.min_norm_ls(ds, labels="corrupted")
        assert np.max(np.abs(ds.X @ clf.w - ds.y_c)) <= 1e-8
        assert np.max(np.abs(ds.X @ clf.w - ds.y)) > 0.1

    def test_rank_deficient_errors(self):
        row = np.array([1.0, 2.0, 3.0])
        ds = make_dataset(np.vstack([row, row]), [1.0, -1.0])
        with pytest.raises(est.NotInterpolableError):
            est.min_norm_ls(ds)

    def test_row_space_membership(self):
        # w = X'a by construction: residual of projecting w on rows is zero.
        rng = np.random.default_rng(3)
        _, ds = random_instance(rng, n_max=6)
        w = est.min_norm_ls(ds).w
        proj, *_ = np.linalg.lstsq(ds.X.T, w, rcond=None)
        assert np.allclose(ds.X.T @ proj, w, atol=1e-10)


class TestRidge:
    def test_small_tau_matches_min_norm(self):
        ds = make_dataset([[2.0, 1.0]], [1.0])
        clf = est.ridge(ds, tau=1e-8)
        assert np.allclose(clf.w, [0.4, 0.2], atol=1e-8)

    def test_diagonal_solve(self):
        ds = make_dataset(np.eye(2), [1.0, -1.0])
        assert np.allclose(est.ridge(ds, tau=1.0).w, [0.5, -0.5])

    def test_large_tau_neumann_limit(self):
        rng = np.random.default_rng(8)
        _, ds = random_instance(rng, n_max=6)
        tau = 1e6
        w = est.ridge(ds, tau=tau).w
        w_limit = ds.X.T @ ds.y / tau
        assert np.linalg.norm(w - w_limit) <= 1e-4 * np.linalg.norm(w_limit)

    def test_norm_shrinks_with_tau(self):
        rng = np.random.default_rng(12)
        _, ds = random_instance(rng, n_max=8)
        norms = [np.linalg.norm(est.ridge(ds, tau=t).w) for t in (0.01, 0.1, 1.0, 10.0, 100.0)]
        assert all(a >= b for a, b in zip(norms, norms[1:]))

    def test_rejects_nonpositive_tau(self):
        ds = make_dataset([[1.0, 0.0]], [1.0])
        with pytest.raises(est.EstimatorError):
            est.ridge(ds, tau=0.0)


class TestAveraging:
    def test_hand_value(self):
        ds = make_dataset([[2.0, 1.0]], [1.0])
        assert np.allclose(est.averaging(ds).w, [2.0, 1.0])

    def test_sign_flip(self):
        rng = np.random.default_rng(4)
        _, ds = random_instance(rng)
        flipped = make_dataset(ds.X, -ds.y)
        assert np.allclose(est.averaging(flipped).w, -est.averaging(ds).w)

    def test_unbiased_for_mean(self):
        model = make_model([0.8, -0.3, 0.2], [2.0, 1.0, 0.5])
        rng = np.random.default_rng(44)
        n, trials = 10, 2000
        acc = np.zeros(3)
        for _ in range(trials):
            ds = sample_dataset(model, n, seed=int(rng.integers(0, 2**62)))
            acc += est.averaging(ds).w
        mean_w = acc / trials
        # var(w_j) = lambda_j / n per trial; 3 standard errors componentwise
        se = np.sqrt(model.spectrum.eigenvalues / n / trials)
        assert np.all(np.abs(mean_w - model.eta) <= 3 * se)


class TestHardMarginSvm:
    def test_single_point_closed_form(self):
        ds = make_dataset([[1.0, 0.0]], [1.0])
        sol = est.hard_margin_svm(ds)
        assert sol.alpha[0] == pytest.approx(1.0)
        assert np.allclose(sol.w, [1.0, 0.0])
        assert sol.min_margin == pytest.approx(1.0)

    def test_identity_two_points(self):
        ds = make_dataset(np.eye(2), [1.0, -1.0])
        sol = est.hard_margin_svm(ds)
        assert np.allclose(sol.w, [1.0, -1.0], atol=1e-8)
        assert sol.support_set.size == 2
        assert sol.min_margin == pytest.approx(1.0, abs=1e-8)

    def test_three_points_one_slack(self):
        # w = (1, 1) leaves the third point strictly behind the margin.
        X = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]])
        y = np.array([1.0, 1.0, 1.0])
        ds = make_dataset(X, y)
        sol = est.hard_margin_svm(ds)
        assert np.allclose(sol.w, [1.0, 1.0, 0.0], atol=1e-7)
        assert sorted(sol.support_set.tolist()) == [0, 1]
        assert est.support_vector_fraction(sol) == pytest.approx(2 / 3)

    @pytest.mark.parametrize("backend", est.solver_backends())
    def test_matches_enumeration_oracle(self, backend):
        rng = np.random.default_rng(202)
        for _ in range(25):
            n = int(rng.integers(1, 7))
            p = n + int(rng.integers(2, 8))
            X = rng.standard_normal((n, p))
            y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
            ds = make_dataset(X, y)
            _, w_oracle = svm_oracle(X, y)
            sol = est.hard_margin_svm(ds, backend=backend)
            assert np.allclose(sol.w, w_oracle, atol=1e-6 * (1 + np.linalg.norm(w_oracle)))

    def test_kkt_invariants(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            _, ds = random_instance(rng, n_max=12)
            sol = est.hard_margin_svm(ds)
            margins = ds.y * (ds.X @ sol.w)
            assert np.all(margins >= 1 - 2e-8)
            active = sol.alpha > sol.classifier.diagnostics["alpha_tol"]
            assert np.all(np.abs(margins[active] - 1.0) <= 1e-6)
            # representation w = sum alpha_i y_i x_i holds by construction
            assert np.allclose(ds.X.T @ (sol.alpha * ds.y), sol.w, rtol=1e-8)

    def test_strong_duality_gap(self):
        rng = np.random.default_rng(15)
        for _ in range(20):
            _, ds = random_instance(rng, n_max=10)
            sol = est.hard_margin_svm(ds)
            d = sol.classifier.diagnostics
            gap = abs(d["primal_objective"] - d["dual_objective"])
            assert gap <= 1e-6 * (1 + d["primal_objective"])
            assert gap <= 1e-8 * ds.n  # kkt_tol * n at the default tolerance

    def test_infeasible_detected(self):
        # Same point with both labels and a tiny norm: dual steps are huge,
        # so the blow-up guard fires rather than the sweep budget.
        X = np.array([[1e-6, 0.0], [1e-6, 0.0]])
        ds = make_dataset(X, [1.0, -1.0])
        with pytest.raises(est.SvmInfeasibleError):
            est.hard_margin_svm(ds)

    def test_sweep_budget_error(self):
        X = np.array([[1.0, 0.0], [1.0, 0.0]])
        ds = make_dataset(X, [1.0, -1.0])
        with pytest.raises(est.SvmConvergenceError):
            est.hard_margin_svm(ds, max_sweeps=50)

    @pytest.mark.skipif(len(est.solver_backends()) < 2, reason="extension not built")
    def test_backends_agree(self):
        rng = np.random.default_rng(88)
        for _ in range(10):
            _, ds = random_instance(rng, n_max=10)
            a = est.hard_margin_svm(ds, backend="cython")
            b = est.hard_margin_svm(ds, backend="fallback")
            assert np.allclose(a.alpha, b.alpha, atol=1e-10)
            assert np.allclose(a.w, b.w, atol=1e-10)


class TestSvmEqualsLs:
    def test_identity_instance(self):
        ds = make_dataset(np.eye(2), [1.0, -1.0])
        res = est.svm_equals_ls(ds)
        assert res["equal"]
        assert res["rel_distance"] <= 1e-8
        assert res["certificate_positive"]

    def test_certificate_soundness_random(self):
        rng = np.random.default_rng(31)
        checked = 0
        for _ in range(100):
            _, ds = random_instance(rng, n_max=8, eta_scale=0.3)
            cert = duality_certificate(ds)
            if not certificate_all_positive(cert):
                continue
            checked += 1
            res = est.svm_equals_ls(ds)
            assert res["equal"], f"rel distance {res['rel_distance']:.2e}"
        assert checked >= 30

    def test_fig1_regime_equivalence_rate(self):
        # Deep-interpolation corner of the support-vector experiment.
        model, _ = preset_model("fig1", eta=0.1)
        rng = np.random.default_rng(64)
        hits = 0
        trials = 40
        for _ in range(trials):
            ds = sample_dataset(model, 25, seed=int(rng.integers(0, 2**62)))
            if est.svm_equals_ls(ds)["equal"]:
                hits += 1
        assert hits / trials >= 0.95


class TestSerialization:
    def test_classifier_json(self):
        ds = make_dataset([[2.0, 1.0]], [1.0])
        clf = est.ridge(ds, tau=2.0)
        import json

        doc = json.loads(clf.to_json())
        assert doc["kind"] == "ridge"
        assert doc["tau"] == 2.0
        assert len(doc["w"]) == 2
