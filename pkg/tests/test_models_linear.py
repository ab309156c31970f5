import math

import numpy as np
import pytest

from avsafety.dataset import Label
from avsafety.errors import ModelError
from avsafety.metrics import accuracy, confusion
from avsafety.models import TrainedModel, fit, logistic_loss_and_gradient
from avsafety.models.linear import mean_hinge_loss
from tests.conftest import make_dataset


@pytest.fixture()
def toy_separable():
    vectors = [
        [1.0, 0.0],
        [0.9, 0.1],
        [0.0, 1.0],
        [0.1, 0.9],
    ]
    return make_dataset(vectors, [0, 0, 1, 1])


def linear_model(family, weights):
    return TrainedModel(
        family=family,
        hyperparams={},
        params={"weights": np.asarray(weights, float), "n_features": len(weights) - 1},
        schema_version="test",
        trained_on=0,
        seed=0,
    )


class TestLogisticLoss:
    def test_zero_weights_balanced_labels(self):
        ds = make_dataset(np.eye(4), [0, 0, 1, 1])
        loss, grad = logistic_loss_and_gradient(np.zeros(5), ds, l2=0.0)
        assert loss == pytest.approx(math.log(2), abs=1e-12)
        assert grad.shape == (5,)

    def test_gradient_matches_central_differences(self):
        rng = np.random.default_rng(2)
        for trial in range(20):
            n, d = 10, 61
            X = (rng.random((n, d)) < 0.3).astype(float)
            y = (rng.random(n) < 0.5).astype(int)
            ds = make_dataset(X, y)
            w = rng.normal(0, 1, d + 1)
            l2 = float(rng.choice([0.0, 0.01, 0.5]))
            _, grad = logistic_loss_and_gradient(w, ds, l2)
            h = 1e-5
            fd = np.empty_like(grad)
            for j in range(d + 1):
                wp, wm = w.copy(), w.copy()
                wp[j] += h
                wm[j] -= h
                lp, _ = logistic_loss_and_gradient(wp, ds, l2)
                lm, _ = logistic_loss_and_gradient(wm, ds, l2)
                fd[j] = (lp - lm) / (2 * h)
            scale = np.maximum(np.abs(fd), 1e-8)
            assert float(np.max(np.abs(grad - fd) / scale)) < 1e-4

    def test_intercept_not_regularized(self):
        ds = make_dataset(np.eye(4), [0, 0, 1, 1])
        w = np.zeros(5)
        w[-1] = 3.0
        loss_l2, _ = logistic_loss_and_gradient(w, ds, l2=100.0)
        loss_0, _ = logistic_loss_and_gradient(w, ds, l2=0.0)
        assert loss_l2 == loss_0

    def test_bad_weights(self):
        ds = make_dataset(np.eye(4), [0, 0, 1, 1])
        with pytest.raises(ModelError, match="shape"):
            logistic_loss_and_gradient(np.zeros(4), ds, 0.0)
        bad = np.zeros(5)
        bad[0] = np.inf
        with pytest.raises(ModelError, match="finite"):
            logistic_loss_and_gradient(bad, ds, 0.0)


class TestLogR:
    def test_separable_toy_reaches_perfect_training_accuracy(self, toy_separable):
        model = fit("logr", {"l2": 0.001}, toy_separable, seed=0)
        truth = [r.label for r in toy_separable.records]
        assert accuracy(confusion(truth, model.predict_labels(toy_separable.X))) == 1.0

    def test_zero_weight_vector_scores_half(self):
        model = linear_model("logr", np.zeros(62))
        assert model.predict_score(np.zeros(61)) == 0.5
        assert model.predict(np.zeros(61)) is Label.SERIOUS_INCIDENT  # >= 0.5 rule

    def test_strong_l2_shrinks_weights_toward_zero(self, toy_separable):
        strong = fit("logr", {"l2": 1e6}, toy_separable, seed=0)
        weak = fit("logr", {"l2": 0.001}, toy_separable, seed=0)
        assert np.max(np.abs(strong.params["weights"][:-1])) < 1e-3
        assert np.max(np.abs(weak.params["weights"][:-1])) > 0.1

    def test_deterministic(self, toy_separable):
        a = fit("logr", {"l2": 0.01}, toy_separable, seed=0)
        b = fit("logr", {"l2": 0.01}, toy_separable, seed=99)
        assert np.array_equal(a.params["weights"], b.params["weights"])

    def test_degenerate_data_majority(self):
        ds = make_dataset(np.ones((10, 3)), [0] * 7 + [1] * 3)
        model = fit("logr", {"l2": 0.01}, ds, seed=0)
        assert model.predict(np.ones(3)) is Label.INCIDENT


class TestSvm:
    def test_zero_hinge_loss_on_separable_toy(self, toy_separable):
        model = fit("svm", {"reg_lambda": 1e-4}, toy_separable, seed=3)
        assert mean_hinge_loss(model.params, toy_separable.X, toy_separable.y) <= 1e-3

    def test_separates_toy(self, toy_separable):
        model = fit("svm", {"reg_lambda": 1e-4}, toy_separable, seed=3)
        truth = [r.label for r in toy_separable.records]
        assert accuracy(confusion(truth, model.predict_labels(toy_separable.X))) == 1.0

    def test_deterministic_given_seed(self, toy_separable):
        a = fit("svm", {"reg_lambda": 1e-3}, toy_separable, seed=5)
        b = fit("svm", {"reg_lambda": 1e-3}, toy_separable, seed=5)
        c = fit("svm", {"reg_lambda": 1e-3}, toy_separable, seed=6)
        assert np.array_equal(a.params["weights"], b.params["weights"])
        assert not np.array_equal(a.params["weights"], c.params["weights"])

    def test_score_is_logistic_of_margin(self):
        w = np.zeros(4)
        w[0] = 2.0  # margin 2 for x with feature0=1
        model = linear_model("svm", w)
        x = np.array([1.0, 0.0, 0.0])
        assert model.predict_score(x) == pytest.approx(1 / (1 + math.exp(-2.0)))

    def test_bad_lambda(self, toy_separable):
        with pytest.raises(ModelError, match="reg_lambda"):
            fit("svm", {"reg_lambda": 0.0}, toy_separable, seed=0)
