import numpy as np
import pytest

from avsafety.dataset import Label, stratified_split
from avsafety.errors import ModelError
from avsafety.metrics import accuracy, confusion
from avsafety.models import TrainedModel, canonical_bytes, fit, gini_impurity
from avsafety.models.boosting import margins_per_round
from avsafety.models.forest import tree_votes
from tests.conftest import make_dataset


def leaf_tree(n_inc, n_ser):
    return {
        "feature": np.array([-1]),
        "threshold": np.array([0.0]),
        "left": np.array([-1]),
        "right": np.array([-1]),
        "count_incident": np.array([n_inc]),
        "count_serious": np.array([n_ser]),
    }


def forest_model(trees, n_features=4):
    return TrainedModel(
        family="rfc",
        hyperparams={"n_trees": len(trees), "max_depth": 0, "bootstrap": 1},
        params={"trees": trees, "n_features": n_features},
        schema_version="test",
        trained_on=0,
        seed=0,
    )


class TestGiniImpurity:
    def test_pure_node(self):
        assert gini_impurity((7, 0)) == 0.0
        assert gini_impurity((0, 3)) == 0.0

    def test_balanced(self):
        assert gini_impurity((5, 5)) == 0.5

    def test_three_one(self):
        assert gini_impurity((3, 1)) == pytest.approx(0.375, abs=1e-15)

    def test_empty_rejected(self):
        with pytest.raises(ModelError):
            gini_impurity((0, 0))


class TestForest:
    def test_stump_predicts_majority(self, synth475):
        model = fit("rfc", {"n_trees": 1, "max_depth": 0}, synth475, seed=4)
        grid = np.eye(61)
        for row in grid:
            assert model.predict(row) is Label.INCIDENT  # majority class

    def test_three_tree_vote(self):
        model = forest_model(
            [leaf_tree(0, 5), leaf_tree(1, 9), leaf_tree(6, 2)]
        )
        x = np.array([0.0, 0.0, 0.0, 0.0])
        assert model.predict_score(x) == pytest.approx(2 / 3)
        assert model.predict(x) is Label.SERIOUS_INCIDENT

    def test_leaf_count_tie_votes_incident(self):
        model = forest_model([leaf_tree(3, 3)])
        assert model.predict_score(np.zeros(4)) == 0.0
        assert model.predict(np.zeros(4)) is Label.INCIDENT

    def test_single_tree_without_bootstrap_equals_its_tree(self, synth475):
        pair = stratified_split(synth475, 0.8, 6)
        model = fit(
            "rfc",
            {"n_trees": 1, "max_depth": 8, "bootstrap": 0},
            pair.train,
            seed=13,
        )
        tree = model.params["trees"][0]
        queries = np.vstack([pair.test.X, np.eye(61)])
        votes = tree_votes(tree, queries)
        scores = model.predict_scores(queries)
        assert np.array_equal(votes, scores)

    def test_fit_deterministic(self, synth475):
        pair = stratified_split(synth475, 0.8, 8)
        hp = {"n_trees": 20, "max_depth": 8}
        a = fit("rfc", hp, pair.train, seed=5)
        b = fit("rfc", hp, pair.train, seed=5)
        assert canonical_bytes(a) == canonical_bytes(b)
        c = fit("rfc", hp, pair.train, seed=6)
        assert canonical_bytes(a) != canonical_bytes(c)

    def test_degenerate_data_falls_back_to_majority(self):
        ds = make_dataset(np.zeros((10, 5)), [0] * 7 + [1] * 3)
        model = fit("rfc", {"n_trees": 5, "max_depth": 8}, ds, seed=0)
        assert model.predict(np.zeros(5)) is Label.INCIDENT
        assert model.predict(np.ones(5)) is Label.INCIDENT

    def test_single_class_rejected(self):
        ds = make_dataset(np.eye(4), [0, 0, 0, 0])
        with pytest.raises(ModelError, match="both classes"):
            fit("rfc", {}, ds, seed=0)

    def test_unknown_hyperparam_rejected(self, synth475):
        with pytest.raises(ModelError, match="n_estimators"):
            fit("rfc", {"n_estimators": 10}, synth475, seed=0)

    def test_noise_free_rule_is_learnable(self, synth_noise0):
        pair = stratified_split(synth_noise0, 0.8, 11)
        model = fit("rfc", {"n_trees": 200, "max_depth": 16}, pair.train, seed=5)
        truth = [r.label for r in pair.test.records]
        acc = accuracy(confusion(truth, model.predict_labels(pair.test.X)))
        assert acc >= 0.95


class TestBoosting:
    def test_training_accuracy_on_planted_rule(self, synth_noise0):
        hp = {"rounds": 50, "learning_rate": 0.1, "max_depth": 3, "reg_lambda": 1.0}
        model = fit("xgb", hp, synth_noise0, seed=5)
        truth = [r.label for r in synth_noise0.records]
        acc = accuracy(confusion(truth, model.predict_labels(synth_noise0.X)))
        assert acc >= 0.95

    @pytest.mark.parametrize("lr", [0.1, 0.3])
    def test_monotone_training_loss(self, synth475, lr):
        pair = stratified_split(synth475, 0.8, 1)
        hp = {"rounds": 100, "learning_rate": lr, "max_depth": 3, "reg_lambda": 1.0}
        model = fit("xgb", hp, pair.train, seed=0)
        margins = margins_per_round(model.params, pair.train.X)
        y = pair.train.y.astype(float)
        signed = np.where(y == 1.0, margins, -margins)
        losses = np.mean(np.logaddexp(0.0, -signed), axis=1)
        start = np.mean(np.logaddexp(0.0, -np.where(y == 1.0, 0.0, 0.0)))
        full = np.concatenate([[start], losses])
        assert np.all(np.diff(full) <= 1e-9)

    def test_fit_deterministic(self, synth475):
        pair = stratified_split(synth475, 0.8, 2)
        hp = {"rounds": 20, "learning_rate": 0.3, "max_depth": 2, "reg_lambda": 1.0}
        a = fit("xgb", hp, pair.train, seed=1)
        b = fit("xgb", hp, pair.train, seed=2)  # xgb has no random state
        assert canonical_bytes(a)[:200]  # well-formed
        assert np.array_equal(
            a.predict_scores(pair.test.X), b.predict_scores(pair.test.X)
        )

    def test_degenerate_data_majority(self):
        ds = make_dataset(np.ones((9, 4)), [0] * 6 + [1] * 3)
        hp = {"rounds": 10, "learning_rate": 0.3, "max_depth": 2, "reg_lambda": 1.0}
        model = fit("xgb", hp, ds, seed=0)
        assert model.predict(np.ones(4)) is Label.INCIDENT

    def test_depth_zero_boosts_prior_only(self):
        ds = make_dataset(np.eye(8), [0] * 6 + [1] * 2)
        hp = {"rounds": 5, "learning_rate": 0.1, "max_depth": 0, "reg_lambda": 1.0}
        model = fit("xgb", hp, ds, seed=0)
        scores = model.predict_scores(np.eye(8))
        assert np.allclose(scores, scores[0])
        assert scores[0] < 0.5
