"""Tests for the RMSE cost and SPSA-with-momentum training loop."""

import numpy as np
import pytest

import gensel.optimizer as optimizer
from gensel.optimizer import SpsaConfig, TrialRecord, rmse_cost, spsa_step, train
from gensel.pauli import PauliString
from gensel.simulator import CircuitModel, run_model

P = PauliString.from_label


def _toy_model():
    return CircuitModel(1, (P("X"),), P("Z"))


class TestSpsaConfig:
    def test_defaults(self):
        cfg = SpsaConfig()
        assert cfg.learning_rate == 0.001
        assert cfg.momentum == 0.5
        assert cfg.perturbation == 0.01
        assert cfg.epochs == 200
        assert cfg.init_range == 0.1

    def test_validation(self):
        with pytest.raises(ValueError):
            SpsaConfig(learning_rate=-1.0)
        with pytest.raises(ValueError):
            SpsaConfig(momentum=1.0)
        with pytest.raises(ValueError):
            SpsaConfig(perturbation=0.0)
        with pytest.raises(ValueError):
            SpsaConfig(epochs=-1)
        SpsaConfig(learning_rate=0.0)  # degenerate but allowed


class TestRmseCost:
    def test_self_consistency_is_zero(self):
        model = _toy_model()
        theta = [0.37]
        dataset = [(x, run_model(model, theta, x)) for x in (0.0, 0.5, 1.2, 3.0)]
        assert rmse_cost(model, theta, dataset) < 1e-12

    def test_constant_zero_predictions_against_unit_labels(self):
        # encoding angle 0 plus a quarter rotation puts <Z> at exactly 0
        model = _toy_model()
        dataset = [(0.0, 1.0)] * 4
        assert rmse_cost(model, [np.pi / 4], dataset) == pytest.approx(1.0)

    def test_three_sample_hand_arithmetic(self):
        model = _toy_model()
        theta = [0.21]
        xs = (0.3, 1.1, 2.5)
        ys = (0.9, -0.2, 0.4)
        preds = [run_model(model, theta, x) for x in xs]
        expected = np.sqrt(sum((p - y) ** 2 for p, y in zip(preds, ys)) / 3.0)
        assert rmse_cost(model, theta, list(zip(xs, ys))) == pytest.approx(expected)

    def test_empty_dataset_rejected(self):
        with pytest.raises(ValueError, match="non-empty"):
            rmse_cost(_toy_model(), [0.1], [])


class TestSpsaStep:
    def test_zero_learning_rate_freezes_theta_but_not_momentum(self):
        cfg = SpsaConfig(learning_rate=0.0, momentum=0.5, perturbation=0.1)
        theta = np.array([0.3, -0.4])
        new_theta, new_momentum = spsa_step(
            theta, np.zeros(2), lambda t: float(t @ t), cfg, step_index=1
        )
        assert np.array_equal(new_theta, theta)
        assert np.any(new_momentum != 0.0)

    def test_exact_gradient_for_one_parameter_linear_cost(self):
        """With L = 1 the estimate recovers the slope exactly at every step."""
        v = 1.7
        cfg = SpsaConfig(learning_rate=0.25, momentum=0.0, perturbation=0.05, seed=3)
        for k in range(1, 21):
            theta = np.array([0.0])
            new_theta, momentum = spsa_step(
                theta, np.zeros(1), lambda t: v * float(t[0]), cfg, step_index=k
            )
            recovered = float(momentum[0])  # beta = 0, so momentum == estimate
            assert recovered == pytest.approx(v, abs=1e-12)
            assert new_theta[0] == pytest.approx(-cfg.learning_rate * v)

    def test_unbiased_on_linear_cost(self):
        """Mean of estimates over many direction draws recovers the slope."""
        v = np.array([0.8, -1.3, 0.4])
        cfg = SpsaConfig(learning_rate=1.0, momentum=0.0, perturbation=0.02, seed=11)
        estimates = []
        for k in range(1, 2001):
            _, momentum = spsa_step(
                np.zeros(3), np.zeros(3), lambda t: float(v @ t), cfg, step_index=k
            )
            estimates.append(momentum)
        mean = np.mean(estimates, axis=0)
        assert np.allclose(mean, v, atol=0.08)

    def test_two_cost_evaluations_per_step(self):
        calls = []

        def cost(theta):
            calls.append(theta.copy())
            return float(theta @ theta)

        spsa_step(np.zeros(4), np.zeros(4), cost, SpsaConfig(), step_index=5)
        assert len(calls) == 2

    def test_momentum_geometric_accumulation(self):
        """Constant estimate g0 drives momentum toward g0 / (1 - beta) = 2 g0."""
        v = 0.9
        cfg = SpsaConfig(learning_rate=0.0, momentum=0.5, perturbation=0.05, seed=2)
        momentum = np.zeros(1)
        values = []
        for k in range(1, 30):
            _, momentum = spsa_step(
                np.zeros(1), momentum, lambda t: v * float(t[0]), cfg, step_index=k
            )
            values.append(float(momentum[0]))
        # L = 1 makes every estimate exactly v, so the limit is exactly 2v
        assert values[-1] == pytest.approx(2 * v, rel=1e-6)
        gaps = [abs(val - 2 * v) for val in values]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))

    def test_quadratic_descent(self):
        """SPSA shrinks ||theta|| on a quadratic bowl across 10 seeds."""
        for seed in range(10):
            cfg = SpsaConfig(
                learning_rate=0.1, momentum=0.0, perturbation=0.01, seed=seed
            )
            theta = np.array([1.0, 1.0])
            momentum = np.zeros(2)
            for k in range(1, 101):
                theta, momentum = spsa_step(
                    theta, momentum, lambda t: float(t @ t), cfg, step_index=k
                )
            assert np.linalg.norm(theta) < 0.5

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="same shape"):
            spsa_step(np.zeros(2), np.zeros(3), lambda t: 0.0, SpsaConfig(), 1)


class TestTrain:
    def _dataset(self, rng, model, theta, m=12):
        xs = rng.uniform(0, 2 * np.pi, size=m)
        return [(float(x), run_model(model, theta, float(x))) for x in xs]

    def test_zero_epochs(self, rng):
        model = _toy_model()
        dataset = self._dataset(rng, model, [1.0])
        record = train(model, dataset, SpsaConfig(epochs=0, seed=4))
        assert record.rmse_trace.shape == (1,)
        assert record.normalized_trace.tolist() == [1.0]

    def test_deterministic(self, rng):
        model = _toy_model()
        dataset = self._dataset(rng, model, [1.0])
        cfg = SpsaConfig(epochs=25, seed=8)
        a = train(model, dataset, cfg)
        b = train(model, dataset, cfg)
        assert np.array_equal(a.rmse_trace, b.rmse_trace)

    def test_trace_shape_and_normalization(self, rng):
        model = _toy_model()
        dataset = self._dataset(rng, model, [1.0])
        record = train(model, dataset, SpsaConfig(epochs=30, seed=1), method="exact")
        assert record.method == "exact"
        assert record.rmse_trace.shape == (31,)
        assert record.normalized_trace[0] == 1.0
        assert np.all(record.rmse_trace >= 0)

    def test_cost_evaluation_budget(self, rng, monkeypatch):
        """3*epochs + 1 full-dataset evaluations: 2 per step + 1 per trace point."""
        counter = {"n": 0}
        real = optimizer.run_model_batch

        def counting(model, theta, xs):
            counter["n"] += 1
            return real(model, theta, xs)

        monkeypatch.setattr(optimizer, "run_model_batch", counting)
        model = _toy_model()
        dataset = self._dataset(rng, model, [1.0])
        train(model, dataset, SpsaConfig(epochs=17, seed=0))
        assert counter["n"] == 3 * 17 + 1

    def test_training_makes_progress(self, rng):
        """A faster-than-default flat gain drives the cost down on average."""
        model = CircuitModel(
            2, (P("XI"), P("YZ")), P("ZI")
        )
        teacher_theta = [0.9, -1.2]
        dataset = self._dataset(rng, model, teacher_theta, m=24)
        cfg = SpsaConfig(learning_rate=0.01, epochs=120, seed=5)
        record = train(model, dataset, cfg)
        assert record.normalized_trace[-1] < 0.9


class TestTrialRecord:
    def test_rejects_negative_trace(self):
        with pytest.raises(ValueError, match="non-negative"):
            TrialRecord("m", 0, (P("X"),), np.array([1.0, -0.1]))

    def test_rejects_zero_initial(self):
        with pytest.raises(ValueError, match="initial RMSE"):
            TrialRecord("m", 0, (P("X"),), np.array([0.0, 0.1]))
