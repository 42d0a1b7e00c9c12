import numpy as np
import pytest

from nftsignal.model import (
    MlpConfig,
    ModelError,
    SplitSpec,
    _init_model,
    align_features_to_target,
    backward,
    binarize,
    classification_scores,
    direction_penalties,
    evaluate,
    forward,
    model_from_json,
    model_to_json,
    penalized_mae_loss,
    predict,
    split_positions,
    train,
)
from nftsignal.rng import SplitMix64
from nftsignal.textfeat import FeatureMatrix
from nftsignal.timeseries import NormalizedTarget, to_binary_label


def _matrix(values, start_index=0):
    values = np.asarray(values, dtype=float)
    vocab = tuple(f"w{j}" for j in range(values.shape[1]))
    return FeatureMatrix(vocab=vocab, values=values, frame_indices=tuple(range(start_index, start_index + values.shape[0])))


def _target(ys, start_index=0, window=1):
    return NormalizedTarget(window, tuple((start_index + i, float(y)) for i, y in enumerate(ys)))


class TestForward:
    def test_zero_params_zero_output(self):
        model = _init_model(4, MlpConfig(hidden_units=(3, 2), seed=0), 0)
        for w in model.weights:
            w[:] = 0.0
        assert forward(model, np.zeros(4)) == 0.0
        assert forward(model, np.ones(4)) == 0.0

    def test_nan_rejected(self):
        model = _init_model(3, MlpConfig(hidden_units=(2,), seed=0), 0)
        with pytest.raises(ModelError, match="finite"):
            forward(model, np.array([1.0, np.nan, 0.0]))

    def test_shape_mismatch_rejected(self):
        model = _init_model(3, MlpConfig(hidden_units=(2,), seed=0), 0)
        with pytest.raises(ModelError, match="expected shape"):
            forward(model, np.ones(5))

    def test_single_unit_network_learns_identity(self):
        # closed-form oracle: y = x on positive inputs is exactly representable
        # by one rectifier unit with unit weights and zero bias; seed 2 starts
        # with both weights positive so the unit is live
        rng = SplitMix64(17)
        x = (0.5 + rng.uniforms(40))[:, None]
        y = x[:, 0].copy()
        matrix = _matrix(x)
        target = _target(y)
        cfg = MlpConfig(hidden_units=(1,), seed=2, learning_rate=0.05, epochs=3000, runs=1)
        model, _ = train(matrix, target, cfg, SplitSpec(train_fraction=0.8))
        preds = predict(model, x)
        assert float(np.mean(np.abs(preds - y))) < 0.03


class TestPenalizedMaeLoss:
    def test_wrong_direction_doubles(self):
        # hand evaluation: truth 1.2, prediction 0.9 -> delta 2, loss 2*0.3
        assert penalized_mae_loss([1.2], [0.9]) == pytest.approx(0.6, abs=1e-15)

    def test_zero_residual(self):
        assert penalized_mae_loss([1.2, 0.8], [1.2, 0.8]) == 0.0

    def test_correct_directions_plain_mae(self):
        # hand evaluation: both on the right side -> (0.1 + 0.1) / 2
        assert penalized_mae_loss([1.2, 0.8], [1.1, 0.9]) == pytest.approx(0.1, abs=1e-15)

    def test_boundary_value_counts_as_wrong(self):
        # exactly 1 is neither > 1 nor < 1, so the penalty applies
        assert direction_penalties([1.0], [1.2]).tolist() == [2.0]
        assert direction_penalties([1.2], [1.0]).tolist() == [2.0]

    def test_all_delta_one_equals_plain_mae(self):
        rng = SplitMix64(5)
        truth = 1.1 + rng.uniforms(20)
        preds = 1.05 + rng.uniforms(20)
        expected = float(np.mean(np.abs(truth - preds)))
        assert penalized_mae_loss(truth, preds) == pytest.approx(expected, rel=1e-15)

    def test_all_delta_two_equals_double_mae(self):
        rng = SplitMix64(6)
        truth = 1.1 + rng.uniforms(20)   # all above 1
        preds = 0.9 - 0.5 * rng.uniforms(20)  # all below 1
        expected = 2.0 * float(np.mean(np.abs(truth - preds)))
        assert penalized_mae_loss(truth, preds) == pytest.approx(expected, rel=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(ModelError):
            penalized_mae_loss([1.0, 2.0], [1.0])


def _flatten(model):
    return np.concatenate([w.ravel() for w in model.weights] + [b.ravel() for b in model.biases])


def _unflatten_into(model, flat):
    pos = 0
    for w in model.weights:
        w[:] = flat[pos : pos + w.size].reshape(w.shape)
        pos += w.size
    for b in model.biases:
        b[:] = flat[pos : pos + b.size]
        pos += b.size


def _loss_at(model, flat, x, y):
    saved = _flatten(model)
    _unflatten_into(model, flat)
    loss = penalized_mae_loss(y, predict(model, x))
    _unflatten_into(model, saved)
    return loss


def _kink_margins(model, x, y):
    """Distance of the batch from the nondifferentiable sets: residual kinks,
    the penalty boundary at prediction 1, and rectifier boundaries."""
    preds, activations = [], [x]
    a = x
    margins = []
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w + b
        if i != last:
            margins.append(float(np.min(np.abs(z))))
            a = np.maximum(z, 0.0)
        else:
            a = z
    preds = a[:, 0]
    margins.append(float(np.min(np.abs(preds - y))))
    margins.append(float(np.min(np.abs(preds - 1.0))))
    return min(margins)


class TestBackward:
    def test_gradients_match_central_differences(self):
        # oracle: central finite differences on 100 random parameter points
        # away from kinks (residual, penalty-boundary and rectifier margins)
        checked = 0
        attempts = 0
        seed = 0
        rng = SplitMix64(99)
        while checked < 100 and attempts < 400:
            attempts += 1
            seed += 1
            model = _init_model(3, MlpConfig(hidden_units=(4, 3), seed=seed), seed)
            x = rng.uniforms(15).reshape(5, 3) * 2.0
            y = 0.7 + 0.6 * rng.uniforms(5)
            if _kink_margins(model, x, y) < 1e-3:
                continue
            grad_w, grad_b = backward(model, x, y)
            analytic = np.concatenate([g.ravel() for g in grad_w] + [g.ravel() for g in grad_b])
            flat = _flatten(model)
            h = 1e-6
            # check a deterministic subset of coordinates per point
            coords = [int(rng.randint_below(flat.size)) for _ in range(6)]
            ok = True
            for c in coords:
                fp = flat.copy(); fp[c] += h
                fm = flat.copy(); fm[c] -= h
                numeric = (_loss_at(model, fp, x, y) - _loss_at(model, fm, x, y)) / (2 * h)
                denom = max(abs(numeric), abs(analytic[c]), 1e-8)
                if abs(numeric - analytic[c]) / denom >= 1e-4:
                    ok = False
                    break
            assert ok, f"gradient mismatch at seed {seed} coord {c}: {numeric} vs {analytic[c]}"
            checked += 1
        assert checked == 100

    def test_zero_residual_zero_gradients(self):
        model = _init_model(2, MlpConfig(hidden_units=(3,), seed=1), 1)
        x = np.array([[0.5, 1.0], [1.0, 0.5]])
        y = predict(model, x)  # targets equal predictions exactly
        grad_w, grad_b = backward(model, x, y)
        assert all(np.all(g == 0.0) for g in grad_w)
        assert all(np.all(g == 0.0) for g in grad_b)

    def test_doubling_penalty_doubles_gradient(self):
        # the dL/dprediction term is penalty * sign / m, independent of the
        # residual magnitude, so flipping truth across 1 doubles it exactly
        model = _init_model(2, MlpConfig(hidden_units=(3,), seed=2), 2)
        x = np.array([[0.8, 1.3]])
        pred = predict(model, x)[0]
        assert abs(pred) > 1e-6
        y_same = np.array([pred - 0.2]) if pred - 0.2 > 1.0 else None
        # construct truths on the same side vs opposite side of 1
        y1 = np.array([pred - 0.1])  # same sign residual
        y2 = np.array([pred - 0.1])
        # force same-side (penalty 1) and wrong-side (penalty 2) cases
        if pred > 1.0:
            y_pen1 = np.array([max(1.0 + 1e-6, pred - 0.1)])
            y_pen2 = np.array([0.9])
        else:
            y_pen1 = np.array([min(1.0 - 1e-6, pred - 0.1)])
            y_pen2 = np.array([1.1])
        g1_w, g1_b = backward(model, x, y_pen1)
        g2_w, g2_b = backward(model, x, y_pen2)
        sign1 = np.sign(pred - y_pen1[0])
        sign2 = np.sign(pred - y_pen2[0])
        for a, b in zip(g1_w, g2_w):
            assert np.allclose(2.0 * a * sign1, b * sign2, rtol=1e-12, atol=0.0)


class TestTrainEvaluate:
    def test_chronological_split(self):
        train_pos, test_pos = split_positions(10, SplitSpec(train_fraction=0.8))
        assert train_pos == list(range(8))
        assert test_pos == [8, 9]
        assert max(train_pos) < min(test_pos)

    def test_split_sizes_match_floor_rule(self):
        for n, expect_train in ((188, 150), (198, 158), (66, 52), (262, 209)):
            train_pos, test_pos = split_positions(n, SplitSpec())
            assert len(train_pos) == expect_train
            assert len(train_pos) + len(test_pos) == n

    def test_reproducible_bitwise(self):
        rng = SplitMix64(42)
        x = rng.uniforms(200).reshape(50, 4)
        y = 0.8 + 0.4 * rng.uniforms(50)
        cfg = MlpConfig(hidden_units=(8,), seed=5, learning_rate=0.01, epochs=50, runs=2)
        m1 = train(_matrix(x), _target(y), cfg, SplitSpec())[1]
        m2 = train(_matrix(x), _target(y), cfg, SplitSpec())[1]
        assert m1 == m2

    def test_single_run_zero_std(self):
        rng = SplitMix64(43)
        x = rng.uniforms(120).reshape(30, 4)
        y = 0.8 + 0.4 * rng.uniforms(30)
        cfg = MlpConfig(hidden_units=(4,), seed=5, learning_rate=0.01, epochs=20, runs=1)
        _, metrics = train(_matrix(x), _target(y), cfg, SplitSpec())
        assert metrics.mae.std == 0.0
        assert metrics.accuracy.std == 0.0
        assert metrics.runs == 1

    def test_constant_target_trains_to_small_mae(self):
        # the always-1 predictor has zero error; training should get close
        rng = SplitMix64(44)
        x = rng.uniforms(160).reshape(40, 4)
        y = np.ones(40)
        cfg = MlpConfig(hidden_units=(4,), seed=5, learning_rate=0.01, epochs=1000, runs=1)
        _, metrics = train(_matrix(x), _target(y), cfg, SplitSpec())
        assert metrics.mae.mean <= 0.05

    def test_too_few_test_rows(self):
        x = np.ones((5, 2))
        y = np.ones(5)
        with pytest.raises(ModelError, match="test split"):
            train(_matrix(x), _target(y), MlpConfig(hidden_units=(2,), seed=0), SplitSpec())

    def test_misaligned_target_raises(self):
        x = np.ones((4, 2))
        target = NormalizedTarget(1, ((99, 1.0),))
        with pytest.raises(ModelError, match="no feature row"):
            align_features_to_target(_matrix(x), target)

    def test_evaluate_all_correct(self):
        model = _init_model(1, MlpConfig(hidden_units=(1,), seed=0), 0)
        # identity-ish model: weights produce prediction = input
        model.weights[0][:] = 1.0
        model.weights[1][:] = 1.0
        x = np.array([[1.2], [0.8], [1.3]])
        y = [1.2, 0.8, 1.3]
        metrics = evaluate(model, _matrix(x), _target(y))
        assert metrics.accuracy.mean == 1.0
        assert metrics.mae.mean == pytest.approx(0.0, abs=1e-12)

    def test_hand_confusion_matrix(self):
        # binarized truth [1,0,1,0] vs predictions [1,0,0,0]:
        # accuracy 3/4; F1 = 2TP/(2TP+FP+FN) = 2/(2+0+1) = 2/3
        model = _init_model(1, MlpConfig(hidden_units=(1,), seed=0), 0)
        model.weights[0][:] = 1.0
        model.weights[1][:] = 1.0
        x = np.array([[1.1], [0.9], [0.8], [0.9]])
        y = [1.2, 0.8, 1.3, 0.7]
        metrics = evaluate(model, _matrix(x), _target(y))
        assert metrics.accuracy.mean == pytest.approx(0.75)
        assert metrics.f1.mean == pytest.approx(2.0 / 3.0)

    def test_binarize_consistent_with_to_binary_label(self):
        ys = [1.05, 1.0, 0.73, 2.4]
        target = NormalizedTarget(1, tuple((i, y) for i, y in enumerate(ys)))
        assert binarize(ys).tolist() == to_binary_label(target)

    def test_coin_flip_accuracy_near_half(self):
        # binomial oracle: two independent fair label streams agree ~50%
        rng = SplitMix64(2025)
        n = 10_000
        truth = (rng.uniforms(n) > 0.5).astype(int)
        preds = (rng.uniforms(n) > 0.5).astype(int)
        acc, _ = classification_scores(truth, preds)
        assert abs(acc - 0.5) < 0.02

    def test_empty_evaluation_raises(self):
        model = _init_model(2, MlpConfig(hidden_units=(2,), seed=0), 0)
        with pytest.raises(ModelError):
            evaluate(model, _matrix(np.ones((0, 2))), NormalizedTarget(1, ()))

    def test_model_json_roundtrip(self):
        rng = SplitMix64(45)
        x = rng.uniforms(80).reshape(20, 4)
        y = 0.9 + 0.2 * rng.uniforms(20)
        cfg = MlpConfig(hidden_units=(3, 2), seed=5, learning_rate=0.01, epochs=10, runs=1)
        model, _ = train(_matrix(x), _target(y), cfg, SplitSpec())
        restored = model_from_json(model_to_json(model))
        assert all(np.array_equal(a, b) for a, b in zip(model.weights, restored.weights))
        assert all(np.array_equal(a, b) for a, b in zip(model.biases, restored.biases))
        assert restored.config == model.config
        assert np.array_equal(predict(restored, x), predict(model, x))
