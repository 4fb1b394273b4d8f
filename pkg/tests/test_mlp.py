"""Network forward/backward checks against independent numerical oracles."""

import numpy as np
import pytest

from triserve.targetnet import Mlp, Normalizer
from triserve.targetnet.mlp import OUTPUT_RANGES, identity_normalizer, sigmoid


def mse_loss(net, x, y):
    d = net.forward(x) - y
    return float(np.mean(d * d))


def numerical_gradients(net, x, y, eps=1e-6):
    """Central finite differences of the MSE loss for every parameter."""
    grads = []
    for k in range(len(net.weights)):
        pair = []
        for arr in (net.weights[k], net.biases[k]):
            g = np.zeros_like(arr)
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                ix = it.multi_index
                old = arr[ix]
                arr[ix] = old + eps
                up = mse_loss(net, x, y)
                arr[ix] = old - eps
                down = mse_loss(net, x, y)
                arr[ix] = old
                g[ix] = (up - down) / (2.0 * eps)
            pair.append(g)
        grads.append(tuple(pair))
    return grads


class TestGradients:
    @pytest.mark.parametrize("sizes", [[3, 7, 5, 2], [3, 16, 3], [2, 4, 4, 4, 1]])
    def test_backward_matches_finite_differences(self, sizes):
        # every layer, every parameter, relative error under 1e-4
        rng = np.random.default_rng(3)
        net = Mlp.create(sizes, rng)
        x = rng.normal(size=(10, sizes[0]))
        y = rng.normal(size=(10, sizes[-1]))
        cache = []
        pred = net.forward(x, cache=cache)
        diff = pred - y
        analytic = net.backward(cache, 2.0 * diff / diff.size)
        numeric = numerical_gradients(net, x, y)
        for k, ((aw, ab), (nw, nb)) in enumerate(zip(analytic, numeric)):
            for a, n in ((aw, nw), (ab, nb)):
                denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), 1e-12)
                rel = np.abs(a - n) / denom
                assert rel.max() < 1e-4, f"layer {k}: rel err {rel.max():.2e}"

    def test_gradient_with_fixed_dropout_mask(self):
        # dropout is part of the forward graph, so its mask must be
        # differentiated through; replay the same mask for the FD probe
        rng = np.random.default_rng(11)
        net = Mlp.create([3, 8, 2], rng)
        x = rng.normal(size=(6, 3))
        y = rng.normal(size=(6, 2))
        keep = 0.7
        mask = (np.random.default_rng(5).random((6, 8)) < keep) / keep

        def masked_loss():
            h = sigmoid(x @ net.weights[0].T + net.biases[0]) * mask
            out = h @ net.weights[1].T + net.biases[1]
            d = out - y
            return float(np.mean(d * d))

        h = sigmoid(x @ net.weights[0].T + net.biases[0])
        cache = [(x, h, mask), (h * mask, None, None)]
        out = (h * mask) @ net.weights[1].T + net.biases[1]
        analytic = net.backward(cache, 2.0 * (out - y) / out.size)

        eps = 1e-6
        for k in range(2):
            for arr, a in ((net.weights[k], analytic[k][0]), (net.biases[k], analytic[k][1])):
                it = np.nditer(arr, flags=["multi_index"])
                for _ in it:
                    ix = it.multi_index
                    old = arr[ix]
                    arr[ix] = old + eps
                    up = masked_loss()
                    arr[ix] = old - eps
                    down = masked_loss()
                    arr[ix] = old
                    fd = (up - down) / (2.0 * eps)
                    denom = max(abs(fd), abs(a[ix]), 1e-12)
                    assert abs(fd - a[ix]) / denom < 1e-4

    def test_backward_rejects_wrong_cache(self):
        rng = np.random.default_rng(0)
        net = Mlp.create([2, 3, 1], rng)
        with pytest.raises(ValueError):
            net.backward([], np.zeros((1, 1)))


class TestForward:
    def test_sigmoid_saturates_without_overflow(self):
        z = np.array([-800.0, -30.0, 0.0, 30.0, 800.0])
        s = sigmoid(z)
        assert np.all(np.isfinite(s))
        assert s[0] == 0.0 or s[0] < 1e-300
        assert s[2] == 0.5
        assert s[-1] == 1.0

    def test_shapes_and_chaining_validated(self):
        rng = np.random.default_rng(1)
        net = Mlp.create([3, 4, 2], rng)
        assert net.layer_sizes == [3, 4, 2]
        out = net.forward(np.zeros((5, 3)))
        assert out.shape == (5, 2)
        with pytest.raises(ValueError):
            net.forward(np.zeros((5, 4)))
        with pytest.raises(ValueError):
            Mlp([np.zeros((4, 3)), np.zeros((2, 5))], [np.zeros(4), np.zeros(2)])

    def test_dropout_off_is_deterministic(self):
        rng = np.random.default_rng(2)
        net = Mlp.create([3, 32, 3], rng)
        x = rng.normal(size=(20, 3))
        assert np.array_equal(net.forward(x), net.forward(x))

    def test_dropout_zeroes_and_rescales(self):
        # inverted dropout keeps the expected activation unchanged
        rng = np.random.default_rng(4)
        w = [np.eye(8, 1), np.ones((1, 8))]
        b = [np.zeros(8), np.zeros(1)]
        net = Mlp(w, b)
        x = np.zeros((4000, 1))  # sigmoid(0) = 0.5 everywhere
        keep_expected = net.forward(x).mean()
        dropped = net.forward(x, dropout_rate=0.4, rng=rng).mean()
        assert abs(dropped - keep_expected) / keep_expected < 0.05
        with pytest.raises(ValueError):
            net.forward(x, dropout_rate=0.4)  # rng required

    def test_small_input_change_bounded_by_weight_norms(self):
        # |f(x+d) - f(x)| <= prod ||W||_2 / 4^(hidden layers) * |d|
        rng = np.random.default_rng(8)
        net = Mlp.create([3, 10, 6, 2], rng)
        lip = 1.0
        for w in net.weights:
            lip *= np.linalg.norm(w, 2)
        lip *= 0.25 ** (len(net.weights) - 1)
        x = rng.normal(size=(30, 3))
        delta = rng.normal(size=(30, 3))
        delta *= 1e-3 / np.linalg.norm(delta, axis=1, keepdims=True)
        gap = np.linalg.norm(net.forward(x + delta) - net.forward(x), axis=1)
        assert np.all(gap <= lip * 1e-3 + 1e-12)


class TestPredict:
    def test_zero_weights_predict_target_means(self):
        w = [np.zeros((4, 3)), np.zeros((3, 4))]
        b = [np.zeros(4), np.zeros(3)]
        out_norm = Normalizer(mean=np.array([2.0, 20.0, 40.0]), sd=np.array([1.0, 3.0, 2.0]))
        net = Mlp(w, b, output_norm=out_norm)
        got = net.predict(np.array([0.5, 0.1, 0.02]))
        assert np.allclose(got, [2.0, 20.0, 40.0])

    def test_outputs_clamped_to_control_ranges(self):
        # huge positive weights drive the raw output far out of range
        w = [np.full((4, 3), 5.0), np.full((3, 4), 1e6)]
        b = [np.zeros(4), np.zeros(3)]
        net = Mlp(w, b)
        got = net.predict(np.array([1.0, 1.0, 1.0]))
        for val, (lo, hi) in zip(got, OUTPUT_RANGES):
            assert lo <= val <= hi
        assert got[2] == 100.0

    def test_batch_and_single_agree(self):
        rng = np.random.default_rng(9)
        net = Mlp.create([3, 6, 3], rng)
        pts = rng.normal(size=(5, 3))
        batch = net.predict(pts)
        for i in range(5):
            # BLAS may round (1, n) and (m, n) products differently
            assert np.allclose(batch[i], net.predict(pts[i]), atol=1e-12)


class TestNormalizer:
    def test_round_trip(self):
        rng = np.random.default_rng(12)
        data = rng.normal(loc=3.0, scale=2.5, size=(50, 3))
        norm = Normalizer.fit(data)
        back = norm.denormalize(norm.normalize(data))
        assert np.allclose(back, data, atol=1e-12)
        z = norm.normalize(data)
        assert np.allclose(z.mean(axis=0), 0.0, atol=1e-12)
        assert np.allclose(z.std(axis=0), 1.0, atol=1e-9)

    def test_constant_column_gets_unit_sd(self):
        data = np.column_stack([np.arange(10.0), np.full(10, 7.0)])
        norm = Normalizer.fit(data)
        assert norm.sd[1] == 1.0
        assert np.all(norm.normalize(data)[:, 1] == 0.0)

    def test_identity_helper(self):
        norm = identity_normalizer(3)
        x = np.array([[1.0, 2.0, 3.0]])
        assert np.array_equal(norm.normalize(x), x)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Normalizer.fit(np.zeros((0, 3)))
