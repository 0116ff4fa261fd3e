import numpy as np
import numpy.testing as npt
import pytest

from components.hyperparams import Hyperparams
from components.worker_state import WorkerState
from engine.publish import publish_layer_gradients
from network import kernels
from network.propagation import (backward, build_network, flatten_image, forward, layer_gradients,
                                 loss_and_output_delta)
from tests.factories import toy_config
from utils.errors import ArgumentError


@pytest.fixture
def net():
    weights, layout = build_network(toy_config(), np.float64)
    return weights, layout, WorkerState(layout)


def test_zero_gradient_leaves_weights(net):
    weights, layout, state = net
    before = weights.flat()
    for index in layout.weighted_layers:
        publish_layer_gradients(weights, state, index, Hyperparams(eta=0.5))
    npt.assert_array_equal(weights.flat(), before)


def test_unit_step(net):
    weights, layout, state = net
    layer = layout.weighted_layers[-1]
    weights.logical(layer)[...] = 0.0
    layer_gradients(state, layer)[...] = 1.0
    publish_layer_gradients(weights, state, layer, Hyperparams(eta=1.0))
    npt.assert_array_equal(weights.logical(layer), -1.0)
    assert not layer_gradients(state, layer).any()


def test_weight_decay(net):
    weights, layout, state = net
    layer = layout.weighted_layers[0]
    weights.logical(layer)[...] = 2.0
    publish_layer_gradients(weights, state, layer, Hyperparams(eta=0.5, lam=0.1))
    npt.assert_allclose(weights.logical(layer), 2.0 - 0.5 * 0.1 * 2.0)


def test_schedule_applies_epoch(net):
    weights, layout, state = net
    layer = layout.weighted_layers[-1]
    weights.logical(layer)[...] = 0.0
    layer_gradients(state, layer)[...] = 1.0
    publish_layer_gradients(weights, state, layer, Hyperparams(eta=1.0, eta_decay=0.5), epoch=2)
    npt.assert_array_equal(weights.logical(layer), -0.25)


def test_unweighted_layer_rejected(net):
    weights, _, state = net
    with pytest.raises(ArgumentError):
        publish_layer_gradients(weights, state, 2, Hyperparams())


@pytest.mark.parametrize("dtype", [np.float32, np.float64])
def test_per_layer_publish_equals_monolithic_update(dtype):
    config = toy_config()
    image = np.random.default_rng(3).random(64)
    label = 2
    eta, lam = 0.05, 0.01

    streamed, layout = build_network(config, dtype)
    state = WorkerState(layout)
    kernels.train_sample(layout.meta, streamed.arena, state.y, state.delta, state.grads,
                         state.argmax, flatten_image(layout, image), label, eta, lam)

    monolithic, _ = build_network(config, dtype)
    other = WorkerState(layout)
    output = forward(other, monolithic, image)
    _, delta = loss_and_output_delta(output, label)
    backward(other, monolithic, delta)
    for layer in layout.weighted_layers:
        view = monolithic.logical(layer)
        w = view.astype(np.float64)
        g = layer_gradients(other, layer).astype(np.float64)
        view[...] = (w - eta * (g + lam * w)).astype(dtype)

    assert streamed.flat().tobytes() == monolithic.flat().tobytes()
