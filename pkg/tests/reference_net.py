"""
Independent float64 oracles for the test suite.

`reference_forward` recomputes a forward pass with plain loop nests over
(maps, h, w) arrays; `sequential_sgd` trains image by image through the
public propagation API and applies one monolithic update per image.
"""
from typing import Dict, List

import numpy as np

from components.hyperparams import Hyperparams
from components.image_set import SampleSet
from components.layer_spec import Activation, LayerKind
from components.network_config import NetworkConfig
from components.weight_store import WeightStore
from components.worker_state import WorkerState
from network.propagation import backward, build_network, forward, layer_gradients, loss_and_output_delta


def _activate(values: np.ndarray, activation: Activation) -> np.ndarray:
    if activation == Activation.SIGMOID:
        return 1.0 / (1.0 + np.exp(-values))
    if activation == Activation.SOFTMAX:
        shifted = np.exp(values - values.max())
        return shifted / shifted.sum()
    return values


def reference_forward(config: NetworkConfig, weights: Dict[int, np.ndarray],
                      image: np.ndarray) -> List[np.ndarray]:
    """
    Activations of every layer as (maps, h, w) float64 arrays

    Args:
        config: Architecture
        weights: Layer index -> (units, fan_in + 1) weights, bias last
        image: Input of shape (maps, h, w) or (h, w)
    """
    x = np.asarray(image, dtype=np.float64).reshape(config.layers[0].maps, *config.layers[0].map_size)
    outputs = [x]
    for index in range(1, len(config.layers)):
        layer = config.layers[index]
        w = np.asarray(weights.get(index, np.zeros((0, 0))), dtype=np.float64)
        ho, wo = layer.map_size
        if layer.kind == LayerKind.CONV:
            kh, kw = layer.kernel
            y = np.zeros((layer.maps, ho, wo))
            for m in range(layer.maps):
                for r in range(ho):
                    for c in range(wo):
                        total = w[m, -1]
                        for ci in range(x.shape[0]):
                            for a in range(kh):
                                for b in range(kw):
                                    total += w[m, (ci * kh + a) * kw + b] * x[ci, r + a, c + b]
                        y[m, r, c] = total
            y = _activate(y, layer.activation)
        elif layer.kind == LayerKind.MAXPOOL:
            kh, kw = layer.kernel
            y = np.zeros((layer.maps, ho, wo))
            for m in range(layer.maps):
                for r in range(ho):
                    for c in range(wo):
                        y[m, r, c] = x[m, r * kh:(r + 1) * kh, c * kw:(c + 1) * kw].max()
        else:
            flat = x.ravel()
            y = np.array([w[u, :-1] @ flat + w[u, -1] for u in range(layer.maps)])
            y = _activate(y, layer.activation).reshape(layer.maps, 1, 1)
        outputs.append(y)
        x = y
    return outputs


def logical_weights(store: WeightStore) -> Dict[int, np.ndarray]:
    return {i: store.logical(i).copy() for i in store.layout.weighted_layers}


def sequential_sgd(config: NetworkConfig, samples: SampleSet, hp: Hyperparams,
                   dtype=np.float32) -> WeightStore:
    """
    Plain SGD in file order: forward, loss, backward, then every layer updated at once

    The update is evaluated in float64 and rounded once into the store's type.
    """
    weights, layout = build_network(config, dtype)
    state = WorkerState(layout)
    for epoch in range(hp.epochs):
        eta = hp.eta_for_epoch(epoch)
        for index in range(len(samples)):
            output = forward(state, weights, samples.inputs[index])
            _, delta = loss_and_output_delta(output, int(samples.labels[index]))
            backward(state, weights, delta)
            for layer in layout.weighted_layers:
                view = weights.logical(layer)
                w = view.astype(np.float64)
                g = layer_gradients(state, layer).astype(np.float64)
                view[...] = (w - eta * (g + hp.lam * w)).astype(dtype)
    return weights
