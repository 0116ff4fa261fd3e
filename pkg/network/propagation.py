"""
Propagation API for one network replica.
Thin wrappers that hand a worker state and the shared weights to the
compiled kernels.
"""
from typing import Tuple, Union

import numpy as np

from components.image_set import PreprocessedImage
from components.network_config import NetworkConfig
from components.weight_store import WeightStore
from components.worker_state import WorkerState
from network import kernels
from network.init import init_weights
from network.layout import (NetworkLayout, K_Y_OFF, K_MAPS, K_H, K_W, K_MAP_STRIDE, K_NEURONS,
                            K_W_OFF, K_UNITS, K_W_STRIDE, K_FAN_IN)
from utils.debug import debug_print
from utils.errors import InputError

ImageLike = Union[PreprocessedImage, np.ndarray]


def build_network(config: NetworkConfig, dtype=np.float32) -> Tuple[WeightStore, NetworkLayout]:
    """
    Validate a config, plan its arenas and allocate deterministically initialized weights

    Args:
        config: Architecture to build
        dtype: Scalar type (float32 for training, float64 for oracles)

    Returns:
        The weight store and the layout metadata

    Raises:
        ConfigError: if the dimension chain is broken
    """
    layout = NetworkLayout(config, dtype)
    weights = WeightStore(layout)
    init_weights(weights, config.seed)
    debug_print("Network", f"built {config.name}: {layout.total_weights()} weights, "
                           f"{layout.num_layers} layers, {layout.dtype}")
    return weights, layout


def flatten_image(layout: NetworkLayout, image: ImageLike) -> np.ndarray:
    """Flatten an image into the layout's scalar type, checking it fits the input layer"""
    pixels = image.pixels if isinstance(image, PreprocessedImage) else image
    flat = np.ascontiguousarray(pixels, dtype=layout.dtype).ravel()
    expected = int(layout.meta[0][K_NEURONS])
    if flat.size != expected:
        h, w = layout.input_shape
        raise InputError(f"image has {flat.size} pixels, input layer expects {expected} ({h}x{w})")
    return flat


def _check_label(label: int, classes: int) -> int:
    if not 0 <= int(label) < classes:
        raise InputError(f"label {label} outside [0, {classes})")
    return int(label)


def forward(state: WorkerState, weights: WeightStore, image: ImageLike) -> np.ndarray:
    """
    Forward-propagate one image

    Args:
        state: Worker state receiving the activations
        weights: Shared weights, read at point of use
        image: 29x29 preprocessed image (or any array matching the input layer)

    Returns:
        Copy of the output vector (class probabilities)
    """
    layout = state.layout
    kernels.forward_pass(layout.meta, weights.arena, state.y, state.argmax,
                         flatten_image(layout, image))
    return output_vector(state).copy()


def loss_and_output_delta(output: np.ndarray, label: int) -> Tuple[float, np.ndarray]:
    """
    Cross-entropy loss of a softmax output and the output-layer delta

    Args:
        output: Class probabilities
        label: True class index

    Returns:
        (loss, delta) with delta = output - onehot(label)

    Raises:
        InputError: if the label is out of range
    """
    output = np.ascontiguousarray(output)
    label = _check_label(label, output.shape[0])
    delta = np.empty_like(output)
    loss = kernels.cross_entropy_delta(output, label, delta)
    return float(loss), delta


def backward(state: WorkerState, weights: WeightStore, delta_out: np.ndarray) -> None:
    """
    Back-propagate an output delta, accumulating gradients in the worker's private buffers

    No shared weight is written. `forward` must have run on the same state first.

    Args:
        state: Worker state holding the forward activations
        weights: Shared weights (read only here)
        delta_out: Delta at the output layer
    """
    layout = state.layout
    last = layout.meta[layout.num_layers - 1]
    start = int(last[K_Y_OFF])
    state.delta[start:start + int(last[K_NEURONS])] = delta_out
    kernels.backward_pass(layout.meta, weights.arena, state.y, state.delta, state.grads,
                          state.argmax, 0.0, 0.0, False)


def predict(output: np.ndarray) -> int:
    """Index of the largest class score; ties go to the lowest index"""
    return int(np.argmax(output))


def output_vector(state: WorkerState) -> np.ndarray:
    """View of the output layer's activations"""
    last = state.layout.meta[state.layout.num_layers - 1]
    start = int(last[K_Y_OFF])
    return state.y[start:start + int(last[K_NEURONS])]


def _maps_view(layout: NetworkLayout, arena: np.ndarray, index: int) -> np.ndarray:
    row = layout.meta[index]
    maps, h, w, stride = int(row[K_MAPS]), int(row[K_H]), int(row[K_W]), int(row[K_MAP_STRIDE])
    start = int(row[K_Y_OFF])
    planes = arena[start:start + maps * stride].reshape(maps, stride)
    return planes[:, :h * w].reshape(maps, h, w)


def layer_activations(state: WorkerState, index: int) -> np.ndarray:
    """(maps, h, w) view of a layer's activations"""
    return _maps_view(state.layout, state.y, index)


def layer_deltas(state: WorkerState, index: int) -> np.ndarray:
    """(maps, h, w) view of a layer's partial derivatives"""
    return _maps_view(state.layout, state.delta, index)


def layer_gradients(state: WorkerState, index: int) -> np.ndarray:
    """(units, fan_in + 1) view of a layer's local gradients"""
    row = state.layout.meta[index]
    start = int(row[K_W_OFF])
    units, stride = int(row[K_UNITS]), int(row[K_W_STRIDE])
    return state.grads[start:start + units * stride].reshape(units, stride)[:, :int(row[K_FAN_IN]) + 1]
