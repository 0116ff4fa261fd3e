"""
Network layout module.
Validates an architecture, counts its weights and plans the flat, 64-byte
aligned arenas that hold weights and per-worker activations.
"""
from typing import List, NamedTuple

import numpy as np

from components.layer_spec import LayerKind, Activation, LayerSpec
from components.network_config import NetworkConfig
from utils.aligned import round_up
from utils.errors import ConfigError

# Columns of the per-layer metadata table handed to the kernels
K_KIND = 0
K_MAPS = 1
K_H = 2
K_W = 3
K_KH = 4
K_KW = 5
K_ACT = 6
K_W_OFF = 7
K_UNITS = 8
K_W_STRIDE = 9
K_FAN_IN = 10
K_Y_OFF = 11
K_MAP_STRIDE = 12
K_NEURONS = 13
META_COLUMNS = 14

_MAP_KINDS = (LayerKind.INPUT, LayerKind.CONV, LayerKind.MAXPOOL)


class ParamRow(NamedTuple):
    """One row of the weight-count table"""
    index: int
    kind: LayerKind
    weights: int


def _fail(index: int, layer: LayerSpec, message: str) -> None:
    raise ConfigError(f"layer {index} ({layer.kind.name.lower()}): {message}")


def validate_config(config: NetworkConfig, require_output: bool = True) -> None:
    """
    Check the structural and dimension-chain invariants of a config

    Args:
        config: Architecture to check
        require_output: Whether the stack must end in an Output layer

    Raises:
        ConfigError: naming the first offending layer
    """
    layers = config.layers
    if not layers:
        raise ConfigError("network has no layers")
    if config.seed < 0:
        raise ConfigError(f"seed must be unsigned, got {config.seed}")

    for index, layer in enumerate(layers):
        if layer.maps < 1 or layer.map_size[0] < 1 or layer.map_size[1] < 1:
            _fail(index, layer, "maps and map size must be positive")

        if index == 0:
            if layer.kind != LayerKind.INPUT:
                _fail(index, layer, "first layer must be an input layer")
            if layer.kernel is not None:
                _fail(index, layer, "input layer takes no kernel")
            continue
        if layer.kind == LayerKind.INPUT:
            _fail(index, layer, "input layer must come first")
        if layer.kind == LayerKind.OUTPUT and index != len(layers) - 1:
            _fail(index, layer, "output layer must come last")

        prev = layers[index - 1]
        in_h, in_w = prev.map_size

        if layer.kind in (LayerKind.CONV, LayerKind.MAXPOOL):
            if prev.kind not in _MAP_KINDS:
                _fail(index, layer, "must follow a map layer (input, conv or max)")
            if layer.kernel is None:
                _fail(index, layer, "kernel size is required")
            kh, kw = layer.kernel
            if kh < 1 or kw < 1:
                _fail(index, layer, "kernel must be positive")
            if kh > in_h or kw > in_w:
                _fail(index, layer, f"kernel {kh}x{kw} larger than input map {in_h}x{in_w}")

            if layer.kind == LayerKind.CONV:
                expected = (in_h - kh + 1, in_w - kw + 1)
                if layer.activation == Activation.SOFTMAX:
                    _fail(index, layer, "softmax is only allowed on the output layer")
            else:
                if in_h % kh or in_w % kw:
                    _fail(index, layer, f"pooling kernel {kh}x{kw} does not tile {in_h}x{in_w}")
                if layer.maps != prev.maps:
                    _fail(index, layer, f"pooling keeps the map count ({prev.maps}), got {layer.maps}")
                if layer.activation != Activation.IDENTITY:
                    _fail(index, layer, "pooling layers take no activation")
                expected = (in_h // kh, in_w // kw)

            if layer.map_size != expected:
                _fail(index, layer, f"map size {layer.map_size[0]}x{layer.map_size[1]} does not "
                                    f"chain from {in_h}x{in_w}, expected {expected[0]}x{expected[1]}")
        else:
            # Full and Output layers are neuron vectors
            if layer.map_size != (1, 1):
                _fail(index, layer, "fully connected layers have a 1x1 map size")
            if layer.kernel is not None:
                _fail(index, layer, "fully connected layers take no kernel")
            if layer.kind == LayerKind.FULL and layer.activation == Activation.SOFTMAX:
                _fail(index, layer, "softmax is only allowed on the output layer")
            if layer.kind == LayerKind.OUTPUT and layer.activation != Activation.SOFTMAX:
                _fail(index, layer, "output layer must use softmax")

    if require_output and layers[-1].kind != LayerKind.OUTPUT:
        raise ConfigError(f"layer {len(layers) - 1} ({layers[-1].kind.name.lower()}): "
                          f"last layer must be an output layer")


def fan_in(layer: LayerSpec, prev: LayerSpec) -> int:
    """Number of weighted inputs of one unit (excluding its bias)"""
    if layer.kind == LayerKind.CONV:
        return prev.maps * layer.kernel[0] * layer.kernel[1]
    if layer.kind in (LayerKind.FULL, LayerKind.OUTPUT):
        return prev.neurons
    return 0


def weight_count(layer: LayerSpec, prev: LayerSpec) -> int:
    """
    Closed-form weight count of a layer

    Conv layers are fully connected across input maps with one bias per map;
    Full and Output layers carry one bias per neuron.
    """
    if not layer.is_weighted:
        return 0
    return layer.maps * (fan_in(layer, prev) + 1)


def param_count(config: NetworkConfig) -> List[ParamRow]:
    """
    Per-layer weight-count table of all weighted layers

    Args:
        config: Architecture (an Output layer is not required)

    Returns:
        One row per weighted layer, in layer order
    """
    validate_config(config, require_output=False)
    rows = []
    for index in range(1, len(config.layers)):
        layer = config.layers[index]
        if layer.is_weighted:
            rows.append(ParamRow(index, layer.kind, weight_count(layer, config.layers[index - 1])))
    return rows


class NetworkLayout:
    """
    Layer metadata plus the arena plan shared by the weight store and every worker state.

    Weights of a layer are stored unit by unit; each unit's block holds its
    fan-in weights followed by its bias and is padded to a 64-byte row stride.
    Activations of map layers are stored map by map, each map plane padded to
    64 bytes; Full and Output layers are plain neuron vectors.
    """

    def __init__(self, config: NetworkConfig, dtype=np.float32):
        """
        Plan the arenas of a validated config

        Args:
            config: Architecture
            dtype: Scalar type of weights and activations
        """
        validate_config(config)
        self.config = config
        self.dtype = np.dtype(dtype)
        layers = config.layers
        self.meta = np.zeros((len(layers), META_COLUMNS), dtype=np.int64)

        w_offset = 0
        y_offset = 0
        for index, layer in enumerate(layers):
            row = self.meta[index]
            row[K_KIND] = layer.kind.value
            row[K_MAPS] = layer.maps
            row[K_H], row[K_W] = layer.map_size
            if layer.kernel is not None:
                row[K_KH], row[K_KW] = layer.kernel
            row[K_ACT] = layer.activation.value
            row[K_NEURONS] = layer.neurons

            if layer.kind in _MAP_KINDS:
                row[K_MAP_STRIDE] = round_up(layer.map_size[0] * layer.map_size[1], self.dtype)
            else:
                row[K_MAP_STRIDE] = 1
            row[K_Y_OFF] = y_offset
            y_offset += round_up(layer.maps * int(row[K_MAP_STRIDE]), self.dtype)

            if layer.is_weighted:
                n_in = fan_in(layer, layers[index - 1])
                row[K_FAN_IN] = n_in
                row[K_UNITS] = layer.maps
                row[K_W_STRIDE] = round_up(n_in + 1, self.dtype)
                row[K_W_OFF] = w_offset
                w_offset += layer.maps * int(row[K_W_STRIDE])

        self.weight_arena_size = max(w_offset, 1)
        self.state_arena_size = y_offset
        self.weighted_layers = [i for i, layer in enumerate(layers) if layer.is_weighted]

    @property
    def num_layers(self) -> int:
        return len(self.config.layers)

    @property
    def output_size(self) -> int:
        return self.config.layers[-1].neurons

    @property
    def input_shape(self):
        return self.config.layers[0].map_size

    def weight_count(self, index: int) -> int:
        """Logical weight count of a layer (0 for unweighted layers)"""
        row = self.meta[index]
        return int(row[K_UNITS] * (row[K_FAN_IN] + 1))

    def total_weights(self) -> int:
        return sum(self.weight_count(i) for i in self.weighted_layers)
