import numpy as np
import pytest

from components.layer_spec import Activation, LayerKind, LayerSpec
from components.network_config import NetworkConfig
from network.config_io import builtin_config
from network.layout import NetworkLayout, param_count, validate_config, K_W_STRIDE, K_MAP_STRIDE
from network.propagation import build_network
from utils.aligned import ALIGN_BYTES, is_aligned
from utils.errors import ConfigError

WEIGHT_TABLE = {
    "small": [85, 1260, 4550, 510],
    "medium": [340, 20040, 54150, 1510],
    "large": [340, 30060, 216100, 135150, 1510],
}

SHAPE_TABLE = {
    "small": [(1, 29), (5, 26), (5, 13), (10, 9), (10, 3), (50, 1), (10, 1)],
    "medium": [(1, 29), (20, 26), (20, 13), (40, 9), (40, 3), (150, 1), (10, 1)],
    "large": [(1, 29), (20, 26), (20, 26), (60, 22), (60, 11), (100, 6), (100, 3), (150, 1), (10, 1)],
}


@pytest.mark.parametrize("name", sorted(WEIGHT_TABLE))
def test_builtin_weight_counts(name):
    rows = param_count(builtin_config(name))
    assert [r.weights for r in rows] == WEIGHT_TABLE[name]


@pytest.mark.parametrize("name", sorted(SHAPE_TABLE))
def test_builtin_shape_chain(name):
    config = builtin_config(name)
    assert [(l.maps, l.map_size[0]) for l in config.layers] == SHAPE_TABLE[name]
    assert all(l.map_size[0] == l.map_size[1] for l in config.layers)


def test_large_last_pool_has_900_neurons():
    layers = builtin_config("large").layers
    assert layers[6].neurons == 900
    assert layers[6].kernel == (2, 2)


def test_param_count_input_only():
    config = NetworkConfig([LayerSpec(LayerKind.INPUT, 1, (29, 29))])
    assert param_count(config) == []


def _conv_stack(conv_size, kernel=(4, 4)):
    return NetworkConfig([
        LayerSpec(LayerKind.INPUT, 1, (29, 29)),
        LayerSpec(LayerKind.CONV, 5, conv_size, kernel, Activation.SIGMOID),
        LayerSpec(LayerKind.FULL, 10, (1, 1), None, Activation.SIGMOID),
        LayerSpec(LayerKind.OUTPUT, 10, (1, 1), None, Activation.SOFTMAX),
    ])


def test_broken_chain_names_layer():
    with pytest.raises(ConfigError, match="layer 1"):
        validate_config(_conv_stack((25, 25)))


def test_kernel_larger_than_input():
    with pytest.raises(ConfigError, match="larger than input"):
        validate_config(_conv_stack((1, 1), kernel=(30, 30)))


def test_pool_must_tile():
    config = NetworkConfig([
        LayerSpec(LayerKind.INPUT, 1, (9, 9)),
        LayerSpec(LayerKind.MAXPOOL, 1, (4, 4), (2, 2)),
        LayerSpec(LayerKind.OUTPUT, 10, (1, 1), None, Activation.SOFTMAX),
    ])
    with pytest.raises(ConfigError, match="does not tile"):
        validate_config(config)


def test_output_must_be_last_and_softmax():
    config = NetworkConfig([
        LayerSpec(LayerKind.INPUT, 1, (4, 4)),
        LayerSpec(LayerKind.OUTPUT, 3, (1, 1), None, Activation.SIGMOID),
    ])
    with pytest.raises(ConfigError, match="softmax"):
        validate_config(config)
    config = NetworkConfig([
        LayerSpec(LayerKind.INPUT, 1, (4, 4)),
        LayerSpec(LayerKind.FULL, 3, (1, 1), None, Activation.SIGMOID),
    ])
    with pytest.raises(ConfigError, match="output"):
        validate_config(config)


def test_arenas_are_aligned(toy):
    weights, layout = build_network(toy)
    assert is_aligned(weights.arena)
    itemsize = layout.dtype.itemsize
    for row in layout.meta:
        assert (row[K_W_STRIDE] * itemsize) % ALIGN_BYTES == 0
        assert (row[K_MAP_STRIDE] * itemsize) % ALIGN_BYTES == 0 or row[K_MAP_STRIDE] == 1


def test_layout_totals_match_param_count():
    config = builtin_config("small")
    layout = NetworkLayout(config, np.float64)
    assert layout.total_weights() == sum(r.weights for r in param_count(config))
    assert layout.output_size == 10
    assert layout.input_shape == (29, 29)
