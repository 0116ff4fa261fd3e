"""
Operation counts of one image through a network.

Counting rules:
  forward  - one op per multiply-accumulate (conv: out_neurons * in_maps * kh * kw,
             bias adds not counted; full/output: one per weight, bias included),
             one op per activation evaluation (one per output neuron),
             two ops per pooling comparison (out_neurons * (kh * kw - 1) comparisons)
  backward - delta MACs (equal to the forward MACs, none for the first weighted layer),
             gradient MACs (equal to the forward MACs), one op per activation
             derivative (one per output neuron) and one update op per weight;
             pooling layers add one routing op per output neuron
"""
from typing import List, NamedTuple, Tuple

from components.layer_spec import LayerKind
from components.network_config import NetworkConfig
from network.layout import validate_config, weight_count


class LayerOps(NamedTuple):
    """Forward and backward operation counts of one layer"""
    index: int
    kind: LayerKind
    fprop: int
    bprop: int


def layer_ops(config: NetworkConfig) -> List[LayerOps]:
    """Per-layer operation counts of every layer after the input"""
    validate_config(config, require_output=False)
    layers = config.layers
    rows = []
    first_weighted = next((i for i, l in enumerate(layers) if l.is_weighted), None)
    for index in range(1, len(layers)):
        layer, prev = layers[index], layers[index - 1]
        out = layer.neurons
        if layer.kind == LayerKind.MAXPOOL:
            kh, kw = layer.kernel
            rows.append(LayerOps(index, layer.kind, 2 * out * (kh * kw - 1), out))
            continue
        weights = weight_count(layer, prev)
        if layer.kind == LayerKind.CONV:
            macs = out * prev.maps * layer.kernel[0] * layer.kernel[1]
        else:
            macs = weights
        delta_macs = 0 if index == first_weighted else macs
        rows.append(LayerOps(index, layer.kind, macs + out, delta_macs + macs + out + weights))
    return rows


def estimate_ops(config: NetworkConfig) -> Tuple[int, int]:
    """
    (FProp, BProp) operation counts per image

    An Input-only network has no operations.
    """
    rows = layer_ops(config)
    return sum(r.fprop for r in rows), sum(r.bprop for r in rows)


def estimate_prep(config: NetworkConfig) -> int:
    """Sequential preparation work: one op per initialized weight"""
    validate_config(config, require_output=False)
    layers = config.layers
    return sum(weight_count(layers[i], layers[i - 1]) for i in range(1, len(layers)))
