"""
Deterministic weight initialization.

Weights are drawn from a SplitMix64 stream: the k-th draw (k = 1, 2, ...)
of a seed is mix(seed + k * 0x9E3779B97F4A7C15) with

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

all arithmetic modulo 2**64. A draw maps to [0, 1) as (z >> 11) * 2**-53
and to a weight as -scale + 2 * scale * u. Draws are consumed layer by
layer, unit by unit, fan-in weights first and the bias last.
"""
import numpy as np

from components.weight_store import WeightStore

GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)

INIT_SCALE = 0.05


def splitmix64(seed: int, start: int, count: int) -> np.ndarray:
    """
    Draws start+1 .. start+count of the SplitMix64 stream of a seed

    Args:
        seed: Unsigned 64-bit seed
        start: Number of draws already consumed
        count: Number of draws to return

    Returns:
        uint64 array of raw draws
    """
    counters = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed) + counters * GOLDEN_GAMMA
    z = (z ^ (z >> np.uint64(30))) * _MIX_1
    z = (z ^ (z >> np.uint64(27))) * _MIX_2
    return z ^ (z >> np.uint64(31))


def uniform(seed: int, start: int, count: int) -> np.ndarray:
    """Draws mapped to float64 values in [0, 1)"""
    return (splitmix64(seed, start, count) >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def init_weights(weights: WeightStore, seed: int, scale: float = INIT_SCALE) -> None:
    """
    Fill every logical weight with a uniform draw from [-scale, scale)

    Args:
        weights: Store to initialize in place
        seed: Unsigned seed of the stream
        scale: Half-width of the initialization interval
    """
    consumed = 0
    for index in weights.layout.weighted_layers:
        view = weights.logical(index)
        values = -scale + 2.0 * scale * uniform(seed, consumed, view.size)
        view[...] = values.reshape(view.shape)
        consumed += view.size
