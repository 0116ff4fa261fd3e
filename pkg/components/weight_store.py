"""
Weight Store component for the CHAOS engine.
The flat, 64-byte aligned weight arena shared by every worker.
"""
import hashlib

import numpy as np

from network.layout import NetworkLayout, K_W_OFF, K_UNITS, K_W_STRIDE, K_FAN_IN
from utils.aligned import aligned_zeros


class WeightStore:
    """
    Component holding all weights of one network in a single aligned arena.

    This is the only mutable state shared between workers; kernels read and
    write its scalars in place without synchronization.
    """

    def __init__(self, layout: NetworkLayout):
        """
        Allocate a zeroed weight arena for a layout

        Args:
            layout: Arena plan of the network
        """
        self.layout = layout
        self.arena = aligned_zeros(layout.weight_arena_size, layout.dtype)

    @property
    def dtype(self) -> np.dtype:
        return self.arena.dtype

    def layer(self, index: int) -> np.ndarray:
        """Padded (units, row_stride) view of a layer's weights"""
        row = self.layout.meta[index]
        start = int(row[K_W_OFF])
        units = int(row[K_UNITS])
        stride = int(row[K_W_STRIDE])
        return self.arena[start:start + units * stride].reshape(units, stride)

    def logical(self, index: int) -> np.ndarray:
        """(units, fan_in + 1) view of a layer's weights; the last column holds the biases"""
        fan_in = int(self.layout.meta[index][K_FAN_IN])
        return self.layer(index)[:, :fan_in + 1]

    def weight_count(self, index: int) -> int:
        return self.layout.weight_count(index)

    def flat(self) -> np.ndarray:
        """Copy of all logical weights, layer by layer, unit by unit"""
        parts = [self.logical(i).ravel() for i in self.layout.weighted_layers]
        if not parts:
            return np.zeros(0, dtype=self.dtype)
        return np.concatenate(parts)

    def load_flat(self, values: np.ndarray) -> None:
        """Overwrite all logical weights from a flat vector in `flat()` order"""
        position = 0
        for index in self.layout.weighted_layers:
            view = self.logical(index)
            count = view.size
            view[...] = np.asarray(values[position:position + count]).reshape(view.shape)
            position += count

    def checksum(self) -> str:
        """Digest of the logical weights"""
        return hashlib.sha256(self.flat().tobytes()).hexdigest()

    def copy(self) -> "WeightStore":
        """Independent store with identical weights"""
        twin = WeightStore(self.layout)
        twin.arena[...] = self.arena
        return twin

    def __str__(self) -> str:
        return f"WeightStore({self.layout.total_weights()} weights, {self.dtype})"
