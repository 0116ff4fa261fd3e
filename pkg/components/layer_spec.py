"""
Layer Spec component for the CHAOS engine.
Describes one layer of a network architecture declaratively.
"""
from enum import Enum
from typing import Optional, Tuple


class LayerKind(Enum):
    """Kinds of layers a network can be built from (values are kernel codes)"""
    INPUT = 0
    CONV = 1
    MAXPOOL = 2
    FULL = 3
    OUTPUT = 4


class Activation(Enum):
    """Activation applied to a layer's weighted sums (values are kernel codes)"""
    IDENTITY = 0
    SIGMOID = 1
    SOFTMAX = 2


class LayerSpec:
    """Component describing a single layer: kind, maps, map size, kernel and activation"""

    def __init__(self,
                 kind: LayerKind,
                 maps: int,
                 map_size: Tuple[int, int],
                 kernel: Optional[Tuple[int, int]] = None,
                 activation: Activation = Activation.IDENTITY):
        """
        Initialize a layer spec

        Args:
            kind: Layer kind
            maps: Number of maps (neurons for Full and Output layers)
            map_size: (height, width) of each map in pixels; (1, 1) for Full/Output
            kernel: (height, width) of the kernel for Conv/MaxPool layers, None otherwise
            activation: Activation of the layer's weighted sums
        """
        self.kind = kind
        self.maps = maps
        self.map_size = (int(map_size[0]), int(map_size[1]))
        self.kernel = (int(kernel[0]), int(kernel[1])) if kernel is not None else None
        self.activation = activation

    @property
    def neurons(self) -> int:
        """Number of neurons in the layer"""
        return self.maps * self.map_size[0] * self.map_size[1]

    @property
    def is_weighted(self) -> bool:
        """Conv, Full and Output layers carry weights"""
        return self.kind in (LayerKind.CONV, LayerKind.FULL, LayerKind.OUTPUT)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LayerSpec):
            return False
        return (self.kind == other.kind and self.maps == other.maps and
                self.map_size == other.map_size and self.kernel == other.kernel and
                self.activation == other.activation)

    def __str__(self) -> str:
        kernel = f"{self.kernel[0]}x{self.kernel[1]}" if self.kernel else "-"
        return (f"LayerSpec({self.kind.name}, maps={self.maps}, "
                f"size={self.map_size[0]}x{self.map_size[1]}, kernel={kernel}, "
                f"act={self.activation.name})")

    __repr__ = __str__
