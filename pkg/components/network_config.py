"""
Network Config component for the CHAOS engine.
An ordered layer stack plus the seed used to initialize its weights.
"""
from typing import List

from components.layer_spec import LayerSpec


class NetworkConfig:
    """Declarative description of a network architecture"""

    def __init__(self, layers: List[LayerSpec], seed: int = 0, name: str = "custom"):
        """
        Initialize a network config

        Args:
            layers: Ordered layer stack, Input first and Output last
            seed: Seed of the weight-initialization generator (unsigned)
            name: Human-readable architecture name
        """
        self.layers = list(layers)
        self.seed = int(seed)
        self.name = name

    def with_seed(self, seed: int) -> "NetworkConfig":
        """Copy of this config with a different seed"""
        return NetworkConfig(self.layers, seed, self.name)

    def __len__(self) -> int:
        return len(self.layers)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NetworkConfig):
            return False
        return self.layers == other.layers and self.seed == other.seed

    def __str__(self) -> str:
        return f"NetworkConfig({self.name}, {len(self.layers)} layers, seed={self.seed})"
