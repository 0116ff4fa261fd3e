"""
Worker State component for the CHAOS engine.
Thread-private buffers of one network replica.
"""
import numpy as np

from network.layout import NetworkLayout
from utils.aligned import aligned_zeros


class WorkerState:
    """
    Component holding one worker's activations, partial derivatives,
    pooling switches and local gradient accumulators.

    All buffers are flat arenas laid out exactly like the network layout:
    `y` and `delta` mirror the activation plan, `argmax` stores for every
    pooled output the arena index of the winning input, and `grads` mirrors
    the weight arena. A worker state is owned by exactly one worker.
    """

    def __init__(self, layout: NetworkLayout, worker_id: int = 0):
        """
        Allocate the private buffers for a layout

        Args:
            layout: Arena plan of the network
            worker_id: Identifier of the owning worker
        """
        self.layout = layout
        self.worker_id = worker_id
        self.y = aligned_zeros(layout.state_arena_size, layout.dtype)
        self.delta = aligned_zeros(layout.state_arena_size, layout.dtype)
        self.argmax = aligned_zeros(layout.state_arena_size, np.int64)
        self.grads = aligned_zeros(layout.weight_arena_size, layout.dtype)
        self.images_processed = 0

    def __str__(self) -> str:
        return f"WorkerState(worker={self.worker_id}, processed={self.images_processed})"
