"""
Publication of locally accumulated gradients into the shared weights.
"""
from components.hyperparams import Hyperparams
from components.weight_store import WeightStore
from components.worker_state import WorkerState
from network import kernels
from utils.errors import ArgumentError


def publish_layer_gradients(weights: WeightStore, state: WorkerState, layer: int,
                            hp: Hyperparams, epoch: int = 0) -> None:
    """
    Apply w <- w - eta * (g + lam * w) for one weighted layer, then zero its local gradients

    Shared scalars are read and written without locks; concurrent publishers
    may overwrite each other's updates.

    Args:
        weights: Shared weight store
        state: Worker whose gradient buffer holds the layer's gradients
        layer: Index of a weighted layer
        hp: Learning rate, decay and schedule
        epoch: Epoch used for the learning-rate schedule
    """
    if layer not in weights.layout.weighted_layers:
        raise ArgumentError(f"layer {layer} carries no weights")
    kernels.publish_layer(weights.layout.meta, layer, weights.arena, state.grads,
                          hp.eta_for_epoch(epoch), hp.lam)
