"""
Training phase system for the CHAOS engine.
Workers claim training images dynamically and publish gradients layer by layer.
"""
import time

import numpy as np

from components.epoch_phase import EpochPhase
from components.hyperparams import Hyperparams
from components.image_set import SampleSet
from components.weight_store import WeightStore
from components.worker_state import WorkerState
from engine.system import PhaseSystem
from engine.work_sampler import WorkSampler
from engine.worker_pool import WorkerPool
from network import kernels
from utils.debug import debug_print


def run_training_phase(pool: WorkerPool, sampler: WorkSampler, weights: WeightStore,
                       samples: SampleSet, hp: Hyperparams, epoch: int = 0) -> float:
    """
    Process every training image exactly once across the pool

    Each claimed image is forward-propagated, its loss differentiated and
    back-propagated; each weighted layer is published to the shared weights
    as soon as its backward step is done.

    Args:
        pool: Workers with private replicas
        sampler: Shared work sampler (reset here to the set size)
        weights: Shared weights, read and written without locks
        samples: Training set
        hp: Learning rate and decay
        epoch: Epoch index for the learning-rate schedule

    Returns:
        Wall-clock seconds of the phase, barrier included
    """
    meta = weights.layout.meta
    arena = weights.arena
    inputs = np.ascontiguousarray(samples.inputs, dtype=weights.dtype)
    samples.check_labels(weights.layout.output_size)
    labels = samples.labels
    eta = hp.eta_for_epoch(epoch)
    lam = hp.lam
    sampler.reset(len(samples))

    def work(state: WorkerState) -> int:
        processed = 0
        while True:
            index = sampler.next_index()
            if index is None:
                break
            kernels.train_sample(meta, arena, state.y, state.delta, state.grads, state.argmax,
                                 inputs[index], labels[index], eta, lam)
            processed += 1
        state.images_processed += processed
        return processed

    start = time.perf_counter()
    counts = pool.run_phase(work)
    elapsed = time.perf_counter() - start
    debug_print("Training", f"epoch {epoch}: {sum(counts)} images in {elapsed:.3f}s, "
                            f"per worker {counts}")
    return elapsed


class TrainingSystem(PhaseSystem):
    """
    Phase system running the Training step of each epoch.
    """

    def __init__(self):
        super().__init__("Training", priority=0)

    def update(self, context, epoch: int) -> None:
        record = context.record
        samples = context.dataset.train
        record.train_seconds = run_training_phase(context.pool, context.sampler, context.weights,
                                                  samples, context.hp, epoch)
        if record.train_seconds > 0:
            record.train_images_per_second = len(samples) / record.train_seconds
        context.log_phase(EpochPhase.TRAINING, epoch)
