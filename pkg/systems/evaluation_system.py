"""
Evaluation phase systems for the CHAOS engine.
Validation and Testing count incorrect predictions on frozen weights.
"""
import time
from typing import Tuple

import numpy as np

from components.epoch_phase import EpochPhase
from components.image_set import SampleSet
from components.weight_store import WeightStore
from components.worker_state import WorkerState
from engine.system import PhaseSystem
from engine.work_sampler import WorkSampler
from engine.worker_pool import WorkerPool
from network import kernels
from utils.debug import debug_print


def run_evaluation_phase(pool: WorkerPool, sampler: WorkSampler, weights: WeightStore,
                         samples: SampleSet) -> int:
    """
    Count the images whose predicted class differs from their label

    No weight is written during this phase, so the count is the same for
    every worker count.

    Returns:
        Number of incorrect predictions, in [0, len(samples)]
    """
    return timed_evaluation_phase(pool, sampler, weights, samples)[0]


def timed_evaluation_phase(pool: WorkerPool, sampler: WorkSampler, weights: WeightStore,
                           samples: SampleSet) -> Tuple[int, float]:
    """`run_evaluation_phase` plus the phase's wall-clock seconds"""
    meta = weights.layout.meta
    arena = weights.arena
    inputs = np.ascontiguousarray(samples.inputs, dtype=weights.dtype)
    samples.check_labels(weights.layout.output_size)
    labels = samples.labels
    sampler.reset(len(samples))

    def work(state: WorkerState) -> int:
        wrong = 0
        while True:
            index = sampler.next_index()
            if index is None:
                break
            if kernels.classify(meta, arena, state.y, state.argmax, inputs[index]) != labels[index]:
                wrong += 1
        return wrong

    start = time.perf_counter()
    errors = sum(pool.run_phase(work))
    return errors, time.perf_counter() - start


class EvaluationSystem(PhaseSystem):
    """
    Phase system running Validation or Testing.
    """

    def __init__(self, phase: EpochPhase):
        if phase == EpochPhase.TRAINING:
            raise ValueError("evaluation systems run Validation or Testing")
        super().__init__(phase.name.capitalize(), priority=10 * phase.value)
        self.phase = phase

    def update(self, context, epoch: int) -> None:
        record = context.record
        if self.phase == EpochPhase.VALIDATION:
            samples = context.dataset.validation
        else:
            samples = context.dataset.test
        errors, seconds = timed_evaluation_phase(context.pool, context.sampler,
                                                 context.weights, samples)
        if self.phase == EpochPhase.VALIDATION:
            record.validation_errors, record.validation_seconds = errors, seconds
            record.validation_size = len(samples)
        else:
            record.test_errors, record.test_seconds = errors, seconds
            record.test_size = len(samples)
        debug_print(self.name, f"epoch {epoch}: {errors}/{len(samples)} incorrect in {seconds:.3f}s")
        context.log_phase(self.phase, epoch)
