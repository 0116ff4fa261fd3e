"""
CHAOS trainer module.
Runs the epoch loop: Training, Validation, Testing and Checkpoint phases per epoch.
"""
import time
from pathlib import Path
from typing import Optional, Union

import numpy as np

from components.epoch_phase import EpochPhase
from components.hyperparams import Hyperparams
from components.image_set import Dataset
from components.network_config import NetworkConfig
from components.train_report import TrainReport
from engine.system import SystemRegistry
from engine.worker_pool import WorkerPool
from network.propagation import build_network
from systems.checkpoint_system import CheckpointSystem
from systems.evaluation_system import EvaluationSystem
from systems.training_system import TrainingSystem, run_training_phase
from trainer.session import TrainingSession
from utils.debug import debug_print
from utils.errors import ArgumentError
from utils.message_queue import add_message


class ChaosTrainer:
    """
    Builds a network and its worker pool and drives the per-epoch phases.
    """

    def __init__(self, config: NetworkConfig, dataset: Dataset, workers: int,
                 hp: Hyperparams, affinity: str = "none",
                 out_dir: Optional[Union[str, Path]] = None, dtype=np.float32):
        """
        Initialize the trainer

        Args:
            config: Architecture (its seed fixes the initial weights)
            dataset: Training, validation and test sets
            workers: Worker count p
            hp: Learning rate, decay and epoch count
            affinity: Thread pinning policy
            out_dir: Directory for checkpoint and report; nothing is written when None
            dtype: Scalar type of weights and activations

        Raises:
            ArgumentError: if p < 1
            InputError: if a label has no matching output neuron
        """
        if workers < 1:
            raise ArgumentError(f"worker count must be at least 1, got {workers}")
        self.weights, self.layout = build_network(config, dtype)
        for samples in (dataset.train, dataset.validation, dataset.test):
            samples.check_labels(self.layout.output_size)
        self.pool = WorkerPool(self.layout, workers, affinity)
        self.session = TrainingSession(config, self.layout, self.weights, dataset, self.pool, hp,
                                       Path(out_dir) if out_dir is not None else None)

        # Create all the phases
        self.systems = SystemRegistry()
        self.systems.add_system(TrainingSystem())
        self.systems.add_system(EvaluationSystem(EpochPhase.VALIDATION))
        self.systems.add_system(EvaluationSystem(EpochPhase.TESTING))
        self.checkpoint_system = CheckpointSystem()
        self.systems.add_system(self.checkpoint_system)
        self.systems.initialize()

    @property
    def report(self) -> TrainReport:
        return self.session.report

    def warm_up(self) -> None:
        """Run one untimed training epoch on a scratch copy of the weights"""
        scratch = self.weights.copy()
        session = self.session
        run_training_phase(self.pool, session.sampler, scratch, session.dataset.train, session.hp)
        for state in self.pool.states:
            state.images_processed = 0
        debug_print("ChaosTrainer", "warm-up epoch done")

    def train(self) -> TrainReport:
        """
        Run every epoch of the session

        Returns:
            The report with one row per epoch
        """
        session = self.session
        epochs = session.hp.epochs
        add_message(f"Training {session.config.name} on {len(session.dataset.train)} images "
                    f"with {self.pool.size} workers for {epochs} epochs")
        for epoch in range(epochs):
            session.begin_epoch(epoch)
            start = time.perf_counter()
            self.systems.update_all(session, epoch)
            record = session.end_epoch(time.perf_counter() - start)
            add_message(f"epoch {epoch + 1}/{epochs}: {record.epoch_seconds:.2f}s, "
                        f"validation errors {record.validation_errors}/{record.validation_size}, "
                        f"test errors {record.test_errors}/{record.test_size}")
        return session.report

    def close(self) -> None:
        self.pool.shutdown()

    def __enter__(self) -> "ChaosTrainer":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def train(config: NetworkConfig, dataset: Dataset, workers: int, hp: Hyperparams,
          affinity: str = "none", out_dir: Optional[Union[str, Path]] = None,
          warmup: bool = False, dtype=np.float32) -> TrainReport:
    """
    Train a network with the CHAOS scheme

    Args:
        config: Architecture
        dataset: Training, validation and test sets
        workers: Worker count p
        hp: Learning rate, decay and epoch count
        affinity: Thread pinning policy
        out_dir: Directory for checkpoint and report
        warmup: Run an untimed warm-up epoch first
        dtype: Scalar type

    Returns:
        The training report

    Raises:
        ArgumentError: if p < 1
    """
    with ChaosTrainer(config, dataset, workers, hp, affinity, out_dir, dtype) as trainer:
        if warmup:
            trainer.warm_up()
        return trainer.train()
