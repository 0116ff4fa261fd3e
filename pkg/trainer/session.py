"""
Training session module for the CHAOS engine.
Holds everything the phase systems work on during one run.
"""
import copy
from pathlib import Path
from typing import List, NamedTuple, Optional

from components.epoch_phase import EpochPhase
from components.hyperparams import Hyperparams
from components.image_set import Dataset
from components.network_config import NetworkConfig
from components.train_report import EpochRecord, TrainReport
from components.weight_store import WeightStore
from engine.work_sampler import WorkSampler
from engine.worker_pool import WorkerPool
from network.layout import NetworkLayout

CHECKPOINT_FILE = "checkpoint.bin"
REPORT_FILE = "report.csv"


class PhaseEntry(NamedTuple):
    """Sampler state recorded when a phase passed its barrier"""
    epoch: int
    phase: EpochPhase
    claimed: int
    size: int


class TrainingSession:
    """
    Shared context of one training run: weights, workers, sampler, data and report.
    """

    def __init__(self, config: NetworkConfig, layout: NetworkLayout, weights: WeightStore,
                 dataset: Dataset, pool: WorkerPool, hp: Hyperparams,
                 out_dir: Optional[Path] = None):
        self.config = config
        self.layout = layout
        self.weights = weights
        self.dataset = dataset
        self.pool = pool
        self.hp = hp
        self.sampler = WorkSampler()
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.report = TrainReport(arch=config.name, workers=pool.size)
        self.record: Optional[EpochRecord] = None
        self.phase_log: List[PhaseEntry] = []

    @property
    def checkpoint_path(self) -> Optional[Path]:
        return self.out_dir / CHECKPOINT_FILE if self.out_dir is not None else None

    @property
    def report_path(self) -> Optional[Path]:
        return self.out_dir / REPORT_FILE if self.out_dir is not None else None

    def begin_epoch(self, epoch: int) -> EpochRecord:
        self.record = EpochRecord(epoch=epoch)
        return self.record

    def end_epoch(self, epoch_seconds: float) -> EpochRecord:
        record = self.record
        record.epoch_seconds = epoch_seconds
        self.report.add(record)
        self.record = None
        return record

    def report_with_current(self) -> TrainReport:
        """Report including the epoch in progress (its timing taken as the phases so far)"""
        report = copy.deepcopy(self.report)
        if self.record is not None:
            current = copy.copy(self.record)
            current.epoch_seconds = (current.train_seconds + current.validation_seconds
                                     + current.test_seconds)
            report.add(current)
        return report

    def log_phase(self, phase: EpochPhase, epoch: int) -> None:
        self.phase_log.append(PhaseEntry(epoch, phase, self.sampler.claimed, self.sampler.size))
