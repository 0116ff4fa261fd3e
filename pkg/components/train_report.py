"""
Train Report component for the CHAOS engine.
Per-epoch phase timings and error counts of a training run.
"""
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

REPORT_COLUMNS = [
    "epoch", "train_seconds", "validation_seconds", "test_seconds", "epoch_seconds",
    "cumulative_seconds", "train_images_per_second", "validation_errors",
    "validation_size", "test_errors", "test_size",
]


@dataclass
class EpochRecord:
    """One row of the training report"""
    epoch: int
    train_seconds: float = 0.0
    validation_seconds: float = 0.0
    test_seconds: float = 0.0
    epoch_seconds: float = 0.0
    cumulative_seconds: float = 0.0
    train_images_per_second: float = 0.0
    validation_errors: int = 0
    validation_size: int = 0
    test_errors: int = 0
    test_size: int = 0


@dataclass
class TrainReport:
    """All epoch rows of a run plus the run's identity"""
    arch: str = "custom"
    workers: int = 1
    epochs: List[EpochRecord] = field(default_factory=list)

    def add(self, record: EpochRecord) -> None:
        previous = self.epochs[-1].cumulative_seconds if self.epochs else 0.0
        record.cumulative_seconds = previous + record.epoch_seconds
        self.epochs.append(record)

    def __len__(self) -> int:
        return len(self.epochs)

    @property
    def total_seconds(self) -> float:
        return self.epochs[-1].cumulative_seconds if self.epochs else 0.0

    @property
    def train_seconds(self) -> float:
        return sum(r.train_seconds for r in self.epochs)

    @property
    def final(self) -> Optional[EpochRecord]:
        return self.epochs[-1] if self.epochs else None

    @property
    def final_test_errors(self) -> int:
        return self.epochs[-1].test_errors if self.epochs else 0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(r) for r in self.epochs], columns=REPORT_COLUMNS)

    def write_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.to_frame().to_csv(path, index=False)
        return path
