"""
Image Set components for the CHAOS engine.
Raw IDX payloads, preprocessed network inputs and the train/validation/test bundle.
"""
from typing import Optional

import numpy as np

from utils.errors import InputError


class ImageSet:
    """Component holding raw unsigned 8-bit images in row-major order"""

    def __init__(self, pixels: np.ndarray):
        """
        Args:
            pixels: uint8 array of shape (count, height, width)
        """
        self.pixels = pixels

    @property
    def count(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[2])

    def __len__(self) -> int:
        return self.count

    def __str__(self) -> str:
        return f"ImageSet({self.count}, {self.height}x{self.width})"


class LabelSet:
    """Component holding digit labels, each in [0, 10)"""

    def __init__(self, labels: np.ndarray):
        self.labels = labels

    @property
    def count(self) -> int:
        return int(self.labels.shape[0])

    def __len__(self) -> int:
        return self.count

    def __str__(self) -> str:
        return f"LabelSet({self.count})"


class PreprocessedImage:
    """A padded, normalized network input together with its label"""

    def __init__(self, pixels: np.ndarray, label: int):
        """
        Args:
            pixels: float32 array of shape (29, 29) with values in [0, 1]
            label: Class index
        """
        self.pixels = pixels
        self.label = label

    def __str__(self) -> str:
        return f"PreprocessedImage({self.pixels.shape[0]}x{self.pixels.shape[1]}, label={self.label})"


class SampleSet:
    """
    A preprocessed set ready for the workers: one flat input row per image.

    Immutable once built and shared by every worker.
    """

    def __init__(self, inputs: np.ndarray, labels: np.ndarray, name: str = ""):
        """
        Args:
            inputs: float array of shape (count, input_pixels)
            labels: int64 array of shape (count,)
            name: Set name used in reports
        """
        self.inputs = inputs
        self.labels = labels
        self.name = name
        self.inputs.setflags(write=False)
        self.labels.setflags(write=False)

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def subset(self, count: int) -> "SampleSet":
        """First `count` samples in file order"""
        return SampleSet(self.inputs[:count].copy(), self.labels[:count].copy(), self.name)

    def check_labels(self, classes: int) -> None:
        """
        Check every label indexes one of `classes` outputs

        Raises:
            InputError: naming the first offending sample
        """
        bad = np.flatnonzero((self.labels < 0) | (self.labels >= classes))
        if bad.size:
            index = int(bad[0])
            raise InputError(f"{self.name or 'sample'} set: label {int(self.labels[index])} of image "
                             f"{index} outside [0, {classes}) of the output layer")

    def __str__(self) -> str:
        return f"SampleSet({self.name}, {len(self)} images)"


class Dataset:
    """Training, validation and test sets of one run"""

    def __init__(self, train: SampleSet, test: SampleSet, validation: Optional[SampleSet] = None):
        """
        Args:
            train: Training set
            test: Test set
            validation: Validation set; the training set is reused when omitted
        """
        self.train = train
        self.test = test
        self.validation = validation if validation is not None else train

    def __str__(self) -> str:
        return (f"Dataset(train={len(self.train)}, validation={len(self.validation)}, "
                f"test={len(self.test)})")
