"""
Shared pytest fixtures: synthetic MNIST files, toy networks and tiny datasets.
"""
import os
from pathlib import Path

import pytest

from components.image_set import Dataset
from mnist.dataset import has_mnist
from tests.factories import random_samples, toy_config, write_synthetic_mnist
from utils.message_queue import set_quiet


@pytest.fixture(autouse=True)
def quiet_messages():
    set_quiet(True)
    yield
    set_quiet(False)


@pytest.fixture
def synthetic_mnist_dir(tmp_path):
    return write_synthetic_mnist(tmp_path / "mnist")


@pytest.fixture
def mnist_dir():
    """Directory of the real MNIST files; skips the test when unavailable"""
    directory = os.environ.get("CHAOS_MNIST_DIR")
    if not directory or not has_mnist(directory):
        pytest.skip("set CHAOS_MNIST_DIR to a directory holding the four MNIST IDX files")
    return Path(directory)


@pytest.fixture
def toy():
    return toy_config()


@pytest.fixture
def toy_dataset():
    return Dataset(random_samples(40, 64, 3, seed=1, name="train"),
                   random_samples(20, 64, 3, seed=2, name="test"))


@pytest.fixture
def small_dataset():
    """Random 29x29 inputs with digit labels for the small architecture"""
    return Dataset(random_samples(24, 29 * 29, 10, seed=11, name="train"),
                   random_samples(12, 29 * 29, 10, seed=12, name="test"))
