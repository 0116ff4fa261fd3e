"""
Locating and loading the four MNIST files of a data directory.
"""
from pathlib import Path
from typing import Optional

from components.image_set import Dataset
from mnist.idx import load_idx_images, load_idx_labels
from mnist.preprocess import preprocess_set
from utils.debug import debug_print
from utils.errors import DataError, ArgumentError

# Accepted spellings of each file, checked in order
FILE_NAMES = {
    "train_images": ("train-images-idx3-ubyte", "train-images.idx3-ubyte"),
    "train_labels": ("train-labels-idx1-ubyte", "train-labels.idx1-ubyte"),
    "test_images": ("t10k-images-idx3-ubyte", "t10k-images.idx3-ubyte"),
    "test_labels": ("t10k-labels-idx1-ubyte", "t10k-labels.idx1-ubyte"),
}


def find_file(data_dir: Path, key: str) -> Path:
    """Path of one of the four MNIST files, plain or gzipped"""
    for name in FILE_NAMES[key]:
        for candidate in (data_dir / name, data_dir / (name + ".gz")):
            if candidate.is_file():
                return candidate
    raise DataError(f"no {key.replace('_', ' ')} file ({FILE_NAMES[key][0]}[.gz]) in {data_dir}")


def has_mnist(data_dir) -> bool:
    """Whether all four files are present"""
    try:
        for key in FILE_NAMES:
            find_file(Path(data_dir), key)
    except DataError:
        return False
    return True


def load_mnist(data_dir, subset: Optional[int] = None, test_subset: Optional[int] = None) -> Dataset:
    """
    Load and preprocess MNIST

    Args:
        data_dir: Directory holding the four IDX files
        subset: Use only the first `subset` training images (file order, no shuffling)
        test_subset: Use only the first `test_subset` test images

    Returns:
        Dataset whose validation set is the training set
    """
    data_dir = Path(data_dir)
    train_images = load_idx_images(find_file(data_dir, "train_images"))
    train_labels = load_idx_labels(find_file(data_dir, "train_labels"))
    test_images = load_idx_images(find_file(data_dir, "test_images"))
    test_labels = load_idx_labels(find_file(data_dir, "test_labels"))

    if subset is not None and not 0 <= subset <= train_images.count:
        raise ArgumentError(f"subset {subset} exceeds the {train_images.count} training images")
    if test_subset is not None and not 0 <= test_subset <= test_images.count:
        raise ArgumentError(f"test subset {test_subset} outside [0, {test_images.count}] test images")

    train = preprocess_set(train_images, train_labels, "train", subset)
    test = preprocess_set(test_images, test_labels, "test", test_subset)
    debug_print("MNIST", f"dataset ready: {len(train)} train, {len(test)} test")
    return Dataset(train, test)
