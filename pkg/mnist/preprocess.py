"""
Preprocessing of raw MNIST digits into network inputs.

A 28x28 digit is scaled by 1/255 and padded with one zero row at the
bottom and one zero column at the right, giving the 29x29 input.
"""
import numpy as np

from components.image_set import ImageSet, LabelSet, PreprocessedImage, SampleSet
from utils.errors import InputError

RAW_SIZE = (28, 28)
INPUT_SIZE = (29, 29)


def preprocess(image: np.ndarray, label: int) -> PreprocessedImage:
    """
    Pad and normalize one raw digit

    Args:
        image: uint8 array of shape (28, 28)
        label: Class index

    Returns:
        29x29 float32 image in [0, 1]; row 28 and column 28 are zero
    """
    if image.shape != RAW_SIZE:
        raise InputError(f"expected a 28x28 image, got {image.shape[0]}x{image.shape[1]}")
    pixels = np.zeros(INPUT_SIZE, dtype=np.float32)
    pixels[:RAW_SIZE[0], :RAW_SIZE[1]] = image.astype(np.float32) / np.float32(255.0)
    return PreprocessedImage(pixels, int(label))


def preprocess_set(images: ImageSet, labels: LabelSet, name: str = "",
                   limit: int = None) -> SampleSet:
    """
    Preprocess the first `limit` images of a set (all of them when omitted)

    Args:
        images: Raw images
        labels: Matching labels
        name: Name of the resulting set
        limit: Number of leading images to keep, in file order

    Returns:
        SampleSet with one flattened 29x29 row per image
    """
    if images.count != labels.count:
        raise InputError(f"{images.count} images but {labels.count} labels")
    if (images.height, images.width) != RAW_SIZE:
        raise InputError(f"expected 28x28 images, got {images.height}x{images.width}")
    count = images.count if limit is None else min(limit, images.count)
    padded = np.zeros((count,) + INPUT_SIZE, dtype=np.float32)
    padded[:, :RAW_SIZE[0], :RAW_SIZE[1]] = images.pixels[:count].astype(np.float32) / np.float32(255.0)
    return SampleSet(padded.reshape(count, -1), labels.labels[:count].astype(np.int64), name)
