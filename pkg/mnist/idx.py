"""
IDX loader for the MNIST dataset.

Data format (big endian):
    u32 | magic (0x00000803 images, 0x00000801 labels)
    u32 | item count
    u32 | row count      (images only)
    u32 | column count   (images only)
    u8[] | payload, row-major
Gzip-compressed files are decompressed transparently.
"""
import gzip
import struct
import zlib
from pathlib import Path
from typing import Union

import numpy as np

from components.image_set import ImageSet, LabelSet
from utils.debug import debug_print
from utils.errors import IdxFormatError, IdxLengthError, LabelDataError, DataError

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801
NUM_CLASSES = 10

PathLike = Union[str, Path]


def _read_bytes(path: PathLike) -> bytes:
    path = Path(path)
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e
    if raw[:2] == b"\x1f\x8b":
        try:
            raw = gzip.decompress(raw)
        except (EOFError, OSError, zlib.error) as e:
            raise DataError(f"{path}: corrupt gzip data: {e}") from e
    return raw


def _header(raw: bytes, words: int, path: PathLike):
    if len(raw) < 4 * words:
        raise IdxLengthError(f"{path}: header truncated ({len(raw)} bytes)")
    return struct.unpack(f">{words}I", raw[:4 * words])


def load_idx_images(path: PathLike) -> ImageSet:
    """
    Load an IDX image file

    Args:
        path: File path (plain or gzip)

    Returns:
        ImageSet of shape (count, rows, cols)

    Raises:
        IdxFormatError: wrong magic number
        IdxLengthError: payload shorter than count * rows * cols
    """
    raw = _read_bytes(path)
    if len(raw) >= 4 and struct.unpack(">I", raw[:4])[0] != IMAGE_MAGIC:
        raise IdxFormatError(f"{path}: magic 0x{struct.unpack('>I', raw[:4])[0]:08x} "
                             f"is not an image file (0x{IMAGE_MAGIC:08x})")
    _, count, rows, cols = _header(raw, 4, path)
    expected = count * rows * cols
    payload = raw[16:]
    if len(payload) < expected:
        raise IdxLengthError(f"{path}: payload has {len(payload)} bytes, header promises {expected}")
    pixels = np.frombuffer(payload, dtype=np.uint8, count=expected).reshape(count, rows, cols)
    debug_print("MNIST", f"loaded {count} images of {rows}x{cols} from {path}")
    return ImageSet(pixels)


def load_idx_labels(path: PathLike) -> LabelSet:
    """
    Load an IDX label file

    Raises:
        IdxFormatError: wrong magic number
        IdxLengthError: fewer labels than the header promises
        LabelDataError: a label outside [0, 10)
    """
    raw = _read_bytes(path)
    if len(raw) >= 4 and struct.unpack(">I", raw[:4])[0] != LABEL_MAGIC:
        raise IdxFormatError(f"{path}: magic 0x{struct.unpack('>I', raw[:4])[0]:08x} "
                             f"is not a label file (0x{LABEL_MAGIC:08x})")
    _, count = _header(raw, 2, path)
    payload = raw[8:]
    if len(payload) < count:
        raise IdxLengthError(f"{path}: payload has {len(payload)} labels, header promises {count}")
    labels = np.frombuffer(payload, dtype=np.uint8, count=count)
    bad = np.flatnonzero(labels >= NUM_CLASSES)
    if bad.size:
        raise LabelDataError(f"{path}: label {labels[bad[0]]} at index {bad[0]} is not a digit class")
    debug_print("MNIST", f"loaded {count} labels from {path}")
    return LabelSet(labels)


def write_idx_images(path: PathLike, pixels: np.ndarray) -> None:
    """Write a uint8 (count, rows, cols) array as an IDX image file"""
    count, rows, cols = pixels.shape
    with open(path, "wb") as f:
        f.write(struct.pack(">4I", IMAGE_MAGIC, count, rows, cols))
        f.write(np.ascontiguousarray(pixels, dtype=np.uint8).tobytes())


def write_idx_labels(path: PathLike, labels: np.ndarray) -> None:
    """Write a uint8 label vector as an IDX label file"""
    with open(path, "wb") as f:
        f.write(struct.pack(">2I", LABEL_MAGIC, len(labels)))
        f.write(np.ascontiguousarray(labels, dtype=np.uint8).tobytes())
