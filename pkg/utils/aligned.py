"""
Aligned allocation helpers for flat scalar arenas.
"""
import numpy as np

ALIGN_BYTES = 64


def aligned_zeros(count: int, dtype, alignment: int = ALIGN_BYTES) -> np.ndarray:
    """
    Allocate a zeroed 1-D array whose first element sits on an alignment boundary

    Args:
        count: Number of elements
        dtype: Element type
        alignment: Required byte alignment of the data pointer

    Returns:
        A contiguous array view of exactly `count` elements
    """
    dtype = np.dtype(dtype)
    raw = np.zeros(count * dtype.itemsize + alignment, dtype=np.uint8)
    offset = (-raw.ctypes.data) % alignment
    return raw[offset:offset + count * dtype.itemsize].view(dtype)


def round_up(count: int, dtype, alignment: int = ALIGN_BYTES) -> int:
    """Round an element count up so that it spans a whole number of alignment blocks"""
    per_block = max(1, alignment // np.dtype(dtype).itemsize)
    return -(-count // per_block) * per_block


def is_aligned(array: np.ndarray, alignment: int = ALIGN_BYTES) -> bool:
    """Check whether an array's data pointer is aligned"""
    return array.ctypes.data % alignment == 0
