"""
Dynamic work sharing over the images of one phase.
"""
import threading
from typing import Optional


class WorkSampler:
    """
    Shared, monotonically increasing counter over [0, size).

    Workers claim indices first-come; every index is handed out exactly once
    per reset, after which the sampler reports exhaustion with None.
    """

    def __init__(self, size: int = 0):
        self._lock = threading.Lock()
        self._next = 0
        self._size = 0
        self.reset(size)

    def reset(self, size: int) -> None:
        """Bind the sampler to a new phase of `size` images"""
        if size < 0:
            raise ValueError(f"sampler size must be non-negative, got {size}")
        with self._lock:
            self._size = int(size)
            self._next = 0

    def next_index(self) -> Optional[int]:
        """Claim the next unprocessed index, or None once the range is exhausted"""
        with self._lock:
            if self._next >= self._size:
                return None
            index = self._next
            self._next += 1
            return index

    @property
    def size(self) -> int:
        return self._size

    @property
    def claimed(self) -> int:
        """Number of indices handed out since the last reset"""
        with self._lock:
            return min(self._next, self._size)

    @property
    def exhausted(self) -> bool:
        return self.claimed == self._size
