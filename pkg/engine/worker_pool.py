"""
Worker pool module for the CHAOS engine.
Owns the worker replicas and runs one task per worker behind a barrier.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, TypeVar

from components.worker_state import WorkerState
from engine.affinity import available_cpus, check_policy, pin_current_thread
from network.layout import NetworkLayout
from utils.debug import debug_print
from utils.errors import ArgumentError, ChaosError

T = TypeVar("T")


class WorkerPool:
    """
    p workers, each with an exclusively owned WorkerState, backed by p threads.
    """

    def __init__(self, layout: NetworkLayout, workers: int, affinity: str = "none"):
        """
        Create the worker replicas

        Args:
            layout: Arena plan shared by all replicas
            workers: Worker count p
            affinity: Pinning policy (none, scatter or compact)

        Raises:
            ArgumentError: if p < 1 or the policy is unknown
        """
        if workers < 1:
            raise ArgumentError(f"worker count must be at least 1, got {workers}")
        self.layout = layout
        self.affinity = check_policy(affinity)
        self.states: List[WorkerState] = [WorkerState(layout, k) for k in range(workers)]
        self._cpus = available_cpus()
        self._executor = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="chaos-worker")
        debug_print("WorkerPool", f"{workers} workers, affinity={affinity}, {len(self._cpus)} cpus")

    @property
    def size(self) -> int:
        return len(self.states)

    def _task(self, fn: Callable[[WorkerState], T], state: WorkerState) -> T:
        pin_current_thread(self.affinity, state.worker_id, self.size, self._cpus)
        return fn(state)

    def run_phase(self, fn: Callable[[WorkerState], T]) -> List[T]:
        """
        Run fn once per worker and wait for all of them

        The first worker exception is re-raised after every worker has finished.

        Returns:
            Per-worker results in worker order
        """
        if self._executor is None:
            raise ChaosError("worker pool has been shut down")
        futures = [self._executor.submit(self._task, fn, state) for state in self.states]
        # barrier: collect every result before surfacing a failure
        errors = [f.exception() for f in futures]
        for error in errors:
            if error is not None:
                raise error
        return [f.result() for f in futures]

    def shutdown(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    def __enter__(self) -> "WorkerPool":
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown()
