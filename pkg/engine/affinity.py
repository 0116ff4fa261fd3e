"""
Thread-to-core pinning policies.

compact packs worker k onto cpu k (mod cpus); scatter spreads workers
evenly across the available cpus before reusing any.
"""
import os
from typing import List, Optional

from utils.debug import debug_print
from utils.errors import ArgumentError

AFFINITY_POLICIES = ("none", "scatter", "compact")


def available_cpus() -> List[int]:
    """Cpus this process may run on, in ascending order"""
    if hasattr(os, "sched_getaffinity"):
        try:
            return sorted(os.sched_getaffinity(0))
        except OSError:
            pass
    return list(range(os.cpu_count() or 1))


def check_policy(policy: str) -> str:
    if policy not in AFFINITY_POLICIES:
        raise ArgumentError(f"unknown affinity '{policy}' (choose from {', '.join(AFFINITY_POLICIES)})")
    return policy


def cpu_for_worker(policy: str, worker_id: int, workers: int, cpus: List[int]) -> Optional[int]:
    """
    Cpu a worker should be pinned to under a policy

    Returns:
        The cpu number, or None for the `none` policy
    """
    check_policy(policy)
    if policy == "none" or not cpus:
        return None
    n = len(cpus)
    if policy == "compact":
        return cpus[worker_id % n]
    step = max(1, n // max(1, workers))
    return cpus[(worker_id * step + (worker_id * step) // n) % n]


def pin_current_thread(policy: str, worker_id: int, workers: int,
                       cpus: Optional[List[int]] = None) -> bool:
    """
    Pin the calling thread according to a policy

    Silently does nothing where the platform has no thread affinity.

    Returns:
        Whether the thread was pinned
    """
    if policy == "none" or not hasattr(os, "sched_setaffinity"):
        return False
    cpu = cpu_for_worker(policy, worker_id, workers, cpus if cpus is not None else available_cpus())
    if cpu is None:
        return False
    try:
        # pid 0 is the calling thread on Linux
        os.sched_setaffinity(0, {cpu})
    except OSError as e:
        debug_print("Affinity", f"worker {worker_id}: cannot pin to cpu {cpu}: {e}")
        return False
    return True
