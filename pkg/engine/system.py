"""
Phase system module for the CHAOS engine.
Defines the interface for the per-epoch phases and the registry that runs them.
"""
from abc import ABC, abstractmethod
from typing import List

from utils.debug import debug_print


class PhaseSystem(ABC):
    """
    Base class for all epoch phases.
    A phase returns only after every worker has joined (a full barrier).
    """

    def __init__(self, name: str, priority: int = 0):
        self.name = name
        # Priority determines the order of phase execution (lower runs first)
        self._priority: int = priority

    @property
    def priority(self) -> int:
        """Get the phase priority"""
        return self._priority

    @abstractmethod
    def update(self, context, epoch: int) -> None:
        """
        Run this phase for one epoch

        Args:
            context: The training session holding weights, workers and data
            epoch: Zero-based epoch index
        """
        pass


class SystemRegistry:
    """
    Manages all phase systems and their execution order.
    """

    def __init__(self):
        self._systems: List[PhaseSystem] = []
        self._initialized = False

    def add_system(self, system: PhaseSystem) -> None:
        """Add a phase to the registry"""
        self._systems.append(system)
        self._initialized = False

    def initialize(self) -> None:
        """Initialize the registry by sorting phases by priority"""
        # stable sort keeps insertion order among equal priorities
        self._systems.sort(key=lambda s: s.priority)
        self._initialized = True

    def update_all(self, context, epoch: int) -> None:
        """Run all phases in priority order"""
        if not self._initialized:
            self.initialize()

        for system in self._systems:
            debug_print("Registry", f"epoch {epoch}: {system.name}")
            system.update(context, epoch)
