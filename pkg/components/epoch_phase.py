"""
Epoch Phase component for the CHAOS engine.
"""
from enum import Enum


class EpochPhase(Enum):
    """The steps of one epoch, in execution order"""
    TRAINING = 0
    VALIDATION = 1
    TESTING = 2
