"""
Hyperparams component for the CHAOS engine.
"""
from utils.errors import ArgumentError


class Hyperparams:
    """Learning rate, decay and epoch count of a training run"""

    def __init__(self, eta: float = 0.001, lam: float = 0.0, epochs: int = 1,
                 eta_decay: float = 1.0):
        """
        Initialize hyperparameters

        Args:
            eta: Learning rate (per-update step size), must be positive
            lam: Weight-decay coefficient applied at publication time, nonnegative
            epochs: Number of epochs
            eta_decay: Multiplicative per-epoch learning-rate factor (1.0 keeps eta constant)
        """
        if not eta > 0:
            raise ArgumentError(f"learning rate must be positive, got {eta}")
        if lam < 0:
            raise ArgumentError(f"decay must be nonnegative, got {lam}")
        if epochs < 0:
            raise ArgumentError(f"epoch count must be nonnegative, got {epochs}")
        if not eta_decay > 0:
            raise ArgumentError(f"learning-rate decay factor must be positive, got {eta_decay}")
        self.eta = float(eta)
        self.lam = float(lam)
        self.epochs = int(epochs)
        self.eta_decay = float(eta_decay)

    def eta_for_epoch(self, epoch: int) -> float:
        """Learning rate in effect during the given (zero-based) epoch"""
        return self.eta * (self.eta_decay ** epoch)

    def __str__(self) -> str:
        return f"Hyperparams(eta={self.eta}, lambda={self.lam}, epochs={self.epochs})"
