"""
Exception hierarchy for the CHAOS trainer.
Every error carries the process exit code the CLI reports for it.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class ChaosError(Exception):
    """Base class for all trainer errors"""
    exit_code = EXIT_RUNTIME


class ConfigError(ChaosError):
    """Invalid network architecture or dimension chain"""
    exit_code = EXIT_USAGE


class ArgumentError(ChaosError):
    """Invalid argument to an operation or command"""
    exit_code = EXIT_USAGE


class InputError(ChaosError):
    """Invalid input value such as an out-of-range label"""
    exit_code = EXIT_USAGE


class DataError(ChaosError):
    """Problem with a dataset file"""
    exit_code = EXIT_DATA


class IdxFormatError(DataError):
    """IDX file with an unexpected magic number or header"""


class IdxLengthError(DataError):
    """IDX file whose payload is shorter than its header promises"""


class LabelDataError(DataError):
    """Label value outside the ten digit classes"""


class CalibrationError(ChaosError):
    """Not enough measurements to fit the performance model"""


class CheckpointError(ChaosError):
    """Checkpoint file that does not match the network"""
