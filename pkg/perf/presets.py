"""
Built-in model parameters for the many-core coprocessor and the small architecture.
"""
from pathlib import Path

from components.network_config import NetworkConfig
from components.perf_params import PerfModelParams, WorkloadSpec
from network.config_io import CONFIG_DIR, builtin_config
from perf.model import derive_constants
from perf.op_count import estimate_ops, estimate_prep
from perf.profile_io import load_profile

PHI_PROFILE_PATH = CONFIG_DIR / "phi7120p.profile"

# Fitted to the small architecture's measured 240- and 480-thread runs
PHI_OPERATION_FACTOR = 25.35
PHI_CONTENTION = ((240, 3.0885e-3), (480, 1.7831e-2))

# Full MNIST, 70 epochs
REFERENCE_WORKLOAD = WorkloadSpec(i=60000, it=10000, ep=70, p=240)

DEFAULT_IMAGES = ((60000, 10000), (120000, 20000), (240000, 40000))
DEFAULT_EPOCHS = (70, 140, 280, 560)
DEFAULT_THREADS = (240, 480)


def params_for(config: NetworkConfig, profile_path: Path = PHI_PROFILE_PATH,
               operation_factor: float = 1.0, memory_contention: float = 0.0,
               contention_table=()) -> PerfModelParams:
    """Model parameters of an architecture on a machine profile, a..g derived"""
    profile = load_profile(profile_path)
    fprop, bprop = estimate_ops(config)
    params = PerfModelParams(prep=estimate_prep(config), fprop=fprop, bprop=bprop,
                             s=profile.core_speed_hz, cpi=profile.cpi_floor,
                             operation_factor=operation_factor,
                             memory_contention=memory_contention,
                             contention_table=tuple(contention_table))
    return derive_constants(params)


def phi_small_params() -> PerfModelParams:
    """Coprocessor preset for the small architecture (the default what-if parameters)"""
    return params_for(builtin_config("small"), PHI_PROFILE_PATH, PHI_OPERATION_FACTOR,
                      PHI_CONTENTION[0][1], PHI_CONTENTION)
