"""
Calibration of the execution-time model from measured runs.

Operation counts come from the architecture and s/CPI from the machine
profile; OperationFactor and MemoryContention are fitted. Predicted time is
linear in both, T = OF * C + MC * M, so a non-negative least-squares solve on
relative residuals seeds the fit, a small multiplicative grid refines the
seed, and a bounded least-squares solve on log-time residuals finishes it.
"""
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import least_squares, nnls

from components.network_config import NetworkConfig
from components.perf_params import CalibrationSet, MachineProfile, PerfModelParams, WorkloadSpec
from perf.model import computation_ops, derive_constants, predict_time, prediction_accuracy
from perf.op_count import estimate_ops, estimate_prep
from utils.debug import debug_print
from utils.errors import CalibrationError, DataError

CALIBRATION_COLUMNS = ["i", "it", "ep", "p", "seconds"]

_GRID = np.array([0.5, 0.8, 0.9, 1.0, 1.1, 1.25, 2.0])
_MIN_FACTOR = 1e-12


def _design(base: PerfModelParams, cal: CalibrationSet) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    # C: computation seconds at OperationFactor 1, M: image-epochs per thread
    comp = np.array([computation_ops(base, w) / base.s * base.cpi for w, _ in cal.points])
    mem = np.array([w.i * w.ep / w.p for w, _ in cal.points], dtype=np.float64)
    measured = np.array([t for _, t in cal.points], dtype=np.float64)
    return comp, mem, measured


def _log_residuals(x: np.ndarray, comp, mem, measured) -> np.ndarray:
    predicted = x[0] * comp + x[1] * mem
    return np.log(np.maximum(predicted, 1e-300)) - np.log(measured)


def calibrate(config: NetworkConfig, cal: CalibrationSet, profile: MachineProfile) -> PerfModelParams:
    """
    Fit OperationFactor and MemoryContention to measured runs

    Args:
        config: Architecture that was measured
        cal: Measured (workload, seconds) pairs
        profile: Machine the runs were measured on

    Returns:
        Parameters with a..g derived from the fitted values

    Raises:
        CalibrationError: without at least two distinct thread counts
    """
    if len(cal) == 0:
        raise CalibrationError("calibration set is empty")
    if len(cal.distinct_p()) < 2:
        raise CalibrationError(f"calibration needs runs at two or more thread counts, "
                               f"got p={cal.distinct_p()}")
    for w, _ in cal.points:
        if w.p < 1:
            raise CalibrationError(f"calibration run with p={w.p}")

    fprop, bprop = estimate_ops(config)
    base = PerfModelParams(prep=estimate_prep(config), fprop=fprop, bprop=bprop,
                           s=profile.core_speed_hz, cpi=profile.cpi_floor)
    comp, mem, measured = _design(base, cal)
    if not np.all(comp > 0):
        raise CalibrationError("workloads without computation cannot be calibrated")

    seed, _ = nnls(np.column_stack([comp, mem]) / measured[:, None], np.ones_like(measured))
    if seed[0] <= 0:
        seed[0] = float(np.median(measured / comp))

    # grid refinement around the seed
    best, best_cost = seed, np.inf
    for of_scale in _GRID:
        for mc_scale in _GRID:
            x = np.array([seed[0] * of_scale, seed[1] * mc_scale])
            cost = float(np.sum(_log_residuals(x, comp, mem, measured) ** 2))
            if cost < best_cost:
                best, best_cost = x, cost

    start = np.array([max(best[0], _MIN_FACTOR), max(best[1], 0.0)])
    result = least_squares(_log_residuals, start, args=(comp, mem, measured),
                           bounds=([_MIN_FACTOR, 0.0], [np.inf, np.inf]),
                           x_scale="jac", xtol=1e-12, ftol=1e-12, gtol=1e-12, method="trf")
    operation_factor, contention = (float(v) for v in result.x)
    debug_print("Calibration", f"{len(cal)} points, p={cal.distinct_p()}: seed={seed.tolist()}, "
                               f"fit OperationFactor={operation_factor:.6g}, "
                               f"MemoryContention={contention:.6g}, cost={result.cost:.3g}")
    return derive_constants(base.replace(operation_factor=operation_factor,
                                         memory_contention=contention))


def evaluate(params: PerfModelParams, cal: CalibrationSet) -> pd.DataFrame:
    """Measured against predicted time for every point, with accuracy in percent"""
    rows = []
    for w, measured in cal.points:
        predicted = predict_time(params, w)
        rows.append({"i": w.i, "it": w.it, "ep": w.ep, "p": w.p, "measured": measured,
                     "predicted": predicted,
                     "alpha_percent": prediction_accuracy(measured, predicted)})
    return pd.DataFrame(rows, columns=["i", "it", "ep", "p", "measured", "predicted", "alpha_percent"])


def load_calibration_csv(path: Union[str, Path]) -> CalibrationSet:
    """Read (i, it, ep, p, seconds) rows"""
    path = Path(path)
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataError(f"cannot read calibration file {path}: {e}") from e
    missing = [c for c in CALIBRATION_COLUMNS if c not in frame.columns]
    if missing:
        raise DataError(f"{path}: missing columns {', '.join(missing)}")
    cal = CalibrationSet()
    for row in frame.itertuples(index=False):
        cal.add(WorkloadSpec(int(row.i), int(row.it), int(row.ep), int(row.p)), float(row.seconds))
    return cal


def write_calibration_csv(path: Union[str, Path], cal: CalibrationSet) -> Path:
    path = Path(path)
    frame = pd.DataFrame([(w.i, w.it, w.ep, w.p, t) for w, t in cal.points],
                         columns=CALIBRATION_COLUMNS)
    frame.to_csv(path, index=False)
    return path
