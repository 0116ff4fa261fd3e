"""
Analytical performance model.

Speedup formula over the constants a..g, the execution-time model
T = T_comp + T_mem over operation counts, memory contention overhead and
prediction accuracy. All functions are pure.
"""
from typing import Iterable, Tuple

import numpy as np

from components.perf_params import PerfModelParams, WorkloadSpec
from utils.errors import ArgumentError


def _sequential_and_epoch_terms(params: PerfModelParams, w: WorkloadSpec, p_i: int, p_it: int):
    sequential = params.a * w.i + params.b * w.it + params.c
    per_epoch = params.d
    if p_i:
        per_epoch += (params.e * w.i + params.f * w.i) / p_i
    if p_it:
        per_epoch += params.g * w.it / p_it
    return sequential + per_epoch * w.ep


def speedup(params: PerfModelParams, w: WorkloadSpec) -> float:
    """
    T_1 / T_p of the speedup formula, with p clamped to the image counts

    Raises:
        ArgumentError: if p < 1
    """
    if w.p < 1:
        raise ArgumentError(f"speedup needs p >= 1, got {w.p}")
    t_1 = _sequential_and_epoch_terms(params, w, min(1, w.i), min(1, w.it))
    t_p = _sequential_and_epoch_terms(params, w, w.p_i, w.p_it)
    if t_p == 0:
        return 1.0
    return t_1 / t_p


def contention_for(params: PerfModelParams, p: int) -> float:
    """
    Memory contention at a thread count

    Interpolates the contention table linearly (clamped at its ends); falls
    back to the scalar contention when the table is empty.
    """
    if not params.contention_table:
        return params.memory_contention
    ps, values = zip(*params.contention_table)
    return float(np.interp(p, ps, values))


def mem_overhead(params: PerfModelParams, w: WorkloadSpec) -> float:
    """
    T_mem = MemoryContention * i * ep / p

    Raises:
        ArgumentError: if p < 1
    """
    if w.p < 1:
        raise ArgumentError(f"memory overhead needs p >= 1, got {w.p}")
    return contention_for(params, w.p) * w.i * w.ep / w.p


def computation_ops(params: PerfModelParams, w: WorkloadSpec) -> float:
    """Operation count of T_comp before scaling by CPI * OperationFactor / s"""
    ops = params.prep + 4 * w.i + 2 * w.it + 10 * w.ep
    if w.p_i:
        ops += (params.fprop + params.bprop) * w.i / w.p_i * w.ep
        ops += params.fprop * w.i / w.p_i * w.ep
    if w.p_it:
        ops += params.fprop * w.it / w.p_it * w.ep
    return ops


def predict_time(params: PerfModelParams, w: WorkloadSpec) -> float:
    """
    Predicted wall-clock seconds of a workload: T_comp + T_mem

    T_comp = ((Prep + 4i + 2it + 10ep)/s + (FProp+BProp)/s * i/p_i * ep
              + FProp/s * i/p_i * ep + FProp/s * it/p_it * ep) * CPI * OperationFactor
    """
    t_comp = computation_ops(params, w) / params.s * params.cpi * params.operation_factor
    t_mem = mem_overhead(params, w) if w.p >= 1 else 0.0
    return t_comp + t_mem


def model_speedup(params: PerfModelParams, w: WorkloadSpec) -> float:
    """predict_time at p=1 over predict_time at p (memory overhead included)"""
    return predict_time(params, w.with_p(1)) / predict_time(params, w)


def prediction_accuracy(measured: float, predicted: float) -> float:
    """
    Relative deviation |measured - predicted| / predicted in percent

    Raises:
        ArgumentError: if predicted is zero
    """
    if predicted == 0:
        raise ArgumentError("prediction accuracy is undefined for a predicted time of 0")
    return abs(measured - predicted) / predicted * 100.0


def mean_accuracy(pairs: Iterable[Tuple[float, float]]) -> float:
    """Average accuracy over (measured, predicted) pairs"""
    values = [prediction_accuracy(m, p) for m, p in pairs]
    if not values:
        raise ArgumentError("mean accuracy needs at least one pair")
    return float(np.mean(values))


def derive_constants(params: PerfModelParams) -> PerfModelParams:
    """
    Fill a..g from the operation counts so both model forms agree

    With k = CPI * OperationFactor / s: a = 4k, b = 2k, c = Prep*k, d = 10k,
    e = (FProp + BProp)*k, f = g = FProp*k.
    """
    k = params.cpi * params.operation_factor / params.s
    return params.replace(a=4 * k, b=2 * k, c=params.prep * k, d=10 * k,
                          e=(params.fprop + params.bprop) * k,
                          f=params.fprop * k, g=params.fprop * k)
