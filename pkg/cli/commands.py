"""
Command implementations: train, bench and the model subcommands.
"""
from pathlib import Path
from typing import Dict, Optional

import numpy as np
import pandas as pd

from cli.run_config import RunConfig
from components.hyperparams import Hyperparams
from components.image_set import Dataset
from components.network_config import NetworkConfig
from components.perf_params import CalibrationSet, MachineProfile, PerfModelParams, WorkloadSpec
from components.train_report import TrainReport
from mnist.dataset import load_mnist
from network.config_io import resolve_architecture
from perf.calibration import calibrate, evaluate, load_calibration_csv, write_calibration_csv
from perf.model import predict_time, prediction_accuracy, speedup
from perf.presets import (DEFAULT_EPOCHS, DEFAULT_IMAGES, DEFAULT_THREADS, PHI_CONTENTION,
                          PHI_OPERATION_FACTOR, PHI_PROFILE_PATH, params_for, phi_small_params)
from perf.profile_io import load_params, load_profile, save_params
from perf.whatif import what_if, write_what_if
from trainer.chaos_trainer import ChaosTrainer, train
from utils.debug import debug_print
from utils.errors import ArgumentError, DataError
from utils.message_queue import add_message

BENCH_COLUMNS = ["arch", "workers", "total_seconds", "seconds_per_epoch",
                 "train_images_per_second", "speedup", "errors_tot", "errors_diff",
                 "baseline_speedup"]
PREDICT_COLUMNS = ["i", "it", "ep", "p", "seconds", "minutes", "speedup"]
ACCURACY_COLUMNS = ["measured", "predicted", "alpha_percent"]
BENCH_RUNS_DIR = "runs"


def _out_dir(cfg: RunConfig) -> Path:
    cfg.out.mkdir(parents=True, exist_ok=True)
    return cfg.out


def _hyperparams(cfg: RunConfig) -> Hyperparams:
    return Hyperparams(cfg.eta, cfg.lam, cfg.epochs, cfg.eta_decay)


def _load(cfg: RunConfig):
    config = resolve_architecture(cfg.arch, cfg.seed)
    dataset = load_mnist(cfg.data_dir, cfg.subset, cfg.test_subset)
    debug_print("Commands", f"{config.name}: {dataset}")
    return config, dataset


def cmd_train(cfg: RunConfig) -> TrainReport:
    """
    Train one network and write report.csv and checkpoint.bin

    Only the first worker count of the list is used.
    """
    config, dataset = _load(cfg)
    out = _out_dir(cfg)
    if len(cfg.workers) > 1:
        add_message(f"train uses one worker count, taking {cfg.workers[0]}")
    with ChaosTrainer(config, dataset, cfg.workers[0], _hyperparams(cfg), cfg.affinity, out) as trainer:
        if cfg.warmup:
            trainer.warm_up()
        report = trainer.train()
    # final rewrite so the last row includes the checkpoint time
    report.write_csv(out / "report.csv")
    add_message(f"wrote {out / 'report.csv'}"
                + (f" and {out / 'checkpoint.bin'}" if len(report) else ""))
    return report


def _baseline(cfg: RunConfig, config: NetworkConfig) -> Optional[Dict[str, float]]:
    if cfg.baseline_csv is None:
        return None
    try:
        frame = pd.read_csv(cfg.baseline_csv)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataError(f"cannot read baseline {cfg.baseline_csv}: {e}") from e
    missing = [c for c in ("arch", "total_seconds", "errors_tot") if c not in frame.columns]
    if missing:
        raise DataError(f"{cfg.baseline_csv}: missing columns {', '.join(missing)}")
    rows = frame[frame["arch"] == config.name]
    if rows.empty:
        raise ArgumentError(f"{cfg.baseline_csv} has no baseline for architecture '{config.name}'")
    row = rows.iloc[0]
    return {"total_seconds": float(row["total_seconds"]), "errors_tot": int(row["errors_tot"])}


def run_bench(cfg: RunConfig, config: NetworkConfig, dataset: Dataset) -> pd.DataFrame:
    """
    Train once (or `repeats` times) per worker count with identical work

    Raises:
        ArgumentError: if the worker list does not include 1
    """
    if 1 not in cfg.workers:
        raise ArgumentError("bench needs worker count 1 in --workers as the speedup baseline")
    hp = _hyperparams(cfg)
    baseline = _baseline(cfg, config)
    measured = {}
    for p in sorted(set(cfg.workers)):
        # every run checkpoints per epoch, as `train` does
        run_dir = cfg.out / BENCH_RUNS_DIR / f"workers_{p}"
        reports = [train(config, dataset, p, hp, cfg.affinity, run_dir, cfg.warmup)
                   for _ in range(cfg.repeats)]
        total = float(np.mean([r.total_seconds for r in reports]))
        train_seconds = float(np.mean([r.train_seconds for r in reports]))
        measured[p] = (total, train_seconds, reports[-1].final_test_errors)
        add_message(f"bench {config.name} p={p}: {total:.2f}s, "
                    f"test errors {measured[p][2]}")

    t_1, _, errors_1 = measured[1]
    reference_errors = baseline["errors_tot"] if baseline else errors_1
    rows = []
    for p, (total, train_seconds, errors) in measured.items():
        images = len(dataset.train) * cfg.epochs
        rows.append({
            "arch": config.name,
            "workers": p,
            "total_seconds": total,
            "seconds_per_epoch": total / cfg.epochs if cfg.epochs else 0.0,
            "train_images_per_second": images / train_seconds if train_seconds > 0 else 0.0,
            "speedup": t_1 / total if total > 0 else 1.0,
            "errors_tot": errors,
            "errors_diff": errors - reference_errors,
            "baseline_speedup": baseline["total_seconds"] / total if baseline and total > 0 else np.nan,
        })
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)


def cmd_bench(cfg: RunConfig) -> pd.DataFrame:
    """Run the bench and write bench.csv and calibration.csv"""
    config, dataset = _load(cfg)
    table = run_bench(cfg, config, dataset)
    out = _out_dir(cfg)
    table.to_csv(out / "bench.csv", index=False)

    cal = CalibrationSet()
    for row in table.itertuples(index=False):
        if row.total_seconds > 0:
            cal.add(WorkloadSpec(len(dataset.train), len(dataset.test), cfg.epochs, int(row.workers)),
                    row.total_seconds)
    write_calibration_csv(out / "calibration.csv", cal)
    add_message(f"wrote {out / 'bench.csv'} and {out / 'calibration.csv'}")
    return table


def model_params(cfg: RunConfig) -> PerfModelParams:
    """
    Parameters for the model subcommands

    A parameter file wins; a machine profile gives uncalibrated parameters
    for the architecture; otherwise the coprocessor preset applies.
    """
    if cfg.params_path is not None:
        return load_params(cfg.params_path)
    config = resolve_architecture(cfg.arch)
    if cfg.profile_path is not None:
        return params_for(config, cfg.profile_path)
    if config.name == "small":
        return phi_small_params()
    return params_for(config, PHI_PROFILE_PATH, PHI_OPERATION_FACTOR,
                      PHI_CONTENTION[0][1], PHI_CONTENTION)


def cmd_model(cfg: RunConfig) -> pd.DataFrame:
    """Dispatch calibrate, predict, whatif and accuracy"""
    command = cfg.model_command
    if command == "accuracy":
        alpha = prediction_accuracy(cfg.measured, cfg.predicted)
        table = pd.DataFrame([[cfg.measured, cfg.predicted, alpha]], columns=ACCURACY_COLUMNS)
        table.to_csv(_out_dir(cfg) / "accuracy.csv", index=False)
        add_message(f"accuracy: {alpha:.2f}%")
        return table

    if command == "calibrate":
        config = resolve_architecture(cfg.arch)
        profile = load_profile(cfg.profile_path) if cfg.profile_path else MachineProfile()
        cal = load_calibration_csv(cfg.calibration_csv)
        params = calibrate(config, cal, profile)
        out = _out_dir(cfg)
        save_params(out / "params.txt", params)
        table = evaluate(params, cal)
        table.to_csv(out / "calibration_fit.csv", index=False)
        add_message(f"OperationFactor={params.operation_factor:.6g} "
                    f"MemoryContention={params.memory_contention:.6g}, "
                    f"mean accuracy {table['alpha_percent'].mean():.2f}%")
        return table

    params = model_params(cfg)
    if command == "predict":
        workload = WorkloadSpec(cfg.i, cfg.it, cfg.ep, cfg.p)
        seconds = predict_time(params, workload)
        s_p = speedup(params, workload) if cfg.p >= 1 else np.nan
        table = pd.DataFrame([[cfg.i, cfg.it, cfg.ep, cfg.p, seconds, seconds / 60.0, s_p]],
                             columns=PREDICT_COLUMNS)
        table.to_csv(_out_dir(cfg) / "predict.csv", index=False)
        add_message(f"predicted {seconds:.2f}s ({seconds / 60.0:.2f} min), speedup {s_p:.2f}")
        return table

    if command == "whatif":
        table = what_if(params, cfg.images or DEFAULT_IMAGES, cfg.epoch_grid or DEFAULT_EPOCHS,
                        cfg.threads or DEFAULT_THREADS)
        write_what_if(_out_dir(cfg) / "whatif.csv", table)
        add_message(f"wrote {cfg.out / 'whatif.csv'}")
        return table

    raise ArgumentError(f"unknown model command '{command}'")
