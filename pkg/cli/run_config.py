"""
Run configuration for the command line.

Every option resolves with the precedence: command-line flag, then the
CHAOS_* environment variable, then the built-in default.
"""
import argparse
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Mapping, Optional, Sequence, Tuple

from engine.affinity import AFFINITY_POLICIES
from utils.errors import ArgumentError

DEFAULTS = {
    "arch": "small",
    "data_dir": "data",
    "epochs": 1,
    "workers": [1],
    "subset": None,
    "eta": 0.001,
    "lam": 0.0,
    "seed": 0,
    "out": "out",
    "affinity": "none",
    "baseline_csv": None,
    "debug": False,
}

# RunConfig field -> environment variable
ENV_VARS = {
    "arch": "CHAOS_ARCH",
    "data_dir": "CHAOS_DATA_DIR",
    "epochs": "CHAOS_EPOCHS",
    "workers": "CHAOS_WORKERS",
    "subset": "CHAOS_SUBSET",
    "eta": "CHAOS_ETA",
    "lam": "CHAOS_LAMBDA",
    "seed": "CHAOS_SEED",
    "out": "CHAOS_OUT",
    "affinity": "CHAOS_AFFINITY",
    "baseline_csv": "CHAOS_BASELINE_CSV",
    "debug": "CHAOS_DEBUG",
}


def parse_workers(text: str) -> List[int]:
    """Comma-separated worker counts, each at least 1"""
    try:
        counts = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ArgumentError(f"worker counts must be integers: '{text}'") from None
    if not counts:
        raise ArgumentError("at least one worker count is required")
    for count in counts:
        if count < 1:
            raise ArgumentError(f"worker counts must be at least 1, got {count}")
    return counts


def parse_images(text: str) -> List[Tuple[int, int]]:
    """Comma-separated `i:it` pairs"""
    pairs = []
    for part in text.split(","):
        try:
            i, it = part.split(":")
            pairs.append((int(i), int(it)))
        except ValueError:
            raise ArgumentError(f"image scales are i:it pairs, got '{part}'") from None
    return pairs


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ArgumentError(f"expected comma-separated integers, got '{text}'") from None


def _parse_bool(text: str) -> bool:
    return text.lower() in ("1", "true", "yes", "on")


def _parse_optional_int(text: str) -> Optional[int]:
    return None if text in ("", "all") else int(text)


_ENV_PARSERS: Mapping[str, Callable[[str], object]] = {
    "epochs": int,
    "workers": parse_workers,
    "subset": _parse_optional_int,
    "eta": float,
    "lam": float,
    "seed": int,
    "debug": _parse_bool,
}


@dataclass
class RunConfig:
    """Resolved options of one command-line invocation"""
    command: str
    arch: str = DEFAULTS["arch"]
    data_dir: Path = Path(DEFAULTS["data_dir"])
    epochs: int = DEFAULTS["epochs"]
    workers: List[int] = field(default_factory=lambda: list(DEFAULTS["workers"]))
    subset: Optional[int] = None
    test_subset: Optional[int] = None
    eta: float = DEFAULTS["eta"]
    lam: float = DEFAULTS["lam"]
    eta_decay: float = 1.0
    seed: int = DEFAULTS["seed"]
    out: Path = Path(DEFAULTS["out"])
    affinity: str = DEFAULTS["affinity"]
    baseline_csv: Optional[Path] = None
    debug: bool = False
    quiet: bool = False
    warmup: bool = False
    repeats: int = 1
    # model subcommands
    model_command: Optional[str] = None
    i: int = 60000
    it: int = 10000
    ep: int = 70
    p: int = 1
    params_path: Optional[Path] = None
    profile_path: Optional[Path] = None
    calibration_csv: Optional[Path] = None
    measured: Optional[float] = None
    predicted: Optional[float] = None
    images: Optional[List[Tuple[int, int]]] = None
    epoch_grid: Optional[List[int]] = None
    threads: Optional[List[int]] = None

    def validate(self) -> "RunConfig":
        if self.epochs < 0:
            raise ArgumentError(f"--epochs must be nonnegative, got {self.epochs}")
        for count in self.workers:
            if count < 1:
                raise ArgumentError(f"worker counts must be at least 1, got {count}")
        if self.subset is not None and self.subset < 0:
            raise ArgumentError(f"--subset must be nonnegative, got {self.subset}")
        if self.test_subset is not None and self.test_subset < 0:
            raise ArgumentError(f"--test-subset must be nonnegative, got {self.test_subset}")
        if self.repeats < 1:
            raise ArgumentError(f"--repeats must be at least 1, got {self.repeats}")
        if self.affinity not in AFFINITY_POLICIES:
            raise ArgumentError(f"unknown affinity '{self.affinity}'")
        return self


class _Parser(argparse.ArgumentParser):
    """ArgumentParser raising ArgumentError instead of exiting"""

    def error(self, message):
        raise ArgumentError(message)


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    # defaults stay None so environment variables can fill the gaps
    parser.add_argument("--arch", help="small, medium, large or a path to an architecture file")
    parser.add_argument("--data-dir", dest="data_dir", help="directory holding the MNIST IDX files")
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--workers", type=parse_workers, help="comma-separated worker counts")
    parser.add_argument("--subset", type=int, help="use the first N training images")
    parser.add_argument("--test-subset", dest="test_subset", type=int,
                        help="use the first N test images")
    parser.add_argument("--eta", type=float, help="learning rate")
    parser.add_argument("--lambda", dest="lam", type=float, help="weight decay")
    parser.add_argument("--eta-decay", dest="eta_decay", type=float, default=1.0,
                        help="per-epoch learning-rate factor")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--affinity", choices=AFFINITY_POLICIES)
    parser.add_argument("--baseline-csv", dest="baseline_csv",
                        help="cross-machine baseline (arch,total_seconds,errors_tot)")
    parser.add_argument("--warmup", action="store_true", help="run an untimed warm-up epoch")
    parser.add_argument("--repeats", type=int, default=1, help="bench runs per worker count")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--debug", action="store_true", default=None, help="print debug output")
    parser.add_argument("--quiet", action="store_true", help="suppress progress messages")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chaos", description="CHAOS parallel CNN trainer and performance model")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    train = commands.add_parser("train", help="train a network and write report and checkpoint")
    _add_run_options(train)
    _add_common(train)

    bench = commands.add_parser("bench", help="train once per worker count and compare")
    _add_run_options(bench)
    _add_common(bench)

    model = commands.add_parser("model", help="query the performance model")
    sub = model.add_subparsers(dest="model_command", required=True, parser_class=_Parser)
    for name, text in (("calibrate", "fit the model to measured runs"),
                       ("predict", "predict execution time of one workload"),
                       ("whatif", "predicted minutes over an image/epoch/thread grid"),
                       ("accuracy", "relative deviation of a measured from a predicted time")):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--arch")
        cmd.add_argument("--out")
        cmd.add_argument("--params", dest="params_path", help="calibrated parameter file")
        cmd.add_argument("--profile", dest="profile_path", help="machine profile file")
        _add_common(cmd)
        if name == "calibrate":
            cmd.add_argument("--calibration-csv", dest="calibration_csv", required=True)
        elif name == "predict":
            cmd.add_argument("--i", type=int, default=60000)
            cmd.add_argument("--it", type=int, default=10000)
            cmd.add_argument("--ep", type=int, default=70)
            cmd.add_argument("--p", type=int, default=1)
        elif name == "whatif":
            cmd.add_argument("--images", type=parse_images, help="i:it pairs")
            cmd.add_argument("--epoch-grid", dest="epoch_grid", type=parse_int_list)
            cmd.add_argument("--threads", type=parse_int_list)
        else:
            cmd.add_argument("--measured", type=float, required=True)
            cmd.add_argument("--predicted", type=float, required=True)
    return parser


def _resolve(name: str, flag_value, env: Mapping[str, str]):
    if flag_value is not None:
        return flag_value
    raw = env.get(ENV_VARS[name])
    if raw is not None and raw != "":
        parse = _ENV_PARSERS.get(name, str)
        try:
            return parse(raw)
        except ValueError:
            raise ArgumentError(f"{ENV_VARS[name]}={raw!r} is not valid") from None
    return DEFAULTS[name]


def resolve_run_config(argv: Optional[Sequence[str]] = None,
                       env: Optional[Mapping[str, str]] = None) -> RunConfig:
    """
    Parse arguments and apply environment and default fallbacks

    Args:
        argv: Command-line arguments without the program name
        env: Environment mapping (os.environ when omitted)

    Raises:
        ArgumentError: on invalid flags or values
    """
    env = os.environ if env is None else env
    args = vars(build_parser().parse_args(argv))
    config = RunConfig(command=args.pop("command"))
    for name in ENV_VARS:
        value = _resolve(name, args.pop(name, None), env)
        if name in ("data_dir", "out", "baseline_csv") and value is not None:
            value = Path(value)
        setattr(config, name, value)
    for name, value in args.items():
        if value is None:
            continue
        if name in ("params_path", "profile_path", "calibration_csv"):
            value = Path(value)
        setattr(config, name, value)
    return config.validate()
