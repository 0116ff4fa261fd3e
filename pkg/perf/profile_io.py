"""
key=value files for machine profiles and calibrated model parameters.
"""
from pathlib import Path
from typing import Dict, Union

from components.perf_params import MachineProfile, PerfModelParams, PARAM_NAMES
from utils.errors import ArgumentError, DataError

_CONTENTION_PREFIX = "contention_"


def read_key_values(path: Union[str, Path]) -> Dict[str, str]:
    """Parse `key = value` lines; `#` starts a comment"""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e
    values = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{line_no}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _number(path, key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise DataError(f"{path}: {key} is not a number: '{value}'") from None


def load_profile(path: Union[str, Path]) -> MachineProfile:
    """Machine profile with core_speed_hz and cpi_floor"""
    values = read_key_values(path)
    missing = [k for k in ("core_speed_hz", "cpi_floor") if k not in values]
    if missing:
        raise DataError(f"{path}: missing {', '.join(missing)}")
    try:
        return MachineProfile(values.get("name", Path(path).stem),
                              _number(path, "core_speed_hz", values["core_speed_hz"]),
                              _number(path, "cpi_floor", values["cpi_floor"]))
    except ArgumentError as e:
        raise DataError(f"{path}: {e}") from e


def save_params(path: Union[str, Path], params: PerfModelParams) -> Path:
    """Write every scalar parameter plus one contention_<p> line per table entry"""
    path = Path(path)
    lines = [f"{name} = {value!r}" for name, value in params.as_dict().items()]
    lines += [f"{_CONTENTION_PREFIX}{p} = {value!r}" for p, value in params.contention_table]
    path.write_text("\n".join(lines) + "\n")
    return path


def load_params(path: Union[str, Path]) -> PerfModelParams:
    values = read_key_values(path)
    scalars = {}
    table = []
    for key, value in values.items():
        if key.startswith(_CONTENTION_PREFIX):
            p = key[len(_CONTENTION_PREFIX):]
            if not p.isdigit():
                raise DataError(f"{path}: bad contention key '{key}'")
            table.append((int(p), _number(path, key, value)))
        elif key in PARAM_NAMES:
            scalars[key] = _number(path, key, value)
        else:
            raise DataError(f"{path}: unknown parameter '{key}'")
    try:
        return PerfModelParams(contention_table=tuple(table), **scalars)
    except ArgumentError as e:
        raise DataError(f"{path}: {e}") from e
