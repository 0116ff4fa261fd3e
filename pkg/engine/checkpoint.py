"""
Checkpoint files: a little-endian flat dump of the logical weights.

Header (packed): magic b"CHAOSCKP", u32 version, u64 config hash, u32 epoch,
u8 scalar width (4 = float32, 8 = float64), u64 scalar count. The payload
follows, layer by layer, unit by unit, each unit's bias last.
"""
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from components.network_config import NetworkConfig
from components.weight_store import WeightStore
from network.config_io import config_hash
from utils.debug import debug_print
from utils.errors import CheckpointError

MAGIC = b"CHAOSCKP"
VERSION = 1

HEADER = np.dtype([
    ("magic", "S8"),
    ("version", "<u4"),
    ("config_hash", "<u8"),
    ("epoch", "<u4"),
    ("width", "u1"),
    ("count", "<u8"),
])
_SCALARS = {4: np.dtype("<f4"), 8: np.dtype("<f8")}


def weights_checksum(weights: WeightStore) -> str:
    """Digest of the logical weights"""
    return weights.checksum()


def save_checkpoint(path: Union[str, Path], weights: WeightStore, config: NetworkConfig,
                    epoch: int) -> Path:
    """
    Write the weights of a network after an epoch

    Args:
        path: Destination file
        weights: Weight store to dump
        config: Architecture the weights belong to
        epoch: Number of completed epochs

    Returns:
        The written path
    """
    path = Path(path)
    payload = weights.flat().astype(_SCALARS[weights.dtype.itemsize], copy=False)
    header = np.zeros(1, dtype=HEADER)
    header["magic"] = MAGIC
    header["version"] = VERSION
    header["config_hash"] = config_hash(config)
    header["epoch"] = epoch
    header["width"] = weights.dtype.itemsize
    header["count"] = payload.size
    try:
        with open(path, "wb") as f:
            f.write(header.tobytes())
            f.write(payload.tobytes())
    except OSError as e:
        raise CheckpointError(f"cannot write checkpoint {path}: {e}") from e
    debug_print("Checkpoint", f"epoch {epoch}: {payload.size} weights -> {path}")
    return path


def read_checkpoint(path: Union[str, Path]) -> Tuple[np.void, np.ndarray]:
    """Parse a checkpoint file into its header record and weight payload"""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e
    if len(raw) < HEADER.itemsize:
        raise CheckpointError(f"{path}: file too short for a checkpoint header")
    header = np.frombuffer(raw, dtype=HEADER, count=1)[0]
    if header["magic"] != MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint (bad magic)")
    if header["version"] != VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {header['version']}")
    width = int(header["width"])
    if width not in _SCALARS:
        raise CheckpointError(f"{path}: unsupported scalar width {width}")
    count = int(header["count"])
    expected = HEADER.itemsize + count * width
    if len(raw) != expected:
        raise CheckpointError(f"{path}: expected {expected} bytes, found {len(raw)}")
    payload = np.frombuffer(raw, dtype=_SCALARS[width], count=count, offset=HEADER.itemsize)
    return header, payload


def load_checkpoint(path: Union[str, Path], config: NetworkConfig, weights: WeightStore) -> int:
    """
    Restore weights from a checkpoint written for the same architecture

    Args:
        path: Checkpoint file
        config: Architecture the weights must belong to
        weights: Store to overwrite

    Returns:
        The epoch recorded in the checkpoint

    Raises:
        CheckpointError: on a malformed file, a config-hash mismatch or a size mismatch
    """
    header, payload = read_checkpoint(path)
    if int(header["config_hash"]) != config_hash(config):
        raise CheckpointError(f"{path}: checkpoint was written for a different architecture")
    if payload.size != weights.layout.total_weights():
        raise CheckpointError(f"{path}: {payload.size} weights, network has "
                              f"{weights.layout.total_weights()}")
    weights.load_flat(payload)
    return int(header["epoch"])
