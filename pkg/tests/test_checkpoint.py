import numpy as np
import pytest

from components.hyperparams import Hyperparams
from engine.checkpoint import HEADER, load_checkpoint, read_checkpoint, save_checkpoint
from network.config_io import builtin_config, config_hash
from network.propagation import build_network
from tests.factories import toy_config
from trainer.chaos_trainer import ChaosTrainer
from utils.errors import CheckpointError


def test_save_and_load(tmp_path):
    config = builtin_config("small")
    weights, _ = build_network(config)
    path = save_checkpoint(tmp_path / "ck.bin", weights, config, epoch=3)
    assert path.stat().st_size == HEADER.itemsize + 6405 * 4

    fresh, _ = build_network(config.with_seed(9))
    assert load_checkpoint(path, config, fresh) == 3
    assert fresh.checksum() == weights.checksum()


def test_header_fields(tmp_path):
    config = toy_config()
    weights, layout = build_network(config, np.float64)
    header, payload = read_checkpoint(save_checkpoint(tmp_path / "ck.bin", weights, config, 1))
    assert header["magic"] == b"CHAOSCKP"
    assert int(header["config_hash"]) == config_hash(config)
    assert int(header["width"]) == 8
    assert payload.size == layout.total_weights()
    np.testing.assert_array_equal(payload, weights.flat())


def test_other_architecture_rejected(tmp_path):
    config = builtin_config("small")
    weights, _ = build_network(config)
    path = save_checkpoint(tmp_path / "ck.bin", weights, config, 1)
    other = builtin_config("medium")
    target, _ = build_network(other)
    with pytest.raises(CheckpointError, match="different architecture"):
        load_checkpoint(path, other, target)


def test_bad_magic(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"NOTACKPT" + bytes(64))
    with pytest.raises(CheckpointError, match="bad magic"):
        read_checkpoint(path)


def test_truncated(tmp_path):
    config = toy_config()
    weights, _ = build_network(config)
    path = save_checkpoint(tmp_path / "ck.bin", weights, config, 1)
    path.write_bytes(path.read_bytes()[:-4])
    with pytest.raises(CheckpointError, match="expected"):
        read_checkpoint(path)


def test_trainer_writes_one_checkpoint_per_epoch(tmp_path, toy_dataset):
    config = toy_config()
    with ChaosTrainer(config, toy_dataset, 2, Hyperparams(epochs=3), out_dir=tmp_path) as trainer:
        trainer.train()
        assert trainer.checkpoint_system.writes == 3
        restored, _ = build_network(config)
        assert load_checkpoint(tmp_path / "checkpoint.bin", config, restored) == 3
        assert restored.checksum() == trainer.weights.checksum()
