import numpy as np
import pandas as pd
import pytest

from components.epoch_phase import EpochPhase
from components.hyperparams import Hyperparams
from components.image_set import Dataset, SampleSet
from components.layer_spec import Activation, LayerKind, LayerSpec
from components.network_config import NetworkConfig
from components.train_report import REPORT_COLUMNS
from engine.checkpoint import weights_checksum
from engine.work_sampler import WorkSampler
from engine.worker_pool import WorkerPool
from network.config_io import builtin_config
from network.propagation import build_network
from systems.evaluation_system import run_evaluation_phase
from systems.training_system import run_training_phase
from tests.factories import random_samples, toy_config
from tests.reference_net import sequential_sgd
from trainer.chaos_trainer import ChaosTrainer, train
from utils.errors import ArgumentError, InputError
from utils.message_queue import clear_messages, get_messages


def _train_weights(config, dataset, workers, hp):
    with ChaosTrainer(config, dataset, workers, hp) as trainer:
        trainer.train()
        return trainer.weights


def test_single_worker_matches_sequential_sgd(toy_dataset):
    config = toy_config()
    hp = Hyperparams(eta=0.05, lam=0.001, epochs=2)
    chaos = _train_weights(config, toy_dataset, 1, hp)
    oracle = sequential_sgd(config, toy_dataset.train, hp)
    assert chaos.flat().tobytes() == oracle.flat().tobytes()


def test_single_worker_small_net_matches_sequential_sgd():
    config = builtin_config("small")
    samples = random_samples(100, 29 * 29, 10, seed=21)
    hp = Hyperparams(eta=0.01, epochs=1)
    chaos = _train_weights(config, Dataset(samples, samples), 1, hp)
    oracle = sequential_sgd(config, samples, hp)
    assert chaos.flat().tobytes() == oracle.flat().tobytes()


def test_ten_images_single_worker_bitwise_reproducible():
    config = toy_config()
    samples = random_samples(10, 64, 3, seed=4)
    hp = Hyperparams(eta=0.1, epochs=1)
    first = _train_weights(config, Dataset(samples, samples), 1, hp)
    second = _train_weights(config, Dataset(samples, samples), 1, hp)
    assert first.checksum() == second.checksum()


def test_training_phase_processes_every_image_once():
    weights, layout = build_network(toy_config())
    samples = random_samples(1000, 64, 3, seed=5)
    sampler = WorkSampler()
    with WorkerPool(layout, 4) as pool:
        run_training_phase(pool, sampler, weights, samples, Hyperparams(eta=0.01))
        assert sum(s.images_processed for s in pool.states) == 1000
    assert sampler.claimed == 1000
    assert np.all(np.isfinite(weights.flat()))


def test_training_on_empty_set_leaves_weights():
    weights, layout = build_network(toy_config())
    before = weights.checksum()
    empty = SampleSet(np.zeros((0, 64), dtype=np.float32), np.zeros(0, dtype=np.int64))
    with WorkerPool(layout, 2) as pool:
        run_training_phase(pool, WorkSampler(), weights, empty, Hyperparams())
    assert weights.checksum() == before


def test_evaluation_is_pure_and_independent_of_workers():
    weights, layout = build_network(builtin_config("small"))
    samples = random_samples(60, 29 * 29, 10, seed=6)
    before = weights_checksum(weights)
    counts = []
    for workers in (1, 8):
        with WorkerPool(layout, workers) as pool:
            counts.append(run_evaluation_phase(pool, WorkSampler(), weights, samples))
    assert weights_checksum(weights) == before
    assert counts[0] == counts[1]
    assert 0 <= counts[0] <= 60


def test_perfect_network_has_no_errors():
    config = NetworkConfig([
        LayerSpec(LayerKind.INPUT, 1, (1, 3)),
        LayerSpec(LayerKind.OUTPUT, 3, (1, 1), None, Activation.SOFTMAX),
    ])
    weights, layout = build_network(config)
    weights.logical(1)[...] = np.hstack([20.0 * np.eye(3), np.zeros((3, 1))])
    inputs = np.repeat(np.eye(3, dtype=np.float32), 4, axis=0)
    labels = np.repeat(np.arange(3), 4)
    with WorkerPool(layout, 2) as pool:
        assert run_evaluation_phase(pool, WorkSampler(), weights,
                                    SampleSet(inputs, labels.copy())) == 0
        wrong = (labels + 1) % 3
        assert run_evaluation_phase(pool, WorkSampler(), weights, SampleSet(inputs, wrong)) == 12


def test_zero_epochs_gives_empty_report(toy_dataset):
    config = toy_config()
    initial, _ = build_network(config)
    with ChaosTrainer(config, toy_dataset, 2, Hyperparams(epochs=0)) as trainer:
        report = trainer.train()
        assert len(report) == 0
        assert trainer.weights.checksum() == initial.checksum()


def test_worker_count_must_be_positive(toy_dataset):
    with pytest.raises(ArgumentError):
        train(toy_config(), toy_dataset, 0, Hyperparams())


def test_report_rows_and_phase_order(toy_dataset):
    with ChaosTrainer(toy_config(), toy_dataset, 4, Hyperparams(eta=0.05, epochs=3)) as trainer:
        report = trainer.train()
        log = trainer.session.phase_log
    assert [r.epoch for r in report.epochs] == [0, 1, 2]
    assert [e.phase for e in log] == [EpochPhase.TRAINING, EpochPhase.VALIDATION,
                                      EpochPhase.TESTING] * 3
    # every phase drained its sampler before the next began
    assert all(e.claimed == e.size for e in log)
    for record in report.epochs:
        assert record.validation_size == 40 and record.test_size == 20
        assert 0 <= record.validation_errors <= 40
        assert 0 <= record.test_errors <= 20
    frame = report.to_frame()
    assert list(frame.columns) == REPORT_COLUMNS
    assert frame["cumulative_seconds"].is_monotonic_increasing
    assert report.total_seconds == pytest.approx(frame["epoch_seconds"].sum())


def test_multi_worker_training_learns_separable_data():
    rng = np.random.default_rng(12)
    labels = rng.integers(0, 3, size=300)
    inputs = rng.random((300, 64), dtype=np.float32) * 0.2
    for k, label in enumerate(labels):
        inputs[k, 16 * label:16 * label + 16] += 0.8
    samples = SampleSet(inputs.astype(np.float32), labels.astype(np.int64))
    report = train(toy_config(), Dataset(samples, samples), 4, Hyperparams(eta=0.1, epochs=8))
    assert report.final.test_errors < 100


def test_warmup_keeps_weights_and_report(toy_dataset):
    config = toy_config()
    hp = Hyperparams(eta=0.05, epochs=1)
    with ChaosTrainer(config, toy_dataset, 1, hp) as trainer:
        trainer.warm_up()
        trainer.train()
        warmed = trainer.weights.checksum()
    plain = _train_weights(config, toy_dataset, 1, hp)
    assert warmed == plain.checksum()


def test_report_csv(tmp_path, toy_dataset):
    report = train(toy_config(), toy_dataset, 2, Hyperparams(epochs=2), out_dir=tmp_path)
    frame = pd.read_csv(tmp_path / "report.csv")
    assert list(frame.columns) == REPORT_COLUMNS
    assert len(frame) == len(report) == 2
    assert (tmp_path / "checkpoint.bin").is_file()


def test_progress_messages_retained_when_quiet(toy_dataset):
    clear_messages()
    train(toy_config(), toy_dataset, 2, Hyperparams(eta=0.01, epochs=2))
    messages = get_messages()
    assert messages[0].startswith("Training toy on 40 images with 2 workers")
    assert [m.split(":")[0] for m in messages[1:]] == ["epoch 1/2", "epoch 2/2"]


def _digit_labelled(count):
    inputs = np.random.default_rng(8).random((count, 64)).astype(np.float32)
    return SampleSet(inputs, np.arange(count) % 10, "train")


def test_labels_beyond_output_layer_rejected_before_training():
    samples = _digit_labelled(20)
    with pytest.raises(InputError, match="label 3 of image 3"):
        train(toy_config(), Dataset(samples, samples), 1, Hyperparams(eta=0.1, epochs=1))


def test_training_phase_rejects_labels_beyond_output_layer():
    weights, layout = build_network(toy_config())
    before = weights.checksum()
    with WorkerPool(layout, 2) as pool:
        with pytest.raises(InputError):
            run_training_phase(pool, WorkSampler(), weights, _digit_labelled(20), Hyperparams())
        with pytest.raises(InputError):
            run_evaluation_phase(pool, WorkSampler(), weights, _digit_labelled(20))
    assert weights.checksum() == before


def test_negative_label_rejected():
    samples = SampleSet(np.zeros((2, 64), dtype=np.float32), np.array([0, -1]), "test")
    with pytest.raises(InputError, match="label -1"):
        samples.check_labels(3)
