import pytest

from components.layer_spec import LayerKind, LayerSpec
from components.network_config import NetworkConfig
from components.perf_params import PerfModelParams, WorkloadSpec
from network.config_io import builtin_config
from perf.model import (contention_for, derive_constants, mean_accuracy, mem_overhead,
                        model_speedup, predict_time, prediction_accuracy, speedup)
from perf.op_count import estimate_ops, estimate_prep, layer_ops
from perf.presets import REFERENCE_WORKLOAD, phi_small_params
from utils.errors import ArgumentError


@pytest.fixture
def phi():
    return phi_small_params()


def test_small_operation_counts():
    rows = layer_ops(builtin_config("small"))
    conv1, full = rows[0], rows[4]
    assert conv1.kind == LayerKind.CONV and conv1.fprop == 54080 + 3380
    assert full.kind == LayerKind.FULL and full.fprop == 4550 + 50
    assert estimate_ops(builtin_config("small")) == (171150, 278290)
    assert estimate_prep(builtin_config("small")) == 6405


def test_input_only_network_has_no_operations():
    config = NetworkConfig([LayerSpec(LayerKind.INPUT, 1, (29, 29))])
    assert estimate_ops(config) == (0, 0)
    assert estimate_prep(config) == 0


def test_speedup_of_one_unit_is_one(phi):
    for w in (REFERENCE_WORKLOAD, WorkloadSpec(10, 3, 0, 1), WorkloadSpec(0, 0, 5, 1)):
        assert speedup(phi, w.with_p(1)) == 1.0


def test_zero_overhead_is_linear():
    params = PerfModelParams(e=1.0, f=1.0, g=1.0)
    for p in (1, 2, 4, 8, 64, 1024):
        assert speedup(params, WorkloadSpec(1024, 1024, 3, p)) == p


def test_speedup_clamps_at_image_count():
    params = PerfModelParams(a=0.1, c=1.0, d=0.5, e=2.0, f=1.0, g=1.0)
    w = WorkloadSpec(100, 50, 2)
    values = [speedup(params, w.with_p(p)) for p in (1, 2, 10, 50, 100)]
    assert values == sorted(values)
    assert speedup(params, w.with_p(100)) == speedup(params, w.with_p(200))


def test_speedup_is_sublinear_beyond_sixty(phi):
    s60 = speedup(phi, REFERENCE_WORKLOAD.with_p(60))
    s240 = speedup(phi, REFERENCE_WORKLOAD.with_p(240))
    assert s60 / 60 > s240 / 240


def test_speedup_needs_a_unit(phi):
    with pytest.raises(ArgumentError):
        speedup(phi, REFERENCE_WORKLOAD.with_p(0))


def test_zero_epochs_is_preparation_only(phi):
    w = WorkloadSpec(60000, 10000, 0, 240)
    expected = (phi.prep + 4 * 60000 + 2 * 10000) / phi.s * phi.cpi * phi.operation_factor
    assert predict_time(phi, w) == pytest.approx(expected, rel=1e-15)


def test_coprocessor_reference_times(phi):
    assert predict_time(phi, REFERENCE_WORKLOAD) / 60 == pytest.approx(8.9, abs=0.3)
    assert predict_time(phi, REFERENCE_WORKLOAD.with_p(480)) / 60 == pytest.approx(6.6, abs=0.3)


def test_doubling_images_doubles_time(phi):
    base = predict_time(phi, REFERENCE_WORKLOAD)
    double = predict_time(phi, WorkloadSpec(120000, 20000, 70, 240))
    assert double / base == pytest.approx(2.0, rel=0.02)


def test_predict_time_monotonic(phi):
    w = WorkloadSpec(6000, 1000, 5)
    times = [predict_time(phi, w.with_p(p)) for p in (1, 2, 4, 60, 240, 999)]
    assert all(a > b for a, b in zip(times, times[1:]))
    assert predict_time(phi, WorkloadSpec(6000, 1000, 6, 4)) > predict_time(phi, w.with_p(4))
    assert predict_time(phi, WorkloadSpec(6001, 1000, 5, 4)) > predict_time(phi, w.with_p(4))


def test_memory_overhead():
    params = PerfModelParams(memory_contention=1e-6)
    assert mem_overhead(params, WorkloadSpec(60000, 10000, 15, 240)) == pytest.approx(3.75e-3, rel=1e-12)
    assert mem_overhead(PerfModelParams(), REFERENCE_WORKLOAD) == 0.0
    w = WorkloadSpec(60000, 10000, 15, 8)
    assert mem_overhead(params, w.with_p(16)) == mem_overhead(params, w) / 2
    with pytest.raises(ArgumentError):
        mem_overhead(params, w.with_p(0))


def test_contention_table_interpolates_and_clamps():
    params = PerfModelParams(memory_contention=9.0, contention_table=((480, 3.0), (240, 1.0)))
    assert contention_for(params, 240) == 1.0
    assert contention_for(params, 360) == pytest.approx(2.0)
    assert contention_for(params, 60) == 1.0
    assert contention_for(params, 960) == 3.0
    assert contention_for(PerfModelParams(memory_contention=9.0), 60) == 9.0


def test_prediction_accuracy():
    assert prediction_accuracy(42.0, 42.0) == 0.0
    assert prediction_accuracy(115.0, 100.0) == pytest.approx(15.0)
    assert prediction_accuracy(150.0, 200.0) == pytest.approx(25.0)
    with pytest.raises(ArgumentError):
        prediction_accuracy(1.0, 0.0)
    assert mean_accuracy([(115.0, 100.0), (150.0, 200.0)]) == pytest.approx(20.0)


def test_derived_constants_agree_with_time_model(phi):
    params = derive_constants(phi.replace(memory_contention=0.0, contention_table=()))
    for p in (2, 15, 240, 480):
        w = REFERENCE_WORKLOAD.with_p(p)
        assert speedup(params, w) == pytest.approx(model_speedup(params, w), rel=1e-12)


def test_model_speedup_includes_memory_overhead(phi):
    params = derive_constants(phi)
    w = REFERENCE_WORKLOAD.with_p(240)
    assert model_speedup(params, w.with_p(1)) == 1.0
    # T_mem divides by exactly p while the computation keeps its sequential terms
    assert speedup(params, w) < model_speedup(params, w) < 240


def test_negative_parameters_rejected():
    with pytest.raises(ArgumentError):
        PerfModelParams(fprop=-1.0)
    with pytest.raises(ArgumentError):
        PerfModelParams(s=0.0)
    with pytest.raises(ArgumentError):
        WorkloadSpec(-1, 0, 0)
