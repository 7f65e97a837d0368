import json

import numpy as np
import pytest

from oisma import bench, bp, dataflow as df


class TestMapping:
    def test_average_errors_in_band(self):
        sec = bench.bench_mapping()
        assert sec.avg_abs_bp == pytest.approx(0.0119, abs=0.0005)
        assert sec.avg_abs_fp8 == pytest.approx(0.0021, abs=0.0005)

    def test_bp_errors_have_both_signs(self):
        sec = bench.bench_mapping()
        err = sec.bp - sec.values
        assert np.any(err > 0) and np.any(err < 0)

    def test_exact_tenths_have_zero_error(self):
        sec = bench.bench_mapping()
        at_half = np.isclose(sec.values, 0.5)
        assert at_half.any()
        assert np.all(sec.bp[at_half] == 0.5)

    def test_csv_rows(self):
        lines = bench.bench_mapping().csv().strip().splitlines()
        assert lines[0] == "index,value,fp8,fp8_err,bp,bp_err"
        assert len(lines) == 120
        # every cell must parse as a plain number
        for line in lines[1:]:
            cells = line.split(",")
            assert len(cells) == 6
            int(cells[0])
            for cell in cells[1:]:
                float(cell)


@pytest.fixture(scope="module")
def sec():
    return bench.bench_multiply()


class TestMultiply:
    def test_case_count(self, sec):
        assert sec.n_cases == 14_161

    def test_fp8_average_error(self, sec):
        assert sec.avg_abs_fp8 == pytest.approx(0.0003, abs=0.0002)

    def test_bp_average_error(self, sec):
        assert sec.avg_abs_bp == pytest.approx(0.0030, abs=0.0015)

    def test_cancellation_vs_mapping(self, sec):
        mapping = bench.bench_mapping()
        assert mapping.avg_abs_bp / sec.avg_abs_bp >= 3.0

    def test_bp_matches_scalar_multiply(self, sec):
        # spot-check the table path against scalar encode/AND for a few pairs
        ds = bp.default_dataset()
        values = bench.minifloat.normalized_grid()
        rng = np.random.default_rng(2)
        for i, j in rng.integers(0, 119, size=(25, 2)):
            x = bp.encode(float(values[i]), bp.Bias.RIGHT, ds)
            w = bp.encode(float(values[j]), bp.Bias.LEFT, ds)
            assert sec.bp[i, j] == bp.multiply(x, w).value

    def test_csv_rows(self, sec):
        lines = sec.csv().strip().splitlines()
        assert len(lines) == 14_162
        cells = lines[1].split(",")
        assert len(cells) == 7
        for cell in cells:
            float(cell)


class TestMatmul:
    def test_small_run_and_averages(self):
        cfg = bench.BenchConfig(seed=7, dims=(4, 8), trials=5)
        sec = bench.bench_matmul(cfg)
        assert len(sec.rows) == 10
        for dim in (4, 8):
            rows = [r for r in sec.rows if r[0] == dim]
            assert np.isclose(
                sec.mean_bp[dim], np.mean([r[3] for r in rows]), rtol=1e-12
            )
            assert np.isclose(
                sec.mean_fp8[dim], np.mean([r[2] for r in rows]), rtol=1e-12
            )

    def test_deterministic_csv(self):
        cfg = bench.BenchConfig(seed=123, dims=(4, 6), trials=4)
        a = bench.bench_matmul(cfg).csv()
        b = bench.bench_matmul(cfg).csv()
        assert a == b

    def test_trial_streams_stable_under_trial_count(self):
        few = bench.bench_matmul(bench.BenchConfig(seed=9, dims=(4,), trials=2))
        many = bench.bench_matmul(bench.BenchConfig(seed=9, dims=(4,), trials=5))
        assert few.rows == many.rows[:2]

    def test_degenerate_1x1_matches_direct_computation(self):
        cfg = bench.BenchConfig(seed=4, dims=(1,), trials=1)
        sec = bench.bench_matmul(cfg)
        rng = bench.trial_rng(4, 1, 0)
        x = rng.random((1, 1))
        w = rng.random((1, 1))
        ideal = float(x[0, 0] * w[0, 0])
        bp_val = df.matmul_bp(x, w)[0, 0]
        expected = abs(ideal - bp_val) / ideal
        assert sec.rows[0][3] == pytest.approx(expected, rel=1e-12)

    def test_work_cap(self):
        cfg = bench.BenchConfig(dims=(2048,), trials=100)
        with pytest.raises(bench.WorkCapError):
            bench.bench_matmul(cfg)
        forced = bench.BenchConfig(dims=(4,), trials=1, work_cap_macs=1)
        with pytest.raises(bench.WorkCapError):
            bench.bench_matmul(forced)
        ok = bench.BenchConfig(dims=(4,), trials=1, work_cap_macs=1,
                               allow_over_cap=True)
        assert len(bench.bench_matmul(ok).rows) == 1


class TestSimulateWorkload:
    def test_qkv_demo(self):
        rng = np.random.default_rng(1)
        x = rng.random((4, 32))
        weights = [rng.random((32, 8)) for _ in range(3)]
        result = bench.simulate_workload(x, weights)
        assert result.matches_reference
        assert result.stats.input_reads == 4
        assert result.plan.broadcast_fanout == 3
        assert result.energy_single.mult_fj / result.energy_vmm.mult_fj == pytest.approx(216 / 178)
        assert len(result.traces) > 0

    def test_capacity_error_propagates(self):
        rng = np.random.default_rng(2)
        x = rng.random((2, 64))
        w = rng.random((64, 64))
        with pytest.raises(df.CapacityError):
            bench.simulate_workload(x, [w], geometry=df.ArrayGeometry(arrays=0))


class TestMetricsReport:
    def test_base_row(self):
        (base,) = bench.report_metrics()
        assert base.node == "180nm"
        assert base.tops_per_watt == pytest.approx(0.891, abs=0.001)

    def test_scaled_row(self):
        base, scaled = bench.report_metrics(node="22nm")
        assert scaled.tops_per_watt == pytest.approx(89.5, rel=0.01)

    def test_unknown_node(self):
        with pytest.raises(ValueError):
            bench.report_metrics(node="3nm")


class TestOutputs:
    def test_write_outputs_and_metadata(self, tmp_path):
        cfg = bench.BenchConfig(seed=5, dims=(4,), trials=2, out_dir=str(tmp_path))
        sec = bench.bench_matmul(cfg)
        path = bench.write_outputs(cfg, "matmul", sec.csv())
        body = open(path).read()
        assert body.startswith("dim,trial,fp8_err,bp_err\n")
        meta = json.load(open(tmp_path / "matmul.meta.json"))
        assert meta["seed"] == 5
        assert len(meta["dataset_sha256"]) == 64
        assert "timestamp" in meta

    def test_csv_body_excludes_timestamp(self, tmp_path):
        cfg = bench.BenchConfig(seed=5, dims=(4,), trials=2, out_dir=str(tmp_path))
        sec = bench.bench_matmul(cfg)
        p1 = bench.write_outputs(cfg, "one", sec.csv())
        p2 = bench.write_outputs(cfg, "two", sec.csv())
        assert open(p1).read() == open(p2).read()
