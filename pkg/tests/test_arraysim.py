import numpy as np
import pytest

from oisma import arraysim as ar
from oisma.arraysim import BitlineDrive, ControlVector, X


@pytest.fixture
def array():
    return ar.OismaArray()


def rand_bits(rng, n=256):
    return rng.integers(0, 2, size=n, dtype=np.uint8)


class TestWriteRead:
    def test_round_trip_patterns(self, array):
        rng = np.random.default_rng(0)
        for row in (0, 1, 63, 127):
            bits = rand_bits(rng)
            array.write_row(row, bits)
            out, _ = array.read_row(row)
            assert np.array_equal(out, bits)

    def test_fresh_array_reads_zero(self, array):
        out, _ = array.read_row(10)
        assert not out.any()

    def test_write_idempotent(self, array):
        rng = np.random.default_rng(1)
        bits = rand_bits(rng)
        array.write_row(5, bits)
        first = array.cells[5].copy()
        array.write_row(5, bits)
        assert np.array_equal(array.cells[5], first)

    def test_write_all_ones(self, array):
        array.write_row(7, np.ones(256, dtype=np.uint8))
        out, _ = array.read_row(7)
        assert out.all()

    def test_state_persists_across_other_rows(self, array):
        rng = np.random.default_rng(2)
        bits = rand_bits(rng)
        array.write_row(3, bits)
        array.write_row(4, rand_bits(rng))
        out, _ = array.read_row(3)
        assert np.array_equal(out, bits)

    def test_errors(self, array):
        with pytest.raises(IndexError):
            array.read_row(128)
        with pytest.raises(IndexError):
            array.write_row(-1, np.zeros(256, dtype=np.uint8))
        with pytest.raises(ValueError):
            array.write_row(0, np.zeros(255, dtype=np.uint8))


class TestAnd:
    def test_all_ones_input_equals_read(self, array):
        rng = np.random.default_rng(3)
        for row in range(0, 128, 17):
            array.write_row(row, rand_bits(rng))
            anded, _ = array.and_row(row, np.ones(256, dtype=np.uint8))
            read, _ = array.read_row(row)
            assert np.array_equal(anded, read)

    def test_all_zeros_input(self, array):
        rng = np.random.default_rng(4)
        array.write_row(9, rand_bits(rng))
        out, _ = array.and_row(9, np.zeros(256, dtype=np.uint8))
        assert not out.any()

    def test_bitwise_and_oracle(self, array):
        # tiled bitstream patterns: stored 0000011100, input 0111111000
        stored = np.tile([0, 0, 0, 0, 0, 1, 1, 1, 0, 0], 26)[:256].astype(np.uint8)
        inp = np.tile([0, 1, 1, 1, 1, 1, 1, 0, 0, 0], 26)[:256].astype(np.uint8)
        array.write_row(0, stored)
        out, _ = array.and_row(0, inp)
        assert np.array_equal(out, stored & inp)
        group = out[:10]
        assert "".join(map(str, group)) == "0000011000"

    def test_monotone_under_both_operands(self, array):
        rng = np.random.default_rng(5)
        for _ in range(20):
            stored = rand_bits(rng)
            inp = rand_bits(rng)
            array.write_row(1, stored)
            out, _ = array.and_row(1, inp)
            assert np.all(out <= stored)
            assert np.all(out <= inp)

    def test_wrong_width(self, array):
        with pytest.raises(ValueError):
            array.and_row(0, np.ones(13, dtype=np.uint8))


class TestControlTraces:
    """Field-for-field comparison against the golden control truth table."""

    GOLDEN_READ_P1 = ControlVector(WE=0, S=0, Sb=1, R=1, IN=X, Pre_en=1,
                                   BL=BitlineDrive.CHARGE, BLb=BitlineDrive.DISCHARGE)
    GOLDEN_FLOAT = ControlVector(WE=0, S=0, Sb=1, R=0, IN=X, Pre_en=0,
                                 BL=BitlineDrive.FLOATING, BLb=BitlineDrive.FLOATING)
    GOLDEN_AND0 = ControlVector(WE=0, S=1, Sb=0, R=0, IN=0, Pre_en=1,
                                BL=BitlineDrive.DISCHARGE, BLb=BitlineDrive.DISCHARGE)
    GOLDEN_AND1 = ControlVector(WE=0, S=1, Sb=0, R=0, IN=1, Pre_en=1,
                                BL=BitlineDrive.CHARGE, BLb=BitlineDrive.DISCHARGE)
    GOLDEN_W0 = ControlVector(WE=1, S=1, Sb=0, R=X, IN=0, Pre_en=X,
                              BL=BitlineDrive.DISCHARGE, BLb=BitlineDrive.CHARGE)
    GOLDEN_W1 = ControlVector(WE=1, S=1, Sb=0, R=X, IN=1, Pre_en=X,
                              BL=BitlineDrive.CHARGE, BLb=BitlineDrive.DISCHARGE)

    def test_read_trace(self, array):
        _, trace = array.read_row(0)
        assert len(trace.phases) == 2
        assert trace.phases[0].entries[0].vector == self.GOLDEN_READ_P1
        assert trace.phases[1].entries[0].vector == self.GOLDEN_FLOAT
        assert trace.phases[0].duration_ns == 14.0
        assert trace.phases[1].duration_ns == 6.0
        assert trace.total_ns == 20.0

    def test_and_trace_mixed_inputs(self, array):
        inp = np.zeros(256, dtype=np.uint8)
        inp[128:] = 1
        _, trace = array.and_row(0, inp)
        assert len(trace.phases) == 2
        vecs = {e.vector.IN: e for e in trace.phases[0].entries}
        assert vecs[0].vector == self.GOLDEN_AND0
        assert vecs[1].vector == self.GOLDEN_AND1
        assert vecs[0].columns == tuple(range(128))
        assert vecs[1].columns == tuple(range(128, 256))
        assert trace.phases[1].entries[0].vector == self.GOLDEN_FLOAT

    def test_and_trace_uniform_input(self, array):
        _, trace = array.and_row(0, np.ones(256, dtype=np.uint8))
        (entry,) = trace.phases[0].entries
        assert entry.vector == self.GOLDEN_AND1
        assert entry.columns is None

    def test_write_traces(self, array):
        t1 = array.write_row(0, np.ones(256, dtype=np.uint8))
        assert len(t1.phases) == 1
        (entry,) = t1.phases[0].entries
        assert entry.vector == self.GOLDEN_W1

        t0 = array.write_row(0, np.zeros(256, dtype=np.uint8))
        (entry,) = t0.phases[0].entries
        assert entry.vector == self.GOLDEN_W0

    def test_s_sb_complementary_everywhere(self, array):
        array.write_row(2, np.ones(256, dtype=np.uint8))
        _, t_read = array.read_row(2)
        _, t_and = array.and_row(2, np.zeros(256, dtype=np.uint8))
        for trace in (t_read, t_and):
            for phase in trace.phases:
                for entry in phase.entries:
                    v = entry.vector
                    if v.S != X and v.Sb != X:
                        assert v.S != v.Sb

    def test_complementarity_enforced_at_construction(self):
        with pytest.raises(ValueError):
            ControlVector(WE=0, S=1, Sb=1, R=0, IN=0, Pre_en=1,
                          BL=BitlineDrive.CHARGE, BLb=BitlineDrive.DISCHARGE)


class TestLatency:
    def test_read_and_write(self):
        assert ar.latency("read") == 20.0
        assert ar.latency("and") == 20.0
        assert ar.latency("write") == 20.0

    def test_precharge_fraction(self):
        assert ar.PRECHARGE_FRACTION == pytest.approx(0.70)
        assert ar.PRECHARGE_NS == 14.0
        assert ar.SENSE_NS == 6.0

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            ar.latency("erase")


class TestExportAndFaults:
    def test_trace_export_format(self, array):
        _, trace = array.read_row(0)
        lines = ar.format_trace(trace).strip().splitlines()
        assert lines[0] == ("read phase=1 WE=0 S=0 Sb=1 R=1 IN=X Pre_en=1 "
                            "BL=Charge BLb=Discharge dur_ns=14")
        assert lines[1] == ("read phase=2 WE=0 S=0 Sb=1 R=0 IN=X Pre_en=0 "
                            "BL=Floating BLb=Floating dur_ns=6")

    def test_snapshot_shape(self, array):
        snap = array.snapshot().splitlines()
        assert len(snap) == 128
        assert all(len(line) == 256 for line in snap)
        assert set("".join(snap)) <= {"0", "1"}

    def test_stuck_at_hook_defaults_off(self, array):
        rng = np.random.default_rng(6)
        bits = rand_bits(rng)
        array.write_row(0, bits)
        out, _ = array.read_row(0)
        assert np.array_equal(out, bits)

    def test_stuck_at_fault_applies(self, array):
        array.write_row(0, np.zeros(256, dtype=np.uint8))
        array.stuck[(0, 17)] = 1
        out, _ = array.read_row(0)
        assert out[17] == 1 and out.sum() == 1
        anded, _ = array.and_row(0, np.ones(256, dtype=np.uint8))
        assert anded[17] == 1
