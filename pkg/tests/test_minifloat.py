import numpy as np
import pytest

from oisma import minifloat as mf


@pytest.fixture(scope="module")
def grid():
    return mf.enumerate_positive()


def nearest_by_search(x, grid):
    """Brute-force oracle: exhaustive nearest-neighbor over the full grid."""
    full = [0.0] + grid
    dists = [abs(x - g) for g in full]
    best = min(dists)
    candidates = [g for g, d in zip(full, dists) if d == best]
    return candidates


class TestGrid:
    def test_count(self, grid):
        assert len(grid) == 119

    def test_extremes(self, grid):
        assert grid[0] == 2.0 ** -9
        assert grid[-1] == 240.0

    def test_strictly_increasing(self, grid):
        assert all(a < b for a, b in zip(grid, grid[1:]))

    def test_count_at_most_one(self, grid):
        assert sum(1 for v in grid if v <= 1.0) == 56

    def test_format_constants(self):
        assert mf.E4M3.exponent_bits == 4
        assert mf.E4M3.mantissa_bits == 3
        assert mf.E4M3.exponent_bias == 7
        assert mf.E4M3.max_finite == 240.0


class TestQuantize:
    def test_exact_values_fixed(self):
        assert mf.quantize(0.0) == 0.0
        assert mf.quantize(240.0) == 240.0

    def test_exact_values_all(self, grid):
        for v in grid:
            assert mf.quantize(v) == v

    def test_nearest_against_oracle(self, grid):
        assert mf.quantize(0.3) == 0.3125
        assert 0.3125 in nearest_by_search(0.3, grid)
        rng = np.random.default_rng(11)
        for x in rng.uniform(0, 240, size=300):
            assert mf.quantize(float(x)) in nearest_by_search(float(x), grid)

    def test_ties_round_to_even_code(self, grid):
        full = [0.0] + grid
        # midpoints between adjacent grid members are exact binary floats
        for i in range(0, 40):
            mid = (full[i] + full[i + 1]) / 2.0
            if mid in (full[i], full[i + 1]):
                continue  # not an exact midpoint in float64
            picked = mf.quantize(mid)
            idx = full.index(picked)
            assert picked in nearest_by_search(mid, grid)
            assert idx % 2 == 0, f"tie at {mid} went to odd code {idx}"

    def test_half_smallest_subnormal_rounds_to_zero(self):
        assert mf.quantize(2.0 ** -10) == 0.0

    def test_idempotent(self, grid):
        rng = np.random.default_rng(3)
        xs = rng.uniform(0, 240, size=200)
        q = mf.quantize(xs)
        assert np.array_equal(mf.quantize(q), q)

    def test_monotone(self):
        rng = np.random.default_rng(5)
        xs = np.sort(rng.uniform(0, 240, size=500))
        q = mf.quantize(xs)
        assert np.all(np.diff(q) >= 0)

    def test_error_bounded_by_half_spacing(self, grid):
        full = np.array([0.0] + grid)
        rng = np.random.default_rng(9)
        for x in rng.uniform(0, 240, size=300):
            q = mf.quantize(float(x))
            i = int(np.searchsorted(full, x))
            lo = full[max(i - 1, 0)]
            hi = full[min(i, len(full) - 1)]
            assert abs(q - x) <= (hi - lo) / 2.0 + 1e-18

    @pytest.mark.parametrize("bad", [-1.0, 240.5, float("nan"), float("inf")])
    def test_domain_errors(self, bad):
        with pytest.raises(ValueError):
            mf.quantize(bad)


class TestMultiply:
    def test_zero(self, grid):
        for v in grid[:5] + grid[-5:]:
            assert mf.fp8_multiply(0.0, v) == 0.0

    def test_identity(self, grid):
        for v in grid:
            assert mf.fp8_multiply(1.0, v) == v

    def test_exact_product(self):
        # 1.0*2^-2 x 1.25*2^-1 = 1.25*2^-3, exactly representable
        assert mf.fp8_multiply(0.25, 0.625) == 0.15625

    def test_tie_product(self, grid):
        # 0.3125 x 0.625 = 0.1953125 sits exactly between 0.1875 and
        # 0.203125; the even mantissa code wins
        assert sorted(nearest_by_search(0.1953125, grid)) == [0.1875, 0.203125]
        assert mf.fp8_multiply(0.3125, 0.625) == 0.1875
        assert mf.quantize(0.1953125) == 0.1875

    def test_matches_quantize_of_product(self, grid):
        rng = np.random.default_rng(17)
        vals = rng.choice(grid, size=(100, 2))
        for a, b in vals:
            expect = mf.quantize(min(a * b, 240.0))
            assert mf.fp8_multiply(a, b) == expect

    def test_clamps_large_products(self):
        assert mf.fp8_multiply(240.0, 240.0) == 240.0

    def test_rejects_non_representable(self):
        with pytest.raises(ValueError):
            mf.fp8_multiply(0.3, 0.5)


class TestNormalize:
    def test_full_range(self, grid):
        out = mf.normalize([0.0] + grid)
        assert out[-1] == 1.0
        assert out[0] == 0.0
        assert np.allclose(out[1:], np.array(grid) / 240.0)

    def test_positive_set_scales_against_zero(self, grid):
        out = mf.normalize(grid)
        assert out[0] == 2.0 ** -9 / 240.0
        assert out[-1] == 1.0

    def test_normalized_grid_definition(self, grid):
        ng = mf.normalized_grid()
        assert len(ng) == 119
        assert ng[0] == 2.0 ** -9 / 240.0
        assert ng[-1] == 1.0

    def test_degenerate_range(self):
        with pytest.raises(ValueError):
            mf.normalize([5.0])


class TestGridDump:
    def test_csv_shape(self):
        lines = mf.dump_grid_csv().strip().splitlines()
        assert lines[0] == "index,raw,normalized"
        assert len(lines) == 120
        first = lines[1].split(",")
        assert int(first[0]) == 0
        assert float(first[1]) == 2.0 ** -9
