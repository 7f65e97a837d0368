"""The FP8 comparison grid and the data-mapping study.

The 8-bit float variant used as a reference point has 119 positive finite
values up to 240; normalized into (0, 1] they form the baseline value set
for every accuracy benchmark in this package.
"""

import numpy as np

from oisma import bench, minifloat as mf

grid = np.array(mf.enumerate_positive())
print(f"positive values: {len(grid)}  (min {grid[0]}, max {grid[-1]})")
print(f"values at or below 1.0: {(grid <= 1.0).sum()}")

print("\nsmallest five:", grid[:5])
print("largest five: ", grid[-5:])

# quantization examples: nearest value, ties to the even mantissa code
for x in (0.3, 0.1953125, 100.0):
    print(f"quantize({x}) = {mf.quantize(x)}")

# the mapping study rounds every normalized baseline value to each format
sec = bench.bench_mapping()
print(f"\nmapping study over {len(sec.values)} baseline values:")
print(f"  FP8  average |error|: {100 * sec.avg_abs_fp8:.4f}%")
print(f"  BP10 average |error|: {100 * sec.avg_abs_bp:.4f}%")

bp_err = sec.bp - sec.values
print(f"  BP10 errors swing both ways: "
      f"{(bp_err > 0).sum()} positive, {(bp_err < 0).sum()} negative")
fp8_err = sec.fp8 - sec.values
print(f"  FP8 errors: {(fp8_err > 0).sum()} positive, "
      f"{(fp8_err < 0).sum()} negative, {(fp8_err == 0).sum()} exact")

# the signed swing is what lets multiplication errors cancel downstream
mul = bench.bench_multiply()
print(f"\nmultiplication study over {mul.n_cases} pairs:")
print(f"  FP8  average |error|: {100 * mul.avg_abs_fp8:.4f}%")
print(f"  BP10 average |error|: {100 * mul.avg_abs_bp:.4f}%")
print(f"  BP10 cancellation vs mapping: "
      f"{sec.avg_abs_bp / mul.avg_abs_bp:.2f}x")
