"""Energy, throughput, and technology-scaling arithmetic.

Everything here is closed-form accounting over the calibrated per-bit
energies and the array geometry; the scaled node reuses the factor file
shipped with the package.
"""

from oisma import perf

e = perf.EnergyParams()
print("per-bit energies (fJ): "
      f"read {e.read_fj_per_bit}, multiply single {e.mult_single_fj_per_bit}, "
      f"multiply stationary {e.mult_vmm_fj_per_bit}, accumulate {e.accum_fj_per_bit}")

print(f"MAC energy, 8-bit words: {perf.mac_energy(e, 'vmm'):.4f} pJ stationary, "
      f"{perf.mac_energy(e, 'single'):.4f} pJ single-shot")
print(f"stationary inputs save "
      f"{100 * (1 - e.mult_vmm_fj_per_bit / e.mult_single_fj_per_bit):.1f}% "
      "of multiplication energy")

one = perf.GeometryParams.single_array()
big = perf.GeometryParams.engine_1mb()
print(f"\nthroughput: one 4 KB array {perf.throughput(one):.1f} GOPS, "
      f"1 MB engine ({big.arrays} arrays) {perf.throughput(big):.1f} GOPS")

base = perf.efficiency()
factors = perf.builtin_scaling_factors()["22nm"]
scaled = perf.scale_to_node(base, factors, node="22nm")
print("\n" + perf.report_table([base, scaled]))

print("scaling is multiplicative, so factor sets compose:")
half = perf.ScalingFactors(0.5, 0.5, 0.5)
twice = perf.scale_to_node(perf.scale_to_node(base, half), half)
once = perf.scale_to_node(base, half.compose(half))
print(f"  two half-steps == one quarter-step: "
      f"{twice.tops_per_watt:.4f} == {once.tops_per_watt:.4f}")
