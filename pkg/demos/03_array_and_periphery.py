"""Driving one 256x128 array and its accumulation periphery directly.

Write a row of bitcells, read it back, run an in-situ AND against an input
vector, inspect the emitted control-signal traces, and push the AND result
through the gate-level population counter.
"""

import numpy as np

from oisma import accumulator as acc
from oisma import arraysim as ar

array = ar.OismaArray()
rng = np.random.default_rng(0)

stored = rng.integers(0, 2, size=256, dtype=np.uint8)
trace = array.write_row(42, stored)
print("write trace:")
print(ar.format_trace(trace), end="")

bits, trace = array.read_row(42)
print("\nread trace (precharge 14 ns, float & sense 6 ns):")
print(ar.format_trace(trace), end="")
assert np.array_equal(bits, stored)

inputs = rng.integers(0, 2, size=256, dtype=np.uint8)
result, trace = array.and_row(42, inputs)
print("\nAND trace (per-column precharge follows the input bit):")
print(ar.format_trace(trace), end="")
assert np.array_equal(result, stored & inputs)

print(f"\nlatency: read {ar.latency('read')} ns, AND {ar.latency('and')} ns, "
      f"precharge fraction {ar.PRECHARGE_FRACTION:.0%}")

# the periphery reduces the 256 result bits to a 9-bit binary count
count = acc.accumulate256(result)
print(f"\nperiphery count of the AND result: {count} "
      f"(plain popcount {int(result.sum())})")

stats = acc.netlist_stats()
print("periphery structure:")
print(f"  16-bit counter: {stats['count16']['full_adders']} full adders + "
      f"{stats['count16']['half_adders']} half adders -> "
      f"{stats['count16']['output_width']}-bit output")
print(f"  64-to-7 converter: {stats['convert64']['counters']} counters + "
      f"adders {stats['convert64']['multibit_adders']}")
print(f"  256-to-9 periphery: {stats['accumulate256']['converters']} converters + "
      f"adders {stats['accumulate256']['multibit_adders']}")

print("\nfirst five cells of the 16-bit counter netlist:")
print("\n".join(acc.dump_netlist(acc.build_count16()).splitlines()[:5]))
