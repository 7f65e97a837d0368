"""Tour of the Bent-Pyramid bitstream format.

Shows the two complementary datasets, AND-based multiplication, and the
compressed 8-bit hardware form.
"""

from oisma import bp
from oisma.bp import Bias

ds = bp.default_dataset()

print("right-biased dataset (bit 0 always zero):")
for entry in ds.right:
    print(f"  {entry.value:.1f}  {entry}")
print("left-biased dataset (bit 9 always zero):")
for entry in ds.left:
    print(f"  {entry.value:.1f}  {entry}")

# A multiplication takes one operand from each dataset.  The ones-density
# of the bitwise AND approximates the real product.
x = bp.encode(0.3, Bias.RIGHT)
y = bp.encode(0.6, Bias.LEFT)
z = bp.multiply(x, y)
print(f"\n  {x}  (0.3, right-biased)")
print(f"& {y}  (0.6, left-biased)")
print(f"= {z}  -> decode {bp.decode(z)}  (exact product 0.18)")

# Same-bias operands are correlated and refused.
try:
    bp.multiply(x, bp.encode(0.6, Bias.RIGHT))
except bp.CorrelationError as exc:
    print(f"\nsame-bias multiply rejected: {exc}")

# Dropping the two structurally-zero edge bits compresses every stream to
# 8 physical bits without changing any product.
x8, y8 = bp.compress(x), bp.compress(y)
z8 = bp.multiply8(x8, y8)
print(f"\ncompressed: {x8} & {y8} = {z8} -> decode {bp.decode(z8)}")

mismatch = sum(
    bp.multiply8(bp.compress(ds.right[k]), bp.compress(ds.left[j])).ones
    != bp.multiply(ds.right[k], ds.left[j]).ones
    for k in range(10)
    for j in range(10)
)
print(f"8-bit vs 10-bit product mismatches over all 100 pairs: {mismatch}")

# Datasets round-trip through a plain text format, so alternative bit
# placements can be dropped in without touching code.
text = bp.dump_dataset(ds)
print("\ndataset file form (first 4 lines):")
print("\n".join(text.splitlines()[:4]))
assert bp.load_dataset(text) == ds
