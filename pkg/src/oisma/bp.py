"""Bent-Pyramid quasi-stochastic number format.

Probabilities 0.0 .. 0.9 (0.1 resolution) are represented by fixed 10-bit
bitstreams whose population count equals the value in tenths.  Two
complementary datasets exist: right-biased streams (bit 0 always zero) used
for multiplicands, and left-biased streams (bit 9 always zero) used for
multipliers.  Multiplication of one stream of each bias is a bit-wise AND;
the ones-density of the result approximates the product.  Because the two
structurally-zero edge bits never contribute to a product, every stream can
be compressed to 8 physical bits without changing any multiplication result.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

__all__ = [
    "Bias",
    "BpBitstream",
    "Bp8Bitstream",
    "BpProduct",
    "BpDataset",
    "CorrelationError",
    "DatasetError",
    "default_dataset",
    "load_dataset",
    "dump_dataset",
    "validate_dataset",
    "encode",
    "decode",
    "multiply",
    "compress",
    "multiply8",
]


class Bias(enum.Enum):
    """Which edge of the 10-bit stream is structurally zero."""

    RIGHT = "right"  # bit 0 (leftmost as printed) is always 0
    LEFT = "left"    # bit 9 (rightmost as printed) is always 0


class CorrelationError(ValueError):
    """Both multiplication operands share the same bias."""


class DatasetError(ValueError):
    """Dataset file is malformed or violates a structural invariant."""


def _popcount(bits):
    return sum(bits)


def _parse_bits(text, width):
    text = text.strip()
    if len(text) != width or any(c not in "01" for c in text):
        raise DatasetError(f"expected {width} binary digits, got {text!r}")
    return tuple(int(c) for c in text)


def _bits_str(bits):
    return "".join(str(b) for b in bits)


@dataclass(frozen=True)
class BpBitstream:
    """One 10-bit probability representation (bit 0 = leftmost as printed)."""

    bits: tuple
    value_tenths: int
    bias: Bias

    def __post_init__(self):
        if len(self.bits) != 10:
            raise ValueError(f"bitstream must be 10 bits wide, got {len(self.bits)}")
        if _popcount(self.bits) != self.value_tenths:
            raise ValueError(
                f"population count {_popcount(self.bits)} does not match "
                f"value {self.value_tenths}/10"
            )
        if self.bias is Bias.RIGHT and self.bits[0] != 0:
            raise ValueError("right-biased bitstream must have bit 0 = 0")
        if self.bias is Bias.LEFT and self.bits[9] != 0:
            raise ValueError("left-biased bitstream must have bit 9 = 0")

    @classmethod
    def from_string(cls, text, bias):
        bits = _parse_bits(text, 10)
        return cls(bits=bits, value_tenths=_popcount(bits), bias=bias)

    @property
    def value(self):
        return self.value_tenths / 10.0

    def __str__(self):
        return _bits_str(self.bits)


@dataclass(frozen=True)
class Bp8Bitstream:
    """Compressed 8-bit form: bits 1..8 of the parent 10-bit stream.

    ``value_tenths`` is the logical value of the parent stream; for streams
    that carry a one in an edge bit (e.g. a right-biased 0.9) it can exceed
    the population count of the 8 remaining bits.
    """

    bits: tuple
    value_tenths: int
    bias: Bias

    def __post_init__(self):
        if len(self.bits) != 8:
            raise ValueError(f"compressed bitstream must be 8 bits wide, got {len(self.bits)}")

    def __str__(self):
        return _bits_str(self.bits)


@dataclass(frozen=True)
class BpProduct:
    """Result of an AND multiplication (10- or 8-bit wide)."""

    bits: tuple
    ones: int
    value: float

    def __str__(self):
        return _bits_str(self.bits)


@dataclass(frozen=True)
class BpDataset:
    """The two complementary 10-entry datasets (values 0.0 .. 0.9)."""

    right: tuple
    left: tuple

    def __post_init__(self):
        violations = validate_dataset(self)
        if violations:
            raise DatasetError(violations[0])


# Default bit placements.  Constraints: population count k for value k/10;
# bit 0 zero on every right-biased entry, bit 9 zero on every left-biased
# entry; the pairwise AND table tracks the exact products closely with a
# near-zero mean deviation.  Chosen by design-time search; any alternative
# placement can be swapped in through load_dataset without code changes.
_RIGHT_PATTERNS = (
    "0000000000",
    "0000100000",
    "0000010100",
    "0000011100",
    "0001100101",
    "0011100101",
    "0110110101",
    "0111010111",
    "0111011111",
    "0111111111",
)
_LEFT_PATTERNS = (
    "0000000000",
    "0100000000",
    "0001010000",
    "1100000100",
    "1110000100",
    "0011111000",
    "0111111000",
    "0111101110",
    "1111110110",
    "1111111110",
)

_DEFAULT = None


def default_dataset():
    """The built-in dataset (right 0.3 = 0000011100, left 0.6 = 0111111000)."""
    global _DEFAULT
    if _DEFAULT is None:
        right = tuple(
            BpBitstream.from_string(p, Bias.RIGHT) for p in _RIGHT_PATTERNS
        )
        left = tuple(
            BpBitstream.from_string(p, Bias.LEFT) for p in _LEFT_PATTERNS
        )
        _DEFAULT = BpDataset(right=right, left=left)
    return _DEFAULT


def _check_entries(entries, bias, label):
    violations = []
    for k, entry in enumerate(entries):
        if entry.bias is not bias:
            violations.append(f"{label}[{k}]: wrong bias {entry.bias}")
        if entry.value_tenths != k:
            violations.append(f"{label}[{k}]: value {entry.value_tenths}, expected {k}")
        if _popcount(entry.bits) != k:
            violations.append(f"{label}[{k}]: population count != {k}")
        if bias is Bias.RIGHT and entry.bits[0] != 0:
            violations.append(f"{label}[{k}]: right-biased bit0 nonzero")
        if bias is Bias.LEFT and entry.bits[9] != 0:
            violations.append(f"{label}[{k}]: left-biased bit9 nonzero")
    seen = {}
    for k, entry in enumerate(entries):
        key = entry.bits
        if key in seen:
            violations.append(f"{label}[{k}]: duplicate of {label}[{seen[key]}]")
        else:
            seen[key] = k
    return violations


def validate_dataset(d):
    """Return a list of violation descriptions (empty = dataset is valid)."""
    violations = []
    if len(d.right) != 10:
        violations.append(f"right section has {len(d.right)} entries, expected 10")
    if len(d.left) != 10:
        violations.append(f"left section has {len(d.left)} entries, expected 10")
    if violations:
        return violations
    violations += _check_entries(d.right, Bias.RIGHT, "right")
    violations += _check_entries(d.left, Bias.LEFT, "left")
    if not violations:
        # 0.3 x 0.6 must come out as 0.2 (two surviving ones)
        ones = sum(a & b for a, b in zip(d.right[3].bits, d.left[6].bits))
        if ones != 2:
            violations.append(
                f"worked example mismatch: 0.3 AND 0.6 has {ones} ones, expected 2"
            )
    return violations


def load_dataset(text):
    """Parse a dataset from its text form (see dump_dataset for the layout).

    Raises DatasetError on malformed input or if any structural invariant
    is violated.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines or lines[0] != "BP10":
        raise DatasetError("missing BP10 header line")
    body = lines[1:]
    if len(body) != 22 or body[0] != "RIGHT" or body[11] != "LEFT":
        raise DatasetError(
            "expected RIGHT and LEFT sections of 10 lines each "
            f"(got {len(body)} content lines)"
        )
    right = _load_section(body[1:11], Bias.RIGHT, "right")
    left = _load_section(body[12:22], Bias.LEFT, "left")
    return BpDataset(right=right, left=left)


def _load_section(lines, bias, label):
    entries = []
    for k, text in enumerate(lines):
        bits = _parse_bits(text, 10)
        if _popcount(bits) != k:
            raise DatasetError(f"{label}[{k}]: population count != {k}")
        if bias is Bias.RIGHT and bits[0] != 0:
            raise DatasetError(f"{label}[{k}]: right-biased bit0 nonzero")
        if bias is Bias.LEFT and bits[9] != 0:
            raise DatasetError(f"{label}[{k}]: left-biased bit9 nonzero")
        entries.append(BpBitstream(bits=bits, value_tenths=k, bias=bias))
    return tuple(entries)


def dump_dataset(d):
    """Serialize a dataset: BP10 header, RIGHT then LEFT sections of 10 lines."""
    out = ["BP10", "RIGHT"]
    out += [str(b) for b in d.right]
    out.append("LEFT")
    out += [str(b) for b in d.left]
    return "\n".join(out) + "\n"


def encode(p, bias, d=None):
    """Map a real probability in [0, 1] to its nearest dataset entry.

    Rounds to the nearest tenth (ties away from zero); values above 0.95
    clamp to the maximum representable 0.9.  Out-of-range or non-finite
    inputs are rejected rather than clamped.
    """
    if d is None:
        d = default_dataset()
    if not isinstance(p, (int, float)) or p != p or not (0.0 <= p <= 1.0):
        raise ValueError(f"probability must be a finite real in [0, 1], got {p!r}")
    k = min(int(p * 10.0 + 0.5), 9)
    entries = d.right if bias is Bias.RIGHT else d.left
    return entries[k]


def decode(b):
    """Ones-density of a bitstream or product, on the fixed 1/10 scale."""
    return _popcount(b.bits) / 10.0


def multiply(x, y):
    """Bit-wise AND multiplication of two 10-bit streams of opposite bias."""
    if x.bias is y.bias:
        raise CorrelationError(
            "operands share the same bias; multiplication needs one "
            "right-biased and one left-biased stream"
        )
    bits = tuple(a & b for a, b in zip(x.bits, y.bits))
    ones = _popcount(bits)
    return BpProduct(bits=bits, ones=ones, value=ones / 10.0)


def compress(b):
    """Drop the two structurally-zero edge bits, keeping bits 1..8."""
    return Bp8Bitstream(bits=b.bits[1:9], value_tenths=b.value_tenths, bias=b.bias)


def multiply8(x, y):
    """AND multiplication on the compressed 8-bit forms.

    The result carries the same number of ones as the corresponding 10-bit
    multiplication for every operand pair; the value is still scaled by 10.
    """
    if x.bias is y.bias:
        raise CorrelationError(
            "operands share the same bias; multiplication needs one "
            "right-biased and one left-biased stream"
        )
    bits = tuple(a & b for a, b in zip(x.bits, y.bits))
    ones = _popcount(bits)
    return BpProduct(bits=bits, ones=ones, value=ones / 10.0)
