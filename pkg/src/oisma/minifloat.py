"""Reference 8-bit floating-point quantizer (E4M3 variant, max finite 240).

The format has a 4-bit exponent (bias 7, all-ones field reserved for
non-finite codes), a 3-bit mantissa, and subnormal support.  That yields
exactly 119 distinct positive finite values from 2^-9 up to 240, of which
56 lie in (0, 1].  Negative values are out of scope here: the comparison
studies this library serves work on normalized non-negative data.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Fp8Format",
    "E4M3",
    "enumerate_positive",
    "positive_grid",
    "full_grid",
    "quantize",
    "is_representable",
    "fp8_multiply",
    "normalize",
    "normalized_grid",
    "dump_grid_csv",
]


@dataclass(frozen=True)
class Fp8Format:
    exponent_bits: int = 4
    mantissa_bits: int = 3
    exponent_bias: int = 7
    max_finite: float = 240.0


E4M3 = Fp8Format()

_MANT_STEPS = 1 << E4M3.mantissa_bits  # 8


def _build_positive():
    vals = []
    # subnormals: exponent field 0, value = (m/8) * 2^(1-7)
    for m in range(1, _MANT_STEPS):
        vals.append((m / _MANT_STEPS) * 2.0 ** (1 - E4M3.exponent_bias))
    # normals: exponent field 1..14 (all-ones reserved), value = (1 + m/8) * 2^(e-7)
    for e in range(1, (1 << E4M3.exponent_bits) - 1):
        for m in range(_MANT_STEPS):
            vals.append((1 + m / _MANT_STEPS) * 2.0 ** (e - E4M3.exponent_bias))
    return np.array(vals)


_POSITIVE = _build_positive()
# full grid with zero prepended; the index into this array equals the
# encoding integer, so index parity equals mantissa-code parity
_FULL = np.concatenate([[0.0], _POSITIVE])


def enumerate_positive():
    """All 119 positive finite values, strictly increasing, as a list."""
    return [float(v) for v in _POSITIVE]


def positive_grid():
    """The positive values as a read-only numpy array."""
    g = _POSITIVE.view()
    g.flags.writeable = False
    return g


def full_grid():
    """Zero plus the positive values (120 entries, index = encoding)."""
    g = _FULL.view()
    g.flags.writeable = False
    return g


def _quantize_unchecked(x):
    """Nearest grid member; ties go to the even encoding (even mantissa code)."""
    x = np.asarray(x, dtype=float)
    idx = np.searchsorted(_FULL, x)
    idx = np.clip(idx, 1, len(_FULL) - 1)
    lo = _FULL[idx - 1]
    hi = _FULL[idx]
    pick_hi = (hi - x < x - lo) | ((hi - x == x - lo) & (idx % 2 == 0))
    return np.where(pick_hi, hi, lo)


def quantize(x):
    """Round a non-negative real (or array) in [0, 240] to the nearest value.

    Ties round to the candidate with the even mantissa code.  Negative,
    non-finite, or out-of-range inputs raise ValueError.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("quantize input must be finite")
    if np.any(arr < 0) or np.any(arr > E4M3.max_finite):
        raise ValueError(f"quantize input must lie in [0, {E4M3.max_finite}]")
    out = _quantize_unchecked(arr)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def is_representable(x):
    x = np.asarray(x, dtype=float)
    idx = np.searchsorted(_FULL, x)
    idx = np.clip(idx, 0, len(_FULL) - 1)
    return np.asarray(_FULL[idx] == x) | (x == 0.0)


def quantize_index(x):
    """Encoding integer (index into full_grid) of the nearest value."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("quantize input must be finite")
    if np.any(arr < 0) or np.any(arr > E4M3.max_finite):
        raise ValueError(f"quantize input must lie in [0, {E4M3.max_finite}]")
    idx = np.searchsorted(_FULL, arr)
    idx = np.clip(idx, 1, len(_FULL) - 1)
    lo = _FULL[idx - 1]
    hi = _FULL[idx]
    pick_hi = (hi - arr < arr - lo) | ((hi - arr == arr - lo) & (idx % 2 == 0))
    return np.where(pick_hi, idx, idx - 1).astype(np.int32)


_PRODUCT_TABLE = None


def product_table():
    """quantize(clip(a*b)) for every pair of grid encodings, 120x120."""
    global _PRODUCT_TABLE
    if _PRODUCT_TABLE is None:
        prods = np.clip(np.outer(_FULL, _FULL), 0.0, E4M3.max_finite)
        _PRODUCT_TABLE = _quantize_unchecked(prods)
        _PRODUCT_TABLE.flags.writeable = False
    return _PRODUCT_TABLE


def fp8_multiply(a, b):
    """Product of two representable values, re-quantized to the format.

    The exact product is clamped into [0, 240] before rounding.
    """
    if not bool(np.all(is_representable(a))) or not bool(np.all(is_representable(b))):
        raise ValueError("fp8_multiply operands must be representable values")
    prod = np.clip(np.asarray(a, dtype=float) * np.asarray(b, dtype=float),
                   0.0, E4M3.max_finite)
    out = _quantize_unchecked(prod)
    if np.ndim(a) == 0 and np.ndim(b) == 0:
        return float(out)
    return out


def normalize(values):
    """Linear map onto [0, 1].

    The lower anchor is the smaller of 0 and the set minimum: these are
    magnitudes, and their representable range starts at 0, so a purely
    positive set is scaled against [0, max].  A set whose values are all
    equal has no range to map and is rejected.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot normalize an empty value set")
    if float(arr.max()) == float(arr.min()):
        raise ValueError("degenerate range: max equals min")
    lo = min(float(arr.min()), 0.0)
    hi = float(arr.max())
    return (arr - lo) / (hi - lo)


def normalized_grid():
    """The positive values scaled into (0, 1] by the 0..240 range."""
    return _POSITIVE / E4M3.max_finite


def dump_grid_csv():
    """CSV of the positive grid: index, raw, normalized."""
    buf = io.StringIO()
    buf.write("index,raw,normalized\n")
    norm = normalized_grid()
    for i, (raw, n) in enumerate(zip(_POSITIVE, norm)):
        buf.write(f"{i},{float(raw)!r},{float(n)!r}\n")
    return buf.getvalue()
