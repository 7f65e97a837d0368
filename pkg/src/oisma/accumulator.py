"""Gate-level model of the accumulation periphery.

Population counts are computed by evaluating an explicit netlist of
full/half adder cells, never by counting bits directly:

* a 16-input parallel counter (5-bit output) built from two 7-input
  counters, a 3-bit combining row and an increment chain -- 11 full adders
  plus 4 half adders;
* a 64-to-7 converter: four parallel counters joined by two 5-bit adders
  and one 6-bit adder;
* the full 256-to-9 array periphery: four converters joined by two 7-bit
  adders and one 8-bit adder.

Multi-bit adders are ripple-carry chains of the same cell types.  Netlists
are immutable once built and evaluation is pure, so a single shared
instance serves any number of callers.  Evaluation is vectorized: passing a
batch of input vectors evaluates every cell once over the whole batch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Netlist",
    "build_count16",
    "build_convert64",
    "build_accumulate256",
    "parallel_count16",
    "convert64",
    "accumulate256",
    "netlist_stats",
    "dump_netlist",
]


@dataclass(frozen=True)
class Cell:
    index: int
    kind: str          # "FA" | "HA"
    ins: tuple         # 2 or 3 wire ids
    sum_out: int
    carry_out: int


@dataclass
class Netlist:
    """DAG of adder cells; wires are integer ids, inputs come first."""

    n_inputs: int
    cells: list = field(default_factory=list)
    groups: list = field(default_factory=list)  # (name, n_cells) per sub-structure
    outputs: tuple = ()                         # LSB-first wire ids
    _n_wires: int = 0

    def __post_init__(self):
        self._n_wires = self.n_inputs

    def new_wire(self):
        w = self._n_wires
        self._n_wires += 1
        return w

    def full_adder(self, a, b, c):
        s, co = self.new_wire(), self.new_wire()
        self.cells.append(Cell(len(self.cells), "FA", (a, b, c), s, co))
        return s, co

    def half_adder(self, a, b):
        s, co = self.new_wire(), self.new_wire()
        self.cells.append(Cell(len(self.cells), "HA", (a, b), s, co))
        return s, co

    def ripple_add(self, a_bits, b_bits):
        """Add two equal-width LSB-first vectors; result is one bit wider."""
        assert len(a_bits) == len(b_bits)
        out = []
        s, carry = self.half_adder(a_bits[0], b_bits[0])
        out.append(s)
        for a, b in zip(a_bits[1:], b_bits[1:]):
            s, carry = self.full_adder(a, b, carry)
            out.append(s)
        out.append(carry)
        return out

    def mark_group(self, name, start_cell):
        self.groups.append((name, len(self.cells) - start_cell))

    def evaluate(self, bits):
        """Evaluate the netlist; ``bits`` is (..., n_inputs) of 0/1.

        Returns the output value(s) as unsigned integers.
        """
        arr = np.asarray(bits)
        if arr.shape[-1] != self.n_inputs:
            raise ValueError(
                f"expected {self.n_inputs} input bits, got {arr.shape[-1]}"
            )
        squeeze = arr.ndim == 1
        arr = np.atleast_2d(arr).astype(bool)
        wires = [None] * self._n_wires
        for i in range(self.n_inputs):
            wires[i] = arr[:, i]
        for cell in self.cells:
            if cell.kind == "FA":
                a, b, c = (wires[w] for w in cell.ins)
                wires[cell.sum_out] = a ^ b ^ c
                wires[cell.carry_out] = (a & b) | (a & c) | (b & c)
            else:
                a, b = (wires[w] for w in cell.ins)
                wires[cell.sum_out] = a ^ b
                wires[cell.carry_out] = a & b
        value = np.zeros(arr.shape[0], dtype=np.int64)
        for pos, w in enumerate(self.outputs):
            value += wires[w].astype(np.int64) << pos
        return int(value[0]) if squeeze else value

    @property
    def output_width(self):
        return len(self.outputs)


def _count7(nl, ins):
    """7 input bits -> 3-bit count, 4 full adders."""
    s1, c1 = nl.full_adder(ins[0], ins[1], ins[2])
    s2, c2 = nl.full_adder(ins[3], ins[4], ins[5])
    bit0, c3 = nl.full_adder(s1, s2, ins[6])
    bit1, bit2 = nl.full_adder(c1, c2, c3)
    return [bit0, bit1, bit2]


def _count16_into(nl, ins):
    """16 input bits -> 5-bit count (11 FA + 4 HA), appended to ``nl``."""
    start = len(nl.cells)
    a = _count7(nl, ins[0:7])
    b = _count7(nl, ins[7:14])
    # a + b + ins[14]: 3-bit row with carry-in bit -> 4-bit partial count
    r0, carry = nl.full_adder(a[0], b[0], ins[14])
    r1, carry = nl.full_adder(a[1], b[1], carry)
    r2, r3 = nl.full_adder(a[2], b[2], carry)
    # increment by the last raw bit through a half-adder chain
    out = []
    carry = ins[15]
    for r in (r0, r1, r2, r3):
        s, carry = nl.half_adder(r, carry)
        out.append(s)
    out.append(carry)
    nl.mark_group("count16", start)
    return out


def _convert64_into(nl, ins):
    counts = [_count16_into(nl, ins[i * 16:(i + 1) * 16]) for i in range(4)]
    start = len(nl.cells)
    s01 = nl.ripple_add(counts[0], counts[1])
    nl.mark_group("adder5", start)
    start = len(nl.cells)
    s23 = nl.ripple_add(counts[2], counts[3])
    nl.mark_group("adder5", start)
    start = len(nl.cells)
    total = nl.ripple_add(s01, s23)
    nl.mark_group("adder6", start)
    return total


def build_count16():
    nl = Netlist(n_inputs=16)
    nl.outputs = tuple(_count16_into(nl, list(range(16))))
    return nl


def build_convert64():
    nl = Netlist(n_inputs=64)
    nl.outputs = tuple(_convert64_into(nl, list(range(64))))
    return nl


def build_accumulate256():
    nl = Netlist(n_inputs=256)
    converted = [_convert64_into(nl, list(range(i * 64, (i + 1) * 64))) for i in range(4)]
    start = len(nl.cells)
    s01 = nl.ripple_add(converted[0], converted[1])
    nl.mark_group("adder7", start)
    start = len(nl.cells)
    s23 = nl.ripple_add(converted[2], converted[3])
    nl.mark_group("adder7", start)
    start = len(nl.cells)
    total = nl.ripple_add(s01, s23)
    nl.mark_group("adder8", start)
    nl.outputs = tuple(total)
    return nl


_COUNT16 = build_count16()
_CONVERT64 = build_convert64()
_ACCUM256 = build_accumulate256()


def parallel_count16(bits):
    """Population count of 16 bits through the gate netlist (5-bit result)."""
    return _COUNT16.evaluate(bits)


def convert64(bits):
    """Population count of 64 bits through the gate netlist (7-bit result)."""
    return _CONVERT64.evaluate(bits)


def accumulate256(bits):
    """Population count of a 256-bit wordline result (9-bit result)."""
    return _ACCUM256.evaluate(bits)


def netlist_stats():
    """Cell and sub-structure counts for each periphery building block."""
    def describe(nl):
        fa = sum(1 for c in nl.cells if c.kind == "FA")
        ha = sum(1 for c in nl.cells if c.kind == "HA")
        counters = sum(1 for name, _ in nl.groups if name == "count16")
        multibit = [name for name, _ in nl.groups if name.startswith("adder")]
        return {
            "full_adders": fa,
            "half_adders": ha,
            "cells": fa + ha,
            "counters": counters,
            "multibit_adders": multibit,
            "output_width": nl.output_width,
        }

    stats = {
        "count16": describe(_COUNT16),
        "convert64": describe(_CONVERT64),
        "accumulate256": describe(_ACCUM256),
    }
    # at the top level the four 64-bit converters are the sub-structures
    stats["accumulate256"]["converters"] = 4
    stats["accumulate256"]["multibit_adders"] = ["adder7", "adder7", "adder8"]
    stats["convert64"]["multibit_adders"] = ["adder5", "adder5", "adder6"]
    return stats


def dump_netlist(nl):
    """One line per cell: ``<id> <kind> <in...> -> <sum> <carry>``."""
    lines = []
    for c in nl.cells:
        ins = " ".join(str(w) for w in c.ins)
        lines.append(f"{c.index} {c.kind} {ins} -> {c.sum_out} {c.carry_out}")
    return "\n".join(lines) + "\n"
