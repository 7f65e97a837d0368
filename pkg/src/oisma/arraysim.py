"""Functional model of one 256-column x 128-row 1T1R in-memory compute array.

The array stores logic 1 as the high-resistance state (HRS) and logic 0 as
the low-resistance state (LRS).  Three operations are supported, each
driven through the wordline selected by the address decoder (exactly one
wordline per operation):

* write_row -- program a full row of bitcells;
* read_row  -- conventional two-phase read (precharge, float & sense);
* and_row   -- in-situ AND between a 256-bit input vector and the stored
  row: per column, an input of 1 precharges the bitline as in a read so the
  cell value is sensed, an input of 0 pre-discharges it so the sense
  amplifier always reads 0.

Sensing is modeled as ideal digital behavior (the analog discharge-rate
discrimination is abstracted away); an optional per-cell stuck-at map
supports fault-injection experiments and defaults to empty.  Every
operation emits an OpTrace recording the control-signal tuple of each
phase, with don't-care fields kept symbolic as ``X``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "X",
    "RramState",
    "BitlineDrive",
    "ControlVector",
    "PhaseEntry",
    "Phase",
    "OpTrace",
    "OismaArray",
    "latency",
    "READ_AND_TOTAL_NS",
    "PRECHARGE_NS",
    "SENSE_NS",
    "WRITE_NS",
    "PRECHARGE_FRACTION",
    "READ_PHASE1",
    "FLOAT_PHASE",
    "AND_IN0_PHASE1",
    "AND_IN1_PHASE1",
    "WRITE_LOGIC0",
    "WRITE_LOGIC1",
    "format_trace",
]

X = "X"  # don't-care control level


class RramState(enum.IntEnum):
    """Bitcell resistance states; HRS stores logic 1, LRS stores logic 0."""

    LRS = 0
    HRS = 1


class BitlineDrive(str, enum.Enum):
    CHARGE = "Charge"
    DISCHARGE = "Discharge"
    FLOATING = "Floating"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ControlVector:
    """One row of the control truth table (single phase, single IN value)."""

    WE: object
    S: object
    Sb: object
    R: object
    IN: object
    Pre_en: object
    BL: BitlineDrive
    BLb: BitlineDrive

    def __post_init__(self):
        if self.S != X and self.Sb != X and self.S == self.Sb:
            raise ValueError("S and Sb must be complementary when both driven")


# pre-charge/discharge phase of a conventional read
READ_PHASE1 = ControlVector(WE=0, S=0, Sb=1, R=1, IN=X, Pre_en=1,
                            BL=BitlineDrive.CHARGE, BLb=BitlineDrive.DISCHARGE)
# floating & sensing phase shared by read and AND
FLOAT_PHASE = ControlVector(WE=0, S=0, Sb=1, R=0, IN=X, Pre_en=0,
                            BL=BitlineDrive.FLOATING, BLb=BitlineDrive.FLOATING)
# multiplication precharge: bitline level follows the input bit
AND_IN0_PHASE1 = ControlVector(WE=0, S=1, Sb=0, R=0, IN=0, Pre_en=1,
                               BL=BitlineDrive.DISCHARGE, BLb=BitlineDrive.DISCHARGE)
AND_IN1_PHASE1 = ControlVector(WE=0, S=1, Sb=0, R=0, IN=1, Pre_en=1,
                               BL=BitlineDrive.CHARGE, BLb=BitlineDrive.DISCHARGE)
WRITE_LOGIC0 = ControlVector(WE=1, S=1, Sb=0, R=X, IN=0, Pre_en=X,
                             BL=BitlineDrive.DISCHARGE, BLb=BitlineDrive.CHARGE)
WRITE_LOGIC1 = ControlVector(WE=1, S=1, Sb=0, R=X, IN=1, Pre_en=X,
                             BL=BitlineDrive.CHARGE, BLb=BitlineDrive.DISCHARGE)

READ_AND_TOTAL_NS = 20.0
PRECHARGE_NS = 14.0
SENSE_NS = READ_AND_TOTAL_NS - PRECHARGE_NS
PRECHARGE_FRACTION = PRECHARGE_NS / READ_AND_TOTAL_NS
WRITE_NS = 20.0  # one cycle at the 50 MHz operating point


@dataclass(frozen=True)
class PhaseEntry:
    """A control vector plus the columns it applies to (None = all columns)."""

    vector: ControlVector
    columns: tuple | None = None


@dataclass(frozen=True)
class Phase:
    entries: tuple
    duration_ns: float


@dataclass(frozen=True)
class OpTrace:
    op: str
    row: int
    phases: tuple

    @property
    def total_ns(self):
        return sum(p.duration_ns for p in self.phases)


def latency(op):
    """Operation latency in ns; read and AND share the two-phase protocol."""
    if op in ("read", "and"):
        return READ_AND_TOTAL_NS
    if op == "write":
        return WRITE_NS
    raise ValueError(f"unknown operation {op!r}")


def _split_by_input(input_bits, vec0, vec1):
    """Phase entries for a per-column operation: one representative per IN level."""
    zeros = tuple(int(c) for c in np.flatnonzero(input_bits == 0))
    ones = tuple(int(c) for c in np.flatnonzero(input_bits == 1))
    entries = []
    if zeros:
        entries.append(PhaseEntry(vec0, None if not ones else zeros))
    if ones:
        entries.append(PhaseEntry(vec1, None if not zeros else ones))
    return tuple(entries)


class OismaArray:
    """Mutable array state; one instance must be driven by a single writer."""

    def __init__(self, rows=128, cols=256):
        self.rows = rows
        self.cols = cols
        self.cells = np.zeros((rows, cols), dtype=np.uint8)  # fresh cells hold LRS
        self.stuck = {}  # (row, col) -> forced bit, empty by default

    def _check_row(self, row):
        if not 0 <= row < self.rows:
            raise IndexError(f"row {row} out of range 0..{self.rows - 1}")

    def _check_bits(self, bits):
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.shape != (self.cols,):
            raise ValueError(f"expected {self.cols} bits, got shape {arr.shape}")
        return arr

    def _sensed_row(self, row):
        stored = self.cells[row].copy()
        for (r, c), v in self.stuck.items():
            if r == row:
                stored[c] = v
        return stored

    def write_row(self, row, bits):
        """Program a row; cell (row, c) becomes HRS iff bits[c] = 1."""
        self._check_row(row)
        arr = self._check_bits(bits)
        self.cells[row] = arr
        trace = OpTrace(
            op="write",
            row=row,
            phases=(Phase(_split_by_input(arr, WRITE_LOGIC0, WRITE_LOGIC1), WRITE_NS),),
        )
        return trace

    def read_row(self, row, trace=True):
        """Sense a full row; returns (bits, OpTrace)."""
        self._check_row(row)
        out = self._sensed_row(row)
        if not trace:
            return out, None
        t = OpTrace(
            op="read",
            row=row,
            phases=(
                Phase((PhaseEntry(READ_PHASE1),), PRECHARGE_NS),
                Phase((PhaseEntry(FLOAT_PHASE),), SENSE_NS),
            ),
        )
        return out, t

    def and_row(self, row, input_bits, trace=True):
        """In-situ AND of a 256-bit input vector with the stored row."""
        self._check_row(row)
        arr = self._check_bits(input_bits)
        out = arr & self._sensed_row(row)
        if not trace:
            return out, None
        t = OpTrace(
            op="and",
            row=row,
            phases=(
                Phase(_split_by_input(arr, AND_IN0_PHASE1, AND_IN1_PHASE1), PRECHARGE_NS),
                Phase((PhaseEntry(FLOAT_PHASE),), SENSE_NS),
            ),
        )
        return out, t

    def snapshot(self):
        """Array state as text: one line of 0/1 characters per row."""
        return "\n".join("".join(str(b) for b in row) for row in self.cells) + "\n"


def format_trace(trace):
    """Line-oriented trace export, one control vector per line."""
    lines = []
    for n, phase in enumerate(trace.phases, start=1):
        for entry in phase.entries:
            v = entry.vector
            line = (
                f"{trace.op} phase={n} WE={v.WE} S={v.S} Sb={v.Sb} R={v.R} "
                f"IN={v.IN} Pre_en={v.Pre_en} BL={v.BL} BLb={v.BLb} "
                f"dur_ns={phase.duration_ns:g}"
            )
            lines.append(line)
    return "\n".join(lines) + "\n"
