"""Matrix multiplication on in-memory AND arrays.

Operands live in [0, 1].  Inputs are encoded right-biased, weights
left-biased (a fixed convention; any opposite-bias assignment works).  A
weight matrix is laid out weight-stationary: one wordline holds the 8-bit
words of 32 consecutive reduction-dimension elements of a single output
column, so a single 256-bit AND against the matching input word group
yields 32 partial products, and the 256-to-9 periphery reduces them to one
binary partial sum.  Input vectors are kept stationary and broadcast to
every array that consumes them, so several weight matrices sharing the same
input (the attention Q/K/V pattern) cost one input load, not three.

matmul_bp / matmul_fp8 / matmul_fp64 are pure reference computations;
execute() drives the functional array model and must agree with matmul_bp
bit-exactly for every placement.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from . import accumulator, arraysim, minifloat
from .bp import Bias, default_dataset

__all__ = [
    "ArrayGeometry",
    "BpMatrix",
    "PlacementPlan",
    "ScheduleStats",
    "CapacityError",
    "encode_tenths",
    "encode_matrix",
    "matmul_bp",
    "matmul_fp8",
    "matmul_fp64",
    "frobenius_rel_error",
    "plan_placement",
    "execute",
    "save_matrix_csv",
    "load_matrix_csv",
    "dump_plan",
]


class CapacityError(ValueError):
    """Weight matrices do not fit the available array inventory."""


@dataclass(frozen=True)
class ArrayGeometry:
    rows: int = 128
    cols: int = 256
    word_bits: int = 8
    arrays: int = 256  # available inventory (1 MB engine scale)

    @property
    def words_per_line(self):
        return self.cols // self.word_bits


def _as_matrix(m):
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix elements must be finite")
    return arr


def encode_tenths(m):
    """Round matrix elements to tenths (ties away from zero, clamp at 0.9)."""
    arr = _as_matrix(m)
    if np.any(arr < 0) or np.any(arr > 1):
        bad = np.argwhere((arr < 0) | (arr > 1))[0]
        raise ValueError(
            f"element ({bad[0]},{bad[1]}) = {arr[bad[0], bad[1]]!r} outside [0, 1]"
        )
    return np.minimum(np.floor(arr * 10.0 + 0.5), 9).astype(np.uint8)


def _bits8_table(dataset, bias):
    entries = dataset.right if bias is Bias.RIGHT else dataset.left
    return np.array([e.bits[1:9] for e in entries], dtype=np.uint8)


@dataclass(frozen=True)
class BpMatrix:
    """A matrix of encoded bitstream values with one uniform bias."""

    tenths: np.ndarray
    bias: Bias
    dataset: object

    @property
    def shape(self):
        return self.tenths.shape

    def decode(self):
        return self.tenths.astype(float) / 10.0

    def bits8(self):
        """Per-element compressed 8-bit patterns, shape (rows, cols, 8)."""
        return _bits8_table(self.dataset, self.bias)[self.tenths]


def encode_matrix(m, bias, dataset=None):
    if dataset is None:
        dataset = default_dataset()
    return BpMatrix(tenths=encode_tenths(m), bias=bias, dataset=dataset)


def matmul_bp(x, w, dataset=None):
    """Bitstream matrix product: AND per element pair, binary accumulation.

    Per output element the ones of the 8-bit AND results are accumulated as
    binary integers over the reduction dimension and rescaled by 10 once.
    """
    if dataset is None:
        dataset = default_dataset()
    x = _as_matrix(x)
    w = _as_matrix(w)
    if x.shape[1] != w.shape[0]:
        raise ValueError(f"inner dimensions disagree: {x.shape} x {w.shape}")
    xk = encode_tenths(x)
    wk = encode_tenths(w)
    rbits = _bits8_table(dataset, Bias.RIGHT).astype(np.float32)
    lbits = _bits8_table(dataset, Bias.LEFT).astype(np.float32)
    # expand each element to its 8 physical bits; the whole product is then
    # one integer-exact binary matmul (values stay far below 2**24)
    xb = rbits[xk].reshape(x.shape[0], -1)
    wb = lbits[wk].transpose(0, 2, 1).reshape(-1, w.shape[1])
    ones = xb @ wb
    return np.asarray(np.rint(ones), dtype=float) / 10.0


def matmul_fp64(x, w):
    """Double-precision reference product."""
    x = _as_matrix(x)
    w = _as_matrix(w)
    if x.shape[1] != w.shape[0]:
        raise ValueError(f"inner dimensions disagree: {x.shape} x {w.shape}")
    return x @ w


def matmul_fp8(x, w, block=None):
    """Product with FP8 operands and per-product FP8 rounding.

    Operands are quantized to the format, every scalar product is clamped
    and re-quantized, and the accumulation itself runs in double precision.
    Since FP8 pair products are exact in double precision, the per-product
    rounding is served from a precomputed 120x120 table indexed by the
    operand encodings; work proceeds in reduction-dimension blocks.
    """
    x = _as_matrix(x)
    w = _as_matrix(w)
    if x.shape[1] != w.shape[0]:
        raise ValueError(f"inner dimensions disagree: {x.shape} x {w.shape}")
    xc = minifloat.quantize_index(x)
    wc = minifloat.quantize_index(w)
    table = minifloat.product_table().ravel()
    width = minifloat.full_grid().size
    n, k = x.shape
    m = w.shape[1]
    if block is None:
        block = max(1, int(4_000_000 // max(n * m, 1)))
    out = np.zeros((n, m))
    for k0 in range(0, k, block):
        k1 = min(k0 + block, k)
        flat = xc[:, k0:k1, None] * width + wc[None, k0:k1, :]
        out += table[flat].sum(axis=1)
    return out


def frobenius_rel_error(a, a_hat):
    """Frobenius norm of the deviation, relative to the reference norm."""
    a = _as_matrix(a)
    a_hat = _as_matrix(a_hat)
    if a.shape != a_hat.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {a_hat.shape}")
    denom = float(np.linalg.norm(a))
    if denom == 0.0:
        raise ValueError("reference matrix has zero Frobenius norm")
    return float(np.linalg.norm(a - a_hat) / denom)


@dataclass(frozen=True)
class LineAssignment:
    wordline: int
    out_col: int   # output column j served by this wordline
    chunk: int     # reduction-dimension chunk (32 words) stored on it


@dataclass(frozen=True)
class ArrayPlacement:
    array_index: int
    matrix_index: int
    lines: tuple


@dataclass(frozen=True)
class PlacementPlan:
    geometry: ArrayGeometry
    dataset: object
    weight_tenths: tuple      # encoded weight matrices (uint8 arrays)
    shapes: tuple             # original (K, M) per matrix
    placements: tuple         # ArrayPlacement entries
    n_chunks: int

    @property
    def n_arrays(self):
        return len(self.placements)

    @property
    def broadcast_fanout(self):
        return len({p.array_index for p in self.placements})


@dataclass
class ScheduleStats:
    """Operation counts of one engine run; fields add across runs."""

    and_ops: int = 0
    cycles: int = 0
    input_reads: int = 0        # 256-bit input word-group loads (shared by fan-out)
    input_rows_loaded: int = 0  # distinct input vectors loaded, per matrix group
    accumulator_invocations: int = 0
    weight_writes: int = 0
    macs: int = 0
    ops: int = 0
    arrays_used: int = 0

    def __add__(self, other):
        return ScheduleStats(
            and_ops=self.and_ops + other.and_ops,
            cycles=self.cycles + other.cycles,
            input_reads=self.input_reads + other.input_reads,
            input_rows_loaded=self.input_rows_loaded + other.input_rows_loaded,
            accumulator_invocations=self.accumulator_invocations
            + other.accumulator_invocations,
            weight_writes=self.weight_writes + other.weight_writes,
            macs=self.macs + other.macs,
            ops=self.ops + other.ops,
            arrays_used=max(self.arrays_used, other.arrays_used),
        )


def plan_placement(weights, dataset=None, geometry=None):
    """Weight-stationary tiling of one or more weight matrices.

    All matrices must share the reduction dimension K (they consume the
    same input rows).  Each gets dedicated arrays; a wordline stores 32
    words: elements k0..k0+31 of one output column, zero-padded past K.
    """
    if dataset is None:
        dataset = default_dataset()
    if geometry is None:
        geometry = ArrayGeometry()
    mats = [_as_matrix(w) for w in weights]
    if not mats:
        raise ValueError("at least one weight matrix is required")
    k = mats[0].shape[0]
    for w in mats[1:]:
        if w.shape[0] != k:
            raise ValueError("all weight matrices must share the reduction dimension")
    n_chunks = max(1, math.ceil(k / geometry.words_per_line))
    placements = []
    array_index = 0
    tenths = []
    for mi, w in enumerate(mats):
        tenths.append(encode_tenths(w))
        m_cols = w.shape[1]
        lines = [
            LineAssignment(wordline=0, out_col=j, chunk=c)
            for j in range(m_cols)
            for c in range(n_chunks)
        ]
        for start in range(0, len(lines), geometry.rows):
            group = lines[start:start + geometry.rows]
            group = tuple(
                LineAssignment(wordline=i, out_col=la.out_col, chunk=la.chunk)
                for i, la in enumerate(group)
            )
            placements.append(
                ArrayPlacement(array_index=array_index, matrix_index=mi, lines=group)
            )
            array_index += 1
    if array_index > geometry.arrays:
        raise CapacityError(
            f"placement needs {array_index} arrays but only "
            f"{geometry.arrays} are available"
        )
    return PlacementPlan(
        geometry=geometry,
        dataset=dataset,
        weight_tenths=tuple(tenths),
        shapes=tuple(w.shape for w in mats),
        placements=tuple(placements),
        n_chunks=n_chunks,
    )


def _line_bits(plan, placement, la):
    """The 256 stored bits of one wordline (32 left-biased 8-bit words)."""
    geom = plan.geometry
    wpl = geom.words_per_line
    k_dim = plan.shapes[placement.matrix_index][0]
    tenths = plan.weight_tenths[placement.matrix_index]
    lbits = _bits8_table(plan.dataset, Bias.LEFT)
    words = np.zeros((wpl, geom.word_bits), dtype=np.uint8)
    k0 = la.chunk * wpl
    for t in range(wpl):
        kk = k0 + t
        if kk < k_dim:
            words[t] = lbits[tenths[kk, la.out_col]]
    return words.reshape(-1)


def execute(plan, x, trace_limit=0):
    """Run the planned multiplication on functional arrays.

    Returns (outputs, stats, traces): one output matrix per weight matrix,
    the schedule statistics, and up to ``trace_limit`` sampled operation
    traces.  Results equal matmul_bp exactly; the placement only changes
    the schedule, never the values.
    """
    x = _as_matrix(x)
    geom = plan.geometry
    wpl = geom.words_per_line
    n_rows = x.shape[0]
    k_dim = x.shape[1]
    if k_dim != plan.shapes[0][0]:
        raise ValueError(
            f"input has K={k_dim} but the plan was built for K={plan.shapes[0][0]}"
        )
    xk = encode_tenths(x)
    rbits = _bits8_table(plan.dataset, Bias.RIGHT)

    arrays = []
    stats = ScheduleStats(arrays_used=len(plan.placements))
    traces = []
    for placement in plan.placements:
        arr = arraysim.OismaArray(rows=geom.rows, cols=geom.cols)
        for la in placement.lines:
            t = arr.write_row(la.wordline, _line_bits(plan, placement, la))
            stats.weight_writes += 1
            if len(traces) < trace_limit:
                traces.append(t)
        arrays.append(arr)

    outputs = [
        np.zeros((n_rows, shape[1]), dtype=np.int64) for shape in plan.shapes
    ]
    per_array_ands = [0] * len(plan.placements)

    # input-stationary outer loop: finish every consumer of one input row
    # (all chunks, all arrays) before loading the next row
    for i in range(n_rows):
        stats.input_rows_loaded += 1
        for c in range(plan.n_chunks):
            words = np.zeros((wpl, geom.word_bits), dtype=np.uint8)
            k0 = c * wpl
            upto = min(wpl, k_dim - k0)
            if upto > 0:
                words[:upto] = rbits[xk[i, k0:k0 + upto]]
            group_bits = words.reshape(-1)
            stats.input_reads += 1  # broadcast once, whatever the fan-out
            for ai, placement in enumerate(plan.placements):
                lines = [la for la in placement.lines if la.chunk == c]
                if not lines:
                    continue
                results = np.empty((len(lines), geom.cols), dtype=np.uint8)
                for li, la in enumerate(lines):
                    want_trace = len(traces) < trace_limit
                    out_bits, t = arrays[ai].and_row(
                        la.wordline, group_bits, trace=want_trace
                    )
                    if want_trace:
                        traces.append(t)
                    results[li] = out_bits
                    stats.and_ops += 1
                    per_array_ands[ai] += 1
                # one periphery pass per AND result (evaluated as a batch)
                counts = accumulator.accumulate256(results)
                stats.accumulator_invocations += len(lines)
                mat = outputs[placement.matrix_index]
                for la, count in zip(lines, counts):
                    mat[i, la.out_col] += int(count)

    stats.cycles = max(per_array_ands) if per_array_ands else 0
    stats.macs = sum(n_rows * k * m for k, m in plan.shapes)
    stats.ops = 2 * stats.macs
    return [o.astype(float) / 10.0 for o in outputs], stats, traces


def save_matrix_csv(path, m):
    """Row-major CSV with a ``rows,cols`` header line."""
    arr = _as_matrix(m)
    with open(path, "w") as fh:
        fh.write(f"{arr.shape[0]},{arr.shape[1]}\n")
        for row in arr:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_matrix_csv(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"{path}: empty matrix file")
    try:
        rows, cols = (int(v) for v in lines[0].split(","))
    except ValueError as exc:
        raise ValueError(f"{path}: malformed rows,cols header") from exc
    if len(lines) != rows + 1:
        raise ValueError(f"{path}: expected {rows} data lines, found {len(lines) - 1}")
    data = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    arr = np.array(data, dtype=float)
    if arr.shape != (rows, cols):
        raise ValueError(f"{path}: data shape {arr.shape} does not match header")
    return arr


def dump_plan(plan):
    """Readable placement listing plus the input broadcast table."""
    buf = io.StringIO()
    for p in plan.placements:
        cols = sorted({la.out_col for la in p.lines})
        chunks = sorted({la.chunk for la in p.lines})
        buf.write(
            f"array {p.array_index}: matrix={p.matrix_index} "
            f"out_cols={cols[0]}..{cols[-1]} chunks={chunks[0]}..{chunks[-1]} "
            f"wordlines=0..{len(p.lines) - 1}\n"
        )
    fanout = sorted({p.array_index for p in plan.placements})
    buf.write("broadcast: every input row -> arrays " +
              ",".join(str(a) for a in fanout) + "\n")
    return buf.getvalue()
