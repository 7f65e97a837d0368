"""Bit-accurate model of an in-memory stochastic multiplication engine.

The package covers the full stack: the Bent-Pyramid bitstream number format
and its compressed 8-bit hardware form (:mod:`oisma.bp`), the FP8 reference
quantizer used for accuracy comparisons (:mod:`oisma.minifloat`), a
functional 1T1R array model with control-signal traces
(:mod:`oisma.arraysim`), the gate-level accumulation periphery
(:mod:`oisma.accumulator`), a stationary matrix-multiplication dataflow
engine (:mod:`oisma.dataflow`), an energy/throughput/area model
(:mod:`oisma.perf`), and the benchmark harness (:mod:`oisma.bench`).

Quick start::

    from oisma import bp
    x = bp.encode(0.3, bp.Bias.RIGHT)
    y = bp.encode(0.6, bp.Bias.LEFT)
    bp.decode(bp.multiply(x, y))   # 0.2
"""

from . import accumulator, arraysim, bench, bp, dataflow, minifloat, perf
from .bp import Bias, BpDataset, default_dataset, decode, encode, multiply
from .dataflow import frobenius_rel_error, matmul_bp, matmul_fp8, matmul_fp64

__version__ = "0.1.0"

__all__ = [
    "accumulator",
    "arraysim",
    "bench",
    "bp",
    "dataflow",
    "minifloat",
    "perf",
    "Bias",
    "BpDataset",
    "default_dataset",
    "decode",
    "encode",
    "multiply",
    "frobenius_rel_error",
    "matmul_bp",
    "matmul_fp8",
    "matmul_fp64",
    "__version__",
]
