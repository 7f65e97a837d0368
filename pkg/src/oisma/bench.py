"""Benchmark harness: mapping, multiplication, and MatMul accuracy studies.

Three studies compare the bitstream format and the FP8 reference against a
double-precision baseline:

* mapping    -- the 119 positive FP8 values normalized into (0, 1] are
  rounded to each format's nearest representable value;
* multiply   -- all 119 x 119 = 14,161 ordered operand pairs, ideal
  products max-min normalized onto [0, 1];
* matmul     -- random uniform NxN matrices, relative Frobenius error per
  trial, averaged per dimension.

Randomness is a counter-based 64-bit generator keyed per (dimension,
trial), so adding trials or dimensions never reshuffles earlier ones and
identical configurations reproduce identical CSV bodies byte for byte.
Run metadata (seed, dataset hash, timestamp) goes to a sidecar JSON file,
never into the CSVs.
"""

from __future__ import annotations

import datetime
import hashlib
import io
import json
import os
from dataclasses import dataclass

import numpy as np

from . import dataflow, minifloat, perf
from .bp import default_dataset, dump_dataset

__all__ = [
    "BenchConfig",
    "WorkCapError",
    "DEFAULT_DIMS",
    "DEFAULT_WORK_CAP_MACS",
    "trial_rng",
    "bench_mapping",
    "bench_multiply",
    "bench_matmul",
    "simulate_workload",
    "report_metrics",
    "run_metadata",
]

DEFAULT_DIMS = (4, 8, 16, 32, 64, 128, 256, 512)
# permits the full default study (all default dims at 100 trials each)
DEFAULT_WORK_CAP_MACS = 20_000_000_000


class WorkCapError(ValueError):
    """Requested MatMul volume exceeds the configured work cap."""


@dataclass(frozen=True)
class BenchConfig:
    seed: int = 0
    dims: tuple = DEFAULT_DIMS
    trials: int = 100
    dataset: object = None          # None -> built-in dataset
    out_dir: str | None = None
    work_cap_macs: int = DEFAULT_WORK_CAP_MACS
    allow_over_cap: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(d < 1 for d in self.dims):
            raise ValueError("dims must be >= 1")

    def get_dataset(self):
        return self.dataset if self.dataset is not None else default_dataset()


def trial_rng(seed, dim, trial):
    """Independent substream for one (dimension, trial) cell."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(dim, trial))
    return np.random.Generator(np.random.Philox(ss))


def _tenth_grid_round(x):
    """Nearest point of the linear 0.1-step grid spanning [0, 1].

    This measures the resolution of the tenth-step quantization itself, so
    the top of scale rounds to 1.0 (the scaled all-ones reading); hardware
    encoding of operands clamps at 0.9 instead (see bp.encode).
    """
    return np.floor(np.asarray(x) * 10.0 + 0.5) / 10.0


@dataclass(frozen=True)
class MappingSection:
    values: np.ndarray
    fp8: np.ndarray
    bp: np.ndarray
    avg_abs_fp8: float
    avg_abs_bp: float

    def csv(self):
        buf = io.StringIO()
        buf.write("index,value,fp8,fp8_err,bp,bp_err\n")
        for i, (v, f, b) in enumerate(zip(self.values, self.fp8, self.bp)):
            v, f, b = float(v), float(f), float(b)
            buf.write(f"{i},{v!r},{f!r},{f - v!r},{b!r},{b - v!r}\n")
        return buf.getvalue()


def bench_mapping(cfg=None):
    """Per-value mapping error of both formats over the normalized baseline."""
    values = minifloat.normalized_grid()
    fp8 = minifloat.quantize(values)
    bp = _tenth_grid_round(values)
    return MappingSection(
        values=values,
        fp8=fp8,
        bp=bp,
        avg_abs_fp8=float(np.mean(np.abs(fp8 - values))),
        avg_abs_bp=float(np.mean(np.abs(bp - values))),
    )


@dataclass(frozen=True)
class MultiplySection:
    ideal: np.ndarray        # normalized ideal products, shape (119, 119)
    fp8: np.ndarray
    bp: np.ndarray
    avg_abs_fp8: float
    avg_abs_bp: float

    @property
    def n_cases(self):
        return self.ideal.size

    def csv(self):
        buf = io.StringIO()
        buf.write("i,j,ideal,fp8,fp8_abs_err,bp,bp_abs_err\n")
        n = self.ideal.shape[0]
        for i in range(n):
            for j in range(n):
                p = float(self.ideal[i, j])
                f = float(self.fp8[i, j])
                b = float(self.bp[i, j])
                buf.write(f"{i},{j},{p!r},{f!r},{abs(f - p)!r},{b!r},{abs(b - p)!r}\n")
        return buf.getvalue()


def bench_multiply(cfg=None):
    """All ordered operand pairs of the normalized baseline grid.

    Ideal products are computed in double precision and max-min normalized
    onto [0, 1]; the FP8 results re-quantize that normalized product set;
    the bitstream results AND the hardware-encoded operand pair.
    """
    dataset = (cfg.get_dataset() if cfg else default_dataset())
    values = minifloat.normalized_grid()
    prods = np.outer(values, values)
    ideal = minifloat.normalize(prods)
    fp8 = minifloat.quantize(ideal)
    # per-pair ones of the AND product, via the dataset's 10x10 table
    table = np.zeros((10, 10))
    for k in range(10):
        for j in range(10):
            table[k, j] = sum(
                a & b for a, b in zip(dataset.right[k].bits, dataset.left[j].bits)
            )
    enc = np.minimum(np.floor(values * 10.0 + 0.5).astype(int), 9)
    bp = table[np.ix_(enc, enc)] / 10.0
    return MultiplySection(
        ideal=ideal,
        fp8=fp8,
        bp=bp,
        avg_abs_fp8=float(np.mean(np.abs(fp8 - ideal))),
        avg_abs_bp=float(np.mean(np.abs(bp - ideal))),
    )


@dataclass(frozen=True)
class MatmulSection:
    rows: tuple              # (dim, trial, fp8_err, bp_err)
    mean_fp8: dict           # dim -> mean error
    mean_bp: dict

    def csv(self):
        buf = io.StringIO()
        buf.write("dim,trial,fp8_err,bp_err\n")
        for dim, trial, fe, be in self.rows:
            buf.write(f"{dim},{trial},{fe!r},{be!r}\n")
        return buf.getvalue()


def _check_work_cap(cfg):
    macs = sum(d ** 3 for d in cfg.dims) * cfg.trials
    if macs > cfg.work_cap_macs and not cfg.allow_over_cap:
        raise WorkCapError(
            f"requested {macs:.3g} MACs exceeds the work cap "
            f"{cfg.work_cap_macs:.3g}; pass allow_over_cap to proceed"
        )


def bench_matmul(cfg, trials_per_dim=None):
    """Relative Frobenius error of both formats on random square MatMuls.

    ``trials_per_dim`` optionally overrides the trial count per dimension
    (mapping dim -> trials); unlisted dims use cfg.trials.
    """
    _check_work_cap(cfg)
    dataset = cfg.get_dataset()
    rows = []
    mean_fp8 = {}
    mean_bp = {}
    for dim in cfg.dims:
        n_trials = (trials_per_dim or {}).get(dim, cfg.trials)
        fp8_errs = []
        bp_errs = []
        for trial in range(n_trials):
            rng = trial_rng(cfg.seed, dim, trial)
            x = rng.random((dim, dim))
            w = rng.random((dim, dim))
            ideal = dataflow.matmul_fp64(x, w)
            fe = dataflow.frobenius_rel_error(ideal, dataflow.matmul_fp8(x, w))
            be = dataflow.frobenius_rel_error(ideal, dataflow.matmul_bp(x, w, dataset))
            fp8_errs.append(fe)
            bp_errs.append(be)
            rows.append((dim, trial, fe, be))
        mean_fp8[dim] = float(np.mean(fp8_errs))
        mean_bp[dim] = float(np.mean(bp_errs))
    return MatmulSection(rows=tuple(rows), mean_fp8=mean_fp8, mean_bp=mean_bp)


@dataclass(frozen=True)
class WorkloadResult:
    plan: object
    outputs: list
    stats: object
    traces: list
    energy_vmm: perf.WorkloadEnergy
    energy_single: perf.WorkloadEnergy
    matches_reference: bool


def simulate_workload(x, weights, dataset=None, geometry=None, trace_limit=8):
    """Plan, execute, and account one multiplication workload.

    Verifies that the array-level execution agrees with the pure bitstream
    product before reporting energy in both multiplication modes.
    """
    dataset = dataset or default_dataset()
    plan = dataflow.plan_placement(weights, dataset, geometry)
    outputs, stats, traces = dataflow.execute(plan, x, trace_limit=trace_limit)
    ok = all(
        np.array_equal(out, dataflow.matmul_bp(x, w, dataset))
        for out, w in zip(outputs, weights)
    )
    return WorkloadResult(
        plan=plan,
        outputs=outputs,
        stats=stats,
        traces=traces,
        energy_vmm=perf.workload_energy(stats, mode="vmm"),
        energy_single=perf.workload_energy(stats, mode="single"),
        matches_reference=ok,
    )


def report_metrics(node=None, energy=None, geometry=None):
    """The 180nm operating point plus any requested scaled node."""
    base = perf.efficiency(energy=energy, geometry=geometry, node="180nm")
    reports = [base]
    if node:
        factors = perf.builtin_scaling_factors()
        if node not in factors:
            raise ValueError(
                f"no scaling factors for node {node!r}; "
                f"available: {sorted(factors)}"
            )
        reports.append(perf.scale_to_node(base, factors[node], node=node))
    return reports


def run_metadata(cfg):
    """Seed, dataset hash, and timestamp for a benchmark run."""
    text = dump_dataset(cfg.get_dataset())
    return {
        "seed": cfg.seed,
        "dims": list(cfg.dims),
        "trials": cfg.trials,
        "dataset_sha256": hashlib.sha256(text.encode()).hexdigest(),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def write_outputs(cfg, name, csv_text):
    """Write one benchmark CSV plus the run metadata sidecar."""
    if not cfg.out_dir:
        return None
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, f"{name}.csv")
    with open(path, "w") as fh:
        fh.write(csv_text)
    with open(os.path.join(cfg.out_dir, f"{name}.meta.json"), "w") as fh:
        json.dump(run_metadata(cfg), fh, indent=2)
        fh.write("\n")
    return path
