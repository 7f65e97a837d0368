"""Command-line front end for the benchmark suite and the simulator.

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import arraysim, bench, bp, dataflow, minifloat, perf


def _load_dataset_arg(path):
    if path is None or path == "default":
        return bp.default_dataset()
    with open(path) as fh:
        return bp.load_dataset(fh.read())


def _add_common(sub):
    sub.add_argument("--dataset", default=None,
                     help="dataset file to use instead of the built-in one")
    sub.add_argument("--out", default=None, help="output directory for CSV files")
    fmt = sub.add_mutually_exclusive_group()
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table")
    sub.set_defaults(fmt="table")


def _emit(args, name, csv_text, table_text):
    if args.out:
        cfg = bench.BenchConfig(seed=getattr(args, "seed", 0),
                                dataset=_load_dataset_arg(args.dataset),
                                out_dir=args.out)
        path = bench.write_outputs(cfg, name, csv_text)
        print(f"wrote {path}")
    if args.fmt == "csv":
        sys.stdout.write(csv_text)
    else:
        sys.stdout.write(table_text)


def cmd_dataset(args):
    if args.action == "dump":
        text = bp.dump_dataset(_load_dataset_arg(args.dataset))
        if args.path == "-":
            sys.stdout.write(text)
        else:
            with open(args.path, "w") as fh:
                fh.write(text)
            print(f"wrote {args.path}")
        return 0
    # validate
    with open(args.path) as fh:
        text = fh.read()
    try:
        ds = bp.load_dataset(text)
    except bp.DatasetError as exc:
        print(f"INVALID: {exc}")
        return 1
    violations = bp.validate_dataset(ds)
    if violations:
        for v in violations:
            print(f"INVALID: {v}")
        return 1
    print("OK: dataset passes all structural checks")
    return 0


def cmd_dump_grid(args):
    text = minifloat.dump_grid_csv()
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "fp8_grid.csv")
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench_mapping(args):
    section = bench.bench_mapping()
    table = (
        f"mapping over {len(section.values)} baseline values\n"
        f"  FP8  average absolute error: {100 * section.avg_abs_fp8:.4f}%\n"
        f"  BP10 average absolute error: {100 * section.avg_abs_bp:.4f}%\n"
    )
    _emit(args, "mapping", section.csv(), table)
    return 0


def cmd_bench_multiply(args):
    cfg = bench.BenchConfig(dataset=_load_dataset_arg(args.dataset))
    section = bench.bench_multiply(cfg)
    table = (
        f"multiplication over {section.n_cases} operand pairs\n"
        f"  FP8  average absolute error: {100 * section.avg_abs_fp8:.4f}%\n"
        f"  BP10 average absolute error: {100 * section.avg_abs_bp:.4f}%\n"
    )
    _emit(args, "multiply", section.csv(), table)
    return 0


def cmd_bench_matmul(args):
    dims = tuple(int(d) for d in args.dims.split(","))
    cfg = bench.BenchConfig(
        seed=args.seed,
        dims=dims,
        trials=args.trials,
        dataset=_load_dataset_arg(args.dataset),
        out_dir=args.out,
        allow_over_cap=args.force,
    )
    try:
        section = bench.bench_matmul(cfg)
    except bench.WorkCapError as exc:
        print(f"refused: {exc}")
        return 1
    lines = ["dim   mean FP8 err   mean BP err"]
    for dim in dims:
        lines.append(
            f"{dim:<6}{100 * section.mean_fp8[dim]:>10.4f}%"
            f"{100 * section.mean_bp[dim]:>12.4f}%"
        )
    _emit(args, "matmul", section.csv(), "\n".join(lines) + "\n")
    return 0


def cmd_simulate(args):
    dataset = _load_dataset_arg(args.dataset)
    x = dataflow.load_matrix_csv(args.inputs)
    weights = [dataflow.load_matrix_csv(p) for p in args.weights.split(",")]
    try:
        result = bench.simulate_workload(x, weights, dataset=dataset)
    except (dataflow.CapacityError, ValueError) as exc:
        print(f"error: {exc}")
        return 1
    print(dataflow.dump_plan(result.plan), end="")
    s = result.stats
    print(f"AND ops: {s.and_ops}  cycles: {s.cycles}  "
          f"input reads: {s.input_reads}  MACs: {s.macs}  ops: {s.ops}")
    print(f"reference match: {'yes' if result.matches_reference else 'NO'}")
    print(f"energy (VMM):    {result.energy_vmm.total_pj:.3f} pJ "
          f"(mult {result.energy_vmm.mult_fj:.0f} fJ, "
          f"accum {result.energy_vmm.accum_fj:.0f} fJ, "
          f"reads {result.energy_vmm.read_fj:.0f} fJ)")
    print(f"energy (single): {result.energy_single.total_pj:.3f} pJ")
    print("trace sample:")
    for t in result.traces[: args.trace_lines]:
        sys.stdout.write(arraysim.format_trace(t))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for i, out in enumerate(result.outputs):
            path = os.path.join(args.out, f"output_{i}.csv")
            dataflow.save_matrix_csv(path, out)
            print(f"wrote {path}")
    return 0 if result.matches_reference else 1


def cmd_metrics(args):
    reports = bench.report_metrics(node=args.node)
    if args.fmt == "csv":
        sys.stdout.write(perf.report_csv(reports))
    else:
        sys.stdout.write(perf.report_table(reports))
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="oisma",
        description="bitstream in-memory multiplication: benchmarks and simulator",
    )
    sub = p.add_subparsers(dest="command", required=True)

    ds = sub.add_parser("dataset", help="validate or dump a bitstream dataset")
    ds.add_argument("action", choices=["validate", "dump"])
    ds.add_argument("path", help="dataset file ('-' for stdout when dumping)")
    ds.add_argument("--dataset", default=None,
                    help="source dataset for dump (defaults to the built-in)")
    ds.set_defaults(func=cmd_dataset)

    dg = sub.add_parser("dump-grid", help="emit the FP8 value grid as CSV")
    dg.add_argument("--out", default=None)
    dg.set_defaults(func=cmd_dump_grid)

    b = sub.add_parser("bench", help="run an accuracy benchmark")
    bsub = b.add_subparsers(dest="benchmark", required=True)

    bm = bsub.add_parser("mapping")
    _add_common(bm)
    bm.set_defaults(func=cmd_bench_mapping)

    bx = bsub.add_parser("multiply")
    _add_common(bx)
    bx.set_defaults(func=cmd_bench_multiply)

    bmm = bsub.add_parser("matmul")
    _add_common(bmm)
    bmm.add_argument("--dims", default="4,8,16,32,64,128,256,512")
    bmm.add_argument("--trials", type=int, default=100)
    bmm.add_argument("--seed", type=int, default=0)
    bmm.add_argument("--force", action="store_true",
                     help="allow runs larger than the work cap")
    bmm.set_defaults(func=cmd_bench_matmul)

    sim = sub.add_parser("simulate", help="run a workload on the array model")
    sim.add_argument("--inputs", required=True, help="input matrix CSV")
    sim.add_argument("--weights", required=True,
                     help="comma-separated weight matrix CSVs")
    sim.add_argument("--dataset", default=None)
    sim.add_argument("--out", default=None)
    sim.add_argument("--trace-lines", type=int, default=3)
    sim.set_defaults(func=cmd_simulate)

    m = sub.add_parser("metrics", help="print efficiency metrics")
    m.add_argument("--node", default=None, help="also report a scaled node, e.g. 22nm")
    fmt = m.add_mutually_exclusive_group()
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table")
    m.set_defaults(fmt="table", func=cmd_metrics)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (bp.DatasetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
