"""Command-line entry point for batch use.

Exit codes: 0 success, 1 infeasible (a valid answer, for `solve`), 2 input
or resource errors. Every subcommand takes --json for machine-readable
output. `solve` stdout is byte-stable for a fixed input file, so timing
never goes to stdout; pass --stats FILE for the per-layer timing report.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from .bench import plot_data, records_to_tsv, run_suite, summary_to_tsv
from .core import (
    Instance,
    InstanceError,
    format_instance,
    parse_instance,
)
from .dp import (
    Budget,
    DEFAULT_BUDGET,
    DpBudgetExceeded,
    DpError,
    dp_solve,
    format_stats_report,
)
from .generators import (
    GenError,
    Series,
    generate,
    ingest_prices,
    make_spec,
    parse_price_csv,
)
from .modelgen import ModelError, SolverSolutionError, emit_model, parse_solver_solution
from .oracle import brute_solve
from .quantizer import (
    QuantizationError,
    QuantizationSpec,
    format_real_vectors,
    parse_real_vectors,
    quantize,
)
from .reductions import X3CError, certify, format_certificate, parse_x3c, reduce_x3c

_ERRORS = (
    InstanceError,
    DpError,
    GenError,
    ModelError,
    SolverSolutionError,
    QuantizationError,
    X3CError,
    OSError,
    ValueError,
)


def _alpha_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from None


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _write_or_print(args, out_path: str | None, content: str, payload: dict) -> None:
    if out_path:
        Path(out_path).write_text(content)
        _emit(args, payload, [f"wrote {out_path}"])
    else:
        if args.json:
            print(json.dumps(payload | {"content": content}, sort_keys=True))
        else:
            sys.stdout.write(content)


def _budget_from(args) -> Budget:
    budget = DEFAULT_BUDGET
    if getattr(args, "max_states", None) is not None:
        budget = replace(budget, max_states=args.max_states)
    if getattr(args, "max_seconds", None) is not None:
        budget = replace(budget, max_seconds=args.max_seconds)
    return budget


def _cmd_solve(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    outcome, stats = dp_solve(inst, engine=args.engine, budget=_budget_from(args))
    if args.stats:
        Path(args.stats).write_text(format_stats_report(stats))

    payload: dict = {
        "engine": stats.engine,
        "peak_states": stats.peak_states,
        "layer_sizes": list(stats.layer_sizes),
    }
    lines: list[str] = []
    if outcome.feasible:
        sol = outcome.solution
        payload |= {
            "outcome": "feasible",
            "cardinality": sol.cardinality,
            "indices": list(sol.indices),
            "sum": list(sol.sum),
        }
        lines.append(f"feasible {sol.cardinality}")
        lines.append("indices " + " ".join(str(i) for i in sol.indices))
        lines.append("sum " + " ".join(str(c) for c in sol.sum))
    else:
        payload |= {"outcome": "infeasible"}
        lines.append("infeasible")
    lines.append(f"peak_states {stats.peak_states}")

    if args.oracle:
        ref = brute_solve(inst)
        payload["oracle"] = ref.solution.cardinality if ref.feasible else None
        lines.append(
            f"oracle feasible {ref.solution.cardinality}" if ref.feasible
            else "oracle infeasible"
        )
        agree = (ref.feasible == outcome.feasible) and (
            not ref.feasible
            or ref.solution.cardinality == outcome.solution.cardinality
        )
        if not agree:
            _emit(args, payload, lines)
            print("error: oracle disagrees with dp result", file=sys.stderr)
            return 2

    _emit(args, payload, lines)
    return 0 if outcome.feasible else 1


def _cmd_gen(args) -> int:
    series = Series(args.series)
    if series == Series.PRICE_INGEST:
        if not args.prices:
            raise GenError("gen --series price-ingest requires --prices FILE")
        _, rows = parse_price_csv(Path(args.prices).read_text())
        inst = ingest_prices(rows, args.alpha or Fraction(1, 10),
                             QuantizationSpec(scale=args.scale))
        content = format_instance(inst)
        payload = {"kind": "instance", "n": inst.n, "q": inst.q}
        _write_or_print(args, args.output, content, payload)
        return 0
    spec = make_spec(series, n=args.n, q=args.q, alpha=args.alpha, seed=args.seed)
    data = generate(spec)
    if isinstance(data, Instance):
        content = format_instance(data)
        payload = {"kind": "instance", "id": spec.instance_id,
                   "n": data.n, "q": data.q}
    else:
        content = format_real_vectors(data, spec.alpha)
        payload = {"kind": "real", "id": spec.instance_id,
                   "n": len(data), "q": len(data[0])}
    _write_or_print(args, args.output, content, payload)
    return 0


def _cmd_reduce_x3c(args) -> int:
    x3c = parse_x3c(Path(args.x3c).read_text())
    if args.certify:
        cert = certify(x3c)
        content = format_certificate(cert)
        payload = {"n": cert.mcsv.n, "q": cert.mcsv.q,
                   "truth": "feasible" if cert.truth else "infeasible"}
    else:
        inst = reduce_x3c(x3c)
        content = format_instance(inst)
        payload = {"n": inst.n, "q": inst.q}
    _write_or_print(args, args.output, content, payload)
    return 0


def _cmd_emit_model(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    model = emit_model(inst)
    payload = {"variables": list(model.var_names)}
    _write_or_print(args, args.output, model.text, payload)
    return 0


def _cmd_check_solution(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    outcome = parse_solver_solution(Path(args.solution).read_text(), inst)
    sol = outcome.solution
    payload = {
        "outcome": "feasible",
        "cardinality": sol.cardinality,
        "indices": list(sol.indices),
    }
    _emit(args, payload, [
        f"feasible {sol.cardinality}",
        "indices " + " ".join(str(i) for i in sol.indices),
    ])
    return 0


def _cmd_bench(args) -> int:
    cfg = json.loads(Path(args.config).read_text())
    specs = []
    for d in cfg.get("specs", []):
        specs.append(make_spec(
            Series(d["series"]),
            n=d.get("n"),
            q=d.get("q"),
            alpha=Fraction(d["alpha"]) if "alpha" in d else None,
            seed=d.get("seed", 0),
        ))
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    models_dir = str(outdir / "models") if cfg.get("emit_models") else None
    records, summary = run_suite(
        specs,
        repeats=cfg.get("repeats", 6),
        oracle_max_n=cfg.get("oracle_max_n"),
        emit_models_dir=models_dir,
        timeout_s=cfg.get("timeout_s"),
        workers=args.workers or cfg.get("workers", 1),
        scale=cfg.get("scale", 100),
    )
    paths = {}
    rec_path = outdir / "records.tsv"
    rec_path.write_text(records_to_tsv(records))
    paths["records"] = str(rec_path)
    sum_path = outdir / "summary.tsv"
    sum_path.write_text(summary_to_tsv(summary))
    paths["summary"] = str(sum_path)
    for series in (Series.SWEEP_N, Series.SWEEP_Q, Series.SWEEP_ALPHA):
        if any(s.series == series.value for s in summary):
            p = outdir / f"plot_{series.value}.tsv"
            p.write_text(plot_data(summary, series))
            paths[f"plot_{series.value}"] = str(p)
    payload = {"paths": paths, "records": len(records),
               "ok": sum(1 for r in records if r.status == "ok")}
    _emit(args, payload, [f"wrote {p}" for p in paths.values()])
    return 0


def _cmd_quantize(args) -> int:
    rows, alpha = parse_real_vectors(Path(args.real).read_text())
    inst = quantize(rows, alpha, QuantizationSpec(scale=args.scale))
    payload = {"n": inst.n, "q": inst.q, "bound": inst.bound, "scale": args.scale}
    _write_or_print(args, args.output, format_instance(inst), payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcsv", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("solve", help="solve an instance file exactly")
    sp.add_argument("instance")
    sp.add_argument("--oracle", action="store_true",
                    help="also run the exhaustive reference solver (N <= 25)")
    sp.add_argument("--engine", default="auto",
                    choices=["auto", "dict", "sparse", "dense"])
    sp.add_argument("--stats", metavar="FILE",
                    help="write per-layer 'k |S_k| cumulative_ms' report")
    sp.add_argument("--max-states", type=int, default=None)
    sp.add_argument("--max-seconds", type=float, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_solve)

    sp = sub.add_parser("gen", help="generate a seeded instance")
    sp.add_argument("--series", required=True,
                    choices=[s.value for s in Series])
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--alpha", type=_alpha_arg, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--scale", type=int, default=100,
                    help="quantization scale for price ingestion")
    sp.add_argument("--prices", metavar="CSV",
                    help="price table for --series price-ingest")
    sp.add_argument("-o", "--output", default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_gen)

    sp = sub.add_parser("reduce-x3c", help="build the induced hard instance")
    sp.add_argument("x3c")
    sp.add_argument("--certify", action="store_true",
                    help="append the exhaustively checked ground-truth trailer")
    sp.add_argument("-o", "--output", default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_reduce_x3c)

    sp = sub.add_parser("emit-model", help="emit the quadratic binary model")
    sp.add_argument("instance")
    sp.add_argument("-o", "--output", default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_emit_model)

    sp = sub.add_parser("check-solution", help="validate solver output exactly")
    sp.add_argument("instance")
    sp.add_argument("solution")
    common(sp)
    sp.set_defaults(fn=_cmd_check_solution)

    sp = sub.add_parser("bench", help="run a benchmark suite from a JSON config")
    sp.add_argument("config")
    sp.add_argument("-o", "--output", default="bench-out")
    sp.add_argument("--workers", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_bench)

    sp = sub.add_parser("quantize", help="fixed-point convert a real-vector file")
    sp.add_argument("real")
    sp.add_argument("--scale", type=int, default=100)
    sp.add_argument("-o", "--output", default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_quantize)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except DpBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
