"""Benchmark harness: per-instance records, sweep summaries, plot data.

Methodology mirrors the reference experiments: several instances per
parameter point (fixed derived seeds), wall-clock per solve with a warm-up
excluded, mean and standard error of the mean per point. Values are
cross-checked against the exhaustive oracle whenever the instance is small
enough, and every solve's layer sizes are checked against the exact
state-count bound.

Exact solver-time tables from the original study are not reproducible
(unpublished seeds, unspecified discretization for the real-valued series,
external solver, different hardware); this harness reproduces the
methodology and the checkable invariants instead.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .dp import Budget, DEFAULT_BUDGET, DpBudgetExceeded, DpError, dp_scan, state_bound
from .generators import GenSpec, Series, generate_instance
from .modelgen import emit_model
from .oracle import MAX_N as ORACLE_MAX_N, brute_solve
from .quantizer import QuantizationSpec

_NONE = "-"


@dataclass(frozen=True)
class BenchRecord:
    spec_id: str
    instance_id: str
    series: str
    n: int
    q: int
    alpha: str  # num/den
    dp_value: int | None  # optimal cardinality, 0 = infeasible
    dp_ms: float | None
    dp_peak_states: int | None
    oracle_value: int | None
    model_path: str | None
    status: str  # ok | budget-exceeded | error:<...>
    state_bound_ok: bool | None


@dataclass(frozen=True)
class SummaryRow:
    spec_id: str
    series: str
    n: int
    q: int
    alpha: str
    x: float  # swept coordinate for plots (N, q, or float(alpha))
    runs: int
    ok_runs: int
    mean_ms: float | None
    sem_ms: float | None
    mean_peak_states: float | None


def _sweep_x(series: str, n: int, q: int, alpha: str) -> float:
    if series == Series.SWEEP_Q.value:
        return float(q)
    if series == Series.SWEEP_ALPHA.value:
        num, den = alpha.split("/")
        return int(num) / int(den)
    return float(n)


def _bench_task(args) -> BenchRecord:
    spec_id, spec, rep, scale, budget, oracle_max_n, models_dir = args
    rspec = replace(spec, seed=spec.seed + rep)
    iid = f"{rspec.instance_id}r{rep}"
    a = spec.alpha
    alpha_str = f"{a.numerator}/{a.denominator}"
    inst = generate_instance(rspec, QuantizationSpec(scale=scale))

    model_path = None
    if models_dir is not None:
        path = Path(models_dir) / f"{iid}.model"
        path.write_text(emit_model(inst).text)
        model_path = str(path)

    try:
        scan, stats = dp_scan(inst, budget=budget)
    except DpBudgetExceeded:
        return BenchRecord(spec_id, iid, spec.series.value, inst.n, inst.q,
                           alpha_str, None, None, None, None, model_path,
                           "budget-exceeded", None)
    except DpError as exc:
        return BenchRecord(spec_id, iid, spec.series.value, inst.n, inst.q,
                           alpha_str, None, None, None, None, model_path,
                           f"error:{exc}", None)

    bound_ok = all(
        size <= state_bound(inst, k)
        for k, size in enumerate(stats.layer_sizes, start=1)
    )
    dp_value = scan.cardinality if scan.feasible else 0

    oracle_value = None
    if oracle_max_n is not None and inst.n <= min(oracle_max_n, ORACLE_MAX_N):
        out = brute_solve(inst)
        oracle_value = out.solution.cardinality if out.feasible else 0

    return BenchRecord(
        spec_id=spec_id,
        instance_id=iid,
        series=spec.series.value,
        n=inst.n,
        q=inst.q,
        alpha=alpha_str,
        dp_value=dp_value,
        dp_ms=stats.elapsed_s * 1000.0,
        dp_peak_states=stats.peak_states,
        oracle_value=oracle_value,
        model_path=model_path,
        status="ok",
        state_bound_ok=bound_ok,
    )


def run_suite(
    specs: list[GenSpec],
    repeats: int = 6,
    *,
    oracle_max_n: int | None = None,
    emit_models_dir: str | None = None,
    timeout_s: float | None = None,
    workers: int = 1,
    scale: int = 100,
    budget: Budget = DEFAULT_BUDGET,
) -> tuple[list[BenchRecord], list[SummaryRow]]:
    """Solve repeats instances per spec; returns per-instance records and
    per-spec summaries. Budget and timeout failures are recorded, not fatal."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    if timeout_s is not None:
        budget = replace(budget, max_seconds=timeout_s)
    if emit_models_dir is not None:
        Path(emit_models_dir).mkdir(parents=True, exist_ok=True)

    tasks = [
        (f"spec{i}", spec, rep, scale, budget, oracle_max_n, emit_models_dir)
        for i, spec in enumerate(specs)
        for rep in range(repeats)
    ]
    if tasks:
        # warm-up solve, excluded from every timed record
        warm = (tasks[0][0], tasks[0][1], 0, scale,
                replace(budget, max_seconds=None), None, None)
        try:
            _bench_task(warm)
        except (DpError, DpBudgetExceeded):
            pass

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_bench_task, tasks))
    else:
        records = [_bench_task(t) for t in tasks]

    for rec in records:
        if rec.oracle_value is not None and rec.dp_value is not None:
            if rec.oracle_value != rec.dp_value:
                raise AssertionError(
                    f"oracle disagreement on {rec.instance_id}: "
                    f"dp={rec.dp_value} oracle={rec.oracle_value}"
                )
        if rec.state_bound_ok is False:
            raise AssertionError(f"state bound violated on {rec.instance_id}")

    return records, summarize(records)


def summarize(records: list[BenchRecord]) -> list[SummaryRow]:
    """Per-spec means and SEMs, computed from the records alone so a parsed
    records file reproduces the summary exactly."""
    order: list[str] = []
    groups: dict[str, list[BenchRecord]] = {}
    for r in records:
        if r.spec_id not in groups:
            order.append(r.spec_id)
            groups[r.spec_id] = []
        groups[r.spec_id].append(r)
    rows = []
    for sid in order:
        chunk = groups[sid]
        first = chunk[0]
        ok = [r for r in chunk if r.status == "ok"]
        times = [r.dp_ms for r in ok]
        peaks = [r.dp_peak_states for r in ok]
        mean_ms = statistics.fmean(times) if times else None
        sem_ms = (
            statistics.stdev(times) / math.sqrt(len(times))
            if len(times) >= 2 else (0.0 if times else None)
        )
        rows.append(SummaryRow(
            spec_id=sid,
            series=first.series,
            n=first.n,
            q=first.q,
            alpha=first.alpha,
            x=_sweep_x(first.series, first.n, first.q, first.alpha),
            runs=len(chunk),
            ok_runs=len(ok),
            mean_ms=mean_ms,
            sem_ms=sem_ms,
            mean_peak_states=statistics.fmean(peaks) if peaks else None,
        ))
    return rows


# ---------------------------------------------------------------------------
# columnar report files (tab-separated, one header line)
# ---------------------------------------------------------------------------

_RECORD_FIELDS = [
    "spec_id", "instance_id", "series", "N", "q", "alpha", "dp_value", "dp_ms",
    "dp_peak_states", "oracle_value", "model_path", "status", "state_bound_ok",
]


def _cell(v) -> str:
    if v is None:
        return _NONE
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def records_to_tsv(records: list[BenchRecord]) -> str:
    lines = ["\t".join(_RECORD_FIELDS)]
    for r in records:
        lines.append("\t".join(_cell(v) for v in (
            r.spec_id, r.instance_id, r.series, r.n, r.q, r.alpha, r.dp_value,
            r.dp_ms, r.dp_peak_states, r.oracle_value, r.model_path, r.status,
            r.state_bound_ok,
        )))
    return "\n".join(lines) + "\n"


def parse_records(text: str) -> list[BenchRecord]:
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines or lines[0].split("\t") != _RECORD_FIELDS:
        raise ValueError("bad records file header")
    out = []
    for line in lines[1:]:
        c = line.split("\t")
        if len(c) != len(_RECORD_FIELDS):
            raise ValueError(f"bad records line: {line!r}")

        def opt(tok, conv):
            return None if tok == _NONE else conv(tok)

        out.append(BenchRecord(
            spec_id=c[0], instance_id=c[1], series=c[2], n=int(c[3]),
            q=int(c[4]), alpha=c[5],
            dp_value=opt(c[6], int), dp_ms=opt(c[7], float),
            dp_peak_states=opt(c[8], int), oracle_value=opt(c[9], int),
            model_path=opt(c[10], str), status=c[11],
            state_bound_ok=opt(c[12], lambda t: t == "1"),
        ))
    return out


_SUMMARY_FIELDS = [
    "spec_id", "series", "N", "q", "alpha", "x", "runs", "ok_runs",
    "mean_ms", "sem_ms", "mean_peak_states",
]


def summary_to_tsv(summary: list[SummaryRow]) -> str:
    lines = ["\t".join(_SUMMARY_FIELDS)]
    for s in summary:
        lines.append("\t".join(_cell(v) for v in (
            s.spec_id, s.series, s.n, s.q, s.alpha, s.x, s.runs, s.ok_runs,
            s.mean_ms, s.sem_ms, s.mean_peak_states,
        )))
    return "\n".join(lines) + "\n"


def plot_data(summary: list[SummaryRow], series: Series) -> str:
    """Plot-ready columns (x, mean_ms, sem_ms) for one sweep series."""
    rows = [s for s in summary if s.series == series.value and s.mean_ms is not None]
    rows.sort(key=lambda s: s.x)
    lines = ["\t".join(("x", "mean_ms", "sem_ms"))]
    for s in rows:
        lines.append("\t".join((repr(s.x), repr(s.mean_ms), repr(s.sem_ms))))
    return "\n".join(lines) + "\n"
