from fractions import Fraction
from pathlib import Path

import pytest

from mcsv.bench import (
    parse_records,
    plot_data,
    records_to_tsv,
    run_suite,
    summarize,
    summary_to_tsv,
)
from mcsv.dp import Budget
from mcsv.generators import Series, make_spec


def small_specs():
    return [
        make_spec(Series.S2, n=8, q=2, alpha=Fraction(1, 2), seed=100),
        make_spec(Series.S2, n=10, q=1, alpha=Fraction(1, 10), seed=200),
    ]


class TestRunSuite:
    def test_records_complete_and_oracle_agree(self):
        records, summary = run_suite(small_specs(), repeats=3, oracle_max_n=12)
        assert len(records) == 6
        for r in records:
            assert r.status == "ok"
            assert r.dp_value is not None and r.dp_value == r.oracle_value
            assert r.dp_ms is not None and r.dp_ms >= 0
            assert r.dp_peak_states >= 1
            assert r.state_bound_ok is True
        assert len(summary) == 2
        assert all(s.runs == 3 and s.ok_runs == 3 for s in summary)

    def test_instances_differ_across_repeats(self):
        records, _ = run_suite(small_specs()[:1], repeats=3)
        assert len({r.instance_id for r in records}) == 3

    def test_empty_specs(self):
        records, summary = run_suite([], repeats=2)
        assert records == [] and summary == []

    def test_timeout_recorded_not_fatal(self):
        records, summary = run_suite(
            [make_spec(Series.S2, n=40, q=3, alpha=Fraction(1, 2), seed=1)],
            repeats=2,
            timeout_s=0.0,
        )
        assert all(r.status == "budget-exceeded" for r in records)
        assert summary[0].ok_runs == 0
        assert summary[0].mean_ms is None

    def test_model_emission(self, tmp_path):
        records, _ = run_suite(
            small_specs()[:1], repeats=2, emit_models_dir=str(tmp_path)
        )
        for r in records:
            assert r.model_path is not None
            assert Path(r.model_path).exists()
            assert "Maximize" in Path(r.model_path).read_text()

    def test_repeats_validated(self):
        with pytest.raises(ValueError):
            run_suite([], repeats=0)


class TestReports:
    def test_records_round_trip(self):
        records, _ = run_suite(small_specs(), repeats=2, oracle_max_n=12)
        parsed = parse_records(records_to_tsv(records))
        assert parsed == records

    def test_summary_recomputes_exactly_from_file(self):
        records, summary = run_suite(small_specs(), repeats=3, oracle_max_n=12)
        again = summarize(parse_records(records_to_tsv(records)))
        assert again == summary

    def test_summary_tsv_shape(self):
        records, summary = run_suite(small_specs(), repeats=2)
        text = summary_to_tsv(summary)
        lines = text.splitlines()
        assert lines[0].split("\t")[0] == "spec_id"
        assert len(lines) == 3

    def test_plot_data_columns_sorted_by_x(self):
        specs = [
            make_spec(Series.SWEEP_ALPHA, n=8, q=2, alpha=a, seed=5)
            for a in (Fraction(9, 10), Fraction(1, 10), Fraction(1, 2))
        ]
        records, summary = run_suite(specs, repeats=2)
        text = plot_data(summary, Series.SWEEP_ALPHA)
        lines = text.splitlines()
        assert lines[0] == "x\tmean_ms\tsem_ms"
        xs = [float(l.split("\t")[0]) for l in lines[1:]]
        assert xs == sorted(xs) and xs == [0.1, 0.5, 0.9]

    def test_alpha_sweep_peak_states_identical(self):
        specs = [
            make_spec(Series.SWEEP_ALPHA, n=14, q=2, alpha=a, seed=77)
            for a in (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10))
        ]
        records, _ = run_suite(specs, repeats=2)
        peaks = {}
        for r in records:
            rep = r.instance_id.rsplit("r", 1)[1]
            peaks.setdefault(rep, set()).add(r.dp_peak_states)
        assert all(len(v) == 1 for v in peaks.values())

    def test_bad_records_header_rejected(self):
        with pytest.raises(ValueError):
            parse_records("nope\n1\n")
