from fractions import Fraction

import pytest

from mcsv import Instance
from mcsv.generators import (
    GenError,
    GenSpec,
    Series,
    generate,
    generate_instance,
    ingest_prices,
    make_spec,
    parse_price_csv,
)
from mcsv.quantizer import QuantizationSpec


class TestSpecs:
    def test_defaults_fill_reference_design(self):
        s = make_spec(Series.SWEEP_N, n=50, seed=1)
        assert (s.q, s.alpha) == (5, Fraction(1, 10))
        s = make_spec(Series.SWEEP_Q, q=3, seed=1)
        assert (s.n, s.alpha) == (1000, Fraction(1, 10))
        s = make_spec(Series.SWEEP_ALPHA, alpha=Fraction(3, 10), seed=1)
        assert (s.n, s.q) == (1000, 5)

    def test_swept_parameter_required(self):
        with pytest.raises(GenError):
            make_spec(Series.SWEEP_N, seed=1)
        with pytest.raises(GenError):
            make_spec(Series.SWEEP_ALPHA, seed=1)

    def test_swept_ranges_enforced(self):
        with pytest.raises(GenError):
            make_spec(Series.SWEEP_N, n=4, seed=1)
        with pytest.raises(GenError):
            make_spec(Series.SWEEP_N, n=1001, seed=1)
        with pytest.raises(GenError):
            make_spec(Series.SWEEP_Q, q=8, seed=1)
        with pytest.raises(GenError):
            make_spec(Series.SWEEP_ALPHA, alpha=Fraction(1, 100), seed=1)

    def test_fixed_parameters_overridable_for_small_suites(self):
        s = make_spec(Series.SWEEP_ALPHA, n=12, q=2, alpha=Fraction(1, 2), seed=1)
        assert (s.n, s.q) == (12, 2)

    def test_price_ingest_not_generated(self):
        with pytest.raises(GenError):
            make_spec(Series.PRICE_INGEST, n=1, q=1, seed=0)


class TestGenerate:
    def test_s2_deterministic_and_in_range(self):
        spec = make_spec(Series.S2, n=10, q=2, seed=42)
        a = generate(spec)
        b = generate(spec)
        assert isinstance(a, Instance)
        assert a.vectors == b.vectors
        assert all(-5 <= c <= 5 for v in a.vectors for c in v)
        assert a.n == 10 and a.q == 2

    def test_seed_changes_vectors(self):
        a = generate(make_spec(Series.S2, n=10, q=2, seed=1))
        b = generate(make_spec(Series.S2, n=10, q=2, seed=2))
        assert a.vectors != b.vectors

    def test_alpha_independent_of_sampling(self):
        a = generate(make_spec(Series.SWEEP_ALPHA, n=12, q=2,
                               alpha=Fraction(1, 10), seed=9))
        b = generate(make_spec(Series.SWEEP_ALPHA, n=12, q=2,
                               alpha=Fraction(9, 10), seed=9))
        assert a.vectors == b.vectors
        assert a.alpha != b.alpha

    def test_s1_reals_in_range_and_quantized_bound(self):
        spec = make_spec(Series.S1, n=5, q=3, seed=7)
        reals = generate(spec)
        assert isinstance(reals, list) and len(reals) == 5
        assert all(-1.0 <= x <= 1.0 for row in reals for x in row)
        inst = generate_instance(spec, QuantizationSpec(scale=100))
        assert inst.bound <= 100

    def test_integer_series_instance_meta(self):
        inst = generate_instance(make_spec(Series.S2, n=4, q=1, seed=3))
        assert "s2" in inst.meta and "s3" in inst.meta


class TestIngestPrices:
    def test_series3_shape(self):
        table = [[float(t + m) for m in range(43)] for t in range(24)]
        inst = ingest_prices(table, Fraction(1, 10), QuantizationSpec(scale=1))
        assert inst.n == 43 and inst.q == 24

    def test_one_by_one(self):
        inst = ingest_prices([[2.5]], Fraction(1, 2), QuantizationSpec(scale=10))
        assert inst.n == 1 and inst.q == 1 and inst.vectors == ((25,),)

    def test_column_orientation(self):
        inst = ingest_prices([[1.0, 10.0], [2.0, 20.0]], Fraction(1, 2),
                             QuantizationSpec(scale=1))
        assert inst.vectors == ((1, 2), (10, 20))

    def test_ragged_rejected(self):
        with pytest.raises(GenError):
            ingest_prices([[1.0, 2.0], [3.0]], Fraction(1, 2))

    def test_non_numeric_rejected(self):
        with pytest.raises(GenError):
            ingest_prices([[1.0, "x"]], Fraction(1, 2))

    def test_empty_rejected(self):
        with pytest.raises(GenError):
            ingest_prices([], Fraction(1, 2))


class TestPriceCsv:
    def test_parse(self):
        header, rows = parse_price_csv("a,b\n1.5,2\n3,4\n")
        assert header == ["a", "b"]
        assert rows == [[1.5, 2.0], [3.0, 4.0]]

    @pytest.mark.parametrize("text", [
        "",
        "a,b\n",
        "a,b\n1\n",
        "a,b\n1,\n",
        "a,b\n1,x\n",
        "a,b\n1,inf\n",
        "a,\n1,2\n",
    ])
    def test_rejects(self, text):
        with pytest.raises(GenError):
            parse_price_csv(text)
