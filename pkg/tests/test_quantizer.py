import math
from fractions import Fraction

import numpy as np
import pytest

from mcsv import Instance, InstanceError, dp_solve, is_feasible
from mcsv.quantizer import (
    QuantizationError,
    QuantizationSpec,
    format_real_vectors,
    parse_real_vectors,
    quantize,
    real_feasibility,
)


def test_scale_one_on_integer_data_is_identity():
    inst = quantize([(3.0, -2.0), (0.0, 1.0)], Fraction(1, 2), QuantizationSpec(scale=1))
    assert inst.vectors == ((3, -2), (0, 1))


def test_nearest_even_halfway_cases():
    inst = quantize([(0.25, -0.15)], Fraction(1, 2), QuantizationSpec(scale=10))
    assert inst.vectors == ((2, -2),)
    inst2 = quantize([(0.05, 0.15, 0.35)], Fraction(1, 2), QuantizationSpec(scale=10))
    assert inst2.vectors == ((0, 2, 4),)


def test_meta_records_spec():
    inst = quantize([(0.5,)], Fraction(1, 2), QuantizationSpec(scale=10))
    assert "scale=10" in inst.meta and "nearest-even" in inst.meta


def test_non_finite_rejected():
    for bad in (float("nan"), float("inf"), -float("inf")):
        with pytest.raises(QuantizationError):
            quantize([(bad,)], Fraction(1, 2))


def test_spec_validation():
    with pytest.raises(QuantizationError):
        QuantizationSpec(scale=0)
    with pytest.raises(QuantizationError):
        QuantizationSpec(scale=12)
    with pytest.raises(QuantizationError):
        QuantizationSpec(scale=10, rounding="floor")
    QuantizationSpec(scale=1)
    QuantizationSpec(scale=1000)


def test_exact_multiples_preserve_feasibility(rng):
    # coordinates k/10 quantized at scale 10 give exactly k, and the
    # inequality evaluated in exact rationals on k/10 matches the integer test
    alpha = Fraction(1, 3)
    for _ in range(30):
        n = int(rng.integers(1, 7))
        q = int(rng.integers(1, 4))
        k = rng.integers(-30, 31, size=(n, q))
        reals = [tuple(int(c) / 10 for c in row) for row in k]
        inst = quantize(reals, alpha, QuantizationSpec(scale=10))
        assert inst.vectors == tuple(tuple(int(c) for c in row) for row in k)

        m = int(rng.integers(1, n + 1))
        idx = sorted(int(i) for i in rng.choice(n, size=m, replace=False))
        exact = [Fraction(int(c), 10) for c in np.sum(k[idx], axis=0)]
        total = [Fraction(int(c), 10) for c in np.sum(k, axis=0)]
        lhs = sum(c * c for c in exact) * n
        rhs = alpha * sum(c * c for c in total) * m
        assert (lhs <= rhs) == is_feasible(inst, idx)


def test_real_recheck_reports_margin(rng):
    reals = [tuple(float(x) for x in row) for row in rng.uniform(-1, 1, (8, 2))]
    inst = quantize(reals, Fraction(1, 2), QuantizationSpec(scale=100))
    out, _ = dp_solve(inst)
    assert out.feasible
    ok, margin = real_feasibility(reals, Fraction(1, 2), out.solution.indices)
    assert isinstance(ok, bool)
    assert math.isfinite(margin)


def test_real_file_round_trip():
    reals = [(0.25, -1.0), (0.125, 0.5)]
    text = format_real_vectors(reals, Fraction(3, 10))
    rows, alpha = parse_real_vectors(text)
    assert rows == [(0.25, -1.0), (0.125, 0.5)]
    assert alpha == Fraction(3, 10)
    assert text.startswith("mcsv-real 1 2 2 3/10\n")


@pytest.mark.parametrize("text", [
    "",
    "mcsv 1 1 1 1/2\n0.5\n",
    "mcsv-real 2 1 1 1/2\n0.5\n",
    "mcsv-real 1 1 1 1/2\nnan\n",
    "mcsv-real 1 1 1 1/2\ninf\n",
    "mcsv-real 1 1 2 1/2\n0.5\n",
    "mcsv-real 1 2 1 1/2\n0.5\n",
    "mcsv-real 1 1 1 1/2\n0.5\n0.7\n",
    "mcsv-real 1 1 1 0.5\n0.5\n",
])
def test_real_file_rejects(text):
    with pytest.raises(InstanceError):
        parse_real_vectors(text)
