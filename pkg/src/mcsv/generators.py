"""Seeded instance families mirroring the experiment series, plus price ingestion.

Series conventions:

  * s1          - real coordinates uniform on [-1, 1]; solved after quantization
  * s2          - integer coordinates uniform on [-5, 5]
  * sweep-n     - s2-style coordinates, N swept over 5..1000 (q, alpha fixed)
  * sweep-q     - s2-style coordinates, q swept over 1..7
  * sweep-alpha - s2-style coordinates, alpha swept over 1/10..9/10
  * price-ingest - columns of an hourly price table become the vectors

The fixed parameters of each sweep default to the reference design
(q=5, N=1000, alpha=1/10) but may be overridden so reduced-scale suites can
run in CI. No published seeds exist for the original experiments, so this
module's own defaults are what make the repo's benchmark numbers
reproducible.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

import numpy as np

from .core import Instance, as_alpha
from .quantizer import QuantizationSpec, quantize


class GenError(ValueError):
    """Invalid generator spec or malformed price data."""


class Series(Enum):
    S1 = "s1"
    S2 = "s2"
    SWEEP_N = "sweep-n"
    SWEEP_Q = "sweep-q"
    SWEEP_ALPHA = "sweep-alpha"
    PRICE_INGEST = "price-ingest"


_INT_LO, _INT_HI = -5, 5  # s2-style coordinate range
_DEFAULTS = {
    Series.S1: (1000, 5, Fraction(1, 10)),
    Series.S2: (1000, 5, Fraction(1, 10)),
    Series.SWEEP_N: (None, 5, Fraction(1, 10)),
    Series.SWEEP_Q: (1000, None, Fraction(1, 10)),
    Series.SWEEP_ALPHA: (1000, 5, None),
}


@dataclass(frozen=True)
class GenSpec:
    series: Series
    n: int
    q: int
    alpha: Fraction
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        if self.n < 1 or self.q < 1:
            raise GenError(f"need n >= 1 and q >= 1, got n={self.n} q={self.q}")
        if self.series == Series.SWEEP_N and not 5 <= self.n <= 1000:
            raise GenError(f"sweep-n requires 5 <= N <= 1000, got {self.n}")
        if self.series == Series.SWEEP_Q and not 1 <= self.q <= 7:
            raise GenError(f"sweep-q requires 1 <= q <= 7, got {self.q}")
        if self.series == Series.SWEEP_ALPHA and not (
            Fraction(1, 10) <= self.alpha <= Fraction(9, 10)
        ):
            raise GenError(f"sweep-alpha requires 1/10 <= alpha <= 9/10, got {self.alpha}")

    @property
    def instance_id(self) -> str:
        a = self.alpha
        return (
            f"{self.series.value}-n{self.n}-q{self.q}"
            f"-a{a.numerator}_{a.denominator}-s{self.seed}"
        )


def make_spec(series: Series, *, n: int | None = None, q: int | None = None,
              alpha=None, seed: int = 0) -> GenSpec:
    """Fill unspecified parameters with the series' reference defaults."""
    if series == Series.PRICE_INGEST:
        raise GenError("price-ingest instances come from ingest_prices, not make_spec")
    dn, dq, da = _DEFAULTS[series]
    n = n if n is not None else dn
    q = q if q is not None else dq
    alpha = alpha if alpha is not None else da
    if n is None or q is None or alpha is None:
        raise GenError(f"series {series.value} needs its swept parameter set explicitly")
    return GenSpec(series=series, n=n, q=q, alpha=as_alpha(alpha), seed=seed)


def generate(spec: GenSpec):
    """Deterministic sampling: an Instance for integer series, or the raw
    real vectors for s1 (quantize them before solving)."""
    if spec.series == Series.PRICE_INGEST:
        raise GenError("price-ingest instances come from ingest_prices")
    rng = np.random.default_rng(spec.seed)
    if spec.series == Series.S1:
        coords = rng.uniform(-1.0, 1.0, size=(spec.n, spec.q))
        return [tuple(float(x) for x in row) for row in coords]
    coords = rng.integers(_INT_LO, _INT_HI + 1, size=(spec.n, spec.q))
    return Instance(
        vectors=tuple(tuple(int(c) for c in row) for row in coords),
        alpha=spec.alpha,
        meta=spec.instance_id,
    )


def generate_instance(spec: GenSpec, qspec: QuantizationSpec = QuantizationSpec()) -> Instance:
    """Like generate, but s1 output is quantized so the result is always solvable."""
    data = generate(spec)
    if isinstance(data, Instance):
        return data
    inst = quantize(data, spec.alpha, qspec)
    return replace(inst, meta=f"{spec.instance_id} {inst.meta}")


# ---------------------------------------------------------------------------
# price-table ingestion (Series-3 shape: hours x nodes, vectors are nodes)
# ---------------------------------------------------------------------------


def ingest_prices(matrix, alpha, spec: QuantizationSpec = QuantizationSpec()) -> Instance:
    """Column-slice a T x M price table into M node-profile vectors of dim T."""
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        raise GenError("price table must have at least one row and one column")
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise GenError(f"ragged price table: row {i} has {len(r)} cells, expected {width}")
        for j, x in enumerate(r):
            try:
                v = float(x)
            except (TypeError, ValueError):
                raise GenError(f"non-numeric price cell at row {i}, column {j}: {x!r}") from None
            if not math.isfinite(v):
                raise GenError(f"non-finite price cell at row {i}, column {j}")
            r[j] = v
    columns = [tuple(rows[t][m] for t in range(len(rows))) for m in range(width)]
    inst = quantize(columns, alpha, spec)
    return replace(inst, meta=f"price-ingest T={len(rows)} M={width} {inst.meta}")


def parse_price_csv(text: str) -> tuple[list[str], list[list[float]]]:
    """Header row of node identifiers, then one row of prices per hour."""
    reader = csv.reader(io.StringIO(text))
    table = [row for row in reader if row]
    if len(table) < 2:
        raise GenError("price CSV needs a header row and at least one data row")
    header = [h.strip() for h in table[0]]
    if any(not h for h in header):
        raise GenError("price CSV header has an empty node identifier")
    data: list[list[float]] = []
    for lineno, row in enumerate(table[1:], start=2):
        if len(row) != len(header):
            raise GenError(f"price CSV line {lineno}: {len(row)} cells, expected {len(header)}")
        vals = []
        for j, cell in enumerate(row):
            cell = cell.strip()
            if not cell:
                raise GenError(f"price CSV line {lineno}: missing cell in column {j}")
            try:
                v = float(cell)
            except ValueError:
                raise GenError(f"price CSV line {lineno}: bad number {cell!r}") from None
            if not math.isfinite(v):
                raise GenError(f"price CSV line {lineno}: non-finite value {cell!r}")
            vals.append(v)
        data.append(vals)
    return header, data
