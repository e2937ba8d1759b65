"""Fixed-point conversion of real-valued vectors to integer instances.

The feasibility inequality is homogeneous of degree 2 in the data, so
multiplying every coordinate by one common scale preserves the feasible
set exactly; round-off is the only approximation introduced here, and the
real-arithmetic re-check below surfaces it instead of hiding it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Instance, InstanceError, as_alpha


class QuantizationError(ValueError):
    """Non-finite input or an unsupported quantization spec."""


@dataclass(frozen=True)
class QuantizationSpec:
    """Power-of-ten multiplier with round-half-to-even."""

    scale: int = 100
    rounding: str = "nearest-even"

    def __post_init__(self):
        s = self.scale
        if s < 1:
            raise QuantizationError(f"scale must be >= 1, got {s}")
        t = s
        while t % 10 == 0:
            t //= 10
        if t != 1:
            raise QuantizationError(f"scale must be a power of ten, got {s}")
        if self.rounding != "nearest-even":
            raise QuantizationError(f"unsupported rounding {self.rounding!r}")


def quantize(
    real_vectors: Sequence[Sequence[float]],
    alpha,
    spec: QuantizationSpec = QuantizationSpec(),
) -> Instance:
    """Map each coordinate x to round(scale * x) and attach alpha unchanged."""
    alpha = as_alpha(alpha)
    rows = []
    for i, vec in enumerate(real_vectors):
        out = []
        for x in vec:
            x = float(x)
            if not math.isfinite(x):
                raise QuantizationError(f"non-finite coordinate {x!r} in vector {i}")
            out.append(round(spec.scale * x))  # banker's rounding
        rows.append(tuple(out))
    return Instance(
        vectors=tuple(rows),
        alpha=alpha,
        meta=f"quantized scale={spec.scale} rounding={spec.rounding}",
    )


def real_feasibility(
    real_vectors: Sequence[Sequence[float]],
    alpha,
    indices: Iterable[int],
) -> tuple[bool, float]:
    """Re-check a subset on the original reals in float arithmetic.

    Returns (feasible, margin) where margin = lhs - rhs of the inequality;
    negative or zero margin means feasible. Callers report the margin so
    quantization effects stay visible.
    """
    alpha = as_alpha(alpha)
    idx = sorted(set(int(i) for i in indices))
    if not idx:
        raise ValueError("subset must be non-empty")
    n = len(real_vectors)
    if idx[0] < 0 or idx[-1] >= n:
        raise IndexError("index out of range")
    q = len(real_vectors[0])
    ssum = [0.0] * q
    for i in idx:
        for j in range(q):
            ssum[j] += float(real_vectors[i][j])
    total = [0.0] * q
    for vec in real_vectors:
        for j in range(q):
            total[j] += float(vec[j])
    lhs = sum(c * c for c in ssum) / len(idx)
    rhs = float(alpha) / n * sum(c * c for c in total)
    margin = lhs - rhs
    return margin <= 0.0, margin


# ---------------------------------------------------------------------------
# real-vector file format: like the instance format, decimal coordinates
#
#   mcsv-real 1 <N> <q> <alpha_num>/<alpha_den>
#   <q space-separated decimal reals>   (N data lines)
# ---------------------------------------------------------------------------

_REAL_TOKEN = re.compile(r"^[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?$")


def format_real_vectors(
    real_vectors: Sequence[Sequence[float]], alpha
) -> str:
    alpha = as_alpha(alpha)
    n = len(real_vectors)
    if n < 1:
        raise InstanceError("need at least one vector")
    q = len(real_vectors[0])
    lines = [f"mcsv-real 1 {n} {q} {alpha.numerator}/{alpha.denominator}"]
    for vec in real_vectors:
        if len(vec) != q:
            raise InstanceError("ragged real-vector rows")
        lines.append(" ".join(repr(float(x)) for x in vec))
    return "\n".join(lines) + "\n"


def parse_real_vectors(text: str) -> tuple[list[tuple[float, ...]], Fraction]:
    lines = text.splitlines()
    if not lines:
        raise InstanceError("empty real-vector file")
    header = lines[0].split()
    if len(header) != 5 or header[0] != "mcsv-real":
        raise InstanceError(f"bad header line {lines[0]!r}")
    if header[1] != "1":
        raise InstanceError(f"unsupported format version {header[1]!r}")
    if not re.match(r"^[0-9]+$", header[2]) or not re.match(r"^[0-9]+$", header[3]):
        raise InstanceError(f"bad sizes in header {lines[0]!r}")
    n, q = int(header[2]), int(header[3])
    m = re.match(r"^([+-]?[0-9]+)/([1-9][0-9]*)$", header[4])
    if not m:
        raise InstanceError(f"bad alpha token {header[4]!r}")
    alpha = Fraction(int(m.group(1)), int(m.group(2)))
    rows: list[tuple[float, ...]] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if len(rows) == n:
            raise InstanceError(f"line {lineno}: trailing garbage {raw!r}")
        toks = line.split()
        if len(toks) != q:
            raise InstanceError(f"line {lineno}: expected {q} coordinates")
        vals = []
        for t in toks:
            if not _REAL_TOKEN.match(t):
                raise InstanceError(f"line {lineno}: bad real token {t!r}")
            vals.append(float(t))
        rows.append(tuple(vals))
    if len(rows) != n:
        raise InstanceError(f"expected {n} data lines, got {len(rows)}")
    return rows, alpha
