"""Exact domain types and the feasibility predicate.

All arithmetic here is exact: coordinates are Python integers, the balance
parameter alpha is a `fractions.Fraction`, and every feasibility decision is
made in cross-multiplied integer form so no rounding can flip a verdict.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Vector = tuple[int, ...]

_INT_TOKEN = re.compile(r"^[+-]?[0-9]+$")


class InstanceError(ValueError):
    """Malformed instance data or instance file."""


def _as_int(value) -> int:
    try:
        return operator.index(value)
    except TypeError:
        raise InstanceError(f"coordinate {value!r} is not an integer") from None


def as_alpha(value) -> Fraction:
    """Coerce to an exact rational in (0, 1); floats are rejected."""
    if isinstance(value, float):
        raise InstanceError("alpha must be an exact rational, not a binary float")
    try:
        alpha = Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"bad alpha {value!r}: {exc}") from None
    if not 0 < alpha < 1:
        raise InstanceError(f"alpha must satisfy 0 < alpha < 1, got {alpha}")
    return alpha


@dataclass(frozen=True)
class Instance:
    """A set of integer vectors with a balance parameter alpha.

    The feasibility question for a subset C of the vectors is whether the
    squared length of C's sum, normalized by |C|, is at most an alpha
    fraction of the same quantity for the whole set.
    """

    vectors: tuple[Vector, ...]
    alpha: Fraction
    meta: str = ""

    def __post_init__(self):
        vecs = tuple(tuple(_as_int(c) for c in v) for v in self.vectors)
        if not vecs:
            raise InstanceError("instance needs at least one vector")
        q = len(vecs[0])
        if q < 1:
            raise InstanceError("vectors must have dimension >= 1")
        for i, v in enumerate(vecs):
            if len(v) != q:
                raise InstanceError(f"vector {i} has dimension {len(v)}, expected {q}")
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "alpha", as_alpha(self.alpha))

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def q(self) -> int:
        return len(self.vectors[0])

    @cached_property
    def bound(self) -> int:
        """Largest absolute coordinate value b (0 for the all-zero instance)."""
        return max(abs(c) for v in self.vectors for c in v)

    @cached_property
    def total(self) -> Vector:
        """Coordinatewise sum over the whole set."""
        return tuple(sum(col) for col in zip(*self.vectors))

    @cached_property
    def total_norm_sq(self) -> int:
        return sum(c * c for c in self.total)


@dataclass(frozen=True)
class Threshold:
    """The exact rational bound alpha * ||sum Y||^2 / N."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


def threshold(inst: Instance) -> Threshold:
    t = inst.alpha * inst.total_norm_sq / inst.n
    return Threshold(t.numerator, t.denominator)


def check_indices(inst: Instance, indices: Iterable[int]) -> tuple[int, ...]:
    """Validate and sort a subset of vector indices; empty subsets are errors."""
    idx = tuple(sorted(operator.index(i) for i in indices))
    if not idx:
        raise ValueError("subset must be non-empty")
    for a, b in zip(idx, idx[1:]):
        if a == b:
            raise ValueError(f"duplicate index {a}")
    if idx[0] < 0 or idx[-1] >= inst.n:
        raise IndexError(f"index out of range for N={inst.n}")
    return idx


def subset_sum(inst: Instance, indices: Iterable[int]) -> Vector:
    idx = check_indices(inst, indices)
    acc = [0] * inst.q
    for i in idx:
        for j, c in enumerate(inst.vectors[i]):
            acc[j] += c
    return tuple(acc)


def is_feasible(inst: Instance, indices: Iterable[int]) -> bool:
    """Exact feasibility test, cross-multiplied so only integers are compared:

        ||sum_C||^2 * N * alpha_den  <=  alpha_num * ||sum_Y||^2 * |C|
    """
    idx = check_indices(inst, indices)
    s = subset_sum(inst, idx)
    lhs = sum(c * c for c in s) * inst.n * inst.alpha.denominator
    rhs = inst.alpha.numerator * inst.total_norm_sq * len(idx)
    return lhs <= rhs


def is_feasible_sum(inst: Instance, ssum: Sequence[int], cardinality: int) -> bool:
    """Feasibility test for a precomputed subset sum and cardinality."""
    if cardinality < 1:
        raise ValueError("cardinality must be >= 1")
    lhs = sum(c * c for c in ssum) * inst.n * inst.alpha.denominator
    rhs = inst.alpha.numerator * inst.total_norm_sq * cardinality
    return lhs <= rhs


@dataclass(frozen=True)
class Solution:
    """A non-empty feasible-candidate subset with its exact sum."""

    indices: tuple[int, ...]
    sum: Vector
    cardinality: int

    @classmethod
    def from_indices(cls, inst: Instance, indices: Iterable[int]) -> "Solution":
        idx = check_indices(inst, indices)
        return cls(indices=idx, sum=subset_sum(inst, idx), cardinality=len(idx))


@dataclass(frozen=True)
class SolveOutcome:
    feasible: bool
    solution: Solution | None = None

    @classmethod
    def of(cls, solution: Solution) -> "SolveOutcome":
        return cls(feasible=True, solution=solution)

    @classmethod
    def infeasible(cls) -> "SolveOutcome":
        return cls(feasible=False, solution=None)


def spread_identity_check(inst: Instance, indices: Iterable[int]) -> Fraction:
    """Residual of the quadratic-spread identity, exact; contract: always 0.

    For a subset C with centroid m, the normalized squared sum-length
    ||sum_C||^2 / |C| equals  sum_C ||y||^2  -  sum_C ||y - m||^2.
    """
    idx = check_indices(inst, indices)
    k = len(idx)
    s = subset_sum(inst, idx)
    lhs = Fraction(sum(c * c for c in s), k)
    centroid = [Fraction(c, k) for c in s]
    spread_zero = sum(c * c for i in idx for c in inst.vectors[i])
    spread_centroid = sum(
        (coord - m) * (coord - m)
        for i in idx
        for coord, m in zip(inst.vectors[i], centroid)
    )
    rhs = spread_zero - spread_centroid
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Instance file format
#
#   mcsv 1 <N> <q> <alpha_num>/<alpha_den>
#   <q space-separated signed integers>   (N data lines)
#
# Lines starting with '#' are comments and may appear after the header
# (certificates append a '# truth: ...' trailer). Anything else that is not
# a data line is rejected.
# ---------------------------------------------------------------------------


def format_instance(inst: Instance) -> str:
    a = inst.alpha
    lines = [f"mcsv 1 {inst.n} {inst.q} {a.numerator}/{a.denominator}"]
    lines.extend(" ".join(str(c) for c in v) for v in inst.vectors)
    return "\n".join(lines) + "\n"


def _parse_int_token(tok: str, what: str) -> int:
    if not _INT_TOKEN.match(tok):
        raise InstanceError(f"bad {what} token {tok!r}")
    return int(tok)


def parse_instance(text: str, meta: str = "") -> Instance:
    lines = text.splitlines()
    if not lines:
        raise InstanceError("empty instance file")
    header = lines[0].split()
    if len(header) != 5 or header[0] != "mcsv":
        raise InstanceError(f"bad header line {lines[0]!r}")
    if header[1] != "1":
        raise InstanceError(f"unsupported format version {header[1]!r}")
    n = _parse_int_token(header[2], "N")
    q = _parse_int_token(header[3], "q")
    if n < 1 or q < 1:
        raise InstanceError(f"bad sizes N={n} q={q}")
    m = re.match(r"^([+-]?[0-9]+)/([0-9]+)$", header[4])
    if not m:
        raise InstanceError(f"bad alpha token {header[4]!r}, expected num/den")
    if int(m.group(2)) == 0:
        raise InstanceError("alpha denominator must be nonzero")
    alpha = Fraction(int(m.group(1)), int(m.group(2)))

    rows: list[Vector] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if len(rows) == n:
            raise InstanceError(f"line {lineno}: trailing garbage {raw!r}")
        toks = line.split()
        if len(toks) != q:
            raise InstanceError(f"line {lineno}: expected {q} coordinates, got {len(toks)}")
        rows.append(tuple(_parse_int_token(t, "coordinate") for t in toks))
    if len(rows) != n:
        raise InstanceError(f"expected {n} data lines, got {len(rows)}")
    return Instance(vectors=tuple(rows), alpha=alpha, meta=meta)
