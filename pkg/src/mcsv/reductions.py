"""Hard feasibility instances built from exact-cover-by-3-sets inputs.

Each 3-set becomes its 0/1 characteristic vector over the 3p-element ground
set, one extra all-minus-ones vector is appended, and alpha is fixed small
enough that only subsets summing very close to zero can pass; a feasible
subset then exists exactly when the 3-set family contains an exact cover.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, InstanceError, parse_instance

COVER_SEARCH_MAX_SETS = 20


class X3CError(ValueError):
    """Malformed exact-cover input or an over-guard search request."""


@dataclass(frozen=True)
class X3CInstance:
    """Ground set {1..3p} and a family of 3-element subsets (duplicates allowed)."""

    ground_set_size: int
    subsets: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        m = self.ground_set_size
        if m < 3 or m % 3 != 0:
            raise X3CError(f"ground set size must be a positive multiple of 3, got {m}")
        if not self.subsets:
            raise X3CError("family must contain at least one subset")
        norm = []
        for s in self.subsets:
            t = tuple(sorted(int(e) for e in s))
            if len(t) != 3 or len(set(t)) != 3:
                raise X3CError(f"subset {s!r} must have exactly 3 distinct elements")
            if t[0] < 1 or t[-1] > m:
                raise X3CError(f"subset {s!r} out of range 1..{m}")
            norm.append(t)
        object.__setattr__(self, "subsets", tuple(norm))

    @property
    def p(self) -> int:
        return self.ground_set_size // 3

    @property
    def n(self) -> int:
        return len(self.subsets)


@dataclass(frozen=True)
class ReductionCertificate:
    x3c: X3CInstance
    mcsv: Instance
    truth: bool


def reduce_x3c(x3c: X3CInstance) -> Instance:
    """Build the induced instance: characteristic vectors plus (-1,...,-1).

    alpha is pinned to an exact rational with alpha * ||sum Y||^2 <= 2
    (1/2 when the total sum vanishes, else min(1/2, 2 / ||sum Y||^2)).
    That margin makes the equivalence airtight: an exact cover plus the
    minus-ones vector sums to zero and is feasible at any alpha, while
    without a cover every subset C has N * ||sum C||^2 / |C| > 2, so
    nothing passes. The classical margin (alpha * ||sum Y||^2 < 3) is NOT
    enough: a near-cover with one doubled and one missed element, plus the
    minus-ones vector, reaches N * ||sum C||^2 / |C| = 2N/(N-1), which
    slips under thresholds between 2 and 3 on families like
    {1,2,3},{4,5,6},{1,7,8},{1,2,9} over a 9-element ground set.
    """
    q = x3c.ground_set_size
    vectors = []
    for s in x3c.subsets:
        v = [0] * q
        for e in s:
            v[e - 1] = 1
        vectors.append(tuple(v))
    vectors.append((-1,) * q)

    counts = [0] * q
    for s in x3c.subsets:
        for e in s:
            counts[e - 1] += 1
    norm2 = sum((c - 1) * (c - 1) for c in counts)
    if norm2 == 0:
        alpha = Fraction(1, 2)
    else:
        alpha = min(Fraction(1, 2), Fraction(2, norm2))
    return Instance(
        vectors=tuple(vectors),
        alpha=alpha,
        meta=f"x3c-reduction p={x3c.p} n={x3c.n}",
    )


def has_exact_cover(x3c: X3CInstance) -> bool:
    """Exhaustive search for p pairwise-disjoint subsets covering the ground set."""
    if x3c.n > COVER_SEARCH_MAX_SETS:
        raise X3CError(
            f"cover search guard: n={x3c.n} exceeds {COVER_SEARCH_MAX_SETS}"
        )
    full = (1 << x3c.ground_set_size) - 1
    masks = [
        (1 << (a - 1)) | (1 << (b - 1)) | (1 << (c - 1)) for a, b, c in x3c.subsets
    ]
    by_elem: dict[int, list[int]] = {}
    for i, s in enumerate(x3c.subsets):
        for e in s:
            by_elem.setdefault(e, []).append(i)

    def dfs(covered: int) -> bool:
        if covered == full:
            return True
        lowbit = (covered ^ full) & -(covered ^ full)
        elem = lowbit.bit_length()  # smallest uncovered element, 1-based
        for i in by_elem.get(elem, ()):
            m = masks[i]
            if covered & m == 0 and dfs(covered | m):
                return True
        return False

    return dfs(0)


def certify(x3c: X3CInstance) -> ReductionCertificate:
    """Reduce and attach the exhaustively determined ground truth."""
    truth = has_exact_cover(x3c)
    return ReductionCertificate(x3c=x3c, mcsv=reduce_x3c(x3c), truth=truth)


def random_x3c(p: int, n: int, seed: int) -> X3CInstance:
    """Deterministic random family: n triples sampled uniformly (with repetition)."""
    import numpy as np

    if p < 1 or n < 1:
        raise X3CError(f"need p >= 1 and n >= 1, got p={p} n={n}")
    rng = np.random.default_rng(seed)
    m = 3 * p
    subsets = []
    for _ in range(n):
        tri = rng.choice(m, size=3, replace=False) + 1
        subsets.append(tuple(int(e) for e in sorted(tri)))
    return X3CInstance(ground_set_size=m, subsets=tuple(subsets))


# ---------------------------------------------------------------------------
# text formats
#
#   x3c file:      "x3c <p> <n>" then n lines of 3 integers
#   certificate:   the reduced instance file followed by a trailer comment
#                  "# truth: feasible|infeasible"
# ---------------------------------------------------------------------------


def format_x3c(x3c: X3CInstance) -> str:
    lines = [f"x3c {x3c.p} {x3c.n}"]
    lines.extend(" ".join(str(e) for e in s) for s in x3c.subsets)
    return "\n".join(lines) + "\n"


def parse_x3c(text: str) -> X3CInstance:
    lines = [l for l in text.splitlines() if l.strip() and not l.startswith("#")]
    if not lines:
        raise X3CError("empty x3c file")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "x3c":
        raise X3CError(f"bad x3c header {lines[0]!r}")
    if not re.match(r"^[0-9]+$", header[1]) or not re.match(r"^[0-9]+$", header[2]):
        raise X3CError(f"bad x3c header numbers {lines[0]!r}")
    p, n = int(header[1]), int(header[2])
    rows = lines[1:]
    if len(rows) != n:
        raise X3CError(f"expected {n} subset lines, got {len(rows)}")
    subsets = []
    for row in rows:
        toks = row.split()
        if len(toks) != 3 or not all(re.match(r"^[0-9]+$", t) for t in toks):
            raise X3CError(f"bad subset line {row!r}")
        subsets.append(tuple(int(t) for t in toks))
    return X3CInstance(ground_set_size=3 * p, subsets=tuple(subsets))


def format_certificate(cert: ReductionCertificate) -> str:
    from .core import format_instance

    verdict = "feasible" if cert.truth else "infeasible"
    return format_instance(cert.mcsv) + f"# truth: {verdict}\n"


def parse_certificate(text: str) -> tuple[Instance, bool]:
    inst = parse_instance(text)
    m = re.search(r"^#\s*truth:\s*(feasible|infeasible)\s*$", text, re.MULTILINE)
    if not m:
        raise InstanceError("certificate is missing the '# truth:' trailer")
    return inst, m.group(1) == "feasible"
