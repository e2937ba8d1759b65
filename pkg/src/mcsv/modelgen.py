"""Boolean quadratically-constrained model emission and solution checking.

The emitted model maximizes the number of selected vectors subject to one
quadratic constraint. To keep every coefficient an integer, the constraint
is emitted in cross-multiplied form:

    N * a_den * sum_{i,i'} (y_i . y_i') x_i x_i'
        - a_num * ||sum Y||^2 * sum_i x_i  <=  0

which is exactly the normalized inequality multiplied through by
N * a_den. The exact rational threshold is echoed in a comment, with a
decimal expansion only when it is finite.

Grammar (documented for the golden tests, LP-like):

    \\ comment lines
    Maximize
     obj: x1 + x2 + ... + xN
    Subject To
     qc: [ <quad terms> ] <linear terms> <= 0
    Binary
     x1 ... xN
    End

A quad term is ``c xi ^2`` or ``c xi * xj``; every term carries an integer
coefficient and an explicit sign (the first may omit ``+``). Long lines wrap;
whitespace including newlines between tokens is insignificant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Instance, Solution, SolveOutcome, is_feasible

_WRAP = 72


class ModelError(ValueError):
    """Model text that does not follow the documented grammar."""


class SolverSolutionError(ValueError):
    """Solver output that is unusable or violates the exact constraint."""


@dataclass(frozen=True)
class ModelFile:
    text: str
    var_names: tuple[str, ...]  # var_names[i] is the variable for vector i


@dataclass(frozen=True)
class ParsedModel:
    n: int
    quad: dict[tuple[int, int], int]  # 0-based (i, j), i <= j
    lin: dict[int, int]
    objective: tuple[int, ...]
    binaries: tuple[int, ...]


def _wrap(tokens: list[str], indent: str = " ") -> list[str]:
    lines: list[str] = []
    cur = indent
    for tok in tokens:
        if len(cur) + len(tok) + 1 > _WRAP and cur.strip():
            lines.append(cur)
            cur = indent
        cur += (" " if cur.strip() else "") + tok
    if cur.strip():
        lines.append(cur)
    return lines


def _signed(coeff: int, first: bool) -> list[str]:
    if coeff < 0:
        return ["-", str(-coeff)]
    return [str(coeff)] if first else ["+", str(coeff)]


def emit_model(inst: Instance) -> ModelFile:
    n = inst.n
    names = tuple(f"x{i + 1}" for i in range(n))
    a = inst.alpha
    t = a * inst.total_norm_sq / n
    lhs_mult = n * a.denominator
    lin_coeff = a.numerator * inst.total_norm_sq

    gram = [
        [sum(vi[j] * vk[j] for j in range(inst.q)) for vk in inst.vectors]
        for vi in inst.vectors
    ]

    quad_tokens: list[str] = []
    first = True
    for i in range(n):
        c = lhs_mult * gram[i][i]
        if c != 0:
            quad_tokens += _signed(c, first) + [names[i], "^2"]
            first = False
        for k in range(i + 1, n):
            c = 2 * lhs_mult * gram[i][k]
            if c != 0:
                quad_tokens += _signed(c, first) + [names[i], "*", names[k]]
                first = False
    if not quad_tokens:
        quad_tokens = ["0", names[0], "^2"]

    lin_tokens: list[str] = []
    if lin_coeff != 0:
        for i in range(n):
            lin_tokens += ["-", str(lin_coeff), names[i]]

    tnum, tden = t.numerator, t.denominator
    dec = _finite_decimal(tnum, tden)
    tcomment = f"\\ threshold alpha*||sum Y||^2 / N = {tnum}/{tden}"
    if dec is not None:
        tcomment += f" (= {dec})"

    lines = [
        "\\ mcsv quadratic model v1",
        f"\\ N={n} q={inst.q} alpha={a.numerator}/{a.denominator}",
        tcomment,
        "Maximize",
    ]
    obj_tokens: list[str] = []
    for i, nm in enumerate(names):
        if i:
            obj_tokens.append("+")
        obj_tokens.append(nm)
    lines += _wrap(["obj:"] + obj_tokens)
    lines.append("Subject To")
    lines += _wrap(["qc:", "["] + quad_tokens + ["]"] + lin_tokens + ["<=", "0"])
    lines.append("Binary")
    lines += _wrap(list(names))
    lines.append("End")
    return ModelFile(text="\n".join(lines) + "\n", var_names=names)


def _finite_decimal(num: int, den: int) -> str | None:
    """Exact decimal expansion of num/den, or None when it does not terminate."""
    if den == 1:
        return str(num)
    d = den
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d != 1:
        return None
    digits = 0
    d = den
    while d % 2 == 0:
        d //= 2
        digits += 1
    fives = 0
    d2 = den
    while d2 % 5 == 0:
        d2 //= 5
        fives += 1
    digits = max(digits, fives)
    scaled = num * 10**digits // den
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}" if digits else f"{sign}{s}"


# ---------------------------------------------------------------------------
# parsing the emitted grammar back (round-trip + desk enumeration)
# ---------------------------------------------------------------------------

_QUAD_TERM = re.compile(
    r"([+-]?)\s*([0-9]+)\s+x([0-9]+)\s*(?:\^\s*2|\*\s*x([0-9]+))"
)
_LIN_TERM = re.compile(r"([+-])\s*([0-9]+)\s+x([0-9]+)")
_VAR = re.compile(r"x([0-9]+)")


def parse_model(text: str) -> ParsedModel:
    body = "\n".join(
        l for l in text.splitlines() if not l.lstrip().startswith("\\")
    )
    m = re.search(
        r"Maximize\s+(.*?)\s*Subject To\s+(.*?)\s*Binary\s+(.*?)\s*End",
        body,
        re.DOTALL,
    )
    if not m:
        raise ModelError("missing Maximize/Subject To/Binary/End structure")
    obj_part, cons_part, bin_part = m.groups()

    if "obj:" not in obj_part:
        raise ModelError("missing 'obj:' label")
    objective = tuple(
        int(v) - 1 for v in _VAR.findall(obj_part.split("obj:", 1)[1])
    )
    binaries = tuple(int(v) - 1 for v in _VAR.findall(bin_part))
    if not binaries:
        raise ModelError("empty Binary section")
    n = max(binaries) + 1
    if sorted(binaries) != list(range(n)):
        raise ModelError("Binary section must declare x1..xN contiguously")

    cm = re.search(r"qc:\s*\[(.*?)\](.*?)<=\s*0\s*$", cons_part, re.DOTALL)
    if not cm:
        raise ModelError("constraint must look like 'qc: [ ... ] ... <= 0'")
    quad_str, lin_str = cm.groups()

    quad: dict[tuple[int, int], int] = {}
    consumed = 0
    for t in _QUAD_TERM.finditer(quad_str):
        consumed += t.end() - t.start()
        sign = -1 if t.group(1) == "-" else 1
        c = sign * int(t.group(2))
        i = int(t.group(3)) - 1
        j = int(t.group(4)) - 1 if t.group(4) else i
        if i > j:
            i, j = j, i
        if not (0 <= i < n and 0 <= j < n):
            raise ModelError(f"quadratic term references unknown variable: {t.group(0)}")
        quad[(i, j)] = quad.get((i, j), 0) + c
    leftovers = _QUAD_TERM.sub("", quad_str).replace("+", "").replace("-", "")
    if leftovers.split():
        raise ModelError(f"unparsed quadratic tokens: {leftovers.split()[:3]}")

    lin: dict[int, int] = {}
    for t in _LIN_TERM.finditer(lin_str):
        sign = -1 if t.group(1) == "-" else 1
        i = int(t.group(3)) - 1
        if not 0 <= i < n:
            raise ModelError(f"linear term references unknown variable: {t.group(0)}")
        lin[i] = lin.get(i, 0) + sign * int(t.group(2))
    leftovers = _LIN_TERM.sub("", lin_str)
    if leftovers.split():
        raise ModelError(f"unparsed linear tokens: {leftovers.split()[:3]}")

    return ParsedModel(n=n, quad=quad, lin=lin, objective=objective, binaries=binaries)


def enumerate_model(model: ParsedModel, exclude_zero: bool = True) -> tuple[int, int | None]:
    """Exhaustive binary enumeration; returns (best objective, best mask).

    The all-zeros assignment satisfies the constraint trivially; with
    exclude_zero it is skipped, matching the set semantics where the empty
    subset is not a solution. Returns (0, None) when nothing else passes.
    """
    n = model.n
    if n > 22:
        raise ModelError(f"enumeration guard: N={n} too large")
    qmat = np.zeros((n, n), dtype=np.int64)
    for (i, j), c in model.quad.items():
        qmat[i, j] += c
    lvec = np.zeros(n, dtype=np.int64)
    for i, c in model.lin.items():
        lvec[i] += c
    shifts = np.arange(n, dtype=np.int64)
    best_val, best_mask = 0, None
    start = 1 if exclude_zero else 0
    chunk = 1 << 18
    for lo in range(start, 1 << n, chunk):
        hi = min(lo + chunk, 1 << n)
        masks = np.arange(lo, hi, dtype=np.int64)
        bits = ((masks[:, None] >> shifts) & 1).astype(np.int64)
        val = ((bits @ qmat) * bits).sum(axis=1) + bits @ lvec
        ok = val <= 0
        if not ok.any():
            continue
        card = bits.sum(axis=1)
        j = int(np.argmax(np.where(ok, card, -1)))
        if int(card[j]) > best_val:
            best_val = int(card[j])
            best_mask = int(masks[j])
    return best_val, best_mask


# ---------------------------------------------------------------------------
# solver output ingestion
# ---------------------------------------------------------------------------

_ASSIGN = re.compile(r"\bx([0-9]+)\s*[=:]?\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)")
_TOL = 1e-6


def parse_solver_solution(text: str, inst: Instance) -> SolveOutcome:
    """Extract a 0/1 assignment for x1..xN, validate it exactly.

    Values within 1e-6 of 0 or 1 are accepted as binary; anything else is a
    parse error. An assignment that fails the exact feasibility test is
    reported as an error (a solver-tolerance signal), never returned as a
    solution; the all-zeros assignment is an error because the empty subset
    is not a solution.
    """
    values: dict[int, int] = {}
    for m in _ASSIGN.finditer(text):
        i = int(m.group(1)) - 1
        v = float(m.group(2))
        if abs(v) <= _TOL:
            bit = 0
        elif abs(v - 1.0) <= _TOL:
            bit = 1
        else:
            raise SolverSolutionError(f"x{i + 1} has non-binary value {v!r}")
        if i in values and values[i] != bit:
            raise SolverSolutionError(f"conflicting assignments for x{i + 1}")
        values[i] = bit
    missing = [i + 1 for i in range(inst.n) if i not in values]
    if missing:
        raise SolverSolutionError(f"missing assignments for x{missing[:5]}...")
    indices = tuple(i for i in range(inst.n) if values[i])
    if not indices:
        raise SolverSolutionError("all-zeros assignment: empty subset is not a solution")
    if not is_feasible(inst, indices):
        raise SolverSolutionError(
            "assignment violates the exact constraint (solver tolerance issue)"
        )
    return SolveOutcome.of(Solution.from_indices(inst, indices))
