"""Exhaustive reference solver used to cross-validate the dynamic program."""

from __future__ import annotations

import numpy as np

from .core import Instance, Solution, SolveOutcome

MAX_N = 25
_CHUNK = 1 << 18
_SAFE = 1 << 62


def brute_solve(inst: Instance) -> SolveOutcome:
    """Enumerate every non-empty subset; return a maximum-cardinality
    feasible one or Infeasible.

    Subsets are ranked by (cardinality, then lexicographically smallest
    sorted index tuple); enumeration order is a plain binary counter over
    index bitmasks, so the choice is reproducible.
    """
    n = inst.n
    if n > MAX_N:
        raise ValueError(f"brute_solve guard: N={n} exceeds {MAX_N}")
    lhs_mult = n * inst.alpha.denominator
    rhs_mult = inst.alpha.numerator * inst.total_norm_sq

    # int64 is enough when the largest possible squared norm times the
    # multipliers stays clear of 2^63; otherwise take the exact slow path
    max_norm2 = sum((n * max(abs(c) for c in col)) ** 2 for col in zip(*inst.vectors))
    if max_norm2 * lhs_mult < _SAFE and rhs_mult * n < _SAFE:
        best = _vector_sweep(inst, lhs_mult, rhs_mult)
    else:
        best = _python_sweep(inst, lhs_mult, rhs_mult)

    if best is None:
        return SolveOutcome.infeasible()
    indices = tuple(i for i in range(n) if best >> i & 1)
    return SolveOutcome.of(Solution.from_indices(inst, indices))


def _vector_sweep(inst: Instance, lhs_mult: int, rhs_mult: int) -> int | None:
    n = inst.n
    arr = np.asarray(inst.vectors, dtype=np.int64)
    shifts = np.arange(n, dtype=np.int64)
    revw = np.int64(1) << (n - 1 - shifts)  # lex-min index tuple == max revkey
    best_key = None
    best_mask = None
    for start in range(1, 1 << n, _CHUNK):
        stop = min(start + _CHUNK, 1 << n)
        masks = np.arange(start, stop, dtype=np.int64)
        bits = (masks[:, None] >> shifts) & 1
        sums = bits @ arr
        norm2 = (sums * sums).sum(axis=1)
        card = bits.sum(axis=1)
        ok = norm2 * lhs_mult <= rhs_mult * card
        if not ok.any():
            continue
        rev = (bits * revw).sum(axis=1)
        cands = np.flatnonzero(ok)
        key = card[cands] * (np.int64(1) << np.int64(n + 1)) + rev[cands]
        j = cands[int(np.argmax(key))]
        k = (int(card[j]), int(rev[j]))
        if best_key is None or k > best_key:
            best_key = k
            best_mask = int(masks[j])
    return best_mask


def _python_sweep(inst: Instance, lhs_mult: int, rhs_mult: int) -> int | None:
    n = inst.n
    vecs = inst.vectors
    best_key = None
    best_mask = None
    for mask in range(1, 1 << n):
        s = [0] * inst.q
        card = 0
        for i in range(n):
            if mask >> i & 1:
                card += 1
                v = vecs[i]
                for j in range(inst.q):
                    s[j] += v[j]
        if sum(c * c for c in s) * lhs_mult > rhs_mult * card:
            continue
        rev = sum(1 << (n - 1 - i) for i in range(n) if mask >> i & 1)
        k = (card, rev)
        if best_key is None or k > best_key:
            best_key = k
            best_mask = mask
    return best_mask
