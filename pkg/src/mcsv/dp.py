"""Exact dynamic-programming solver over reachable integer sum-vectors.

The solver sweeps the input vectors once. After k vectors the state set
holds every integer vector expressible as a sum of distinct vectors among
the first k, keyed by the sum; per sum only the maximum addend count is
kept (larger subsets can only help, because the feasibility bound scales
with the cardinality). The final state set is scanned for the entry of
maximum count whose normalized squared length passes the exact threshold.

Three engines implement the same recurrence and produce identical state
maps, layer sizes, and scan results:

  * ``dict``   - pure-Python hash map, arbitrary precision, used for small N
                 and as the fallback when packing is impossible.
  * ``dense``  - q-dimensional int16 grid over the exact reachable bounding
                 box, used when the box fits the cell budget.
  * ``sparse`` - sorted array of lattice keys packed into int64.

State sets are nested across layers, so holding the current map is enough;
layer sizes are recorded as the sweep proceeds.

Witness reconstruction: the dict and sparse engines append an immutable
edge record (count, layer, predecessor record) on every count change and
walk that chain afterwards. A single mutable edge per state would be wrong:
a predecessor's count can improve later, silently invalidating chains
through its old value. The dense engine stores no records and instead
reconstructs by divide and conquer over the vector range, splitting the
target sum against forward grids of each half.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import Instance, Solution, SolveOutcome, Vector, is_feasible_sum

_INT16_SENTINEL = np.int16(-32768)
_MAX_DENSE_N = 30000  # sentinel + N must stay negative in int16
_PACK_LIMIT = 1 << 62


class DpError(RuntimeError):
    """Engine cannot run or was asked something impossible."""


class DpBudgetExceeded(DpError):
    """A configured resource budget was hit; the solve stopped cleanly."""


@dataclass(frozen=True)
class Budget:
    """Resource limits for a single solve.

    Budgets make exhaustion an explicit, catchable outcome instead of an
    OOM kill; checks run once per layer.
    """

    max_dense_cells: int = 400_000_000
    max_states: int = 20_000_000
    max_records: int = 50_000_000
    max_seconds: float | None = None
    small_n: int = 20


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class DpStats:
    layer_sizes: tuple[int, ...]
    layer_cum_ms: tuple[float, ...]
    peak_states: int
    elapsed_s: float
    engine: str


def format_stats_report(stats: DpStats) -> str:
    """Machine-readable per-layer report: ``k |S_k| cumulative_ms``."""
    lines = [
        f"{k} {size} {cum:.3f}"
        for k, (size, cum) in enumerate(
            zip(stats.layer_sizes, stats.layer_cum_ms), start=1
        )
    ]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ScanResult:
    feasible: bool
    cardinality: int | None = None
    best_sum: Vector | None = None


# ---------------------------------------------------------------------------
# geometry shared by the array engines
# ---------------------------------------------------------------------------


class _Geometry:
    """Exact per-coordinate bounds of all reachable subset sums."""

    def __init__(self, inst: Instance):
        arr = np.asarray(inst.vectors, dtype=np.int64)
        self.vectors = arr
        self.lo = np.minimum(arr, 0).sum(axis=0)
        self.hi = np.maximum(arr, 0).sum(axis=0)
        self.spans = self.hi - self.lo + 1
        self.cells = 1
        for r in self.spans.tolist():
            self.cells *= int(r)
        # row-major packing, coordinate 0 most significant, so ascending
        # packed keys sort sums lexicographically by coordinates
        mults = [1] * inst.q
        for j in range(inst.q - 2, -1, -1):
            mults[j] = mults[j + 1] * int(self.spans[j + 1])
        self.mults = mults
        self.packable = self.cells < _PACK_LIMIT

    def scan_safe(self, inst: Instance) -> bool:
        """True when the threshold comparison fits int64 with headroom."""
        max_abs = np.maximum(np.abs(self.lo), np.abs(self.hi)).tolist()
        max_norm2 = sum(int(m) * int(m) for m in max_abs)
        a = max_norm2 * inst.n * inst.alpha.denominator
        b = inst.alpha.numerator * inst.total_norm_sq * inst.n
        return a < _PACK_LIMIT and b < _PACK_LIMIT


def _select_engine(inst: Instance, budget: Budget) -> str:
    if inst.n <= budget.small_n:
        return "dict"
    geo = _Geometry(inst)
    if geo.scan_safe(inst):
        if geo.cells <= budget.max_dense_cells and inst.n <= _MAX_DENSE_N:
            return "dense"
        if geo.packable:
            return "sparse"
    return "dict"


# ---------------------------------------------------------------------------
# dict engine
# ---------------------------------------------------------------------------

# record = (count, layer, predecessor record); layer is 1-based, 0 for root
_ROOT_REC = (0, 0, None)


def _run_dict(inst: Instance, budget: Budget, t0: float):
    zero = (0,) * inst.q
    states: dict[Vector, tuple] = {zero: _ROOT_REC}
    sizes: list[int] = []
    cums: list[float] = []
    for k1, y in enumerate(inst.vectors, start=1):
        snapshot = list(states.items())
        for z, rec in snapshot:
            z2 = tuple(a + b for a, b in zip(z, y))
            n2 = rec[0] + 1
            cur = states.get(z2)
            if cur is None or n2 > cur[0]:
                states[z2] = (n2, k1, rec)
        sizes.append(len(states))
        cums.append((time.perf_counter() - t0) * 1000.0)
        _check_budget(len(states), len(states), k1, budget, t0)
    return states, sizes, cums


def _check_budget(states: int, records: int, layer: int, budget: Budget, t0: float):
    if states > budget.max_states:
        raise DpBudgetExceeded(
            f"state budget exceeded at layer {layer}: {states} > {budget.max_states}"
        )
    if records > budget.max_records:
        raise DpBudgetExceeded(
            f"record budget exceeded at layer {layer}: {records} > {budget.max_records}"
        )
    if budget.max_seconds is not None and time.perf_counter() - t0 > budget.max_seconds:
        raise DpBudgetExceeded(f"time budget exceeded at layer {layer}")


def _dict_walk(rec) -> list[int]:
    idx = []
    while rec[1] != 0:
        idx.append(rec[1] - 1)
        rec = rec[2]
    idx.reverse()
    return idx


# ---------------------------------------------------------------------------
# sparse engine: sorted packed int64 keys
# ---------------------------------------------------------------------------


def _run_sparse(inst: Instance, geo: _Geometry, budget: Budget, want_records: bool, t0: float):
    mults = np.asarray(geo.mults, dtype=np.int64)
    root_key = int(((0 - geo.lo) * mults).sum())
    keys = np.array([root_key], dtype=np.int64)
    nvals = np.array([0], dtype=np.int32)
    recids = np.array([0], dtype=np.int32) if want_records else None
    rec_n = [np.array([0], dtype=np.int32)]
    rec_k = [np.array([0], dtype=np.int32)]
    rec_pred = [np.array([-1], dtype=np.int32)]
    rec_count = 1

    sizes: list[int] = []
    cums: list[float] = []
    for k1 in range(1, inst.n + 1):
        delta = int((geo.vectors[k1 - 1] * mults).sum())
        cand = keys + delta
        cand_n = nvals + np.int32(1)
        pos = np.searchsorted(keys, cand)
        inb = pos < keys.size
        pos_c = np.where(inb, pos, 0)
        exists = inb & (keys[pos_c] == cand)
        improve = exists & (cand_n > nvals[pos_c])
        new = ~exists

        if want_records:
            n_impr = int(improve.sum())
            n_new = int(new.sum())
            ids_impr = np.arange(rec_count, rec_count + n_impr, dtype=np.int32)
            ids_new = np.arange(
                rec_count + n_impr, rec_count + n_impr + n_new, dtype=np.int32
            )
            rec_n.append(cand_n[improve])
            rec_n.append(cand_n[new])
            rec_k.append(np.full(n_impr, k1, dtype=np.int32))
            rec_k.append(np.full(n_new, k1, dtype=np.int32))
            rec_pred.append(recids[improve])
            rec_pred.append(recids[new])
            rec_count += n_impr + n_new

        tgt = pos_c[improve]
        nvals[tgt] = cand_n[improve]
        if want_records:
            recids[tgt] = ids_impr

        new_keys = cand[new]
        ins = np.searchsorted(keys, new_keys)
        keys = np.insert(keys, ins, new_keys)
        nvals = np.insert(nvals, ins, cand_n[new])
        if want_records:
            recids = np.insert(recids, ins, ids_new)

        sizes.append(int(keys.size))
        cums.append((time.perf_counter() - t0) * 1000.0)
        _check_budget(keys.size, rec_count, k1, budget, t0)

    records = None
    if want_records:
        records = (
            np.concatenate(rec_n),
            np.concatenate(rec_k),
            np.concatenate(rec_pred),
        )
    return keys, nvals, recids, records, sizes, cums


def _sparse_walk(records, rid: int) -> list[int]:
    rec_n, rec_k, rec_pred = records
    idx = []
    while rec_k[rid] != 0:
        idx.append(int(rec_k[rid]) - 1)
        rid = int(rec_pred[rid])
    idx.reverse()
    return idx


def _unpack_keys(keys: np.ndarray, geo: _Geometry) -> np.ndarray:
    """(S,) packed int64 -> (S, q) absolute coordinates."""
    q = len(geo.mults)
    out = np.empty((keys.size, q), dtype=np.int64)
    for j in range(q):
        out[:, j] = (keys // geo.mults[j]) % int(geo.spans[j]) + int(geo.lo[j])
    return out


# ---------------------------------------------------------------------------
# dense engine: int16 grid over the reachable box
# ---------------------------------------------------------------------------


def _dense_forward(vectors: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                   budget: Budget | None = None, t0: float = 0.0,
                   count_layers: bool = False):
    """Forward sweep on an int16 grid; returns grid plus optional layer data.

    Unreached cells carry a large negative value; adding 1 per layer keeps
    them negative for any supported N, so ``max(dst, src + 1)`` needs no
    mask.
    """
    q = vectors.shape[1]
    shape = tuple(int(s) for s in (hi - lo + 1))
    grid = np.full(shape, _INT16_SENTINEL, dtype=np.int16)
    root = tuple(int(-l) for l in lo)
    grid[root] = 0
    wlo = np.array(root, dtype=np.int64)
    whi = np.array(root, dtype=np.int64)
    sizes: list[int] = []
    cums: list[float] = []
    count = 1
    for k1 in range(1, vectors.shape[0] + 1):
        y = vectors[k1 - 1]
        src = tuple(
            slice(int(wlo[j]), int(whi[j]) + 1) for j in range(q)
        )
        dst = tuple(
            slice(int(wlo[j] + y[j]), int(whi[j] + y[j]) + 1) for j in range(q)
        )
        if count_layers:
            before = int((grid[dst] >= 0).sum())
        np.maximum(grid[dst], grid[src] + np.int16(1), out=grid[dst])
        wlo = wlo + np.minimum(y, 0)
        whi = whi + np.maximum(y, 0)
        if count_layers:
            after = int((grid[dst] >= 0).sum())
            count += after - before
            sizes.append(count)
            cums.append((time.perf_counter() - t0) * 1000.0)
        if budget is not None:
            _check_budget(0, 0, k1, budget, t0)
    return grid, sizes, cums


def _dense_scan(grid: np.ndarray, lo: np.ndarray, inst: Instance):
    """Threshold scan over the final grid, slab by slab along coordinate 0.

    Tie-break: maximum count, then minimum squared norm, then
    lexicographically smallest coordinates (slab order plus row-major order
    inside a slab give exactly that).
    """
    q = grid.ndim
    shape = grid.shape
    rest = 1
    for s in shape[1:]:
        rest *= s
    view = grid.reshape(shape[0], rest)
    rest_norm2 = np.zeros(rest, dtype=np.int64)
    if q > 1:
        idx = np.arange(rest, dtype=np.int64)
        mult = rest
        for j in range(1, q):
            mult //= shape[j]
            cj = (idx // mult) % shape[j] + int(lo[j])
            rest_norm2 += cj * cj
    lhs_mult = inst.n * inst.alpha.denominator
    rhs_mult = inst.alpha.numerator * inst.total_norm_sq

    best = None  # (n, norm2, x0, rest_idx)
    for i0 in range(shape[0]):
        slab = view[i0]
        n64 = slab.astype(np.int64)
        x0 = i0 + int(lo[0])
        norm2 = rest_norm2 + x0 * x0
        ok = (slab >= 1) & (norm2 * lhs_mult <= rhs_mult * n64)
        if not ok.any():
            continue
        nmax = int(n64[ok].max())
        if best is not None and nmax < best[0]:
            continue
        at_max = ok & (n64 == nmax)
        m2 = int(norm2[at_max].min())
        if best is not None and nmax == best[0] and m2 >= best[1]:
            continue
        ridx = int(np.argmax(at_max & (norm2 == m2)))
        best = (nmax, m2, x0, ridx)

    if best is None:
        return None
    nmax, _, x0, ridx = best
    coords = [x0]
    mult = rest
    for j in range(1, q):
        mult //= shape[j]
        coords.append((ridx // mult) % shape[j] + int(lo[j]))
    return tuple(coords), nmax


def _dense_entries(grid: np.ndarray, lo: np.ndarray):
    """All reached cells as (coords, n); includes the root when still 0."""
    pos = np.argwhere(grid >= 0)
    out = []
    for p in pos:
        coords = tuple(int(c + l) for c, l in zip(p, lo))
        out.append((coords, int(grid[tuple(p)])))
    return out


def _dense_witness(vectors: np.ndarray, z: Sequence[int], c: int) -> list[int]:
    """Divide-and-conquer witness: split the target sum across two halves.

    Invariant: c is the maximum addend count for z within the index range,
    so prefix and suffix maxima meet exactly at a split cell, and each half
    inherits the same invariant.
    """

    def rec(a: int, b: int, z: np.ndarray, c: int) -> list[int]:
        if c == 0:
            if np.any(z != 0):
                raise DpError("reconstruction failed: nonzero sum with count 0")
            return []
        if b - a == 1:
            if c == 1 and np.array_equal(z, vectors[a]):
                return [a]
            raise DpError("reconstruction failed at base case")
        mid = (a + b) // 2
        fvec, gvec = vectors[a:mid], vectors[mid:b]
        flo = np.minimum(fvec, 0).sum(axis=0)
        fhi = np.maximum(fvec, 0).sum(axis=0)
        glo = np.minimum(gvec, 0).sum(axis=0)
        ghi = np.maximum(gvec, 0).sum(axis=0)
        fgrid, _, _ = _dense_forward(fvec, flo, fhi)
        ggrid, _, _ = _dense_forward(gvec, glo, ghi)
        ulo = np.maximum(flo, z - ghi)
        uhi = np.minimum(fhi, z - glo)
        if np.any(ulo > uhi):
            raise DpError("reconstruction failed: empty split window")
        fview = fgrid[tuple(
            slice(int(ulo[j] - flo[j]), int(uhi[j] - flo[j]) + 1)
            for j in range(len(flo))
        )]
        gview = ggrid[tuple(
            slice(int(z[j] - uhi[j] - glo[j]), int(z[j] - ulo[j] - glo[j]) + 1)
            for j in range(len(glo))
        )][tuple(slice(None, None, -1) for _ in range(len(glo)))]
        match = (fview >= 0) & (gview >= 0) & (
            fview.astype(np.int32) + gview.astype(np.int32) == c
        )
        if not match.any():
            raise DpError("reconstruction failed: no split achieves the count")
        flat = int(np.argmax(match))
        u = ulo + np.array(np.unravel_index(flat, match.shape), dtype=np.int64)
        c1 = int(fgrid[tuple(int(u[j] - flo[j]) for j in range(len(flo)))])
        del fgrid, ggrid, fview, gview, match  # free before recursing
        return rec(a, mid, u, c1) + rec(mid, b, z - u, c - c1)

    return rec(0, vectors.shape[0], np.asarray(z, dtype=np.int64), c)


# ---------------------------------------------------------------------------
# public driver
# ---------------------------------------------------------------------------


class DpRun:
    """A completed sweep: final state set plus reconstruction capability."""

    def __init__(self, inst: Instance, engine: str, budget: Budget,
                 witness: bool = True):
        if engine == "auto":
            engine = _select_engine(inst, budget)
        t0 = time.perf_counter()
        self.instance = inst
        self.engine = engine
        self._geo = None
        self._records = None
        if engine == "dict":
            self._states, sizes, cums = _run_dict(inst, budget, t0)
        elif engine == "sparse":
            geo = _Geometry(inst)
            if not geo.packable:
                raise DpError("instance does not pack into 64-bit keys")
            if not geo.scan_safe(inst):
                raise DpError("threshold scan would overflow 64-bit arithmetic")
            self._geo = geo
            (self._keys, self._nvals, self._recids, self._records,
             sizes, cums) = _run_sparse(inst, geo, budget, witness, t0)
        elif engine == "dense":
            geo = _Geometry(inst)
            if geo.cells > budget.max_dense_cells:
                raise DpError(
                    f"dense grid needs {geo.cells} cells, over budget "
                    f"{budget.max_dense_cells}"
                )
            if inst.n > _MAX_DENSE_N:
                raise DpError(f"dense engine supports N <= {_MAX_DENSE_N}")
            if not geo.scan_safe(inst):
                raise DpError("threshold scan would overflow 64-bit arithmetic")
            self._geo = geo
            self._grid, sizes, cums = _dense_forward(
                geo.vectors, geo.lo, geo.hi, budget, t0, count_layers=True
            )
        else:
            raise DpError(f"unknown engine {engine!r}")
        self.stats = DpStats(
            layer_sizes=tuple(sizes),
            layer_cum_ms=tuple(cums),
            peak_states=max(sizes),
            elapsed_s=time.perf_counter() - t0,
            engine=engine,
        )

    # -- scan ---------------------------------------------------------------

    def best_entry(self) -> tuple[Vector, int] | None:
        """Scan winner (sum, count) under the exact threshold, or None."""
        inst = self.instance
        if self.engine == "dict":
            lhs_mult = inst.n * inst.alpha.denominator
            rhs_mult = inst.alpha.numerator * inst.total_norm_sq
            best = None
            for z, rec in self._states.items():
                n = rec[0]
                if n < 1:
                    continue
                norm2 = sum(c * c for c in z)
                if norm2 * lhs_mult > rhs_mult * n:
                    continue
                key = (-n, norm2, z)
                if best is None or key < best[0]:
                    best = (key, z, n)
            return (best[1], best[2]) if best else None
        if self.engine == "sparse":
            coords = _unpack_keys(self._keys, self._geo)
            norm2 = (coords * coords).sum(axis=1)
            n64 = self._nvals.astype(np.int64)
            lhs_mult = inst.n * inst.alpha.denominator
            rhs_mult = inst.alpha.numerator * inst.total_norm_sq
            ok = (self._nvals >= 1) & (norm2 * lhs_mult <= rhs_mult * n64)
            if not ok.any():
                return None
            nmax = int(n64[ok].max())
            at_max = ok & (n64 == nmax)
            m2 = int(norm2[at_max].min())
            i = int(np.argmax(at_max & (norm2 == m2)))  # keys ascend = lex order
            return tuple(int(c) for c in coords[i]), nmax
        res = _dense_scan(self._grid, self._geo.lo, inst)
        return res

    def feasible_entries(self) -> list[tuple[Vector, int]]:
        """All final entries passing the threshold, lex order, root excluded.

        On the dense engine this walks every reached cell; meant for
        diagnostics at moderate sizes.
        """
        inst = self.instance
        lhs_mult = inst.n * inst.alpha.denominator
        rhs_mult = inst.alpha.numerator * inst.total_norm_sq
        out = []
        for z, n in self.entries():
            if n >= 1 and sum(c * c for c in z) * lhs_mult <= rhs_mult * n:
                out.append((z, n))
        out.sort(key=lambda e: e[0])
        return out

    def entries(self):
        """Iterate all final (sum, count) states, including the root."""
        if self.engine == "dict":
            for z, rec in self._states.items():
                yield z, rec[0]
        elif self.engine == "sparse":
            coords = _unpack_keys(self._keys, self._geo)
            for i in range(self._keys.size):
                yield tuple(int(c) for c in coords[i]), int(self._nvals[i])
        else:
            yield from _dense_entries(self._grid, self._geo.lo)

    def count_of(self, z: Sequence[int]) -> int | None:
        """Final addend count for a sum vector, or None if unreachable."""
        zt = tuple(int(c) for c in z)
        if self.engine == "dict":
            rec = self._states.get(zt)
            return rec[0] if rec is not None else None
        if self.engine == "sparse":
            geo = self._geo
            for j in range(len(zt)):
                if not int(geo.lo[j]) <= zt[j] <= int(geo.hi[j]):
                    return None
            key = sum((zt[j] - int(geo.lo[j])) * geo.mults[j] for j in range(len(zt)))
            i = int(np.searchsorted(self._keys, key))
            if i < self._keys.size and int(self._keys[i]) == key:
                return int(self._nvals[i])
            return None
        geo = self._geo
        for j in range(len(zt)):
            if not int(geo.lo[j]) <= zt[j] <= int(geo.hi[j]):
                return None
        v = int(self._grid[tuple(zt[j] - int(geo.lo[j]) for j in range(len(zt)))])
        return v if v >= 0 else None

    # -- reconstruction -------------------------------------------------------

    def reconstruct(self, z: Sequence[int]) -> tuple[int, ...]:
        """Indices of a maximum subset summing to z (z must be reachable)."""
        zt = tuple(int(c) for c in z)
        n = self.count_of(zt)
        if n is None:
            raise DpError(f"sum {zt} is not reachable")
        if self.engine == "dict":
            return tuple(_dict_walk(self._states[zt]))
        if self.engine == "sparse":
            if self._records is None:
                raise DpError("run was built without reconstruction records")
            geo = self._geo
            key = sum((zt[j] - int(geo.lo[j])) * geo.mults[j] for j in range(len(zt)))
            i = int(np.searchsorted(self._keys, key))
            return tuple(_sparse_walk(self._records, int(self._recids[i])))
        return tuple(sorted(_dense_witness(self._geo.vectors, zt, n)))


def dp_run(inst: Instance, *, engine: str = "auto",
           budget: Budget = DEFAULT_BUDGET, witness: bool = True) -> DpRun:
    return DpRun(inst, engine, budget, witness)


def dp_solve(inst: Instance, *, engine: str = "auto",
             budget: Budget = DEFAULT_BUDGET) -> tuple[SolveOutcome, DpStats]:
    """Solve to optimality; the returned solution passes the exact test."""
    run = dp_run(inst, engine=engine, budget=budget)
    best = run.best_entry()
    if best is None:
        return SolveOutcome.infeasible(), run.stats
    z, n = best
    indices = run.reconstruct(z)
    sol = Solution.from_indices(inst, indices)
    if sol.cardinality != n or sol.sum != z or not is_feasible_sum(inst, sol.sum, n):
        raise DpError("internal error: reconstructed witness fails validation")
    return SolveOutcome.of(sol), run.stats


def dp_scan(inst: Instance, *, engine: str = "auto",
            budget: Budget = DEFAULT_BUDGET) -> tuple[ScanResult, DpStats]:
    """Optimal value and sum without materializing a witness subset."""
    run = dp_run(inst, engine=engine, budget=budget, witness=False)
    best = run.best_entry()
    if best is None:
        return ScanResult(feasible=False), run.stats
    z, n = best
    return ScanResult(feasible=True, cardinality=n, best_sum=z), run.stats


def dp_feasible_set(inst: Instance, *, engine: str = "auto",
                    budget: Budget = DEFAULT_BUDGET) -> list[tuple[Vector, int]]:
    """All final-layer (sum, count) entries passing the threshold test."""
    run = dp_run(inst, engine=engine, budget=budget, witness=False)
    return run.feasible_entries()


def state_bound(inst: Instance, k: int) -> int:
    """Layer-k cap on distinct states: (2*b*k + 1) ** q."""
    return (2 * inst.bound * k + 1) ** inst.q
