"""Dense full-range scans over every endomorphism of a small group.

Elements of a group with cardinality N <= 62 are encoded as integers
0..N-1 (mixed radix over the factor orders) and subsets as bit masks, so
an image chain step is a handful of table lookups.  Endomorphisms are
visited by their enumeration rank, exactly matching the odometer order
of :func:`scoh.groups.enumerate_endos`; ranks are what scans report, and
witnesses are reconstructed from ranks afterwards.

A numba kernel does the heavy sweeps (tens of millions of endomorphisms);
a pure-Python mirror with identical semantics serves as fallback and as
an in-repo cross-check.  Both are independent of the Hermite-normal-form
route in :mod:`scoh.groups`, which the tests compare against.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .groups import FinAbGroup, endo_degrees

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

MASK_LIMIT = 62  # subsets live in one signed 64-bit mask
_CHAIN_LIMIT = 8  # image chains halve cardinality each strict step: stab <= log2(62)


@dataclass(frozen=True)
class ScanResult:
    max_stab: int
    max_rank: int  # first (lexicographically smallest) maximizer
    violations: int  # sum-decomposition equivalence failures, if checked
    first_violation_rank: int  # -1 when none


class DenseGroup:
    """Encoded tables for one group: addition, odometer carries, entry degrees."""

    def __init__(self, group: FinAbGroup):
        self.group = group
        self.orders = group.orders
        self.k = group.rank
        self.n = group.cardinality
        strides = []
        acc = 1
        for o in self.orders:
            strides.append(acc)
            acc *= o
        self.strides = np.array(strides, dtype=np.int64)
        self.addtab = self._addition_table()
        self.carry = self._carry_levels()
        degs = endo_degrees(group)
        self.pos_step = np.array([d for d, _ in degs], dtype=np.int64)
        self.pos_count = np.array([c for _, c in degs], dtype=np.int64)
        self.count = int(np.prod(self.pos_count, dtype=object)) if degs else 1

    @staticmethod
    def build(group: FinAbGroup) -> "DenseGroup | None":
        if group.cardinality > MASK_LIMIT:
            return None
        return DenseGroup(group)

    def encode(self, coords) -> int:
        return int(sum(c * s for c, s in zip(coords, self.strides)))

    def decode(self, x: int) -> tuple[int, ...]:
        out = []
        for o in self.orders:
            out.append(x % o)
            x //= o
        return tuple(out)

    def _addition_table(self) -> np.ndarray:
        n = self.n
        tab = np.zeros((max(n, 1), max(n, 1)), dtype=np.int64)
        coords = [self.decode(x) for x in range(n)]
        for a in range(n):
            for b in range(n):
                summed = tuple(
                    (u + v) % o for u, v, o in zip(coords[a], coords[b], self.orders)
                )
                tab[a, b] = self.encode(summed)
        return tab

    def _carry_levels(self) -> np.ndarray:
        # carry[x] = which coordinate increments when counting x-1 -> x
        lv = np.zeros(max(self.n, 1), dtype=np.int64)
        for x in range(1, self.n):
            t = 0
            while t + 1 < self.k and x % int(self.strides[t + 1]) == 0:
                t += 1
            lv[x] = t
        return lv


def _scan_range_py(dg: DenseGroup, start: int, stop: int, check_equiv: bool) -> ScanResult:
    k, n = dg.k, dg.n
    strides = [int(s) for s in dg.strides]
    addtab = dg.addtab.tolist()
    carry = [int(c) for c in dg.carry]
    steps = [int(s) for s in dg.pos_step]
    counts = [int(c) for c in dg.pos_count]
    npos = k * k
    full = (1 << n) - 1
    best, best_rank = -1, -1
    viols, first_viol = 0, -1
    ims = [0] * _CHAIN_LIMIT
    for rank in range(start, stop):
        r = rank
        ents = [0] * npos
        for pos in range(npos - 1, -1, -1):
            ents[pos] = (r % counts[pos]) * steps[pos]
            r //= counts[pos]
        col = [
            sum(ents[i * k + j] * strides[i] for i in range(k)) for j in range(k)
        ]
        pref = [0] * k
        for t in range(k):
            pref[t] = col[t] if t == 0 else addtab[pref[t - 1]][col[t]]
        fmap = [0] * n
        for x in range(1, n):
            fmap[x] = addtab[fmap[x - 1]][pref[carry[x]]]
        cur = full
        stab = 0
        ims[0] = full
        while True:
            nxt = 0
            for x in range(n):
                if (cur >> x) & 1:
                    nxt |= 1 << fmap[x]
            if nxt == cur:
                break
            stab += 1
            ims[stab] = nxt
            cur = nxt
        if stab > best:
            best, best_rank = stab, rank
        if check_equiv:
            kprev = 1
            for m in range(1, stab + 3):
                km = 0
                for x in range(n):
                    if (kprev >> fmap[x]) & 1:
                        km |= 1 << x
                imm = ims[m] if m <= stab else ims[stab]
                smask = 0
                for u in range(n):
                    if (imm >> u) & 1:
                        row = addtab[u]
                        for v in range(n):
                            if (km >> v) & 1:
                                smask |= 1 << row[v]
                if (smask == full) != (m >= stab):
                    viols += 1
                    if first_viol < 0:
                        first_viol = rank
                kprev = km
    return ScanResult(best, best_rank, viols, first_viol)


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _kernel(k, n, strides, addtab, carry, pos_step, pos_count, start, stop, check_equiv):
        npos = k * k
        full = (np.int64(1) << n) - 1
        ents = np.zeros(max(npos, 1), dtype=np.int64)
        col = np.zeros(max(k, 1), dtype=np.int64)
        pref = np.zeros(max(k, 1), dtype=np.int64)
        fmap = np.zeros(n, dtype=np.int64)
        ims = np.zeros(8, dtype=np.int64)
        best = np.int64(-1)
        best_rank = np.int64(-1)
        viols = np.int64(0)
        first_viol = np.int64(-1)
        for rank in range(start, stop):
            r = rank
            for pos in range(npos - 1, -1, -1):
                g = pos_count[pos]
                ents[pos] = (r % g) * pos_step[pos]
                r //= g
            for j in range(k):
                acc = np.int64(0)
                for i in range(k):
                    acc += ents[i * k + j] * strides[i]
                col[j] = acc
            for t in range(k):
                if t == 0:
                    pref[0] = col[0]
                else:
                    pref[t] = addtab[pref[t - 1], col[t]]
            fmap[0] = 0
            for x in range(1, n):
                fmap[x] = addtab[fmap[x - 1], pref[carry[x]]]
            cur = full
            stab = 0
            ims[0] = full
            while True:
                nxt = np.int64(0)
                for x in range(n):
                    if (cur >> x) & 1:
                        nxt |= np.int64(1) << fmap[x]
                if nxt == cur:
                    break
                stab += 1
                ims[stab] = nxt
                cur = nxt
            if stab > best:
                best = stab
                best_rank = rank
            if check_equiv:
                kprev = np.int64(1)
                for m in range(1, stab + 3):
                    km = np.int64(0)
                    for x in range(n):
                        if (kprev >> fmap[x]) & 1:
                            km |= np.int64(1) << x
                    if m <= stab:
                        imm = ims[m]
                    else:
                        imm = ims[stab]
                    smask = np.int64(0)
                    for u in range(n):
                        if (imm >> u) & 1:
                            for v in range(n):
                                if (km >> v) & 1:
                                    smask |= np.int64(1) << addtab[u, v]
                    if (smask == full) != (m >= stab):
                        viols += 1
                        if first_viol < 0:
                            first_viol = rank
                    kprev = km
        return best, best_rank, viols, first_viol

    def _scan_range_fast(dg: DenseGroup, start: int, stop: int, check_equiv: bool) -> ScanResult:
        best, best_rank, viols, first_viol = _kernel(
            dg.k,
            dg.n,
            dg.strides,
            dg.addtab,
            dg.carry,
            dg.pos_step,
            dg.pos_count,
            start,
            stop,
            check_equiv,
        )
        return ScanResult(int(best), int(best_rank), int(viols), int(first_viol))


def scan_range(dg: DenseGroup, start: int, stop: int, check_equiv: bool = False) -> ScanResult:
    if HAVE_NUMBA:
        return _scan_range_fast(dg, start, stop, check_equiv)
    return _scan_range_py(dg, start, stop, check_equiv)


def merge(results) -> ScanResult:
    """Order-insensitive reduction; ties resolved toward the smallest rank."""
    best, best_rank = -1, -1
    viols, first_viol = 0, -1
    for r in results:
        if r.max_stab > best or (r.max_stab == best and 0 <= r.max_rank < best_rank):
            if r.max_stab > best:
                best = r.max_stab
                best_rank = r.max_rank
            else:
                best_rank = r.max_rank
        viols += r.violations
        if r.first_violation_rank >= 0 and (
            first_viol < 0 or r.first_violation_rank < first_viol
        ):
            first_viol = r.first_violation_rank
    return ScanResult(best, best_rank, viols, first_viol)


def scan(
    dg: DenseGroup, start: int, stop: int, workers: int = 1, check_equiv: bool = False
) -> ScanResult:
    """Scan a rank range, optionally split across worker threads.

    The kernel releases the GIL, so threads give real parallelism; the
    merged result is identical for every worker count.
    """
    total = stop - start
    if total <= 0:
        return ScanResult(-1, -1, 0, -1)
    nchunks = max(1, min(workers, total))
    bounds = [start + total * w // nchunks for w in range(nchunks + 1)]
    jobs = [(bounds[w], bounds[w + 1]) for w in range(nchunks)]
    if nchunks == 1 or not HAVE_NUMBA:
        results = [scan_range(dg, a, b, check_equiv) for a, b in jobs]
    else:
        with ThreadPoolExecutor(max_workers=nchunks) as pool:
            results = list(
                pool.map(lambda ab: scan_range(dg, ab[0], ab[1], check_equiv), jobs)
            )
    return merge(results)
