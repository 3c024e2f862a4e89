"""Pure-Python CDCL solver; the reference for the compiled core in ``_cdcl.pyx``.

Both implementations follow the same algorithm step for step (two watched
literals, first-UIP learning with local minimisation, VSIDS with a
deterministic tie-break on variable id, phase saving, Luby restarts and
LBD-based clause deletion), so they return identical models.

Literals at the interface are signed DIMACS integers.  Internally literal
``v`` is ``2v`` and ``-v`` is ``2v + 1``.
"""

from __future__ import annotations

import heapq
import time

UNKNOWN = None

VSIDS = "vsids"
LOWEST = "lowest"


def luby(i: int) -> int:
    """The ``i``-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class CdclSolver:
    def __init__(self, nvars: int = 0, branching: str = VSIDS):
        if branching not in (VSIDS, LOWEST):
            raise ValueError(f"unknown branching {branching!r}")
        self.branching = branching
        self.nvars = 0
        self.assign = [-1]
        self.level = [0]
        self.reason = [-1]
        self.activity = [0.0]
        self.phase = [0]
        self.seen = [0]
        self.watches = [[], []]
        self.clauses: list[list[int]] = []
        self.learnt: list[bool] = []
        self.lbd: list[int] = []
        self.deleted: list[bool] = []
        self.n_learnts = 0
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.ok = True
        self.var_inc = 1.0
        self.heap: list = []
        self.max_learnts = 0.0
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self._model: list[int] = []
        self.ensure_vars(nvars)

    # -- setup -------------------------------------------------------------

    def ensure_vars(self, n: int) -> None:
        while self.nvars < n:
            self.nvars += 1
            self.assign.append(-1)
            self.level.append(0)
            self.reason.append(-1)
            self.activity.append(0.0)
            self.phase.append(0)
            self.seen.append(0)
            self.watches.append([])
            self.watches.append([])
            heapq.heappush(self.heap, (-0.0, self.nvars))

    def new_var(self) -> int:
        self.ensure_vars(self.nvars + 1)
        return self.nvars

    def _value(self, lit: int) -> int:
        a = self.assign[lit >> 1]
        if a < 0:
            return -1
        return a ^ (lit & 1)

    def add_clause(self, lits) -> bool:
        """Add a clause at decision level 0; returns False once unsatisfiable."""
        if not self.ok:
            return False
        if self.trail_lim:
            self._cancel_until(0)
        seen = set()
        out = []
        for x in lits:
            if x == 0:
                raise ValueError("literal 0 is not allowed")
            v = abs(x)
            if v > self.nvars:
                self.ensure_vars(v)
            lit = 2 * v + (1 if x < 0 else 0)
            if lit ^ 1 in seen:
                return True
            if lit in seen:
                continue
            val = self._value(lit)
            if val == 1:
                return True
            if val == 0:
                continue
            seen.add(lit)
            out.append(lit)
        if not out:
            self.ok = False
            return False
        if len(out) == 1:
            self._enqueue(out[0], -1)
            if self._propagate() >= 0:
                self.ok = False
                return False
            return True
        self._attach(out, False, 0)
        return True

    def _attach(self, lits: list, learnt: bool, lbd: int) -> int:
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.learnt.append(learnt)
        self.lbd.append(lbd)
        self.deleted.append(False)
        self.watches[lits[0]].append(ci)
        self.watches[lits[1]].append(ci)
        if learnt:
            self.n_learnts += 1
        return ci

    # -- core --------------------------------------------------------------

    def _enqueue(self, lit: int, reason: int) -> None:
        v = lit >> 1
        self.assign[v] = (lit & 1) ^ 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self) -> int:
        assign = self.assign
        clauses = self.clauses
        watches = self.watches
        deleted = self.deleted
        trail = self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                if deleted[ci]:
                    continue
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                a = assign[first >> 1]
                if a >= 0 and (a ^ (first & 1)) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                found = False
                for k in range(2, len(c)):
                    lk = c[k]
                    ak = assign[lk >> 1]
                    if ak < 0 or (ak ^ (lk & 1)) == 1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(ci)
                        found = True
                        break
                if found:
                    continue
                ws[j] = ci
                j += 1
                if a >= 0:
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.qhead = len(trail)
                    return ci
                self._enqueue(first, ci)
            del ws[j:]
        return -1

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(1, self.nvars + 1):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
            self._rebuild_heap()
        elif self.assign[v] < 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _rebuild_heap(self) -> None:
        act = self.activity
        self.heap = [(-act[v], v) for v in range(1, self.nvars + 1) if self.assign[v] < 0]
        heapq.heapify(self.heap)

    def _analyze(self, confl: int):
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        clauses = self.clauses
        dl = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        while True:
            c = clauses[confl]
            for k in range(0 if p < 0 else 1, len(c)):
                q = c[k]
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    self._bump(v)
                    seen[v] = 1
                    if level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            confl = reason[v]
            seen[v] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        # local minimisation: drop literals implied by others in the clause
        keep = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r < 0:
                keep.append(q)
                continue
            c = clauses[r]
            for k in range(1, len(c)):
                u = c[k] >> 1
                if not seen[u] and level[u] > 0:
                    keep.append(q)
                    break
        for q in learnt[1:]:
            seen[q >> 1] = 0
        learnt = keep
        bt = 0
        if len(learnt) > 1:
            best = 1
            for k in range(2, len(learnt)):
                if level[learnt[k] >> 1] > level[learnt[best] >> 1]:
                    best = k
            learnt[1], learnt[best] = learnt[best], learnt[1]
            bt = level[learnt[1] >> 1]
        levels = {level[q >> 1] for q in learnt}
        return learnt, bt, len(levels)

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        assign = self.assign
        act = self.activity
        heap = self.heap
        vsids = self.branching == VSIDS
        for k in range(len(self.trail) - 1, stop - 1, -1):
            lit = self.trail[k]
            v = lit >> 1
            self.phase[v] = assign[v]
            assign[v] = -1
            self.reason[v] = -1
            if vsids:
                heapq.heappush(heap, (-act[v], v))
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)
        if vsids and len(heap) > 4 * self.nvars + 64:
            self._rebuild_heap()

    def _pick(self) -> int:
        assign = self.assign
        if self.branching == LOWEST:
            for v in range(1, self.nvars + 1):
                if assign[v] < 0:
                    return 2 * v  # try true first
            return -1
        heap = self.heap
        act = self.activity
        while heap:
            neg_act, v = heapq.heappop(heap)
            if assign[v] < 0 and -neg_act == act[v]:
                return 2 * v + (1 if self.phase[v] <= 0 else 0)
        return -1

    def _locked(self, ci: int) -> bool:
        c = self.clauses[ci]
        v = c[0] >> 1
        return self.reason[v] == ci and self._value(c[0]) == 1

    def _reduce_db(self) -> None:
        cand = [ci for ci in range(len(self.clauses))
                if self.learnt[ci] and not self.deleted[ci] and self.lbd[ci] > 2
                and not self._locked(ci)]
        cand.sort(key=lambda ci: (-self.lbd[ci], ci))
        for ci in cand[: len(cand) // 2]:
            self.deleted[ci] = True
            self.n_learnts -= 1

    def solve(self, assumptions=(), time_limit: float | None = None,
              conflict_limit: int | None = None):
        """Return True (SAT), False (UNSAT) or None (limit reached)."""
        self._model = []
        if not self.ok:
            return False
        for x in assumptions:
            if abs(x) > self.nvars:
                self.ensure_vars(abs(x))
        assume = [2 * abs(x) + (1 if x < 0 else 0) for x in assumptions]
        deadline = None if time_limit is None else time.monotonic() + time_limit
        if self.max_learnts == 0.0:
            self.max_learnts = max(len(self.clauses) / 3.0, 2000.0)
        start_conflicts = self.conflicts
        restart = 0
        budget = luby(restart) * 100
        since_restart = 0
        ticks = 0
        while True:
            confl = self._propagate()
            if confl >= 0:
                self.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, bt, lbd = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    ci = self._attach(learnt, True, lbd)
                    self._enqueue(learnt[0], ci)
                self.var_inc /= 0.95
                ticks += 1
                if ticks & 255 == 0:
                    if deadline is not None and time.monotonic() > deadline:
                        self._cancel_until(0)
                        return UNKNOWN
                    if conflict_limit is not None and self.conflicts - start_conflicts >= conflict_limit:
                        self._cancel_until(0)
                        return UNKNOWN
                continue
            if since_restart >= budget:
                restart += 1
                budget = luby(restart) * 100
                since_restart = 0
                self._cancel_until(0)
                continue
            if self.n_learnts - len(self.trail) >= self.max_learnts:
                self._reduce_db()
                self.max_learnts *= 1.1
            lit = -1
            while len(self.trail_lim) < len(assume):
                a = assume[len(self.trail_lim)]
                val = self._value(a)
                if val == 1:
                    self.trail_lim.append(len(self.trail))
                elif val == 0:
                    self._cancel_until(0)
                    return False
                else:
                    lit = a
                    break
            if lit < 0:
                self.decisions += 1
                if self.decisions & 1023 == 0 and deadline is not None \
                        and time.monotonic() > deadline:
                    self._cancel_until(0)
                    return UNKNOWN
                lit = self._pick()
                if lit < 0:
                    self._model = [0] + [1 if self.assign[v] == 1 else 0
                                         for v in range(1, self.nvars + 1)]
                    self._cancel_until(0)
                    return True
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, -1)

    def model(self) -> list[int]:
        """0/1 values indexed by variable id (index 0 unused)."""
        return list(self._model)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)
