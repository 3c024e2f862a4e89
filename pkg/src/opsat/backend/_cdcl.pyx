# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled CDCL core.  Mirrors ``_pycdcl.CdclSolver`` step for step."""

from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memset
import time


cdef struct IntVec:
    int *data
    int size
    int cap


cdef inline int vec_push(IntVec *v, int x) except -1:
    cdef int *nd
    if v.size == v.cap:
        v.cap = 4 if v.cap == 0 else v.cap * 2
        nd = <int *> realloc(v.data, v.cap * sizeof(int))
        if nd == NULL:
            raise MemoryError()
        v.data = nd
    v.data[v.size] = x
    v.size += 1
    return 0


cdef int luby_c(int i):
    cdef int size = 1, seq = 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


cdef class CdclSolver:
    cdef public str branching
    cdef bint lowest
    cdef public int nvars
    cdef int cap_vars
    cdef signed char *assign
    cdef int *level
    cdef int *reason
    cdef double *activity
    cdef signed char *phase
    cdef signed char *seen
    cdef IntVec *watches
    # clause arena
    cdef IntVec lits
    cdef IntVec cstart
    cdef IntVec csize
    cdef IntVec clbd
    cdef IntVec cflags        # bit 0 learnt, bit 1 deleted
    cdef int n_learnts
    cdef IntVec trail
    cdef IntVec trail_lim
    cdef int qhead
    cdef public bint ok
    cdef double var_inc
    # indexed max-heap of variables
    cdef int *heap
    cdef int *heap_pos
    cdef int heap_size
    cdef double max_learnts
    cdef public long conflicts
    cdef public long decisions
    cdef public long propagations
    cdef list _model

    def __cinit__(self, int nvars=0, branching="vsids"):
        self.nvars = 0
        self.cap_vars = 0
        self.assign = NULL
        self.level = NULL
        self.reason = NULL
        self.activity = NULL
        self.phase = NULL
        self.seen = NULL
        self.watches = NULL
        self.heap = NULL
        self.heap_pos = NULL
        self.heap_size = 0
        memset(&self.lits, 0, sizeof(IntVec))
        memset(&self.cstart, 0, sizeof(IntVec))
        memset(&self.csize, 0, sizeof(IntVec))
        memset(&self.clbd, 0, sizeof(IntVec))
        memset(&self.cflags, 0, sizeof(IntVec))
        memset(&self.trail, 0, sizeof(IntVec))
        memset(&self.trail_lim, 0, sizeof(IntVec))

    def __init__(self, int nvars=0, branching="vsids"):
        if branching not in ("vsids", "lowest"):
            raise ValueError(f"unknown branching {branching!r}")
        self.branching = branching
        self.lowest = branching == "lowest"
        self.n_learnts = 0
        self.qhead = 0
        self.ok = True
        self.var_inc = 1.0
        self.max_learnts = 0.0
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self._model = []
        self._grow(16)
        self.ensure_vars(nvars)

    def __dealloc__(self):
        cdef int i
        if self.watches != NULL:
            for i in range(2 * (self.cap_vars + 1)):
                free(self.watches[i].data)
            free(self.watches)
        free(self.assign)
        free(self.level)
        free(self.reason)
        free(self.activity)
        free(self.phase)
        free(self.seen)
        free(self.heap)
        free(self.heap_pos)
        free(self.lits.data)
        free(self.cstart.data)
        free(self.csize.data)
        free(self.clbd.data)
        free(self.cflags.data)
        free(self.trail.data)
        free(self.trail_lim.data)

    cdef int _grow(self, int cap) except -1:
        cdef int old = self.cap_vars
        cdef int i
        if cap <= old and self.assign != NULL:
            return 0
        self.assign = <signed char *> realloc(self.assign, (cap + 1) * sizeof(signed char))
        self.level = <int *> realloc(self.level, (cap + 1) * sizeof(int))
        self.reason = <int *> realloc(self.reason, (cap + 1) * sizeof(int))
        self.activity = <double *> realloc(self.activity, (cap + 1) * sizeof(double))
        self.phase = <signed char *> realloc(self.phase, (cap + 1) * sizeof(signed char))
        self.seen = <signed char *> realloc(self.seen, (cap + 1) * sizeof(signed char))
        self.heap = <int *> realloc(self.heap, (cap + 1) * sizeof(int))
        self.heap_pos = <int *> realloc(self.heap_pos, (cap + 1) * sizeof(int))
        self.watches = <IntVec *> realloc(self.watches, 2 * (cap + 1) * sizeof(IntVec))
        if (self.assign == NULL or self.level == NULL or self.reason == NULL
                or self.activity == NULL or self.phase == NULL or self.seen == NULL
                or self.heap == NULL or self.heap_pos == NULL or self.watches == NULL):
            raise MemoryError()
        start = 0 if self.cap_vars == 0 and old == 0 else old + 1
        for i in range(start, cap + 1):
            self.assign[i] = -1
            self.level[i] = 0
            self.reason[i] = -1
            self.activity[i] = 0.0
            self.phase[i] = 0
            self.seen[i] = 0
            self.heap_pos[i] = -1
        for i in range(2 * start, 2 * (cap + 1)):
            self.watches[i].data = NULL
            self.watches[i].size = 0
            self.watches[i].cap = 0
        self.cap_vars = cap
        return 0

    def ensure_vars(self, int n):
        cdef int cap
        if n > self.cap_vars:
            cap = self.cap_vars
            while cap < n:
                cap *= 2
            self._grow(cap)
        while self.nvars < n:
            self.nvars += 1
            self._heap_insert(self.nvars)

    def new_var(self):
        self.ensure_vars(self.nvars + 1)
        return self.nvars

    # -- heap ------------------------------------------------------------------

    cdef inline bint _better(self, int a, int b):
        cdef double x = self.activity[a], y = self.activity[b]
        return x > y or (x == y and a < b)

    cdef void _sift_up(self, int i):
        cdef int v = self.heap[i]
        cdef int parent
        while i > 0:
            parent = (i - 1) >> 1
            if not self._better(v, self.heap[parent]):
                break
            self.heap[i] = self.heap[parent]
            self.heap_pos[self.heap[i]] = i
            i = parent
        self.heap[i] = v
        self.heap_pos[v] = i

    cdef void _sift_down(self, int i):
        cdef int v = self.heap[i]
        cdef int child
        while True:
            child = 2 * i + 1
            if child >= self.heap_size:
                break
            if child + 1 < self.heap_size and self._better(self.heap[child + 1], self.heap[child]):
                child += 1
            if not self._better(self.heap[child], v):
                break
            self.heap[i] = self.heap[child]
            self.heap_pos[self.heap[i]] = i
            i = child
        self.heap[i] = v
        self.heap_pos[v] = i

    cdef void _heap_insert(self, int v):
        if self.heap_pos[v] >= 0:
            return
        self.heap[self.heap_size] = v
        self.heap_pos[v] = self.heap_size
        self.heap_size += 1
        self._sift_up(self.heap_size - 1)

    cdef int _heap_pop(self):
        cdef int top = self.heap[0]
        self.heap_size -= 1
        self.heap_pos[top] = -1
        if self.heap_size > 0:
            self.heap[0] = self.heap[self.heap_size]
            self.heap_pos[self.heap[0]] = 0
            self._sift_down(0)
        return top

    cdef void _rebuild_heap(self):
        cdef int v
        for v in range(1, self.nvars + 1):
            self.heap_pos[v] = -1
        self.heap_size = 0
        for v in range(1, self.nvars + 1):
            if self.assign[v] < 0:
                self._heap_insert(v)

    # -- clauses -----------------------------------------------------------------

    cdef inline int _value(self, int lit):
        cdef int a = self.assign[lit >> 1]
        if a < 0:
            return -1
        return a ^ (lit & 1)

    def add_clause(self, lits):
        cdef int x, v, lit, val
        if not self.ok:
            return False
        if self.trail_lim.size:
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
            if (lit ^ 1) in seen:
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
        cdef int ci = self._new_clause(len(out), 0, 0)
        cdef int *c = self.lits.data + self.cstart.data[ci]
        cdef int k
        for k in range(len(out)):
            c[k] = out[k]
        self._watch(ci)
        return True

    cdef int _new_clause(self, int size, int learnt, int lbd) except -1:
        cdef int ci = self.cstart.size
        cdef int k
        vec_push(&self.cstart, self.lits.size)
        vec_push(&self.csize, size)
        vec_push(&self.clbd, lbd)
        vec_push(&self.cflags, 1 if learnt else 0)
        for k in range(size):
            vec_push(&self.lits, 0)
        if learnt:
            self.n_learnts += 1
        return ci

    cdef int _watch(self, int ci) except -1:
        cdef int *c = self.lits.data + self.cstart.data[ci]
        vec_push(&self.watches[c[0]], ci)
        vec_push(&self.watches[c[1]], ci)
        return 0

    # -- core ----------------------------------------------------------------------

    cdef inline int _enqueue(self, int lit, int reason) except -1:
        cdef int v = lit >> 1
        self.assign[v] = (lit & 1) ^ 1
        self.level[v] = self.trail_lim.size
        self.reason[v] = reason
        vec_push(&self.trail, lit)
        return 0

    cdef int _propagate(self) except -2:
        cdef int p, false_lit, i, j, n, ci, first, a, k, lk, ak, size
        cdef int *c
        cdef IntVec *ws
        cdef bint found
        while self.qhead < self.trail.size:
            p = self.trail.data[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = &self.watches[false_lit]
            i = 0
            j = 0
            n = ws.size
            while i < n:
                ci = ws.data[i]
                i += 1
                if self.cflags.data[ci] & 2:
                    continue
                c = self.lits.data + self.cstart.data[ci]
                size = self.csize.data[ci]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                a = self.assign[first >> 1]
                if a >= 0 and (a ^ (first & 1)) == 1:
                    ws.data[j] = ci
                    j += 1
                    continue
                found = False
                for k in range(2, size):
                    lk = c[k]
                    ak = self.assign[lk >> 1]
                    if ak < 0 or (ak ^ (lk & 1)) == 1:
                        c[1] = lk
                        c[k] = false_lit
                        vec_push(&self.watches[lk], ci)
                        ws = &self.watches[false_lit]
                        found = True
                        break
                if found:
                    continue
                ws.data[j] = ci
                j += 1
                if a >= 0:
                    while i < n:
                        ws.data[j] = ws.data[i]
                        j += 1
                        i += 1
                    ws.size = j
                    self.qhead = self.trail.size
                    return ci
                self._enqueue(first, ci)
            ws.size = j
        return -1

    cdef void _bump(self, int v):
        cdef int u
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.nvars + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
            self._rebuild_heap()
        elif self.heap_pos[v] >= 0:
            self._sift_up(self.heap_pos[v])

    cdef tuple _analyze(self, int confl):
        cdef int dl = self.trail_lim.size
        cdef int path = 0, p = -1, idx = self.trail.size - 1
        cdef int k, q, v, r, u, size, best, bt
        cdef int *c
        cdef list learnt = [0]
        while True:
            c = self.lits.data + self.cstart.data[confl]
            size = self.csize.data[confl]
            for k in range(0 if p < 0 else 1, size):
                q = c[k]
                v = q >> 1
                if not self.seen[v] and self.level[v] > 0:
                    self._bump(v)
                    self.seen[v] = 1
                    if self.level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not self.seen[self.trail.data[idx] >> 1]:
                idx -= 1
            p = self.trail.data[idx]
            idx -= 1
            v = p >> 1
            confl = self.reason[v]
            self.seen[v] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        cdef list keep = [learnt[0]]
        cdef int nl = len(learnt)
        for k in range(1, nl):
            q = learnt[k]
            r = self.reason[q >> 1]
            if r < 0:
                keep.append(q)
                continue
            c = self.lits.data + self.cstart.data[r]
            size = self.csize.data[r]
            for u in range(1, size):
                v = c[u] >> 1
                if not self.seen[v] and self.level[v] > 0:
                    keep.append(q)
                    break
        for k in range(1, nl):
            self.seen[(<int> learnt[k]) >> 1] = 0
        learnt = keep
        bt = 0
        nl = len(learnt)
        if nl > 1:
            best = 1
            for k in range(2, nl):
                if self.level[(<int> learnt[k]) >> 1] > self.level[(<int> learnt[best]) >> 1]:
                    best = k
            learnt[1], learnt[best] = learnt[best], learnt[1]
            bt = self.level[(<int> learnt[1]) >> 1]
        levels = set()
        for k in range(nl):
            levels.add(self.level[(<int> learnt[k]) >> 1])
        return learnt, bt, len(levels)

    cdef void _cancel_until(self, int lvl):
        cdef int stop, k, lit, v
        if self.trail_lim.size <= lvl:
            return
        stop = self.trail_lim.data[lvl]
        for k in range(self.trail.size - 1, stop - 1, -1):
            lit = self.trail.data[k]
            v = lit >> 1
            self.phase[v] = self.assign[v]
            self.assign[v] = -1
            self.reason[v] = -1
            if not self.lowest:
                self._heap_insert(v)
        self.trail.size = stop
        self.trail_lim.size = lvl
        self.qhead = self.trail.size

    cdef int _pick(self):
        cdef int v
        if self.lowest:
            for v in range(1, self.nvars + 1):
                if self.assign[v] < 0:
                    return 2 * v
            return -1
        while self.heap_size > 0:
            v = self._heap_pop()
            if self.assign[v] < 0:
                return 2 * v + (1 if self.phase[v] <= 0 else 0)
        return -1

    cdef bint _locked(self, int ci):
        cdef int *c = self.lits.data + self.cstart.data[ci]
        cdef int v = c[0] >> 1
        return self.reason[v] == ci and self._value(c[0]) == 1

    cdef void _reduce_db(self):
        cdef int ci, maxlbd = 0, target, taken = 0, L
        cdef int total = self.cstart.size
        cdef list cand = []
        for ci in range(total):
            if (self.cflags.data[ci] & 3) == 1 and self.clbd.data[ci] > 2 and not self._locked(ci):
                cand.append(ci)
                if self.clbd.data[ci] > maxlbd:
                    maxlbd = self.clbd.data[ci]
        target = len(cand) // 2
        L = maxlbd
        while L > 2 and taken < target:
            for ci in cand:
                if taken >= target:
                    break
                if self.clbd.data[ci] == L:
                    self.cflags.data[ci] |= 2
                    self.n_learnts -= 1
                    taken += 1
            L -= 1

    def solve(self, assumptions=(), time_limit=None, conflict_limit=None):
        cdef int x, lit, val, a, confl, bt, lbd, ci, k
        cdef int restart = 0, budget, since_restart = 0
        cdef long ticks = 0
        cdef long start_conflicts = self.conflicts
        cdef int *c
        self._model = []
        if not self.ok:
            return False
        for x in assumptions:
            if abs(x) > self.nvars:
                self.ensure_vars(abs(x))
        cdef list assume = [2 * abs(y) + (1 if y < 0 else 0) for y in assumptions]
        cdef int nassume = len(assume)
        deadline = None if time_limit is None else time.monotonic() + time_limit
        if self.max_learnts == 0.0:
            self.max_learnts = max(self.cstart.size / 3.0, 2000.0)
        budget = luby_c(restart) * 100
        while True:
            confl = self._propagate()
            if confl >= 0:
                self.conflicts += 1
                since_restart += 1
                if self.trail_lim.size == 0:
                    self.ok = False
                    return False
                learnt, bt, lbd = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    ci = self._new_clause(len(learnt), 1, lbd)
                    c = self.lits.data + self.cstart.data[ci]
                    for k in range(len(learnt)):
                        c[k] = learnt[k]
                    self._watch(ci)
                    self._enqueue(learnt[0], ci)
                self.var_inc /= 0.95
                ticks += 1
                if ticks & 255 == 0:
                    if deadline is not None and time.monotonic() > deadline:
                        self._cancel_until(0)
                        return None
                    if conflict_limit is not None and self.conflicts - start_conflicts >= conflict_limit:
                        self._cancel_until(0)
                        return None
                continue
            if since_restart >= budget:
                restart += 1
                budget = luby_c(restart) * 100
                since_restart = 0
                self._cancel_until(0)
                continue
            if self.n_learnts - self.trail.size >= self.max_learnts:
                self._reduce_db()
                self.max_learnts *= 1.1
            lit = -1
            while self.trail_lim.size < nassume:
                a = assume[self.trail_lim.size]
                val = self._value(a)
                if val == 1:
                    vec_push(&self.trail_lim, self.trail.size)
                elif val == 0:
                    self._cancel_until(0)
                    return False
                else:
                    lit = a
                    break
            if lit < 0:
                self.decisions += 1
                if (self.decisions & 1023) == 0 and deadline is not None \
                        and time.monotonic() > deadline:
                    self._cancel_until(0)
                    return None
                lit = self._pick()
                if lit < 0:
                    self._model = [0] + [1 if self.assign[v] == 1 else 0
                                         for v in range(1, self.nvars + 1)]
                    self._cancel_until(0)
                    return True
            vec_push(&self.trail_lim, self.trail.size)
            self._enqueue(lit, -1)

    def model(self):
        return list(self._model)

    @property
    def num_clauses(self):
        return self.cstart.size
