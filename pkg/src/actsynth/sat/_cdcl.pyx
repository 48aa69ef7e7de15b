# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled CDCL kernel.

Step-for-step port of ``_pycdcl.Solver``; see that module for the algorithm.
The only structural difference is the decision queue: an indexed binary heap
instead of a lazy ``heapq``.  Both order variables by (activity desc, index
asc), so both pick the same branching variable.
"""

from libcpp.vector cimport vector

import time

cdef enum:
    UNDEF = 2

cdef double VAR_DECAY = 1.0 / 0.95
cdef double RESCALE_LIMIT = 1e100
cdef int RESTART_BASE = 100
cdef int LEARNT_START = 2000
cdef int KEEP_LBD = 2


cdef double luby(double y, int x):
    cdef int size = 1, seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y ** seq


cdef class Solver:
    cdef vector[int] assigns
    cdef vector[int] level
    cdef vector[int] reason
    cdef vector[double] activity
    cdef vector[int] polarity
    cdef vector[char] seen
    cdef vector[vector[int]] watches
    cdef vector[vector[int]] clauses
    cdef vector[int] lbd
    cdef vector[int] learnts
    cdef vector[int] level_stamp
    cdef int stamp
    cdef int max_learnts
    cdef vector[int] trail
    cdef vector[int] trail_lim
    cdef vector[int] heap
    cdef vector[int] heap_index
    cdef int qhead
    cdef double var_inc
    cdef public bint ok
    cdef vector[int] _model
    cdef bint has_model
    cdef public long conflicts
    cdef public long decisions
    cdef public long propagations

    backend = "cython"

    def __cinit__(self):
        self.qhead = 0
        self.stamp = 0
        self.level_stamp.push_back(0)  # levels run 0..nvars
        self.max_learnts = LEARNT_START
        self.var_inc = 1.0
        self.ok = True
        self.has_model = False
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0

    # -- heap ----------------------------------------------------------------

    cdef inline bint _before(self, int a, int b):
        cdef double x = self.activity[a], y = self.activity[b]
        return x > y or (x == y and a < b)

    cdef void _heap_up(self, int i):
        cdef int v = self.heap[i]
        cdef int parent
        while i > 0:
            parent = (i - 1) >> 1
            if not self._before(v, self.heap[parent]):
                break
            self.heap[i] = self.heap[parent]
            self.heap_index[self.heap[i]] = i
            i = parent
        self.heap[i] = v
        self.heap_index[v] = i

    cdef void _heap_down(self, int i):
        cdef int v = self.heap[i]
        cdef int n = self.heap.size()
        cdef int child
        while 2 * i + 1 < n:
            child = 2 * i + 1
            if child + 1 < n and self._before(self.heap[child + 1], self.heap[child]):
                child += 1
            if not self._before(self.heap[child], v):
                break
            self.heap[i] = self.heap[child]
            self.heap_index[self.heap[i]] = i
            i = child
        self.heap[i] = v
        self.heap_index[v] = i

    cdef void _heap_insert(self, int v):
        if self.heap_index[v] >= 0:
            return
        self.heap.push_back(v)
        self.heap_index[v] = self.heap.size() - 1
        self._heap_up(self.heap.size() - 1)

    cdef int _heap_pop(self):
        cdef int top = self.heap[0]
        cdef int last = self.heap.back()
        self.heap.pop_back()
        self.heap_index[top] = -1
        if self.heap.size() > 0:
            self.heap[0] = last
            self.heap_index[last] = 0
            self._heap_down(0)
        return top

    cdef void _rebuild_heap(self):
        cdef int v
        for v in range(<int>self.heap.size()):
            self.heap_index[self.heap[v]] = -1
        self.heap.clear()
        for v in range(<int>self.assigns.size()):
            if self.assigns[v] == UNDEF:
                self._heap_insert(v)

    # -- construction --------------------------------------------------------

    @property
    def nvars(self):
        return self.assigns.size()

    def new_var(self):
        cdef int v = self.assigns.size()
        self.assigns.push_back(UNDEF)
        self.level.push_back(0)
        self.reason.push_back(-1)
        self.activity.push_back(0.0)
        self.polarity.push_back(1)
        self.seen.push_back(0)
        self.watches.push_back(vector[int]())
        self.watches.push_back(vector[int]())
        self.heap_index.push_back(-1)
        self.level_stamp.push_back(0)
        self._heap_insert(v)
        return v + 1

    cdef int _lit(self, long x) except -1:
        cdef long v = x if x > 0 else -x
        if x == 0 or v > <long>self.assigns.size():
            raise ValueError(f"literal {x} refers to an unknown variable")
        return 2 * (v - 1) + (1 if x < 0 else 0)

    cdef inline int _value(self, int lit):
        cdef int a = self.assigns[lit >> 1]
        return UNDEF if a == UNDEF else a ^ (lit & 1)

    def add_clause(self, lits):
        if not self.ok:
            return False
        cdef vector[int] ps
        cdef vector[int] out
        cdef int lit, val
        cdef size_t k
        cdef bint dup
        for x in lits:
            lit = self._lit(x)
            dup = False
            for k in range(ps.size()):
                if ps[k] == lit:
                    dup = True
                    break
                if ps[k] == (lit ^ 1):
                    return True
            if not dup:
                ps.push_back(lit)
        for k in range(ps.size()):
            val = self._value(ps[k])
            if val == 1:
                return True
            if val == UNDEF:
                out.push_back(ps[k])
        if out.size() == 0:
            self.ok = False
            return False
        if out.size() == 1:
            self._enqueue(out[0], -1)
            if self._propagate() != -1:
                self.ok = False
            return self.ok
        self._attach(out, 0)
        return True

    cdef int _attach(self, vector[int]& c, int lbd):
        cdef int ci = self.clauses.size()
        self.clauses.push_back(c)
        self.lbd.push_back(lbd)
        if lbd:
            self.learnts.push_back(ci)
        self.watches[c[0]].push_back(ci)
        self.watches[c[1]].push_back(ci)
        return ci

    # -- search --------------------------------------------------------------

    cdef inline void _enqueue(self, int lit, int reason):
        cdef int v = lit >> 1
        self.assigns[v] = 1 - (lit & 1)
        self.level[v] = self.trail_lim.size()
        self.reason[v] = reason
        self.trail.push_back(lit)

    cdef int _propagate(self):
        cdef int confl = -1
        cdef int p, false_lit, ci, first, a, lk, i, j, n, k, csize
        cdef vector[int]* ws
        cdef vector[int]* c
        cdef bint found
        while self.qhead < <int>self.trail.size():
            p = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = &self.watches[false_lit]
            i = 0
            j = 0
            n = ws.size()
            while i < n:
                ci = ws[0][i]
                i += 1
                c = &self.clauses[ci]
                if c[0][0] == false_lit:
                    c[0][0] = c[0][1]
                    c[0][1] = false_lit
                first = c[0][0]
                a = self.assigns[first >> 1]
                if a != UNDEF and (a ^ (first & 1)) == 1:
                    ws[0][j] = ci
                    j += 1
                    continue
                found = False
                csize = c.size()
                for k in range(2, csize):
                    lk = c[0][k]
                    a = self.assigns[lk >> 1]
                    if a == UNDEF or (a ^ (lk & 1)) == 1:
                        c[0][1] = lk
                        c[0][k] = false_lit
                        self.watches[lk].push_back(ci)
                        found = True
                        break
                if found:
                    continue
                ws[0][j] = ci
                j += 1
                a = self.assigns[first >> 1]
                if a != UNDEF:
                    confl = ci
                    self.qhead = self.trail.size()
                    while i < n:
                        ws[0][j] = ws[0][i]
                        j += 1
                        i += 1
                else:
                    self._enqueue(first, ci)
            ws.resize(j)
            if confl != -1:
                return confl
        return confl

    cdef void _bump(self, int v):
        cdef size_t i
        self.activity[v] += self.var_inc
        if self.activity[v] > RESCALE_LIMIT:
            for i in range(self.activity.size()):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100
            self._rebuild_heap()
        elif self.heap_index[v] >= 0:
            self._heap_up(self.heap_index[v])

    cdef int _analyze(self, int confl, vector[int]& kept):
        cdef vector[int] learnt
        cdef int dl = self.trail_lim.size()
        cdef int path = 0, p = -1, idx = self.trail.size() - 1
        cdef int q, v, r, u, best, tmp, start
        cdef size_t j, k
        cdef vector[int]* c
        cdef bint keep
        learnt.push_back(0)
        while True:
            c = &self.clauses[confl]
            start = 0 if p == -1 else 1
            for j in range(start, c.size()):
                q = c[0][j]
                v = q >> 1
                if not self.seen[v] and self.level[v] > 0:
                    self._bump(v)
                    self.seen[v] = 1
                    if self.level[v] >= dl:
                        path += 1
                    else:
                        learnt.push_back(q)
            while not self.seen[self.trail[idx] >> 1]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            confl = self.reason[p >> 1]
            self.seen[p >> 1] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1

        kept.clear()
        kept.push_back(learnt[0])
        for j in range(1, learnt.size()):
            q = learnt[j]
            r = self.reason[q >> 1]
            if r == -1:
                kept.push_back(q)
                continue
            c = &self.clauses[r]
            for k in range(1, c.size()):
                u = c[0][k] >> 1
                if not self.seen[u] and self.level[u] > 0:
                    kept.push_back(q)
                    break
        for j in range(1, learnt.size()):
            self.seen[learnt[j] >> 1] = 0

        if kept.size() == 1:
            return 0
        best = 1
        for j in range(2, kept.size()):
            if self.level[kept[j] >> 1] > self.level[kept[best] >> 1]:
                best = j
        tmp = kept[1]
        kept[1] = kept[best]
        kept[best] = tmp
        return self.level[kept[1] >> 1]

    cdef int _compute_lbd(self, vector[int]& c):
        cdef size_t j
        cdef int lv, n = 0
        self.stamp += 1
        for j in range(c.size()):
            lv = self.level[c[j] >> 1]
            if self.level_stamp[lv] != self.stamp:
                self.level_stamp[lv] = self.stamp
                n += 1
        return n

    cdef void _reduce_db(self):
        cdef size_t j, i
        cdef int ci
        cdef vector[int] keep
        cdef vector[int]* ws
        cands = []
        for j in range(self.learnts.size()):
            ci = self.learnts[j]
            if self.lbd[ci] <= KEEP_LBD or self.reason[self.clauses[ci][0] >> 1] == ci:
                continue
            cands.append((-self.lbd[ci], -<int>self.clauses[ci].size(), ci))
        cands.sort()
        for t in cands[: len(cands) // 2]:
            ci = t[2]
            self.clauses[ci].clear()
            self.clauses[ci].shrink_to_fit()
        for j in range(self.learnts.size()):
            ci = self.learnts[j]
            if self.clauses[ci].size() > 0:
                keep.push_back(ci)
        self.learnts.swap(keep)
        for i in range(self.watches.size()):
            ws = &self.watches[i]
            keep.clear()
            for j in range(ws.size()):
                if self.clauses[ws[0][j]].size() > 0:
                    keep.push_back(ws[0][j])
            ws.swap(keep)
        self.max_learnts += self.max_learnts // 10

    cdef void _cancel_until(self, int lvl):
        cdef int stop, c, lit, v
        if <int>self.trail_lim.size() <= lvl:
            return
        stop = self.trail_lim[lvl]
        c = self.trail.size() - 1
        while c >= stop:
            lit = self.trail[c]
            v = lit >> 1
            self.assigns[v] = UNDEF
            self.reason[v] = -1
            self.polarity[v] = lit & 1
            self._heap_insert(v)
            c -= 1
        self.trail.resize(stop)
        self.trail_lim.resize(lvl)
        self.qhead = self.trail.size()

    cdef int _pick_branch(self):
        cdef int v
        while self.heap.size() > 0:
            v = self._heap_pop()
            if self.assigns[v] == UNDEF:
                return 2 * v + self.polarity[v]
        return -1

    def solve(self, assumptions=(), double deadline=0.0):
        """1 = SAT, 0 = UNSAT (under the assumptions), -1 = deadline hit."""
        cdef vector[int] assumps
        cdef vector[int] learnt
        cdef int confl, bt, nxt, p, val, lbd
        cdef int restarts = 0
        cdef long since_restart = 0
        cdef double limit
        self.has_model = False
        if not self.ok:
            return 0
        for x in assumptions:
            assumps.push_back(self._lit(x))
        limit = luby(2, restarts) * RESTART_BASE
        while True:
            confl = self._propagate()
            if confl != -1:
                self.conflicts += 1
                since_restart += 1
                if self.trail_lim.size() == 0:
                    self.ok = False
                    return 0
                bt = self._analyze(confl, learnt)
                self._cancel_until(bt)
                if learnt.size() == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    lbd = self._compute_lbd(learnt)
                    self._enqueue(learnt[0], self._attach(learnt, lbd))
                    if <int>self.learnts.size() >= self.max_learnts:
                        self._reduce_db()
                self.var_inc *= VAR_DECAY
                if deadline > 0 and self.conflicts % 256 == 0 and time.monotonic() > deadline:
                    self._cancel_until(0)
                    return -1
                continue
            if since_restart >= limit:
                since_restart = 0
                restarts += 1
                limit = luby(2, restarts) * RESTART_BASE
                self._cancel_until(0)
                continue
            nxt = -1
            while self.trail_lim.size() < assumps.size():
                p = assumps[self.trail_lim.size()]
                val = self._value(p)
                if val == 1:
                    self.trail_lim.push_back(self.trail.size())
                elif val == 0:
                    self._cancel_until(0)
                    return 0
                else:
                    nxt = p
                    break
            if nxt == -1:
                self.decisions += 1
                nxt = self._pick_branch()
                if nxt == -1:
                    self._model = self.assigns
                    self.has_model = True
                    self._cancel_until(0)
                    return 1
            self.trail_lim.push_back(self.trail.size())
            self._enqueue(nxt, -1)

    def model_value(self, long v):
        if not self.has_model:
            raise RuntimeError("no model available")
        return self._model[v - 1] == 1

    def get_model(self):
        if not self.has_model:
            raise RuntimeError("no model available")
        return [self._model[i] for i in range(self._model.size())]
