"""Pure-Python CDCL solver with incremental solving under assumptions.

Conflict-driven clause learning with two watched literals, first-UIP
learning with local clause minimisation, VSIDS variable activity, phase
saving (initial phase: false), Luby restarts and periodic deletion of
learnt clauses with high literal-block distance (LBD).

The compiled ``_cdcl`` extension implements the same algorithm step for
step; both backends make identical decisions on identical input, so the
chosen backend never changes a result.

Literals on the public surface are DIMACS integers (``v`` / ``-v``, with
``v`` starting at 1).  Internally literal ``2*(v-1) + neg`` is used.
"""

from __future__ import annotations

import heapq
import time

UNDEF = 2
VAR_DECAY = 1.0 / 0.95
RESCALE_LIMIT = 1e100
RESTART_BASE = 100
LEARNT_START = 2000
KEEP_LBD = 2


def luby(y: float, x: int) -> float:
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y**seq


class Solver:
    backend = "python"

    def __init__(self):
        self.assigns: list[int] = []
        self.level: list[int] = []
        self.reason: list[int] = []
        self.activity: list[float] = []
        self.polarity: list[int] = []
        self.seen: list[int] = []
        self.watches: list[list[int]] = []
        self.clauses: list[list[int]] = []
        self.lbd: list[int] = []  # 0 for problem clauses
        self.learnts: list[int] = []
        self.max_learnts = LEARNT_START
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.heap: list[tuple[float, int]] = []
        self.var_inc = 1.0
        self.ok = True
        self.model: list[int] | None = None
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0

    # -- construction ------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.assigns)

    def new_var(self) -> int:
        v = len(self.assigns)
        self.assigns.append(UNDEF)
        self.level.append(0)
        self.reason.append(-1)
        self.activity.append(0.0)
        self.polarity.append(1)
        self.seen.append(0)
        self.watches.append([])
        self.watches.append([])
        heapq.heappush(self.heap, (-0.0, v))
        return v + 1

    def _lit(self, x: int) -> int:
        v = x if x > 0 else -x
        if x == 0 or v > len(self.assigns):
            raise ValueError(f"literal {x} refers to an unknown variable")
        return 2 * (v - 1) + (x < 0)

    def _value(self, lit: int) -> int:
        a = self.assigns[lit >> 1]
        return UNDEF if a == UNDEF else a ^ (lit & 1)

    def add_clause(self, lits) -> bool:
        """Add a clause at decision level 0; returns False once the store is UNSAT."""
        if not self.ok:
            return False
        ps: list[int] = []
        for x in lits:
            lit = self._lit(x)
            if lit in ps:
                continue
            if lit ^ 1 in ps:
                return True
            ps.append(lit)
        out = []
        for lit in ps:
            val = self._value(lit)
            if val == 1:
                return True
            if val == UNDEF:
                out.append(lit)
        if not out:
            self.ok = False
            return False
        if len(out) == 1:
            self._enqueue(out[0], -1)
            if self._propagate() != -1:
                self.ok = False
            return self.ok
        self._attach(out)
        return True

    def _attach(self, c: list[int], lbd: int = 0) -> int:
        ci = len(self.clauses)
        self.clauses.append(c)
        self.lbd.append(lbd)
        if lbd:
            self.learnts.append(ci)
        self.watches[c[0]].append(ci)
        self.watches[c[1]].append(ci)
        return ci

    # -- search ------------------------------------------------------------

    def _enqueue(self, lit: int, reason: int) -> None:
        v = lit >> 1
        self.assigns[v] = 1 - (lit & 1)
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self) -> int:
        assigns = self.assigns
        clauses = self.clauses
        watches = self.watches
        trail = self.trail
        confl = -1
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
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                a = assigns[first >> 1]
                if a != UNDEF and a ^ (first & 1) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                found = False
                for k in range(2, len(c)):
                    lk = c[k]
                    a = assigns[lk >> 1]
                    if a == UNDEF or a ^ (lk & 1) == 1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(ci)
                        found = True
                        break
                if found:
                    continue
                ws[j] = ci
                j += 1
                a = assigns[first >> 1]
                if a != UNDEF:
                    # first is false: conflict
                    confl = ci
                    self.qhead = len(trail)
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                else:
                    self._enqueue(first, ci)
            del ws[j:]
            if confl != -1:
                return confl
        return confl

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > RESCALE_LIMIT:
            act = self.activity
            for i in range(len(act)):
                act[i] *= 1e-100
            self.var_inc *= 1e-100
            self._rebuild_heap()

    def _rebuild_heap(self) -> None:
        self.heap = [(-self.activity[v], v) for v in range(len(self.assigns)) if self.assigns[v] == UNDEF]
        heapq.heapify(self.heap)

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        seen = self.seen
        level = self.level
        trail = self.trail
        dl = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        while True:
            c = self.clauses[confl]
            for j in range(0 if p == -1 else 1, len(c)):
                q = c[j]
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
            confl = self.reason[p >> 1]
            seen[p >> 1] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1

        # drop literals implied by the rest of the clause
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = self.reason[q >> 1]
            if r == -1:
                kept.append(q)
                continue
            c = self.clauses[r]
            for k in range(1, len(c)):
                u = c[k] >> 1
                if not seen[u] and level[u] > 0:
                    kept.append(q)
                    break
        for q in learnt[1:]:
            seen[q >> 1] = 0

        if len(kept) == 1:
            return kept, 0
        best = 1
        for k in range(2, len(kept)):
            if level[kept[k] >> 1] > level[kept[best] >> 1]:
                best = k
        kept[1], kept[best] = kept[best], kept[1]
        return kept, level[kept[1] >> 1]

    def _reduce_db(self) -> None:
        """Delete the worse half of the unlocked learnt clauses.

        Clauses with LBD <= 2 are kept for good.  Order: LBD descending,
        length descending, index ascending.
        """
        clauses, reason = self.clauses, self.reason
        cands = []
        for ci in self.learnts:
            c = clauses[ci]
            if self.lbd[ci] <= KEEP_LBD or reason[c[0] >> 1] == ci:
                continue
            cands.append((-self.lbd[ci], -len(c), ci))
        cands.sort()
        dead = {ci for _, _, ci in cands[: len(cands) // 2]}
        for ci in dead:
            clauses[ci] = []
        self.learnts = [ci for ci in self.learnts if ci not in dead]
        for ws in self.watches:
            ws[:] = [ci for ci in ws if clauses[ci]]
        self.max_learnts += self.max_learnts // 10

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        trail = self.trail
        for c in range(len(trail) - 1, stop - 1, -1):
            lit = trail[c]
            v = lit >> 1
            self.assigns[v] = UNDEF
            self.reason[v] = -1
            self.polarity[v] = lit & 1
            heapq.heappush(self.heap, (-self.activity[v], v))
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(trail)
        if len(self.heap) > 8 * len(self.assigns) + 64:
            self._rebuild_heap()

    def _pick_branch(self) -> int:
        heap = self.heap
        while heap:
            negact, v = heapq.heappop(heap)
            if self.assigns[v] == UNDEF and -negact == self.activity[v]:
                return 2 * v + self.polarity[v]
        return -1

    def solve(self, assumptions=(), deadline: float = 0.0) -> int:
        """1 = SAT, 0 = UNSAT (under the assumptions), -1 = deadline hit."""
        self.model = None
        if not self.ok:
            return 0
        assumps = [self._lit(x) for x in assumptions]
        restarts = 0
        since_restart = 0
        limit = luby(2, restarts) * RESTART_BASE
        while True:
            confl = self._propagate()
            if confl != -1:
                self.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    self.ok = False
                    return 0
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    lbd = len({self.level[q >> 1] for q in learnt})
                    self._enqueue(learnt[0], self._attach(learnt, lbd))
                    if len(self.learnts) >= self.max_learnts:
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
            while len(self.trail_lim) < len(assumps):
                p = assumps[len(self.trail_lim)]
                val = self._value(p)
                if val == 1:
                    self.trail_lim.append(len(self.trail))
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
                    self.model = list(self.assigns)
                    self._cancel_until(0)
                    return 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(nxt, -1)

    def model_value(self, v: int) -> bool:
        """Value of variable ``v`` (1-based) in the last model."""
        if self.model is None:
            raise RuntimeError("no model available")
        return self.model[v - 1] == 1

    def get_model(self) -> list[int]:
        """0/1 per variable, index ``v - 1``."""
        if self.model is None:
            raise RuntimeError("no model available")
        return list(self.model)
