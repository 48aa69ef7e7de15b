"""Variable registry, solve contexts and minimal-model extraction."""

from __future__ import annotations

import time
from typing import Hashable, Iterable, Sequence

from ..errors import TimeLimit, UnregisteredVar


class VarRegistry:
    """Bidirectional map between positive integer ids and semantic keys.

    Keys are tuples whose first element names the family:
    ``("bind", transition_id, param, obj)``, ``("add", pred, vec)``,
    ``("del", pred, vec)``, plus anonymous ``("aux", n)`` variables.
    """

    def __init__(self):
        self._ids: dict[Hashable, int] = {}
        self._keys: list[Hashable] = [None]
        self._effects: list[int] = []

    def __len__(self) -> int:
        return len(self._keys) - 1

    def __contains__(self, key: Hashable) -> bool:
        return key in self._ids

    def var(self, key: Hashable) -> int:
        """Id for ``key``, created on first use."""
        v = self._ids.get(key)
        if v is None:
            v = len(self._keys)
            self._ids[key] = v
            self._keys.append(key)
            if key[0] in ("add", "del"):
                self._effects.append(v)
        return v

    def get(self, key: Hashable) -> int | None:
        return self._ids.get(key)

    def key(self, v: int) -> Hashable:
        if not 0 < v < len(self._keys):
            raise UnregisteredVar(v)
        return self._keys[v]

    def fresh(self) -> int:
        return self.var(("aux", len(self._keys)))

    def bind(self, tid: int, param: int, obj: str) -> int:
        return self.var(("bind", tid, param, obj))

    def add(self, pred: str, vec: tuple[int, ...]) -> int:
        return self.var(("add", pred, vec))

    def delete(self, pred: str, vec: tuple[int, ...]) -> int:
        return self.var(("del", pred, vec))

    def effect_vars(self) -> list[int]:
        return list(self._effects)

    def items(self):
        return ((v, k) for v, k in enumerate(self._keys) if k is not None)


class Model:
    """Truth assignment returned by a satisfiable solve."""

    __slots__ = ("_values", "_local")

    def __init__(self, values: list[int], local: dict[int, int]):
        self._values = values
        self._local = local

    def __getitem__(self, v: int) -> bool:
        i = self._local.get(v)
        # variables the context never saw are unconstrained; read them as false
        return i is not None and self._values[i - 1] == 1

    def value(self, lit: int) -> bool:
        return self[lit] if lit > 0 else not self[-lit]

    def true_vars(self, candidates: Iterable[int] | None = None) -> list[int]:
        if candidates is None:
            candidates = self._local
        return sorted(v for v in candidates if self[v])


def _solver_factory():
    from . import Solver

    return Solver()


class SolveContext:
    """A clause store over registry ids, backed by one incremental solver.

    Only ids that occur in clauses or assumptions of this context are passed
    to the solver, so a context stays as small as the clauses it holds even
    when it shares a large registry with other contexts.
    """

    def __init__(self, registry: VarRegistry, deadline: float | None = None, solver=None,
                 record: bool = False):
        self.registry = registry
        self.deadline = deadline
        self.solver = solver if solver is not None else _solver_factory()
        self._local: dict[int, int] = {}
        self.model: Model | None = None
        self.solves = 0
        self.clauses: list[tuple[int, ...]] | None = [] if record else None

    def _map(self, lit: int) -> int:
        v = lit if lit > 0 else -lit
        i = self._local.get(v)
        if i is None:
            if not 0 < v <= len(self.registry):
                raise UnregisteredVar(v)
            i = self.solver.new_var()
            self._local[v] = i
        return i if lit > 0 else -i

    def knows(self, v: int) -> bool:
        return v in self._local

    def add_clause(self, lits: Sequence[int]) -> None:
        if not lits:
            raise ValueError("empty clause")
        if self.clauses is not None:
            self.clauses.append(tuple(lits))
        self.solver.add_clause([self._map(x) for x in lits])

    def solve(self, assumptions: Sequence[int] = ()) -> Model | None:
        """A model satisfying the clauses and the unit assumptions, or None."""
        self.solves += 1
        deadline = self.deadline or 0.0
        if deadline and time.monotonic() > deadline:
            raise TimeLimit("time limit reached")
        res = self.solver.solve([self._map(x) for x in assumptions], deadline)
        if res < 0:
            raise TimeLimit("time limit reached")
        if res == 0:
            self.model = None
            return None
        self.model = Model(self.solver.get_model(), self._local)
        return self.model

    def to_dimacs(self) -> str:
        """The recorded clause store in DIMACS CNF, with a key legend in comments."""
        if self.clauses is None:
            raise RuntimeError("context was created without clause recording")
        used = sorted(self._local)
        lines = [f"c {v} {' '.join(map(str, self.registry.key(v)))}" for v in used]
        nv = max(used, default=0)
        lines.append(f"p cnf {nv} {len(self.clauses)}")
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def exactly_one(ctx: SolveContext, lits: Sequence[int], guard: int | None = None) -> None:
    """At-least-one clause plus pairwise at-most-one clauses.

    With ``guard`` every clause gets the extra literal ``-guard`` so the
    constraint only binds while ``guard`` is assumed true.
    """
    g = [-guard] if guard is not None else []
    ctx.add_clause([*g, *lits])
    for i in range(len(lits)):
        for j in range(i + 1, len(lits)):
            ctx.add_clause([*g, -lits[i], -lits[j]])


def minimize_true(
    ctx: SolveContext, candidates: Iterable[int], base_assumptions: Sequence[int] = ()
) -> Model:
    """A model whose set of true candidates is subset-minimal.

    Each candidate that is true in the current model is tried false, in
    ascending id order; when the formula stays satisfiable the negative
    assumption is kept and the new model adopted.  Passes repeat until no
    candidate can be switched off.  A candidate that failed once stays
    forced: the negative assumptions only ever grow.
    """
    model = ctx.solve(base_assumptions)
    if model is None:
        raise ValueError("minimize_true needs a satisfiable starting point")
    cands = sorted(set(candidates))
    negs: list[int] = []
    negated: set[int] = set()
    forced: set[int] = set()
    changed = True
    while changed:
        changed = False
        for v in cands:
            if v in negated or v in forced or not model[v]:
                continue
            trial = ctx.solve([*base_assumptions, *negs, -v])
            if trial is None:
                forced.add(v)
                continue
            negs.append(-v)
            negated.add(v)
            model = trial
            changed = True
    ctx.model = model
    return model
