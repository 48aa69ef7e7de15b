"""Speculating effects and per-transition substitutions with incremental SAT.

For one action label and a fixed parameter count ``k`` the search keeps one
solve context holding a jointly encoded set of transitions.  The encoding
for a transition R says that every parameter binds exactly one object and
that every fact changing value in R is produced by some effect variable
``add(p, vec)`` / ``del(p, vec)`` whose parameters bind to the fact's
arguments.  A subset-minimal effect assignment is extracted, checked against
the jointly encoded transitions, and then verified transition by transition
in small scratch contexts that only search for the binding.  Effects that
ground to an unobserved change are ruled out lazily with blocking clauses.
A transition that cannot be bound is added to the joint set and the search
repeats; when the joint formula becomes unsatisfiable ``k`` grows by one.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import NoCandidateObjects, ParamBudgetExceeded
from .model import ActionSchema, GroundFact, LiftedFact, ground_all
from .sat import SolveContext, VarRegistry, exactly_one, minimize_true
from .traces import LabelGroup, Transition, min_pars

log = logging.getLogger(__name__)

UNEXPLAINED_CHANGE = "unexplained-change"
INCONSISTENT_EFFECT = "inconsistent-effect"


@dataclass
class SynthLimits:
    deadline: float | None = None  # time.monotonic() value
    max_extra_params: int = 3
    dedup: bool = True
    record_cnf: bool = False


@dataclass(frozen=True)
class Offense:
    transition: int
    kind: str
    detail: GroundFact


@dataclass
class LabelEncoding:
    """Solver state behind a solution; kept only for in-process inspection."""

    registry: VarRegistry
    context: SolveContext
    effect_true: frozenset[int]


@dataclass
class EffectSolution:
    label: str
    k: int
    add: frozenset[LiftedFact]
    delete: frozenset[LiftedFact]
    substitutions: dict[int, tuple[str, ...]]
    encoded: tuple[int, ...]
    offenses: int = 0
    elapsed: float = 0.0
    attempts: tuple[int, ...] = ()
    encoding: LabelEncoding | None = field(default=None, repr=False, compare=False)

    def schema(self, param_types: Sequence[str] | None = None,
               pre: Iterable[LiftedFact] = ()) -> ActionSchema:
        params = tuple(f"?x{i + 1}" for i in range(self.k))
        types = tuple(param_types) if param_types is not None else ("object",) * self.k
        return ActionSchema(self.label, params, types, frozenset(pre), self.add, self.delete)

    def __getstate__(self):
        state = dict(self.__dict__)
        state["encoding"] = None  # solver objects do not cross process boundaries
        return state


def candidate_objects(r: Transition) -> list[str]:
    """Objects a parameter of ``r`` may bind: changed-fact objects first,
    then the other objects of the two states, then the rest of the instance."""
    order: list[str] = []
    seen: set[str] = set()

    def push(objs):
        for o in objs:
            if o not in seen:
                seen.add(o)
                order.append(o)

    for f in sorted(r.deleted | r.added):
        push(f.args)
    push(sorted({o for f in r.before | r.after for o in f.args}))
    push(sorted(r.objects))
    return order


def _vectors(k: int, arity: int):
    return itertools.product(range(k), repeat=arity)


def encode_transition(ctx: SolveContext, reg: VarRegistry, r: Transition, k: int,
                      guard: int | None = None, ordered: bool = False) -> None:
    """Bind variables with exactly-one per parameter, plus one explanation
    constraint per changed fact (deleted facts first, then added ones).

    With ``ordered`` the bindings of ``r`` must be non-decreasing in candidate
    order.  Renaming parameters maps solutions to solutions, and some renaming
    sorts the bindings of any one transition, so this only removes symmetric
    copies of the search space.
    """
    objs = candidate_objects(r)
    if k > 0 and not objs:
        raise NoCandidateObjects(f"transition {r.id} has no objects to bind {k} parameters")
    for i in range(k):
        exactly_one(ctx, [reg.bind(r.id, i, o) for o in objs], guard)
    if ordered:
        g = [-guard] if guard is not None else []
        for i in range(k - 1):
            for a, o in enumerate(objs):
                later = [reg.bind(r.id, i + 1, objs[b]) for b in range(a, len(objs))]
                ctx.add_clause([*g, -reg.bind(r.id, i, o), *later])
    for kind, facts in (("del", r.deleted), ("add", r.added)):
        for f in sorted(facts):
            _explain(ctx, reg, r, k, kind, f, guard)


def _explain(ctx, reg, r, k, kind, f: GroundFact, guard):
    effect = reg.add if kind == "add" else reg.delete
    terms = []
    for vec in _vectors(k, len(f.args)):
        lits = [effect(f.predicate, vec)]
        for i, o in zip(vec, f.args):
            b = reg.bind(r.id, i, o)
            if b not in lits:
                lits.append(b)
        terms.append(lits)
    g = [-guard] if guard is not None else []
    if len(terms) == 1:
        for lit in terms[0]:
            ctx.add_clause([*g, lit])
        return
    big = []
    for lits in terms:
        t = reg.fresh()
        big.append(t)
        for lit in lits:
            ctx.add_clause([-t, lit])
    ctx.add_clause([*g, *big])


def consistency_clause(reg: VarRegistry, effect_var: int, binding_lits: Sequence[int]) -> list[int]:
    """Forbid ``effect_var`` together with the given bindings."""
    clause = [-effect_var]
    for b in binding_lits:
        if -b not in clause:
            clause.append(-b)
    return clause


def recover_substitution(model, reg: VarRegistry, r: Transition, k: int) -> tuple[str, ...]:
    objs = candidate_objects(r)
    sub = []
    for i in range(k):
        for o in objs:
            v = reg.get(("bind", r.id, i, o))
            if v is not None and model[v]:
                sub.append(o)
                break
        else:
            raise RuntimeError(f"transition {r.id}: parameter {i} left unbound")
    return tuple(sub)


def _readd_terms(reg: VarRegistry, r: Transition, k: int, g: GroundFact) -> list[list[int]]:
    """Clauses defining one literal per add effect that could re-add ``g``.

    Each literal ``t`` implies ``add(p, vec)`` and the bindings that ground
    it to ``g``; the returned list ends with the bare literals as a
    pseudo-clause (the caller splices them into its blocking clause).
    """
    clauses: list[list[int]] = []
    terms: list[int] = []
    for vec in _vectors(k, len(g.args)):
        bound: dict[int, str] = {}
        if not all(bound.setdefault(i, o) == o for i, o in zip(vec, g.args)):
            continue
        t = reg.var(("readd", r.id, g, vec))
        terms.append(t)
        clauses.append([-t, reg.add(g.predicate, vec)])
        for i, o in sorted(bound.items()):
            clauses.append([-t, reg.bind(r.id, i, o)])
    clauses.append(terms)
    return clauses


def _violations(reg: VarRegistry, effects: Iterable[int], r: Transition,
                sub: Sequence[str], k: int) -> list[tuple[list[list[int]], GroundFact]]:
    """Blocking clauses for effects that ground to an unobserved change under ``sub``.

    An add must land in the after-state.  A delete must not leave its fact
    in the after-state unless an add effect puts it back (deletes apply
    before adds).  Each entry is a list of clauses plus the offending fact.
    """
    effects = list(effects)
    added = set()
    for v in effects:
        kind, pred, vec = reg.key(v)
        if kind == "add":
            added.add(GroundFact(pred, tuple(sub[i] for i in vec)))
    out = []
    for v in effects:
        kind, pred, vec = reg.key(v)
        g = GroundFact(pred, tuple(sub[i] for i in vec))
        binds = [reg.bind(r.id, i, sub[i]) for i in sorted(set(vec))]
        if kind == "add":
            if g not in r.after:
                out.append(([consistency_clause(reg, v, binds)], g))
        elif g in r.after and g not in added:
            defs = _readd_terms(reg, r, k, g)
            terms = defs.pop()
            out.append(([*defs, consistency_clause(reg, v, binds) + terms], g))
    return out


def _idle_deletes(reg: VarRegistry, effects: Iterable[int], r: Transition,
                  sub: Sequence[str]) -> list[list[int]]:
    """Clauses against deletes that ground to facts absent from the before-state.

    Such deletes are harmless, but a binding that avoids them keeps more
    preconditions, so :func:`verify` asks for one first.
    """
    out = []
    for v in effects:
        kind, pred, vec = reg.key(v)
        if kind == "del" and GroundFact(pred, tuple(sub[i] for i in vec)) not in r.before:
            out.append(consistency_clause(reg, v, [reg.bind(r.id, i, sub[i]) for i in sorted(set(vec))]))
    return out


def _explainable(reg: VarRegistry, effects: Iterable[int], r: Transition) -> GroundFact | None:
    """A changed fact no true effect can produce under any binding, if any."""
    shapes: dict[tuple[str, str], list[tuple[int, ...]]] = {}
    for v in effects:
        kind, pred, vec = reg.key(v)
        shapes.setdefault((kind, pred), []).append(vec)
    for kind, facts in (("del", r.deleted), ("add", r.added)):
        for f in sorted(facts):
            ok = False
            for vec in shapes.get((kind, f.predicate), ()):
                bound: dict[int, str] = {}
                if all(bound.setdefault(i, o) == o for i, o in zip(vec, f.args)):
                    ok = True
                    break
            if not ok:
                return f
    return None


def verify(reg: VarRegistry, effects: Iterable[int], r: Transition, k: int,
           blocked: list[list[int]] | None = None, deadline: float | None = None,
           ctx: SolveContext | None = None) -> tuple[str, ...] | Offense:
    """Search a binding of ``r`` under a fixed effect assignment.

    ``effects`` are the true effect variables; all other effect variables are
    assumed false.  Blocking clauses found here are appended to ``blocked`` so
    callers can reuse them.
    """
    effects = set(effects)
    if ctx is None:
        ctx = SolveContext(reg, deadline)
    encode_transition(ctx, reg, r, k)
    if blocked is None:
        blocked = []
    for clause in blocked:
        ctx.add_clause(clause)
    # first look for a binding whose deletes all hit before-state facts
    prefer = reg.var(("prefer", r.id))
    preferring = True
    last: GroundFact | None = None
    while True:
        # rebuilt each round: re-add clauses can bring in effect variables
        # this context has not seen yet, and those must be held false too
        assumptions = sorted(effects) + [-v for v in reg.effect_vars() if ctx.knows(v) and v not in effects]
        model = ctx.solve([*assumptions, prefer if preferring else -prefer])
        if model is None:
            if preferring:
                preferring = False
                continue
            missing = _explainable(reg, effects, r)
            if missing is not None:
                return Offense(r.id, UNEXPLAINED_CHANGE, missing)
            if last is None:
                last = sorted(r.added | r.deleted)[0]
            return Offense(r.id, INCONSISTENT_EFFECT, last)
        sub = recover_substitution(model, reg, r, k)
        bad = _violations(reg, sorted(effects), r, sub, k)
        for clauses, g in bad:
            for clause in clauses:
                ctx.add_clause(clause)
                blocked.append(clause)
            last = g
        if bad:
            continue
        idle = _idle_deletes(reg, sorted(effects), r, sub) if preferring else []
        if not idle:
            return sub
        for clause in idle:
            ctx.add_clause([*clause, -prefer])


def check_witness(schema: ActionSchema, subs: Mapping[int, Sequence[str]],
                  transitions: LabelGroup | Iterable[Transition]) -> bool:
    """Does ``schema`` with the given substitutions explain every transition?"""
    if isinstance(transitions, LabelGroup):
        transitions = transitions.transitions
    for r in transitions:
        sub = subs.get(r.id)
        if sub is None or len(sub) != schema.arity:
            return False
        if not ground_all(schema.pre, sub) <= r.before:
            return False
        predicted = (r.before - ground_all(schema.delete, sub)) | ground_all(schema.add, sub)
        if predicted != r.after:
            return False
    return True


def _classes(transitions: list[Transition], dedup: bool) -> tuple[list[Transition], dict[int, list[Transition]]]:
    reps: list[Transition] = []
    members: dict[int, list[Transition]] = {}
    index: dict[tuple, Transition] = {}
    for r in transitions:
        key = (r.instance_id, r.before, r.after) if dedup else r.id
        rep = index.get(key)
        if rep is None:
            index[key] = r
            reps.append(r)
            members[r.id] = [r]
        else:
            members[rep.id].append(r)
    return reps, members


def _effect_facts(reg: VarRegistry, vars_: Iterable[int]) -> tuple[frozenset, frozenset]:
    add, dele = set(), set()
    for v in vars_:
        kind, pred, vec = reg.key(v)
        (add if kind == "add" else dele).add(LiftedFact(pred, vec))
    return frozenset(add), frozenset(dele)


def _block_violations(ctx: SolveContext, reg: VarRegistry, model, encoded: Sequence[Transition],
                      k: int, blocked: dict[int, list[list[int]]]) -> bool:
    """Add consistency clauses for every violation of ``model``; True if any."""
    effects = sorted(model.true_vars(reg.effect_vars()))
    bad = []
    for r in encoded:
        sub = recover_substitution(model, reg, r, k)
        for clauses, _ in _violations(reg, effects, r, sub, k):
            bad += clauses
            blocked[r.id] += clauses
    for clause in bad:
        ctx.add_clause(clause)
    return bool(bad)


def synth_num_params(group: LabelGroup, k: int, limits: SynthLimits | None = None) -> EffectSolution | None:
    """Effects and substitutions with exactly ``k`` parameters, or None."""
    limits = limits or SynthLimits()
    t0 = time.monotonic()
    reps, members = _classes(group.transitions, limits.dedup)
    if not reps:
        raise ValueError("empty transition group")
    reg = VarRegistry()
    ctx = SolveContext(reg, limits.deadline, record=limits.record_cnf)
    blocked: dict[int, list[list[int]]] = {r.id: [] for r in reps}
    verified: dict[int, tuple[frozenset[int], tuple[str, ...]]] = {}
    encoded: list[Transition] = [reps[0]]
    encode_transition(ctx, reg, reps[0], k, ordered=True)
    offenses = 0
    while True:
        while True:
            model = ctx.solve()
            if model is None:
                return None
            # block what the raw model already gets wrong before paying for
            # minimisation; the clauses hold for every model
            if _block_violations(ctx, reg, model, encoded, k, blocked):
                continue
            model = minimize_true(ctx, reg.effect_vars())
            if not _block_violations(ctx, reg, model, encoded, k, blocked):
                break
        effects = frozenset(model.true_vars(reg.effect_vars()))
        subs = {r.id: recover_substitution(model, reg, r, k) for r in encoded}
        offender = None
        for r in reps:
            if r.id in subs:
                continue
            hit = verified.get(r.id)
            if hit is not None and hit[0] == effects:
                subs[r.id] = hit[1]
                continue
            res = verify(reg, effects, r, k, blocked[r.id], limits.deadline)
            if isinstance(res, Offense):
                log.debug("label %s k=%d: %s", group.label, k, res)
                offender = r
                break
            verified[r.id] = (effects, res)
            subs[r.id] = res
        if offender is None:
            break
        offenses += 1
        encode_transition(ctx, reg, offender, k)
        for clause in blocked[offender.id]:
            ctx.add_clause(clause)
        encoded.append(offender)

    # bindings read off the joint model ignore the delete preference of verify
    for r in encoded:
        res = verify(reg, effects, r, k, blocked[r.id], limits.deadline)
        if not isinstance(res, Offense):
            subs[r.id] = res
    add, dele = _effect_facts(reg, effects)
    all_subs = {m.id: subs[rep.id] for rep in reps for m in members[rep.id]}
    sol = EffectSolution(
        group.label, k, add, dele, all_subs, tuple(r.id for r in encoded), offenses,
        time.monotonic() - t0, (k,), LabelEncoding(reg, ctx, effects),
    )
    if not check_witness(sol.schema(), all_subs, group):
        raise RuntimeError(f"internal error: effects for {group.label} fail the witness check")
    return sol


def synth_label(group: LabelGroup, limits: SynthLimits | None = None) -> EffectSolution:
    """Try k = min_pars, min_pars + 1, ... until the transitions can be explained."""
    limits = limits or SynthLimits()
    t0 = time.monotonic()
    lo = min_pars(group)
    hi = lo + limits.max_extra_params
    tried = []
    for k in range(lo, hi + 1):
        tried.append(k)
        sol = synth_num_params(group, k, limits)
        if sol is not None:
            sol.attempts = tuple(tried)
            sol.elapsed = time.monotonic() - t0
            return sol
        log.info("label %s: no explanation with %d parameters", group.label, k)
    raise ParamBudgetExceeded(group.label, hi)


def effects_minimal(sol: EffectSolution) -> bool:
    """Re-check subset-minimality of the effects against the final encoding.

    With every effect variable outside the solution held false, switching off
    any single true one must make the formula unsatisfiable.
    """
    enc = sol.encoding
    if enc is None:
        raise ValueError("solution carries no encoding")
    reg, ctx = enc.registry, enc.context
    known = [v for v in reg.effect_vars() if ctx.knows(v)]
    off = [-v for v in known if v not in enc.effect_true]
    for v in sorted(enc.effect_true):
        if ctx.solve([*off, -v]) is not None:
            return False
    return True
