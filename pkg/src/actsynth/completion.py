"""Preconditions and parameter types for learned actions."""

from __future__ import annotations

import itertools
import logging
from typing import Iterable, Mapping, Sequence

from .model import (
    ROOT_TYPE,
    GroundFact,
    LiftedFact,
    PredicateSignature,
    TypeHierarchy,
    ground,
    is_subtype,
    least_common_ancestor,
)
from .traces import LabelGroup, Trace, Transition

log = logging.getLogger(__name__)

# (instance id, object) -> minimal observed types
ObjectTypeTable = dict


def ground_candidates(r: Transition, sub: Sequence[str]) -> set[GroundFact]:
    """Before-state facts whose arguments all lie in the range of ``sub``."""
    rng = set(sub)
    return {f for f in r.before if all(o in rng for o in f.args)}


def lift_all_ways(gpc: Iterable[GroundFact], sub: Sequence[str]) -> set[LiftedFact]:
    """Every lifted fact that grounds into ``gpc`` under ``sub``."""
    pre: dict[str, list[int]] = {}
    for i, o in enumerate(sub):
        pre.setdefault(o, []).append(i)
    out = set()
    for f in gpc:
        choices = [pre[o] for o in f.args]
        for vec in itertools.product(*choices):
            out.add(LiftedFact(f.predicate, vec))
    return out


def synth_preconditions(group: LabelGroup, subs: Mapping[int, Sequence[str]]) -> frozenset[LiftedFact]:
    """Intersection of the lifted candidates over every transition of the group.

    A lifted fact is a candidate for R exactly when it grounds into R's
    before-state, so after the first transition the running intersection is
    filtered instead of lifting each state from scratch.
    """
    pre: set[LiftedFact] | None = None
    for r in group.transitions:
        sub = subs[r.id]
        if pre is None:
            pre = lift_all_ways(ground_candidates(r, sub), sub)
        else:
            pre = {f for f in pre if ground(f, sub) in r.before}
        if not pre:
            break
    return frozenset(pre or ())


def _observe(types: set[str], t: str, h: TypeHierarchy) -> None:
    if any(is_subtype(u, t, h) for u in types):
        return
    for u in [u for u in types if is_subtype(t, u, h)]:
        types.discard(u)
    types.add(t)


def infer_object_types(
    traces: Iterable[Trace],
    predicates: Mapping[str, PredicateSignature],
    hierarchy: TypeHierarchy,
    use_declared: bool = False,
) -> ObjectTypeTable:
    """Most specific types under which each object occurs in a fact.

    Only traces with at least one step contribute (their states are the
    before/after states of transitions).  Every fact of such a trace is in
    its initial state or added by some step.  With ``use_declared`` the
    object types from the trace header count as one more observation.
    """
    table: ObjectTypeTable = {}
    for tr in traces:
        if not tr.steps:
            continue
        facts = set(tr.init)
        for st in tr.steps:
            facts |= st.added
        for o in tr.objects:
            table.setdefault((tr.instance_id, o), set())
        for f in facts:
            sig = predicates[f.predicate]
            for o, t in zip(f.args, sig.arg_types):
                _observe(table.setdefault((tr.instance_id, o), set()), t, hierarchy)
        if use_declared:
            for o, t in tr.objects.items():
                _observe(table[(tr.instance_id, o)], t, hierarchy)
    return {key: frozenset(v) for key, v in table.items()}


def resolve_type(table: ObjectTypeTable, instance: str, obj: str, hierarchy: TypeHierarchy) -> str | None:
    types = table.get((instance, obj))
    if not types:
        return None
    if len(types) == 1:
        return next(iter(types))
    t = least_common_ancestor(sorted(types), hierarchy)
    log.warning("object %s (%s) observed at incomparable types %s; using %s",
                obj, instance, sorted(types), t)
    return t


def assign_parameter_types(
    group: LabelGroup,
    subs: Mapping[int, Sequence[str]],
    k: int,
    table: ObjectTypeTable,
    hierarchy: TypeHierarchy,
) -> tuple[str, ...]:
    """Most general type over the objects seen at each parameter position."""
    out = []
    for i in range(k):
        seen: set[str] = set()
        unknown = False
        for r in group.transitions:
            t = resolve_type(table, r.instance_id, subs[r.id][i], hierarchy)
            if t is None:
                unknown = True
                break
            seen.add(t)
        if unknown or not seen:
            out.append(ROOT_TYPE)
        else:
            out.append(least_common_ancestor(sorted(seen), hierarchy))
    return tuple(out)
