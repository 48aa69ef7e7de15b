"""Benchmark traces from a reference domain: plan replay and random walks."""

from __future__ import annotations

import random
from typing import Iterator, Sequence

from .errors import NotApplicable, UnknownAction
from .model import ActionSchema, GroundFact, TypeHierarchy, apply, applicable, ground, is_subtype
from .pddl import Domain, ProblemInstance
from .traces import Step, Trace


def _step(before: frozenset[GroundFact], after: frozenset[GroundFact], label: str) -> Step:
    return Step(label, after - before, before - after)


def replay_plan(domain: Domain, problem: ProblemInstance, plan: Sequence[tuple[str, Sequence[str]]],
                instance_id: str | None = None) -> Trace:
    """Execute ``plan`` and keep only labels and state deltas."""
    state = problem.init
    steps = []
    for n, (name, args) in enumerate(plan, start=1):
        try:
            schema = domain.action(name.lower())
        except KeyError:
            raise UnknownAction(f"step {n}: unknown action {name!r}") from None
        args = tuple(a.lower() for a in args)
        if len(args) != schema.arity:
            raise NotApplicable(f"step {n}: {name} takes {schema.arity} arguments, got {len(args)}", n)
        for a in args:
            if a not in problem.objects:
                raise NotApplicable(f"step {n}: unknown object {a!r}", n)
        if not applicable(state, schema, args):
            missing = sorted(str(ground(f, args)) for f in schema.pre if ground(f, args) not in state)
            raise NotApplicable(f"step {n}: ({name} {' '.join(args)}) is not applicable; "
                                f"missing {' '.join(missing)}", n)
        nxt = apply(state, schema, args)
        steps.append(_step(state, nxt, schema.name))
        state = nxt
    return Trace(instance_id or problem.name, dict(problem.objects), problem.init, tuple(steps))


def _objects_by_param(schema: ActionSchema, objects: dict[str, str], h: TypeHierarchy) -> list[list[str]]:
    return [sorted(o for o, t in objects.items() if is_subtype(t, pt, h)) for pt in schema.param_types]


def applicable_actions(domain: Domain, objects: dict[str, str],
                       state: frozenset[GroundFact]) -> Iterator[tuple[ActionSchema, tuple[str, ...]]]:
    """All applicable ground actions, in a deterministic order.

    Parameters are bound left to right; a precondition is checked as soon as
    all its parameters are bound, which prunes most of the product.
    """
    for schema in sorted(domain.actions, key=lambda a: a.name):
        cands = _objects_by_param(schema, objects, domain.hierarchy)
        k = schema.arity
        checks: list[list] = [[] for _ in range(k + 1)]
        for f in schema.pre:
            ps = f.params()
            checks[max(ps) + 1 if ps else 0].append(f)
        if any(ground(f, ()) not in state for f in checks[0]):
            continue
        binding: list[str] = []

        def extend(i: int):
            if i == k:
                yield tuple(binding)
                return
            for o in cands[i]:
                binding.append(o)
                if all(ground(f, binding) in state for f in checks[i + 1]):
                    yield from extend(i + 1)
                binding.pop()

        for args in extend(0):
            yield schema, args


def random_walk(domain: Domain, problem: ProblemInstance, length: int, seed: int,
                instance_id: str | None = None) -> Trace:
    """Up to ``length`` uniformly sampled applicable actions; stops at dead ends."""
    if length < 0:
        raise ValueError("length must be non-negative")
    rng = random.Random(seed)
    state = problem.init
    steps = []
    for _ in range(length):
        options = list(applicable_actions(domain, problem.objects, state))
        if not options:
            break
        schema, args = options[rng.randrange(len(options))]
        nxt = apply(state, schema, args)
        steps.append(_step(state, nxt, schema.name))
        state = nxt
    return Trace(instance_id or problem.name, dict(problem.objects), problem.init, tuple(steps))
