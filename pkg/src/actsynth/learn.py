"""End-to-end learning: traces in, a typed STRIPS domain out."""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .completion import assign_parameter_types, infer_object_types, synth_preconditions
from .effects import EffectSolution, SynthLimits, check_witness, synth_label
from .model import ActionSchema
from .pddl import Domain
from .traces import LabelGroup, Trace, decompose

log = logging.getLogger(__name__)


@dataclass
class LearnConfig:
    time_limit: float = 60.0
    param_budget_extra: int = 3
    workers: int = 1
    use_declared_types: bool = False
    dedup: bool = True
    record_cnf: bool = False


@dataclass
class LearnedAction:
    schema: ActionSchema
    solution: EffectSolution
    group: LabelGroup


@dataclass
class LearnResult:
    domain: Domain
    actions: dict[str, LearnedAction] = field(default_factory=dict)
    elapsed: float = 0.0


def _synth_job(group: LabelGroup, limits: SynthLimits, budget: float) -> EffectSolution:
    limits = SynthLimits(time.monotonic() + budget, limits.max_extra_params, limits.dedup,
                         limits.record_cnf)
    return synth_label(group, limits)


def label_budgets(groups: dict[str, LabelGroup], total: float) -> dict[str, float]:
    """Split the global time limit across labels in proportion to group size."""
    n = sum(len(g) for g in groups.values()) or 1
    return {label: total * len(g) / n for label, g in groups.items()}


def synthesize_effects(groups: dict[str, LabelGroup], config: LearnConfig) -> dict[str, EffectSolution]:
    limits = SynthLimits(None, config.param_budget_extra, config.dedup, config.record_cnf)
    budgets = label_budgets(groups, config.time_limit)
    labels = sorted(groups)
    workers = min(config.workers, len(labels))
    if workers <= 1:
        return {lb: _synth_job(groups[lb], limits, budgets[lb]) for lb in labels}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {lb: pool.submit(_synth_job, groups[lb], limits, budgets[lb]) for lb in labels}
        return {lb: futures[lb].result() for lb in labels}


def learn_domain(header: Domain, traces: Sequence[Trace], config: LearnConfig | None = None) -> LearnResult:
    """Learn one action schema per label occurring in ``traces``."""
    config = config or LearnConfig()
    t0 = time.monotonic()
    groups = decompose(traces)
    solutions = synthesize_effects(groups, config)
    table = infer_object_types(traces, header.predicates, header.hierarchy, config.use_declared_types)
    actions: dict[str, LearnedAction] = {}
    for label in sorted(groups):
        group, sol = groups[label], solutions[label]
        pre = synth_preconditions(group, sol.substitutions)
        types = assign_parameter_types(group, sol.substitutions, sol.k, table, header.hierarchy)
        schema = sol.schema(types, pre)
        if not check_witness(schema, sol.substitutions, group):
            raise RuntimeError(f"internal error: learned {label} does not explain its transitions")
        actions[label] = LearnedAction(schema, sol, group)
    domain = Domain(
        header.name,
        header.hierarchy,
        dict(header.predicates),
        tuple(actions[lb].schema for lb in sorted(actions)),
        dict(header.constants),
        (":strips", ":typing"),
    )
    return LearnResult(domain, actions, time.monotonic() - t0)


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
