"""Label-only state traces: the log format, transitions, and label groups.

A trace file stores an initial state and, per step, the action label with
the facts that became true (``:add``) and false (``:del``)::

    (trace (:instance p01)
      (:objects a b - block)
      (:init (clear a) (ontable a))
      (:step (:label pickup) (:add (holding a)) (:del (clear a) (ontable a))))
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import InconsistentDelta, ParseError
from .model import GroundFact, PredicateSignature, TypeHierarchy
from .pddl import parse_ground_atom
from .sexpr import SList, expect_atom, expect_list, parse_one, typed_list


@dataclass(frozen=True)
class Step:
    label: str
    added: frozenset[GroundFact] = frozenset()
    deleted: frozenset[GroundFact] = frozenset()


@dataclass(frozen=True)
class Trace:
    instance_id: str
    objects: Mapping[str, str]
    init: frozenset[GroundFact]
    steps: tuple[Step, ...] = ()

    def states(self) -> Iterator[frozenset[GroundFact]]:
        """S_0, S_1, ..., S_n."""
        s = self.init
        yield s
        for st in self.steps:
            s = (s - st.deleted) | st.added
            yield s

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(eq=False)
class Transition:
    id: int
    instance_id: str
    before: frozenset[GroundFact]
    label: str
    after: frozenset[GroundFact]
    objects: Mapping[str, str] = field(default_factory=dict, repr=False)

    @property
    def added(self) -> frozenset[GroundFact]:
        return self.after - self.before

    @property
    def deleted(self) -> frozenset[GroundFact]:
        return self.before - self.after

    def changed_objects(self) -> set[str]:
        return {o for f in self.added | self.deleted for o in f.args}


@dataclass
class LabelGroup:
    label: str
    transitions: list[Transition] = field(default_factory=list)

    @property
    def min_pars(self) -> int:
        return min_pars(self)

    def __len__(self) -> int:
        return len(self.transitions)


def parse_trace(
    text: str,
    predicates: Mapping[str, PredicateSignature],
    hierarchy: TypeHierarchy | None = None,
) -> Trace:
    root = parse_one(text)
    if root.head() != "trace":
        raise ParseError("expected (trace ...)", root.line, root.column)
    instance = None
    objects: dict[str, str] = {}
    state: set[GroundFact] = set()
    init: frozenset[GroundFact] = frozenset()
    steps: list[Step] = []
    for sec in root.items[1:]:
        sec = expect_list(sec, "trace section")
        head = sec.head()
        if head == ":instance":
            if len(sec) != 2:
                raise ParseError("expected (:instance ID)", sec.line, sec.column)
            instance = expect_atom(sec[1], "instance id").lower()
        elif head == ":objects":
            if steps or state:
                raise ParseError(":objects must precede :init and steps", sec.line, sec.column)
            for o, t in typed_list(sec.items[1:]):
                if hierarchy is not None and t not in hierarchy:
                    raise ParseError(f"object {o} has undeclared type {t!r}", o.line, o.column)
                objects[o.lower()] = t
        elif head == ":init":
            if steps:
                raise ParseError(":init must precede the steps", sec.line, sec.column)
            state = {parse_ground_atom(n, predicates, objects) for n in sec.items[1:]}
            init = frozenset(state)
        elif head == ":step":
            steps.append(_parse_step(sec, predicates, objects, state))
        else:
            raise ParseError(f"unknown trace section {head}", sec.line, sec.column)
    if instance is None:
        raise ParseError("trace lacks (:instance ID)", root.line, root.column)
    return Trace(instance, objects, init, tuple(steps))


def _parse_step(sec: SList, predicates, objects, state: set[GroundFact]) -> Step:
    label = None
    added: set[GroundFact] = set()
    deleted: set[GroundFact] = set()
    add_nodes, del_nodes = [], []
    for part in sec.items[1:]:
        part = expect_list(part, "step part")
        head = part.head()
        if head == ":label":
            if len(part) != 2:
                raise ParseError("expected (:label NAME)", part.line, part.column)
            label = expect_atom(part[1], "label").lower()
        elif head == ":add":
            add_nodes += part.items[1:]
        elif head == ":del":
            del_nodes += part.items[1:]
        else:
            raise ParseError(f"unknown step part {head}", part.line, part.column)
    if label is None:
        raise ParseError("step without (:label NAME)", sec.line, sec.column)
    for n in del_nodes:
        f = parse_ground_atom(n, predicates, objects)
        if f not in state:
            raise InconsistentDelta(f"deleted fact {f} does not hold", n.line, n.column)
        deleted.add(f)
    for n in add_nodes:
        f = parse_ground_atom(n, predicates, objects)
        if f in state:
            raise InconsistentDelta(f"added fact {f} already holds", n.line, n.column)
        added.add(f)
    state -= deleted
    state |= added
    return Step(label, frozenset(added), frozenset(deleted))


def _facts(facts: Iterable[GroundFact]) -> str:
    return " ".join(str(f) for f in sorted(facts))


def emit_trace(trace: Trace) -> str:
    objs = sorted(trace.objects.items(), key=lambda kv: (kv[1], kv[0]))
    obj_txt = " ".join(f"{o} - {t}" for o, t in objs)
    lines = [
        "(trace",
        f"  (:instance {trace.instance_id})",
        f"  (:objects {obj_txt})" if obj_txt else "  (:objects)",
        f"  (:init {_facts(trace.init)})" if trace.init else "  (:init)",
    ]
    for st in trace.steps:
        lines.append(
            f"  (:step (:label {st.label}) (:add {_facts(st.added)}) (:del {_facts(st.deleted)}))"
            .replace("(:add )", "(:add)")
            .replace("(:del )", "(:del)")
        )
    lines[-1] += ")"
    return "\n".join(lines) + "\n"


def transitions(traces: Iterable[Trace]) -> list[Transition]:
    out = []
    for tr in traces:
        states = list(tr.states())
        for i, st in enumerate(tr.steps):
            out.append(Transition(len(out), tr.instance_id, states[i], st.label, states[i + 1], tr.objects))
    return out


def decompose(traces: Iterable[Trace]) -> dict[str, LabelGroup]:
    """Group all steps of all traces into per-label transition sets."""
    groups: dict[str, LabelGroup] = {}
    for r in transitions(traces):
        groups.setdefault(r.label, LabelGroup(r.label)).transitions.append(r)
    return groups


def min_pars(group: LabelGroup) -> int:
    """Largest number of distinct objects in value-changing facts of one transition."""
    return max((len(r.changed_objects()) for r in group.transitions), default=0)
