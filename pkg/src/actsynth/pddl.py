"""PDDL (:strips + :typing) domains, problems and plans: parsing and printing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import ArityMismatch, ParseError, UnknownObject, UnknownPredicate, UnsupportedFeature
from .model import (
    ROOT_TYPE,
    ActionSchema,
    GroundFact,
    LiftedFact,
    PredicateSignature,
    TypeHierarchy,
    lifted_sort_key,
)
from .sexpr import Atom, SList, expect_atom, expect_list, parse_all, parse_one, typed_list, where

SUPPORTED_REQUIREMENTS = {":strips", ":typing", ":equality"}

# Constructs that take a domain outside the STRIPS fragment.
_UNSUPPORTED_HEADS = {
    "not": "negative preconditions",
    "or": "disjunctive conditions",
    "imply": "implications",
    "forall": "quantifiers",
    "exists": "quantifiers",
    "when": "conditional effects",
    "=": "equality atoms",
    "increase": "numeric fluents",
    "decrease": "numeric fluents",
    "assign": "numeric fluents",
    "scale-up": "numeric fluents",
    "scale-down": "numeric fluents",
}


@dataclass(frozen=True)
class Domain:
    name: str
    hierarchy: TypeHierarchy
    predicates: dict[str, PredicateSignature]
    actions: tuple[ActionSchema, ...] = ()
    constants: dict[str, str] = field(default_factory=dict)
    requirements: tuple[str, ...] = (":strips", ":typing")

    def action(self, name: str) -> ActionSchema:
        for a in self.actions:
            if a.name == name:
                return a
        raise KeyError(name)

    def action_names(self) -> list[str]:
        return [a.name for a in self.actions]

    def header(self) -> "Domain":
        """The same domain with its actions stripped."""
        return Domain(self.name, self.hierarchy, dict(self.predicates), (), dict(self.constants),
                      self.requirements)

    def structurally_equal(self, other: "Domain") -> bool:
        """Equality up to the order of actions and of their fact sets."""
        if (self.name, self.hierarchy, self.predicates, self.constants) != (
            other.name, other.hierarchy, other.predicates, other.constants
        ):
            return False
        mine = {a.name: a for a in self.actions}
        theirs = {a.name: a for a in other.actions}
        return mine == theirs


@dataclass(frozen=True)
class ProblemInstance:
    name: str
    domain_name: str
    objects: dict[str, str]
    init: frozenset[GroundFact]
    goal: frozenset[GroundFact] = frozenset()


Plan = list  # list[tuple[str, tuple[str, ...]]]


def _define_sections(text: str, kind: str) -> tuple[str, list[SList]]:
    root = parse_one(text)
    if root.head() != "define" or len(root) < 2:
        raise ParseError("expected (define ...)", root.line, root.column)
    decl = expect_list(root[1], f"({kind} NAME)")
    if decl.head() != kind or len(decl) != 2:
        raise ParseError(f"expected ({kind} NAME)", decl.line, decl.column)
    sections = []
    for item in root.items[2:]:
        sec = expect_list(item, "section")
        if sec.head() is None or not sec.head().startswith(":"):
            raise ParseError("expected a ':section'", sec.line, sec.column)
        sections.append(sec)
    return expect_atom(decl[1], "name").lower(), sections


def _parse_types(sec: SList) -> TypeHierarchy:
    parent = {}
    names = []
    for name, sup in typed_list(sec.items[1:]):
        name = name.lower()
        names.append(name)
        if name != ROOT_TYPE:
            parent[name] = sup
    try:
        return TypeHierarchy(parent, names)
    except ValueError as exc:
        raise ParseError(str(exc), sec.line, sec.column) from None


def _atom(node: SList, predicates: dict[str, PredicateSignature]) -> tuple[str, list[Atom]]:
    head = node.head()
    if head is None:
        raise ParseError("expected an atom", node.line, node.column)
    if head in _UNSUPPORTED_HEADS:
        raise UnsupportedFeature(_UNSUPPORTED_HEADS[head] + " are not supported", node.line, node.column)
    if head not in predicates:
        raise UnknownPredicate(f"unknown predicate {head!r}", node.line, node.column)
    args = [expect_atom(a, "argument") for a in node.items[1:]]
    if len(args) != predicates[head].arity:
        raise ArityMismatch(
            f"{head} expects {predicates[head].arity} arguments, got {len(args)}",
            node.line,
            node.column,
        )
    return head, args


def _conjuncts(node) -> list[SList]:
    node = expect_list(node, "condition")
    if node.head() == "and":
        out = []
        for sub in node.items[1:]:
            out.extend(_conjuncts(sub))
        return out
    if not node.items:
        return []
    return [node]


def _parse_action(sec: SList, predicates, constants) -> ActionSchema:
    if len(sec) < 2:
        raise ParseError("action without a name", sec.line, sec.column)
    name = expect_atom(sec[1], "action name").lower()
    params: list[tuple[Atom, str]] = []
    pre_node = eff_node = None
    i = 2
    while i < len(sec):
        key = expect_atom(sec[i], "action keyword").lower()
        if i + 1 >= len(sec):
            raise ParseError(f"missing value for {key}", *where(sec[i]))
        val = sec[i + 1]
        if key == ":parameters":
            params = typed_list(expect_list(val, "parameter list").items)
        elif key == ":precondition":
            pre_node = val
        elif key == ":effect":
            eff_node = val
        else:
            raise UnsupportedFeature(f"action keyword {key}", *where(sec[i]))
        i += 2
    pnames = [p.lower() for p, _ in params]
    for p, _ in params:
        if not p.startswith("?"):
            raise ParseError(f"parameter {p!r} must start with '?'", p.line, p.column)
    if len(set(pnames)) != len(pnames):
        raise ParseError(f"duplicate parameter in action {name}", sec.line, sec.column)
    index = {p: k for k, p in enumerate(pnames)}

    def lift(node: SList) -> LiftedFact:
        head, args = _atom(node, predicates)
        out = []
        for a in args:
            la = a.lower()
            if la.startswith("?"):
                if la not in index:
                    raise ParseError(f"undeclared parameter {a}", a.line, a.column)
                out.append(index[la])
            elif la in constants:
                out.append(la)
            else:
                raise UnknownObject(f"unknown constant {a}", a.line, a.column)
        return LiftedFact(head, tuple(out))

    pre = {lift(n) for n in _conjuncts(pre_node)} if pre_node is not None else set()
    add, dele = set(), set()
    if eff_node is not None:
        for n in _conjuncts(eff_node):
            if n.head() == "not":
                if len(n) != 2:
                    raise ParseError("malformed (not ...)", n.line, n.column)
                dele.add(lift(expect_list(n[1], "atom")))
            else:
                add.add(lift(n))
    return ActionSchema(
        name,
        tuple(pnames),
        tuple(t for _, t in params),
        frozenset(pre),
        frozenset(add),
        frozenset(dele),
    )


def parse_domain(text: str) -> Domain:
    name, sections = _define_sections(text, "domain")
    hierarchy = TypeHierarchy()
    predicates: dict[str, PredicateSignature] = {}
    constants: dict[str, str] = {}
    actions: list[ActionSchema] = []
    requirements: tuple[str, ...] = (":strips",)
    for sec in sections:
        head = sec.head()
        if head == ":requirements":
            reqs = tuple(expect_atom(r, "requirement").lower() for r in sec.items[1:])
            for r, node in zip(reqs, sec.items[1:]):
                if r not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedFeature(f"requirement {r}", node.line, node.column)
            requirements = reqs
        elif head == ":types":
            hierarchy = _parse_types(sec)
        elif head == ":constants":
            constants = {o.lower(): t for o, t in typed_list(sec.items[1:])}
        elif head == ":predicates":
            for node in sec.items[1:]:
                node = expect_list(node, "predicate declaration")
                pname = expect_atom(node[0] if node.items else None, "predicate name").lower()
                args = typed_list(node.items[1:])
                predicates[pname] = PredicateSignature(pname, tuple(t for _, t in args))
        elif head == ":action":
            actions.append(_parse_action(sec, predicates, constants))
        else:
            raise UnsupportedFeature(f"section {head}", sec.line, sec.column)
    for sig in predicates.values():
        for t in sig.arg_types:
            if t not in hierarchy:
                raise ParseError(f"predicate {sig.name} uses undeclared type {t!r}")
    for c, t in constants.items():
        if t not in hierarchy:
            raise ParseError(f"constant {c} has undeclared type {t!r}")
    for a in actions:
        for t in a.param_types:
            if t not in hierarchy:
                raise ParseError(f"action {a.name} uses undeclared type {t!r}")
    return Domain(name, hierarchy, predicates, tuple(actions), constants, requirements)


def parse_ground_atom(node, predicates, objects) -> GroundFact:
    node = expect_list(node, "fact")
    head, args = _atom(node, predicates)
    out = []
    for a in args:
        la = a.lower()
        if objects is not None and la not in objects:
            raise UnknownObject(f"undeclared object {a}", a.line, a.column)
        out.append(la)
    return GroundFact(head, tuple(out))


def parse_problem(text: str, domain: Domain) -> ProblemInstance:
    name, sections = _define_sections(text, "problem")
    dname = ""
    objects = dict(domain.constants)
    init: list = []
    goal: list = []
    init_node = goal_node = None
    for sec in sections:
        head = sec.head()
        if head == ":domain":
            dname = expect_atom(sec[1], "domain name").lower()
        elif head == ":objects":
            for o, t in typed_list(sec.items[1:]):
                if t not in domain.hierarchy:
                    raise ParseError(f"object {o} has undeclared type {t!r}", o.line, o.column)
                objects[o.lower()] = t
        elif head == ":init":
            init_node = sec
        elif head == ":goal":
            goal_node = sec
        elif head == ":requirements":
            pass
        else:
            raise UnsupportedFeature(f"section {head}", sec.line, sec.column)
    if init_node is not None:
        init = [parse_ground_atom(n, domain.predicates, objects) for n in init_node.items[1:]]
    if goal_node is not None:
        for g in goal_node.items[1:]:
            goal += [parse_ground_atom(n, domain.predicates, objects) for n in _conjuncts(g)]
    return ProblemInstance(name, dname, objects, frozenset(init), frozenset(goal))


def parse_plan(text: str) -> list[tuple[str, tuple[str, ...]]]:
    """One ``(name o1 o2 ...)`` per step; ``;`` comments are ignored."""
    plan = []
    for node in parse_all(text):
        node = expect_list(node, "plan step")
        head = node.head()
        if head is None:
            raise ParseError("empty plan step", node.line, node.column)
        plan.append((head, tuple(expect_atom(a, "object").lower() for a in node.items[1:])))
    return plan


def emit_plan(plan: Iterable[tuple[str, tuple[str, ...]]]) -> str:
    return "".join("(" + " ".join((n, *args)) + ")\n" for n, args in plan)


# -- printing ---------------------------------------------------------------


def _emit_typed(pairs: list[tuple[str, str]]) -> str:
    """Group consecutive names sharing a type: ``a b - t c - u``."""
    out: list[str] = []
    i = 0
    while i < len(pairs):
        j = i
        while j < len(pairs) and pairs[j][1] == pairs[i][1]:
            j += 1
        out += [n for n, _ in pairs[i:j]]
        out += ["-", pairs[i][1]]
        i = j
    return " ".join(out)


def _emit_conj(facts: list[str]) -> str:
    if not facts:
        return "(and)"
    return "(and " + " ".join(facts) + ")"


def emit_action(a: ActionSchema) -> str:
    names = list(a.params)
    pre = [f.render(names) for f in sorted(a.pre, key=lifted_sort_key)]
    eff = [f.render(names) for f in sorted(a.add, key=lifted_sort_key)]
    eff += [f"(not {f.render(names)})" for f in sorted(a.delete, key=lifted_sort_key)]
    lines = [
        f"  (:action {a.name}",
        f"    :parameters ({_emit_typed(list(zip(a.params, a.param_types)))})",
        f"    :precondition {_emit_conj(pre)}",
        f"    :effect {_emit_conj(eff)})",
    ]
    return "\n".join(lines)


def emit_domain(d: Domain) -> str:
    h = d.hierarchy
    out = [f"(define (domain {d.name})", "  (:requirements " + " ".join(d.requirements) + ")"]
    typed = sorted(((t, h.parent[t]) for t in h.types if t != ROOT_TYPE), key=lambda p: (p[1], p[0]))
    if typed:
        out.append("  (:types " + _emit_typed(typed) + ")")
    if d.constants:
        out.append("  (:constants " + _emit_typed(sorted(d.constants.items(), key=lambda p: (p[1], p[0]))) + ")")
    out.append("  (:predicates")
    for name in sorted(d.predicates):
        sig = d.predicates[name]
        args = [(f"?x{i + 1}", t) for i, t in enumerate(sig.arg_types)]
        body = " ".join([name, _emit_typed(args)]) if args else name
        out.append(f"    ({body})")
    out[-1] += ")"
    for a in sorted(d.actions, key=lambda a: a.name):
        out.append(emit_action(a))
    out[-1] += ")"
    return "\n".join(out) + "\n"


def emit_problem(p: ProblemInstance) -> str:
    objs = sorted(p.objects.items(), key=lambda kv: (kv[1], kv[0]))
    lines = [
        f"(define (problem {p.name})",
        f"  (:domain {p.domain_name})",
        "  (:objects " + _emit_typed(objs) + ")" if objs else "  (:objects)",
        "  (:init " + " ".join(str(f) for f in sorted(p.init)) + ")",
        "  (:goal " + _emit_conj([str(f) for f in sorted(p.goal)]) + "))",
    ]
    return "\n".join(lines) + "\n"
