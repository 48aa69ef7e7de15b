"""Planning vocabulary: types, facts, states, action schemas, STRIPS semantics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

from .errors import NotApplicable, UnknownType

ROOT_TYPE = "object"


class TypeHierarchy:
    """A forest of PDDL types hung under the single root ``object``.

    ``parent`` maps every non-root type to its direct supertype.  Types not
    mentioned in ``parent`` (other than the root) are parented by the root.
    """

    def __init__(self, parent: Mapping[str, str] | None = None, types: Iterable[str] = ()):
        par: dict[str, str] = {}
        for child, sup in (parent or {}).items():
            child, sup = child.lower(), sup.lower()
            if child == ROOT_TYPE:
                raise ValueError("the root type cannot have a parent")
            par[child] = sup
        names = {ROOT_TYPE, *par, *par.values(), *(t.lower() for t in types)}
        for t in names:
            if t != ROOT_TYPE and t not in par:
                par[t] = ROOT_TYPE
        self._parent = par
        self.types = frozenset(names)
        self._chains: dict[str, tuple[str, ...]] = {}
        for t in sorted(names):
            seen = []
            cur = t
            while cur != ROOT_TYPE:
                if cur in seen:
                    raise ValueError(f"cyclic type hierarchy through {cur!r}")
                seen.append(cur)
                cur = par[cur]
            self._chains[t] = (*seen, ROOT_TYPE)

    root = ROOT_TYPE

    @property
    def parent(self) -> dict[str, str]:
        return dict(self._parent)

    def __contains__(self, t: str) -> bool:
        return t in self.types

    def __len__(self) -> int:
        return len(self.types)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TypeHierarchy) and self._parent == other._parent

    def __hash__(self) -> int:
        return hash(frozenset(self._parent.items()))

    def __repr__(self) -> str:
        return f"TypeHierarchy({self._parent!r})"

    def ancestors(self, t: str) -> tuple[str, ...]:
        """``t`` followed by its supertypes, ending with ``object``."""
        try:
            return self._chains[t]
        except KeyError:
            raise UnknownType(t) from None

    def depth(self, t: str) -> int:
        return len(self.ancestors(t)) - 1

    def children(self, t: str) -> list[str]:
        return sorted(c for c, p in self._parent.items() if p == t)


def is_subtype(t1: str, t2: str, h: TypeHierarchy) -> bool:
    """Reflexive-transitive subtype test ``t1 <= t2``."""
    if t2 not in h:
        raise UnknownType(t2)
    return t2 in h.ancestors(t1)


def comparable(t1: str, t2: str, h: TypeHierarchy) -> bool:
    return is_subtype(t1, t2, h) or is_subtype(t2, t1, h)


def least_common_ancestor(ts: Iterable[str], h: TypeHierarchy) -> str:
    ts = list(ts)
    if not ts:
        raise ValueError("least_common_ancestor of an empty set")
    common = list(h.ancestors(ts[0]))
    for t in ts[1:]:
        anc = set(h.ancestors(t))
        common = [c for c in common if c in anc]
    # chains run bottom-up, so the first shared entry is the deepest
    return common[0]


@dataclass(frozen=True)
class PredicateSignature:
    name: str
    arg_types: tuple[str, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.arg_types)


class GroundFact(NamedTuple):
    predicate: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate, *self.args)) + ")"


# A lifted argument is a parameter index, or a constant name for reference
# domains that mention constants inside action bodies.
LiftedArg = Union[int, str]


class LiftedFact(NamedTuple):
    predicate: str
    args: tuple[LiftedArg, ...] = ()

    def params(self) -> set[int]:
        return {a for a in self.args if isinstance(a, int)}

    def render(self, names: Sequence[str]) -> str:
        parts = [self.predicate]
        parts += [names[a] if isinstance(a, int) else a for a in self.args]
        return "(" + " ".join(parts) + ")"


State = frozenset  # frozenset[GroundFact]

# Objects bound to parameters, indexed by parameter position.
Substitution = tuple


def lifted_sort_key(f: LiftedFact):
    return (f.predicate, tuple((0, a, "") if isinstance(a, int) else (1, 0, a) for a in f.args))


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[str, ...]
    param_types: tuple[str, ...]
    pre: frozenset[LiftedFact] = field(default_factory=frozenset)
    add: frozenset[LiftedFact] = field(default_factory=frozenset)
    delete: frozenset[LiftedFact] = field(default_factory=frozenset)

    def __post_init__(self):
        if len(set(self.params)) != len(self.params):
            raise ValueError(f"action {self.name}: duplicate parameter names")
        if len(self.params) != len(self.param_types):
            raise ValueError(f"action {self.name}: parameter/type count mismatch")
        k = len(self.params)
        for f in (*self.pre, *self.add, *self.delete):
            for a in f.args:
                if isinstance(a, int) and not 0 <= a < k:
                    raise ValueError(f"action {self.name}: {f} refers to missing parameter {a}")

    @property
    def arity(self) -> int:
        return len(self.params)

    def binding(self, sub: Substitution) -> dict[str, str]:
        """The substitution as a parameter-name keyed mapping."""
        return dict(zip(self.params, sub))


def ground(f: LiftedFact, sub: Sequence[str]) -> GroundFact:
    return GroundFact(f.predicate, tuple(sub[a] if isinstance(a, int) else a for a in f.args))


def ground_all(facts: Iterable[LiftedFact], sub: Sequence[str]) -> set[GroundFact]:
    return {ground(f, sub) for f in facts}


def _check_sub(schema: ActionSchema, sub: Sequence[str]) -> None:
    if len(sub) != schema.arity:
        raise ValueError(
            f"substitution for {schema.name} binds {len(sub)} of {schema.arity} parameters"
        )


def applicable(s: frozenset[GroundFact], schema: ActionSchema, sub: Sequence[str]) -> bool:
    _check_sub(schema, sub)
    return all(ground(f, sub) in s for f in schema.pre)


def apply(s: frozenset[GroundFact], schema: ActionSchema, sub: Sequence[str]) -> frozenset[GroundFact]:
    """Successor state; deletes are applied before adds so an add wins a collision."""
    if not applicable(s, schema, sub):
        raise NotApplicable(f"{schema.name}{tuple(sub)} is not applicable")
    return (s - ground_all(schema.delete, sub)) | ground_all(schema.add, sub)
