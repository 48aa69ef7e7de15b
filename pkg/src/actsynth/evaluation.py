"""Diffing a learned domain against the reference it was learned from."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .model import ActionSchema, LiftedFact, TypeHierarchy, comparable
from .pddl import Domain

EXTRA_PRE_WEIGHT = 0.2


def fidelity(mapped: int, missing_pre: int, extra_pre: float, missing_eff: int, extra_eff: int) -> float:
    """mapped / (mapped + score); superfluous preconditions weigh 0.2."""
    for n in (mapped, missing_pre, extra_pre, missing_eff, extra_eff):
        if n < 0:
            raise ValueError("counts must be non-negative")
    score = missing_pre + EXTRA_PRE_WEIGHT * extra_pre + missing_eff + extra_eff
    total = mapped + score
    if total == 0:
        return 1.0
    return mapped / total


def _remap(f: LiftedFact, alignment: dict[int, int]) -> LiftedFact | None:
    out = []
    for a in f.args:
        if isinstance(a, int):
            if a not in alignment:
                return None
            out.append(alignment[a])
        else:
            out.append(a)
    return LiftedFact(f.predicate, tuple(out))


def _matches(facts: Iterable[LiftedFact], ref: frozenset[LiftedFact], alignment: dict[int, int]) -> int:
    n = 0
    for f in facts:
        g = _remap(f, alignment)
        if g is not None and g in ref:
            n += 1
    return n


def align_parameters(learned: ActionSchema, reference: ActionSchema, hierarchy: TypeHierarchy,
                     tolerant: bool = True) -> dict[int, int]:
    """Injective learned->reference parameter map maximising matched facts.

    Matched effects count first and matched preconditions break ties, so a
    tolerant alignment never matches fewer effects than the strict one.
    Pairs must have equal types (strict) or comparable types (tolerant).
    Learned parameters may stay unaligned.  Among maps with the best score
    the lexicographically smallest one wins (unaligned sorts after every
    reference index).
    """
    k, m = learned.arity, reference.arity

    def ok(i: int, j: int) -> bool:
        a, b = learned.param_types[i], reference.param_types[j]
        if a not in hierarchy or b not in hierarchy:
            return a == b
        return comparable(a, b, hierarchy) if tolerant else a == b

    eff_weight = len(learned.pre) + 1
    cats = (
        (learned.pre, reference.pre, 1),
        (learned.add, reference.add, eff_weight),
        (learned.delete, reference.delete, eff_weight),
    )
    # facts become decidable once their highest parameter is assigned
    decided: list[list[tuple[LiftedFact, frozenset, int]]] = [[] for _ in range(k + 1)]
    for mine, ref, w in cats:
        for f in mine:
            ps = f.params()
            decided[max(ps) + 1 if ps else 0].append((f, ref, w))
    remaining_after = [sum(w for j in range(i + 1, k + 1) for _, _, w in decided[j]) for i in range(k + 1)]

    best_score = -1
    best: dict[int, int] = {}
    current: dict[int, int] = {}
    used: set[int] = set()

    def gain(level: int) -> int:
        return sum(w for f, ref, w in decided[level] if (g := _remap(f, current)) is not None and g in ref)

    def dfs(i: int, score: int) -> None:
        nonlocal best_score, best
        if score + remaining_after[i] <= best_score:
            return
        if i == k:
            best_score, best = score, dict(current)
            return
        for j in range(m):
            if j in used or not ok(i, j):
                continue
            current[i] = j
            used.add(j)
            dfs(i + 1, score + gain(i + 1))
            used.discard(j)
            del current[i]
        dfs(i + 1, score + gain(i + 1))

    dfs(0, gain(0))
    return best


@dataclass
class ActionDiff:
    name: str
    alignment: dict[int, int]
    alignment_strict: dict[int, int]
    minus_p: int
    plus_p: int
    minus_e_tol: int
    plus_e_tol: int
    minus_e_strict: int
    plus_e_strict: int
    mapped: int


def diff_action(learned: ActionSchema, reference: ActionSchema, hierarchy: TypeHierarchy) -> ActionDiff:
    tol = align_parameters(learned, reference, hierarchy, tolerant=True)
    strict = align_parameters(learned, reference, hierarchy, tolerant=False)
    pre_hit = _matches(learned.pre, reference.pre, tol)
    eff_hit = _matches(learned.add, reference.add, tol) + _matches(learned.delete, reference.delete, tol)
    eff_hit_strict = (_matches(learned.add, reference.add, strict)
                      + _matches(learned.delete, reference.delete, strict))
    n_ref_eff = len(reference.add) + len(reference.delete)
    n_learned_eff = len(learned.add) + len(learned.delete)
    return ActionDiff(
        learned.name,
        tol,
        strict,
        len(reference.pre) - pre_hit,
        len(learned.pre) - pre_hit,
        n_ref_eff - eff_hit,
        n_learned_eff - eff_hit,
        n_ref_eff - eff_hit_strict,
        n_learned_eff - eff_hit_strict,
        pre_hit + eff_hit,
    )


@dataclass
class DiffReport:
    actions: list[ActionDiff] = field(default_factory=list)
    unobserved_actions: list[str] = field(default_factory=list)
    extra_actions: list[str] = field(default_factory=list)

    def total(self, attr: str) -> int:
        return sum(getattr(a, attr) for a in self.actions)

    @property
    def mapped(self) -> int:
        return self.total("mapped")

    @property
    def fidelity(self) -> float:
        return fidelity(self.mapped, self.total("minus_p"), self.total("plus_p"),
                        self.total("minus_e_tol"), self.total("plus_e_tol"))

    @property
    def fidelity_strict(self) -> float:
        return fidelity(self.mapped, self.total("minus_p"), self.total("plus_p"),
                        self.total("minus_e_strict"), self.total("plus_e_strict"))

    def to_dict(self) -> dict:
        keys = ("minus_p", "plus_p", "minus_e_tol", "plus_e_tol", "minus_e_strict", "plus_e_strict")
        names = ("minusP", "plusP", "minusE_tol", "plusE_tol", "minusE_strict", "plusE_strict")
        actions = []
        for a in self.actions:
            row = {"name": a.name}
            row.update({n: getattr(a, k) for k, n in zip(keys, names)})
            row["mapped"] = a.mapped
            actions.append(row)
        return {
            "actions": actions,
            "totals": {n: self.total(k) for k, n in zip(keys, names)},
            "mapped": self.mapped,
            "fidelity": round(self.fidelity, 6),
            "fidelity_strict": round(self.fidelity_strict, 6),
            "unobserved_actions": list(self.unobserved_actions),
            "extra_actions": list(self.extra_actions),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def table(self, strict: bool = False) -> str:
        """Human-readable summary with one row per action and a total row.

        Effect columns read ``tolerant/strict`` where the two differ; the
        fidelity line uses the strict counts when ``strict`` is set.
        """

        def eff(tol: int, exact: int) -> str:
            return str(tol) if tol == exact else f"{tol}/{exact}"

        rows = [("action", "-P", "+P", "-E", "+E")]
        for a in self.actions:
            rows.append((a.name, str(a.minus_p), str(a.plus_p),
                         eff(a.minus_e_tol, a.minus_e_strict), eff(a.plus_e_tol, a.plus_e_strict)))
        rows.append(("total", str(self.total("minus_p")), str(self.total("plus_p")),
                     eff(self.total("minus_e_tol"), self.total("minus_e_strict")),
                     eff(self.total("plus_e_tol"), self.total("plus_e_strict"))))
        width = max(len(r[0]) for r in rows)
        lines = [f"{r[0]:<{width}}  {r[1]:>4} {r[2]:>4} {r[3]:>5} {r[4]:>5}" for r in rows]
        fid = self.fidelity_strict if strict else self.fidelity
        lines.append(f"fid. {fid:.3f}")
        if self.unobserved_actions:
            lines.append("unobserved: " + " ".join(self.unobserved_actions))
        if self.extra_actions:
            lines.append("not in reference: " + " ".join(self.extra_actions))
        return "\n".join(lines) + "\n"


def diff_domains(learned: Domain, reference: Domain) -> DiffReport:
    mine = {a.name: a for a in learned.actions}
    report = DiffReport()
    for ref in sorted(reference.actions, key=lambda a: a.name):
        if ref.name not in mine:
            report.unobserved_actions.append(ref.name)
            continue
        report.actions.append(diff_action(mine[ref.name], ref, reference.hierarchy))
    ref_names = {a.name for a in reference.actions}
    report.extra_actions = sorted(n for n in mine if n not in ref_names)
    return report


def report_from_dict(data: dict) -> dict:
    """Validate the shape of a serialized report; returns it unchanged."""
    for key in ("actions", "totals", "mapped", "fidelity", "unobserved_actions"):
        if key not in data:
            raise ValueError(f"report lacks {key!r}")
    return data


__all__ = [
    "ActionDiff",
    "DiffReport",
    "align_parameters",
    "diff_action",
    "diff_domains",
    "fidelity",
]
