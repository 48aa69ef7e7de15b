import itertools
import random
import time

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from actsynth.effects import (
    INCONSISTENT_EFFECT,
    UNEXPLAINED_CHANGE,
    Offense,
    SynthLimits,
    check_witness,
    consistency_clause,
    effects_minimal,
    encode_transition,
    synth_label,
    synth_num_params,
    verify,
)
from actsynth.errors import NoCandidateObjects, ParamBudgetExceeded, TimeLimit
from actsynth.model import ActionSchema, LiftedFact, apply
from actsynth.sat import SolveContext, VarRegistry

from conftest import fact, group, transition


def p(*args):
    return LiftedFact("p", tuple(args))


def renamed_equal(sol, add, delete):
    """Do the effects equal ``add``/``delete`` under some parameter permutation?"""
    for perm in itertools.permutations(range(sol.k)):
        def ren(fs):
            return frozenset(LiftedFact(f.predicate, tuple(perm[a] for a in f.args)) for f in fs)
        if ren(sol.add) == frozenset(add) and ren(sol.delete) == frozenset(delete):
            return True
    return False


def test_example_group(example_group):
    assert synth_num_params(example_group, 1) is None
    sol = synth_label(example_group)
    assert sol.k == 2 and sol.attempts == (1, 2)
    assert renamed_equal(sol, [p(0)], [p(1)])
    assert check_witness(sol.schema(), sol.substitutions, example_group)
    assert effects_minimal(sol)
    # R2 removes p(a) and keeps p(b): whichever parameter carries the add
    # must bind b there
    add_param = next(iter(sol.add)).args[0]
    assert sol.substitutions[1][add_param] == "b"
    assert sol.substitutions[0][add_param] == "a"


def test_example_witness_swapped(example_group):
    schema = ActionSchema("l", ("?x1", "?x2"), ("object",) * 2,
                          add=frozenset({p(0)}), delete=frozenset({p(1)}))
    good = {0: ("a", "b"), 1: ("b", "a")}
    assert check_witness(schema, good, example_group)
    assert not check_witness(schema, {0: ("a", "b"), 1: ("a", "b")}, example_group)
    empty = ActionSchema("l", ("?x1", "?x2"), ("object",) * 2)
    assert not check_witness(empty, good, example_group)
    assert not check_witness(schema, {0: ("a", "b")}, example_group)


def test_empty_deltas_give_zero_params():
    g = group(transition(0, [fact("p", "a")], [fact("p", "a")]), transition(1, [], []))
    sol = synth_label(g)
    assert sol.k == 0 and not sol.add and not sol.delete


def test_single_binary_add():
    g = group(transition(0, [], [fact("q", "a", "b")]))
    sol = synth_label(g)
    assert sol.k == 2 and sol.delete == frozenset()
    assert sol.add in (frozenset({LiftedFact("q", (0, 1))}), frozenset({LiftedFact("q", (1, 0))}))
    assert effects_minimal(sol)


def test_encode_single_add_forces_effect_and_binding():
    reg = VarRegistry()
    ctx = SolveContext(reg)
    r = transition(0, [], [fact("p", "a")])
    encode_transition(ctx, reg, r, 1)
    m = ctx.solve()
    assert m[reg.add("p", (0,))] and m[reg.bind(0, 0, "a")]
    assert ctx.solve([-reg.add("p", (0,))]) is None


def test_encode_no_change_only_binds():
    reg = VarRegistry()
    ctx = SolveContext(reg)
    encode_transition(ctx, reg, transition(0, [fact("p", "a")], [fact("p", "a")]), 1)
    assert reg.effect_vars() == []
    assert [k for k in (reg.key(v) for v in range(1, len(reg) + 1))] == [("bind", 0, 0, "a")]


def test_encode_counts_vectors():
    reg = VarRegistry()
    ctx = SolveContext(reg)
    encode_transition(ctx, reg, transition(0, [], [fact("q", "a", "b")]), 2)
    assert sorted(reg.key(v)[2] for v in reg.effect_vars()) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_no_candidate_objects():
    reg = VarRegistry()
    with pytest.raises(NoCandidateObjects):
        encode_transition(SolveContext(reg), reg, transition(0, [], [], objects=[]), 1)


def test_verify_examples():
    reg = VarRegistry()
    add = reg.add("p", (0,))
    assert verify(reg, [add], transition(0, [], [fact("p", "a")]), 1) == ("a",)
    off = verify(reg, [add], transition(1, [fact("q", "a")], [fact("q", "a")]), 1)
    assert isinstance(off, Offense) and off.transition == 1

    reg = VarRegistry()
    add, dele = reg.add("p", (0,)), reg.delete("p", (1,))
    r2 = transition(2, [fact("p", "a"), fact("p", "b")], [fact("p", "b")])
    assert verify(reg, [add, dele], r2, 2) == ("b", "a")


def test_offense_kinds():
    reg = VarRegistry()
    add = reg.add("p", (0,))
    # nothing can produce a q fact
    off = verify(reg, [add], transition(0, [], [fact("q", "a")]), 1)
    assert off.kind == UNEXPLAINED_CHANGE and off.detail == fact("q", "a")
    # p(x1) can produce p(a), but it would also produce p(b) under x1 -> b
    r = transition(1, [], [fact("p", "a"), fact("r", "b")])
    reg2 = VarRegistry()
    a0, r0 = reg2.add("p", (0,)), reg2.add("r", (0,))
    off = verify(reg2, [a0, r0], r, 1)
    assert off.kind == INCONSISTENT_EFFECT
    assert off.detail in (r.added ^ frozenset())


def test_consistency_clause_shapes():
    reg = VarRegistry()
    add = reg.add("p", (0, 1))
    b1, b2 = reg.bind(0, 0, "a"), reg.bind(0, 1, "b")
    assert consistency_clause(reg, add, [b1, b2]) == [-add, -b1, -b2]
    z = reg.add("z", ())
    assert consistency_clause(reg, z, []) == [-z]
    d = reg.delete("p", (0, 1))
    assert consistency_clause(reg, d, [b1, b2]) == [-d, -b1, -b2]
    assert consistency_clause(reg, add, [b1, b1]) == [-add, -b1]


def test_param_budget_exceeded(example_group):
    with pytest.raises(ParamBudgetExceeded):
        synth_label(example_group, SynthLimits(max_extra_params=0))


def test_time_limit(example_group):
    with pytest.raises(TimeLimit):
        synth_label(example_group, SynthLimits(deadline=time.monotonic() - 1))


def test_noop_steps_alongside_moves():
    rooms = ["r1", "r2", "r3"]
    ts = [
        transition(0, [fact("at", "r1")], [fact("at", "r2")], objects=rooms),
        transition(1, [fact("at", "r2")], [fact("at", "r2")], objects=rooms),
        transition(2, [fact("at", "r2")], [fact("at", "r3")], objects=rooms),
        transition(3, [fact("at", "r3")], [fact("at", "r1")], objects=rooms),
    ]
    g = group(*ts)
    sol = synth_label(g)
    assert sol.k == 2
    assert check_witness(sol.schema(), sol.substitutions, g)
    assert effects_minimal(sol)


def test_deterministic(example_group):
    a = synth_label(example_group)
    b = synth_label(example_group)
    assert (a.add, a.delete, a.substitutions) == (b.add, b.delete, b.substitutions)


def test_dedup_does_not_change_result():
    rooms = ["r1", "r2"]
    ts = [transition(i, [fact("at", "r1")], [fact("at", "r2")], objects=rooms) for i in range(5)]
    a = synth_label(group(*ts), SynthLimits(dedup=True))
    b = synth_label(group(*ts), SynthLimits(dedup=False))
    assert (a.k, a.add, a.delete) == (b.k, b.add, b.delete)
    assert len(a.substitutions) == 5


PREDS = [("p", 1), ("q", 2)]


@st.composite
def planted(draw):
    """A random schema with k parameters and transitions it explains."""
    k = draw(st.integers(1, 3))
    lifted = [LiftedFact(n, v) for n, a in PREDS for v in itertools.product(range(k), repeat=a)]
    pre = draw(st.sets(st.sampled_from(lifted), max_size=3))
    delete = draw(st.sets(st.sampled_from(sorted(pre)), max_size=2)) if pre else set()
    rest = [f for f in lifted if f not in delete]
    add = draw(st.sets(st.sampled_from(rest), max_size=2)) if rest else set()
    schema = ActionSchema("l", tuple(f"?x{i}" for i in range(k)), ("object",) * k,
                          frozenset(pre), frozenset(add), frozenset(delete))
    objs = ["a", "b", "c", "d"][: draw(st.integers(k, 4))]
    ground = [fact(n, *v) for n, a in PREDS for v in itertools.product(objs, repeat=a)]
    rnd = random.Random(draw(st.integers(0, 2**16)))
    ts = []
    for i in range(draw(st.integers(1, 4))):
        sub = tuple(rnd.choice(objs) for _ in range(k))
        before = {f for f in ground if rnd.random() < 0.3}
        before |= {fact(f.predicate, *(sub[x] for x in f.args)) for f in pre}
        after = apply(frozenset(before), schema, sub)
        ts.append(transition(i, before, after, objects=objs))
    return schema, group(*ts)


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(planted())
def test_planted_schema_is_found_at_its_arity(case):
    schema, g = case
    sol = synth_num_params(g, schema.arity)
    assert sol is not None
    assert check_witness(sol.schema(), sol.substitutions, g)
    assert effects_minimal(sol)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(planted())
def test_k_never_below_min_pars(case):
    _, g = case
    sol = synth_label(g)
    assert sol.k >= g.min_pars
    assert list(sol.attempts) == list(range(g.min_pars, sol.k + 1))
