import pytest
from hypothesis import given
from hypothesis import strategies as st

from actsynth.bundles import load_bundle
from actsynth.errors import ArityMismatch, InconsistentDelta, ParseError, UnknownPredicate
from actsynth.model import PredicateSignature
from actsynth.traces import (
    Step,
    Trace,
    decompose,
    emit_trace,
    min_pars,
    parse_trace,
    transitions,
)

from conftest import fact, group, transition

PREDS = {"p": PredicateSignature("p", ("object",)), "q": PredicateSignature("q", ("object", "object"))}


def trace_text(*steps, init="(p a)"):
    body = "\n".join(f"  (:step {s})" for s in steps)
    return f"(trace (:instance t1) (:objects a b c) (:init {init})\n{body})"


def test_delete_applies():
    tr = parse_trace(trace_text("(:label l) (:del (p a))"), PREDS)
    assert list(tr.states())[-1] == frozenset()


def test_inconsistent_delta():
    with pytest.raises(InconsistentDelta) as exc:
        parse_trace(trace_text("(:label l) (:del (p b))"), PREDS)
    assert exc.value.line == 2
    with pytest.raises(InconsistentDelta):
        parse_trace(trace_text("(:label l) (:add (p a))"), PREDS)


def test_unknown_predicate_and_arity():
    with pytest.raises(UnknownPredicate):
        parse_trace(trace_text("(:label l) (:add (r a))"), PREDS)
    with pytest.raises(ArityMismatch):
        parse_trace(trace_text("(:label l) (:add (q a))"), PREDS)


def test_missing_instance():
    with pytest.raises(ParseError):
        parse_trace("(trace (:objects a) (:init))", PREDS)


def test_four_steps_four_transitions():
    steps = ["(:label l) (:del (p a))", "(:label l) (:add (p b))",
             "(:label m) (:add (q a b))", "(:label m)"]
    tr = parse_trace(trace_text(*steps), PREDS)
    assert len(transitions([tr])) == 4


def test_decompose_counts():
    a = parse_trace(trace_text("(:label pickup)", "(:label drop)", "(:label pickup)"), PREDS)
    b = parse_trace(trace_text("(:label pickup)", "(:label drop)"), PREDS)
    groups = decompose([a, b])
    assert {k: len(g) for k, g in groups.items()} == {"pickup": 3, "drop": 2}
    assert decompose([]) == {}


def test_example_group_decomposes(example_group):
    objs = {"a": "object", "b": "object"}
    t1 = Trace("i1", objs, frozenset(), (Step("l", frozenset({fact("p", "a")})),))
    t2 = Trace("i2", objs, frozenset({fact("p", "a"), fact("p", "b")}),
               (Step("l", frozenset(), frozenset({fact("p", "a")})),))
    groups = decompose([t1, t2])
    assert list(groups) == ["l"] and len(groups["l"]) == 2
    assert min_pars(groups["l"]) == 1
    assert min_pars(example_group) == 1


def test_min_pars_examples():
    assert min_pars(group(transition(0, [fact("p", "a")], [fact("p", "a")]))) == 0
    move = transition(0, [fact("at", "rob", "rooma")], [fact("at", "rob", "roomb")])
    assert min_pars(group(move)) == 3


def test_round_trip_on_walks():
    b = load_bundle("gripper")
    for tr in b.walks(40, seed=3):
        again = parse_trace(emit_trace(tr), b.domain.predicates, b.domain.hierarchy)
        assert again == tr
        assert list(again.states()) == list(tr.states())


@st.composite
def traces(draw):
    objs = ["a", "b", "c"]
    facts = [fact("p", o) for o in objs] + [fact("q", x, y) for x in objs for y in objs]
    init = frozenset(draw(st.sets(st.sampled_from(facts))))
    state, steps = set(init), []
    for _ in range(draw(st.integers(0, 6))):
        dels = draw(st.sets(st.sampled_from(sorted(state)))) if state else set()
        absent = sorted(set(facts) - state)
        adds = draw(st.sets(st.sampled_from(absent))) if absent else set()
        steps.append(Step(draw(st.sampled_from(["l", "m"])), frozenset(adds), frozenset(dels)))
        state = (state - dels) | adds
    return Trace("t", {o: "object" for o in objs}, init, tuple(steps))


@given(traces())
def test_emit_parse_identity(tr):
    again = parse_trace(emit_trace(tr), PREDS)
    assert again == tr
    states = list(again.states())
    for i, s in enumerate(tr.steps):
        assert states[i + 1] == (states[i] - s.deleted) | s.added
    assert sum(len(g) for g in decompose([tr]).values()) == len(tr.steps)


@given(traces(), st.randoms(use_true_random=False))
def test_min_pars_invariant_under_renaming_and_order(tr, rnd):
    objs = sorted(tr.objects)
    perm = dict(zip(objs, rnd.sample(objs, len(objs))))

    def ren(fs):
        return frozenset(fact(f.predicate, *(perm[o] for o in f.args)) for f in fs)

    renamed = Trace("u", tr.objects, ren(tr.init),
                    tuple(Step(s.label, ren(s.added), ren(s.deleted)) for s in tr.steps))
    g1 = decompose([tr, renamed])
    g2 = decompose([renamed, tr])
    assert {k: min_pars(v) for k, v in g1.items()} == {k: min_pars(v) for k, v in g2.items()}
    g3 = decompose([renamed])
    assert {k: min_pars(v) for k, v in decompose([tr]).items()} == {k: min_pars(v) for k, v in g3.items()}

