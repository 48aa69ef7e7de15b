import pytest

from actsynth.model import GroundFact
from actsynth.traces import LabelGroup, Transition


def fact(pred, *args):
    return GroundFact(pred, tuple(args))


def transition(tid, before, after, label="l", objects=None, instance="i"):
    before, after = frozenset(before), frozenset(after)
    if objects is None:
        objects = sorted({o for f in before | after for o in f.args})
    return Transition(tid, instance, before, label, after, {o: "object" for o in objects})


def group(*transitions, label="l"):
    return LabelGroup(label, list(transitions))


@pytest.fixture
def example_group():
    """({}, l, {p(a)}) and ({p(a), p(b)}, l, {p(b)}) over objects a, b."""
    r1 = transition(0, [], [fact("p", "a")], objects=["a", "b"])
    r2 = transition(1, [fact("p", "a"), fact("p", "b")], [fact("p", "b")], objects=["a", "b"])
    return group(r1, r2)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
