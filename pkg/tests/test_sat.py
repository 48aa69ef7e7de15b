import itertools
import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from actsynth.errors import TimeLimit, UnregisteredVar
from actsynth.sat import CSolver, PySolver, SolveContext, VarRegistry, exactly_one, minimize_true
from actsynth.sat._pycdcl import luby

BACKENDS = [PySolver] + ([CSolver] if CSolver is not None else [])
backend = pytest.mark.parametrize("solver_cls", BACKENDS, ids=lambda c: c.backend)


def ctx_with(solver_cls, n):
    reg = VarRegistry()
    vs = [reg.var(("x", i)) for i in range(n)]
    return SolveContext(reg, solver=solver_cls()), vs


def brute(n, clauses, assumptions=()):
    for bits in itertools.product((False, True), repeat=n):
        def val(lit):
            return bits[abs(lit) - 1] if lit > 0 else not bits[abs(lit) - 1]
        if all(val(a) for a in assumptions) and all(any(val(x) for x in c) for c in clauses):
            return True
    return False


@backend
def test_unit_and_conflict(solver_cls):
    ctx, (v,) = ctx_with(solver_cls, 1)
    ctx.add_clause([v])
    assert ctx.solve()[v]
    ctx.add_clause([-v])
    assert ctx.solve() is None


@backend
def test_empty_store_sat(solver_cls):
    ctx, _ = ctx_with(solver_cls, 0)
    assert ctx.solve() is not None


@backend
def test_assumptions(solver_cls):
    ctx, (a, b) = ctx_with(solver_cls, 2)
    ctx.add_clause([a, b])
    m = ctx.solve([-a])
    assert m[b] and not m[a]
    ctx.add_clause([-a, -b])
    assert ctx.solve([-a, -b]) is None
    # the context stays usable after an UNSAT answer under assumptions
    assert ctx.solve([a]) is not None


@backend
def test_exactly_one_enumerated(solver_cls):
    ctx, vs = ctx_with(solver_cls, 3)
    exactly_one(ctx, vs)
    models = []
    for bits in itertools.product((False, True), repeat=3):
        lits = [v if b else -v for v, b in zip(vs, bits)]
        if ctx.solve(lits) is not None:
            models.append(bits)
    assert sorted(models) == sorted([(True, False, False), (False, True, False), (False, False, True)])


@backend
def test_minimize_examples(solver_cls):
    ctx, (a, b) = ctx_with(solver_cls, 2)
    ctx.add_clause([a, b])
    m = minimize_true(ctx, [a, b])
    assert m[a] + m[b] == 1

    ctx, (a,) = ctx_with(solver_cls, 1)
    ctx.add_clause([a])
    assert minimize_true(ctx, [a])[a]

    ctx, (a, b, c) = ctx_with(solver_cls, 3)
    ctx.add_clause([a, b])
    ctx.add_clause([a, c])
    # prefer the two-variable cover first so minimisation has work to do
    ctx.solve([-a])
    m = minimize_true(ctx, [a, b, c])
    assert m.true_vars([a, b, c]) in ([a], [b, c])


@backend
def test_minimize_covering_model(solver_cls):
    # with a, b, c all candidates the scan order decides; {a} alone is the
    # unique minimal model containing a
    ctx, (a, b, c) = ctx_with(solver_cls, 3)
    ctx.add_clause([a, b])
    ctx.add_clause([a, c])
    m = minimize_true(ctx, [b, c, a], base_assumptions=[a])
    assert m.true_vars([a, b, c]) == [a]


def test_minimize_needs_sat():
    ctx, (a,) = ctx_with(PySolver, 1)
    ctx.add_clause([a])
    with pytest.raises(ValueError):
        minimize_true(ctx, [a], [-a])


cnf = st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])), min_size=1, max_size=3),
             max_size=20),
    st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])), max_size=3),
))


@settings(max_examples=300, deadline=None)
@given(cnf)
def test_backends_match_brute_force(case):
    n, clauses, assumptions = case
    want = brute(n, clauses, assumptions)
    for cls in BACKENDS:
        ctx, vs = ctx_with(cls, n)
        for c in clauses:
            ctx.add_clause([vs[abs(x) - 1] * (1 if x > 0 else -1) for x in c])
        m = ctx.solve([vs[abs(x) - 1] * (1 if x > 0 else -1) for x in assumptions])
        assert (m is not None) == want
        if m is not None:
            for c in clauses:
                assert any(m.value(vs[abs(x) - 1] * (1 if x > 0 else -1)) for x in c)


@settings(max_examples=100, deadline=None)
@given(cnf)
def test_minimize_is_subset_minimal(case):
    n, clauses, _ = case
    if not brute(n, clauses):
        return
    ctx, vs = ctx_with(PySolver, n)
    for c in clauses:
        ctx.add_clause([vs[abs(x) - 1] * (1 if x > 0 else -1) for x in c])
    m = minimize_true(ctx, vs)
    true = m.true_vars(vs)
    negs = [-v for v in vs if v not in true]
    for v in true:
        assert ctx.solve([*negs, -v]) is None


def random_3sat(n, m, seed):
    rnd = random.Random(seed)
    return [[rnd.choice((1, -1)) * v for v in rnd.sample(range(1, n + 1), 3)] for _ in range(m)]


@pytest.mark.skipif(CSolver is None, reason="compiled backend not built")
@pytest.mark.parametrize("seed", range(8))
def test_backends_take_identical_decisions(seed):
    clauses = random_3sat(60, 255, seed)
    out = []
    for cls in (PySolver, CSolver):
        s = cls()
        for _ in range(60):
            s.new_var()
        for c in clauses:
            s.add_clause(c)
        res = s.solve([1, -2])
        out.append((res, s.get_model() if res == 1 else None))
    assert out[0] == out[1]


@backend
def test_incremental_reuse(solver_cls):
    clauses = random_3sat(40, 170, 5)
    ctx, vs = ctx_with(solver_cls, 40)
    for c in clauses:
        ctx.add_clause([vs[abs(x) - 1] * (1 if x > 0 else -1) for x in c])
    first = ctx.solve([vs[0]]) is not None
    again = ctx.solve([vs[0]]) is not None
    assert first == again


@backend
def test_deadline(solver_cls):
    reg = VarRegistry()
    ctx = SolveContext(reg, deadline=time.monotonic() - 1, solver=solver_cls())
    v = reg.var(("x", 0))
    ctx.add_clause([v])
    with pytest.raises(TimeLimit):
        ctx.solve()


def test_hard_instance_hits_deadline():
    # pigeonhole 9 into 8 is far beyond a 50 ms budget for plain CDCL
    reg = VarRegistry()
    ctx = SolveContext(reg, deadline=time.monotonic() + 0.05, solver=PySolver())
    x = {(p, h): reg.var(("x", p, h)) for p in range(9) for h in range(8)}
    for p in range(9):
        ctx.add_clause([x[p, h] for h in range(8)])
    for h in range(8):
        for p, q in itertools.combinations(range(9), 2):
            ctx.add_clause([-x[p, h], -x[q, h]])
    with pytest.raises(TimeLimit):
        ctx.solve()


def test_registry_round_trip():
    reg = VarRegistry()
    keys = [("bind", 0, 1, "a"), ("add", "p", (0,)), ("del", "p", (1,)), ("aux", 9)]
    vs = [reg.var(k) for k in keys]
    assert [reg.key(v) for v in vs] == keys
    assert [reg.var(reg.key(v)) for v in vs] == vs
    assert reg.effect_vars() == [vs[1], vs[2]]
    assert reg.bind(0, 1, "a") == vs[0]
    with pytest.raises(UnregisteredVar):
        reg.key(99)


def test_unregistered_var_in_clause():
    ctx, _ = ctx_with(PySolver, 1)
    with pytest.raises(UnregisteredVar):
        ctx.add_clause([5])
    with pytest.raises(ValueError):
        ctx.add_clause([])


def test_dimacs_dump():
    reg = VarRegistry()
    ctx = SolveContext(reg, solver=PySolver(), record=True)
    a, b = reg.add("p", (0,)), reg.bind(0, 0, "x")
    ctx.add_clause([a, -b])
    text = ctx.to_dimacs()
    assert "p cnf 2 1" in text
    assert "1 -2 0" in text
    assert "c 1 add p (0,)" in text


def test_luby_sequence():
    assert [luby(2, i) for i in range(7)] == [1, 1, 2, 1, 1, 2, 4]
