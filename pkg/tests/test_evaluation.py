import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from actsynth.bundles import load_bundle
from actsynth.evaluation import align_parameters, diff_action, diff_domains, fidelity, report_from_dict
from actsynth.model import ActionSchema, LiftedFact, TypeHierarchy
from actsynth.pddl import Domain, parse_domain


def lf(pred, *args):
    return LiftedFact(pred, tuple(args))


BARMAN = TypeHierarchy({"shot": "container", "ingredient": "beverage", "cocktail": "beverage"})


def schema(name, types, pre=(), add=(), delete=()):
    return ActionSchema(name, tuple(f"?x{i}" for i in range(len(types))), tuple(types),
                        frozenset(pre), frozenset(add), frozenset(delete))


def test_fidelity_examples():
    assert fidelity(10, 0, 0, 0, 0) == 1.0
    assert fidelity(10, 0, 5, 0, 0) == pytest.approx(10 / 11)
    assert fidelity(20, 0, 1, 0, 0) == pytest.approx(0.990, abs=5e-4)
    assert fidelity(0, 0, 0, 0, 0) == 1.0
    with pytest.raises(ValueError):
        fidelity(1, -1, 0, 0, 0)


counts = st.integers(0, 50)


@given(counts, counts, counts, counts, counts, st.integers(0, 4), st.integers(0, 4))
def test_fidelity_monotone(m, a, b, c, d, which, bump):
    base = [m, a, b, c, d]
    f0 = fidelity(*base)
    assert 0.0 <= f0 <= 1.0
    more = list(base)
    more[which] += bump
    f1 = fidelity(*more)
    if which == 0:
        assert f1 >= f0
    else:
        assert f1 <= f0


def test_identity_alignment():
    a = schema("a", ["object", "object"], pre=[lf("p", 0)], add=[lf("q", 0, 1)], delete=[lf("p", 0)])
    assert align_parameters(a, a, BARMAN) == {0: 0, 1: 1}
    d = diff_action(a, a, BARMAN)
    assert (d.minus_p, d.plus_p, d.minus_e_tol, d.plus_e_tol) == (0, 0, 0, 0)
    assert d.mapped == 3


def test_extra_unused_parameter():
    ref = schema("a", ["object"], pre=[lf("p", 0)], add=[lf("q", 0)])
    learned = schema("a", ["object", "object"], pre=[lf("p", 1)], add=[lf("q", 1)])
    al = align_parameters(learned, ref, BARMAN)
    assert al == {1: 0}
    d = diff_action(learned, ref, BARMAN)
    assert (d.minus_p, d.plus_p, d.minus_e_tol, d.plus_e_tol, d.mapped) == (0, 0, 0, 0, 2)


def test_clean_shot_strict_vs_tolerant():
    ref = schema("clean-shot", ["shot", "beverage"], pre=[lf("used", 0, 1)],
                 add=[lf("clean", 0)], delete=[lf("used", 0, 1)])
    learned = schema("clean-shot", ["shot", "ingredient"], pre=[lf("used", 0, 1)],
                     add=[lf("clean", 0)], delete=[lf("used", 0, 1)])
    d = diff_action(learned, ref, BARMAN)
    assert (d.minus_e_tol, d.plus_e_tol) == (0, 0)
    assert (d.minus_e_strict, d.plus_e_strict) == (1, 1)
    assert d.alignment == {0: 0, 1: 1} and d.alignment_strict == {0: 0}


def test_ties_pick_smallest_map():
    ref = schema("a", ["object", "object"], add=[lf("p", 0), lf("p", 1)])
    learned = schema("a", ["object", "object"], add=[lf("p", 0), lf("p", 1)])
    assert align_parameters(learned, ref, BARMAN) == {0: 0, 1: 1}


def domain_of(*actions, h=BARMAN):
    return Domain("d", h, {}, tuple(actions))


def test_diff_domains_counts_and_missing():
    ref_a = schema("a", ["object"], pre=[lf("p", 0), lf("r", 0)], add=[lf("q", 0)])
    ref_b = schema("b", ["object"], add=[lf("q", 0)])
    learned_a = schema("a", ["object"], pre=[lf("p", 0)], add=[lf("q", 0)])
    extra = schema("c", ["object"])
    rep = diff_domains(domain_of(learned_a, extra), domain_of(ref_a, ref_b))
    assert rep.total("minus_p") == 1
    assert rep.unobserved_actions == ["b"]
    assert rep.extra_actions == ["c"]
    data = json.loads(rep.to_json())
    assert report_from_dict(data) is data
    assert data["totals"]["minusP"] == 1 and data["unobserved_actions"] == ["b"]
    assert set(data["actions"][0]) >= {"name", "minusP", "plusP", "minusE_tol", "plusE_tol",
                                        "minusE_strict", "plusE_strict"}
    with pytest.raises(ValueError):
        report_from_dict({"actions": []})


def test_identical_domain_fidelity_one():
    d = load_bundle("transport").domain
    rep = diff_domains(d, d)
    assert rep.fidelity == 1.0 and rep.fidelity_strict == 1.0
    assert "fid. 1.000" in rep.table()


def test_transport_style_totals():
    ref = load_bundle("transport").domain
    drive = ref.action("drive")
    learned_drive = ActionSchema(drive.name, drive.params, drive.param_types,
                                 drive.pre | {lf("road", 2, 1)}, drive.add, drive.delete)
    learned = Domain(ref.name, ref.hierarchy, ref.predicates,
                     tuple(learned_drive if a.name == "drive" else a for a in ref.actions))
    rep = diff_domains(learned, ref)
    totals = tuple(rep.total(k) for k in ("minus_p", "plus_p", "minus_e_tol", "plus_e_tol"))
    assert totals == (0, 1, 0, 0)
    assert rep.mapped == 20
    assert f"{rep.fidelity:.3f}" == "0.990"


H = TypeHierarchy({"a": "object", "b": "a", "c": "object"})
TYPES = sorted(H.types)


@st.composite
def schema_pairs(draw):
    def one(k):
        types = draw(st.lists(st.sampled_from(TYPES), min_size=k, max_size=k))
        lifted = [lf(p, *v) for p, n in (("p", 1), ("q", 2)) for v in itertools.product(range(k), repeat=n)]
        sets = [draw(st.sets(st.sampled_from(lifted), max_size=3)) if lifted else set() for _ in range(3)]
        return schema("x", types, *sets)
    return one(draw(st.integers(0, 3))), one(draw(st.integers(0, 3)))


@settings(max_examples=300)
@given(schema_pairs())
def test_strict_counts_dominate_tolerant(pair):
    learned, ref = pair
    d = diff_action(learned, ref, H)
    assert d.minus_e_strict >= d.minus_e_tol >= 0
    assert d.plus_e_strict >= d.plus_e_tol >= 0
    assert min(d.minus_p, d.plus_p, d.mapped) >= 0


@settings(max_examples=200)
@given(schema_pairs(), st.randoms(use_true_random=False))
def test_diff_invariant_under_renaming(pair, rnd):
    learned, ref = pair
    perm = list(range(learned.arity))
    rnd.shuffle(perm)

    def ren(fs):
        return frozenset(LiftedFact(f.predicate, tuple(perm[a] for a in f.args)) for f in fs)

    types = [None] * learned.arity
    for i, t in enumerate(learned.param_types):
        types[perm[i]] = t
    renamed = schema("x", types, ren(learned.pre), ren(learned.add), ren(learned.delete))
    a, b = diff_action(learned, ref, H), diff_action(renamed, ref, H)
    key = ("minus_p", "plus_p", "minus_e_tol", "plus_e_tol", "minus_e_strict", "plus_e_strict", "mapped")
    assert [getattr(a, k) for k in key] == [getattr(b, k) for k in key]


def test_table_shows_strict_counts():
    ref = schema("clean-shot", ["shot", "beverage"], delete=[lf("used", 0, 1)])
    learned = schema("clean-shot", ["shot", "ingredient"], delete=[lf("used", 0, 1)])
    rep = diff_domains(domain_of(learned), domain_of(ref))
    text = rep.table()
    assert "0/1" in text
    assert rep.table(strict=True).splitlines()[-1] == f"fid. {rep.fidelity_strict:.3f}"


def test_parsed_pddl_comparison():
    text = """
    (define (domain t) (:requirements :strips :typing) (:types pos)
      (:predicates (at ?p - pos) (adj ?a ?b - pos))
      (:action go :parameters (?a ?b - pos) :precondition (and (at ?a) (adj ?a ?b))
        :effect (and (at ?b) (not (at ?a)))))
    """
    renamed = text.replace("?a", "?z")
    rep = diff_domains(parse_domain(renamed), parse_domain(text))
    assert rep.fidelity == 1.0
