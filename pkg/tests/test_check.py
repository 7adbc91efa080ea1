from __future__ import annotations

import random

from hypothesis import given, settings

from conftest import SPACE1, SPACE2, commands
from syncfair.check import (LHS, RHS, Relation, check_equal, check_refines, compare, diagnostics)
from syncfair.denotation import denote
from syncfair.oracle import Oracle
from syncfair.syntax import Choice, Conj, Fair, parse, random_ast
from syncfair.traces import Lasso, Step, Window

W = Window(5, 3, 3)
E = lambda a, b: Step("e", a, b)  # noqa: E731


def eq(a: str, b: str, space=SPACE2, w=W):
    return check_equal(parse(a), parse(b), space, w)


def ref(a: str, b: str, space=SPACE2, w=W):
    return check_refines(parse(a), parse(b), space, w)


def test_fair_fair():
    v = eq("fair ; fair", "fair")
    assert v.holds and v.relation is Relation.EQUAL and v.witness is None
    assert v.describe() == "Equal (up to window (N=5, K=3, L=3))"


def test_fin_eps_differs_from_om_eps_by_a_lasso():
    v = eq("fin(eps)", "om(eps)")
    assert not v.holds
    assert v.relation is Relation.REFINED_BY
    assert v.witness.side == RHS
    assert v.witness.observation == Lasso(0, (), (E(0, 0),))


def test_skip_fair():
    assert eq("skip && fair", "fin(eps)").holds


def test_chaos_refined_by_fair():
    v = ref("chaos", "fair")
    assert v.holds and v.relation is Relation.REFINES
    assert v.describe() == "RefinesTo (up to window (N=5, K=3, L=3))"


def test_fair_not_refined_by_chaos():
    v = ref("fair", "chaos")
    assert not v.holds
    assert v.witness.side == RHS
    obs = v.witness.observation
    assert isinstance(obs, Lasso) and all(s.kind == "e" for s in obs.period)


def test_incomparable():
    v = eq("pi", "eps")
    assert v.relation is Relation.INCOMPARABLE
    assert set(compare(parse("pi"), parse("eps"), SPACE2, W)) == {LHS, RHS}


def test_introduce_fair_on_random_commands():
    rng = random.Random(11)
    for _ in range(100):
        c = random_ast(rng, 3, SPACE2)
        assert check_refines(c, Conj(c, Fair()), SPACE2, W).holds


SMALL = Window(3, 2, 2)


@given(commands(SPACE2, 4))
def test_equal_to_itself(c):
    assert check_equal(c, c, SPACE2, W).holds


def test_refinement_is_choice_equality():
    rng = random.Random(5)
    for _ in range(200):
        c, d = random_ast(rng, 3, SPACE2), random_ast(rng, 3, SPACE2)
        assert check_refines(c, d, SPACE2, SMALL).holds == \
            check_equal(Choice((c, d)), c, SPACE2, SMALL).holds


@given(commands(SPACE2, 3), commands(SPACE2, 3))
def test_fast_comparison_matches_materialized_windows(c, d):
    a, b = denote(c, SPACE2, SMALL), denote(d, SPACE2, SMALL)
    v = check_equal(c, d, SPACE2, SMALL)
    assert v.holds == (a == b)
    if not v.holds:
        obs = v.witness.observation
        inside, outside = (a, b) if v.witness.side == LHS else (b, a)
        assert obs in inside and obs not in outside
    r = check_refines(c, d, SPACE2, SMALL)
    assert r.holds == (b.finite <= a.finite and b.infinite <= a.infinite)


@settings(max_examples=40)
@given(commands(SPACE1, 3), commands(SPACE1, 3))
def test_witnesses_valid_under_oracle(c, d):
    w = Window(3, 1, 2)
    v = check_equal(c, d, SPACE1, w)
    if v.holds:
        return
    oracle = Oracle(SPACE1)
    obs = v.witness.observation
    mine, other = (c, d) if v.witness.side == LHS else (d, c)
    assert oracle.member(obs, mine) and not oracle.member(obs, other)


def test_diagnostics():
    d = diagnostics(parse("pi ; magic"), SPACE2, W)
    assert (d.has_terminated, d.has_aborted, d.has_lasso) == (False, False, False)
    assert d.progress_horizon == 1
    d = diagnostics(parse("om(pi)"), SPACE2, W)
    assert d.has_terminated and d.has_lasso and d.progress_horizon is None
    assert diagnostics(parse("abort"), SPACE2, W).has_aborted
    assert set(d.as_dict()) == {"has_terminated", "has_aborted", "has_lasso",
                                "progress_horizon", "longest_trace"}
