from __future__ import annotations

import pytest
from hypothesis import given

from conftest import SPACE1, SPACE2, commands
from syncfair.denotation import (ResourceLimitError, can_abort, denote, is_member, statuses,
                                 walk_prefixes)
from syncfair.machine import Compiler
from syncfair.oracle import Oracle, oracle_member
from syncfair.syntax import Choice, Conj, Fin, Nil, Om, Par, Seq, parse
from syncfair.traces import Lasso, Status, Step, Trace, Window, close, iter_lassos, iter_traces

P = lambda a, b: Step("p", a, b)  # noqa: E731
E = lambda a, b: Step("e", a, b)  # noqa: E731
TERM, ABORT, INC = Status.TERM, Status.ABORT, Status.INC


def test_nil():
    den = denote(parse("nil"), SPACE1, Window(2, 0, 1))
    assert den.finite == {Trace(0, (), TERM), Trace(0, (), INC)}
    assert not den.infinite


def test_om_eps():
    den = denote(parse("om(eps)"), SPACE1, Window(1, 0, 1))
    assert den.finite == {Trace(0, (), TERM), Trace(0, (), INC),
                          Trace(0, (E(0, 0),), TERM), Trace(0, (E(0, 0),), INC)}
    assert den.infinite == {Lasso(0, (), (E(0, 0),))}


@pytest.mark.parametrize("space", [SPACE1, SPACE2])
def test_pi_par_pi_is_magic(space):
    w = Window(3, 2, 2)
    den = denote(parse("pi || pi"), space, w)
    assert den.finite == {Trace(s, (), INC) for s in space.states}
    assert not den.infinite
    assert den == denote(parse("magic"), space, w)


def test_abort_is_everything():
    w = Window(2, 1, 2)
    den = denote(parse("abort"), SPACE2, w)
    assert den.finite == set(iter_traces(SPACE2, 2))
    assert den.infinite == set(iter_lassos(SPACE2, 1, 2))


@pytest.mark.parametrize("space", [SPACE1, SPACE2])
@pytest.mark.parametrize("w", [Window(0, 0, 1), Window(2, 1, 2), Window(5, 3, 3)])
def test_term_fair_is_finite_alpha(space, w):
    assert denote(parse("term && fair"), space, w) == denote(parse("fin(alpha)"), space, w)


def test_oracle_examples():
    assert oracle_member(Trace(0, (E(0, 0),), TERM), parse("om(eps)"), SPACE1)
    assert not oracle_member(Lasso(0, (), (E(0, 0),)), parse("fin(eps)"), SPACE1)
    assert not oracle_member(Trace(0, (P(0, 0),), INC), parse("magic ; pi"), SPACE1)
    assert oracle_member(Trace(0, (), INC), parse("magic ; pi"), SPACE1)


def test_membership_from_machine():
    assert is_member(Lasso(0, (), (E(0, 0),)), parse("skip"), SPACE2)
    assert not is_member(Lasso(0, (), (E(0, 0),)), parse("fair"), SPACE2)
    assert is_member(Lasso(1, (P(1, 0),), (E(0, 0), P(0, 0))), parse("fair"), SPACE2)


def test_resource_cap():
    with pytest.raises(ResourceLimitError):
        denote(parse("chaos"), SPACE2, Window(5, 3, 3), cap=100)


def test_can_abort():
    assert can_abort(parse("abort"), SPACE2)
    assert can_abort(parse("pi ; inf(nil)"), SPACE2)
    assert not can_abort(parse("term && pi ; magic"), SPACE2)
    # the aborting tail needs a step from state 1, which a one-state space lacks
    assert can_abort(parse("pgm{(1,1)} ; abort"), SPACE2)
    assert not can_abort(parse("pgm{(0,1)} ; pgm{(0,0)} ; abort"), SPACE2)


W = Window(3, 1, 2)


@given(commands(SPACE2, 3))
def test_denotations_closed_and_nonempty(c):
    den = denote(c, SPACE2, W)
    assert close(den.finite, den.infinite, W, SPACE2) == (den.finite, den.infinite)
    assert all(Trace(s, (), INC) in den.finite for s in SPACE2.states)


@given(commands(SPACE2, 3))
def test_unfold_laws(c):
    for F in (Fin, Om):
        assert denote(F(c), SPACE2, W) == denote(Choice((Nil(), Seq(c, F(c)))), SPACE2, W)


@given(commands(SPACE2, 3))
def test_sync_operators_commute(c):
    d = parse("fin(pi) ; skip")
    for op in (Par, Conj):
        assert denote(op(c, d), SPACE2, W) == denote(op(d, c), SPACE2, W)


@given(commands(SPACE2, 3))
def test_state_merging_preserves_windows(c):
    """Eagerly reduced and purely lazy machines give the same window."""
    lazy = Compiler(SPACE2, reduce_limit=0)(c)
    eager = Compiler(SPACE2)(c)
    for s0 in SPACE2.states:
        a = {(p, statuses(lazy, S)) for p, S in walk_prefixes(lazy, SPACE2, s0, 3)}
        b = {(p, statuses(eager, S)) for p, S in walk_prefixes(eager, SPACE2, s0, 3)}
        assert a == b
    for lasso in iter_lassos(SPACE2, 1, 2):
        assert (lazy.accepts_period(lazy.run(lasso.prefix), lasso.period)
                == eager.accepts_period(eager.run(lasso.prefix), lasso.period))


@given(commands(SPACE1, 3))
def test_oracle_agrees_on_random_terms(c):
    den = denote(c, SPACE1, W)
    oracle = Oracle(SPACE1)
    for obs in list(iter_traces(SPACE1, W.N)) + list(iter_lassos(SPACE1, W.K, W.L)):
        assert oracle.member(obs, c) == (obs in den), obs
