from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SPACE1, SPACE2, lassos
from syncfair.traces import (ContractViolation, Lasso, StateSpace, Status, Step, Trace, Window,
                             canonicalize_lasso, check_trace, close, is_canonical, iter_lassos,
                             iter_traces, parse_observation)

P = lambda a, b: Step("p", a, b)  # noqa: E731
E = lambda a, b: Step("e", a, b)  # noqa: E731
TERM, ABORT, INC = Status.TERM, Status.ABORT, Status.INC


# -- canonical lassos -------------------------------------------------------

def test_prefix_absorbed_into_period():
    assert canonicalize_lasso(Lasso(0, (E(0, 0),), (E(0, 0),))) == Lasso(0, (), (E(0, 0),))


def test_period_reduced_to_primitive_root():
    assert canonicalize_lasso(Lasso(0, (), (E(0, 0), E(0, 0)))) == Lasso(0, (), (E(0, 0),))


def test_canonical_lasso_unchanged():
    lasso = Lasso(0, (P(0, 1),), (E(1, 1),))
    assert canonicalize_lasso(lasso) == lasso


def test_prefix_rotates_into_period():
    lasso = Lasso(0, (P(0, 1), E(1, 0)), (P(0, 1), E(1, 0)))
    assert canonicalize_lasso(lasso) == Lasso(0, (), (P(0, 1), E(1, 0)))


def test_malformed_lasso_rejected():
    with pytest.raises(ContractViolation):
        canonicalize_lasso(Lasso(0, (P(0, 1),), (E(0, 0),)))
    with pytest.raises(ContractViolation):
        canonicalize_lasso(Lasso(0, (), (P(0, 1),)))


def test_malformed_trace_rejected():
    with pytest.raises(ContractViolation):
        check_trace(Trace(0, (P(1, 1),), TERM))
    with pytest.raises(ContractViolation):
        check_trace(Trace(0, (P(0, 2),), TERM), SPACE2)


@given(lassos())
def test_canonicalize_idempotent(lasso):
    c = canonicalize_lasso(lasso)
    assert canonicalize_lasso(c) == c
    assert is_canonical(c)


@given(lassos())
def test_canonicalize_preserves_the_sequence(lasso):
    c = canonicalize_lasso(lasso)
    n = len(lasso.prefix) + 3 * len(lasso.period)
    assert c.unroll(n) == lasso.unroll(n)


@given(lassos(), st.integers(1, 3))
def test_canonicalize_invariant_under_powering(lasso, k):
    powered = Lasso(lasso.initial, lasso.prefix, lasso.period * k)
    assert canonicalize_lasso(powered) == canonicalize_lasso(lasso)


@given(lassos())
def test_canonicalize_invariant_under_rotation(lasso):
    head, rest = lasso.period[:1], lasso.period[1:]
    rotated = Lasso(lasso.initial, lasso.prefix + head, rest + head)
    assert canonicalize_lasso(rotated) == canonicalize_lasso(lasso)


def test_window_lassos_are_canonical_and_distinct():
    found = list(iter_lassos(SPACE2, 2, 3))
    assert len(found) == len(set(found))
    assert all(is_canonical(l) for l in found)


# -- rendering ----------------------------------------------------------------

def test_rendering():
    assert str(Trace(0, (P(0, 1), E(1, 1)), TERM)) == "0: p(0,1) e(1,1) !term"
    assert str(Trace(1, (), INC)) == "1: !inc"
    assert str(Lasso(0, (P(0, 1),), (E(1, 1),))) == "0: p(0,1) [e(1,1)]^w"


@given(lassos())
def test_observation_text_round_trip(lasso):
    c = canonicalize_lasso(lasso)
    assert parse_observation(str(c)) == c
    t = Trace(lasso.initial, lasso.prefix, ABORT)
    assert parse_observation(str(t)) == t


# -- closure ------------------------------------------------------------------

def test_close_adds_improper_prefix():
    fin, inf = close({Trace(0, (), TERM)}, set(), Window(2, 0, 1), SPACE1)
    assert fin == {Trace(0, (), TERM), Trace(0, (), INC)}
    assert inf == set()


def test_close_abort_gives_everything():
    w = Window(1, 0, 1)
    fin, inf = close({Trace(0, (), ABORT)}, set(), w, SPACE1)
    assert fin == set(iter_traces(SPACE1, 1))
    assert inf == {Lasso(0, (), (P(0, 0),)), Lasso(0, (), (E(0, 0),))}


def test_close_unrolls_lassos():
    lasso = Lasso(0, (), (E(0, 0),))
    fin, inf = close(set(), {lasso}, Window(2, 0, 1), SPACE1)
    assert fin == {Trace(0, (), INC), Trace(0, (E(0, 0),), INC),
                   Trace(0, (E(0, 0), E(0, 0)), INC)}
    assert inf == {lasso}


W = Window(3, 1, 2)


@st.composite
def observation_sets(draw, space: StateSpace = SPACE2):
    traces = set()
    for _ in range(draw(st.integers(0, 3))):
        lasso = draw(lassos(space, 3, 2))
        steps = lasso.unroll(draw(st.integers(0, 3)))
        traces.add(Trace(lasso.initial, steps, draw(st.sampled_from(list(Status)))))
    inf = {canonicalize_lasso(draw(lassos(space, 1, 2))) for _ in range(draw(st.integers(0, 2)))}
    return traces, {l for l in inf if W.fits(l)}


@given(observation_sets())
def test_close_extensive_and_idempotent(obs):
    fin, inf = close(*obs, W, SPACE2)
    assert obs[0] <= fin and obs[1] <= inf
    assert close(fin, inf, W, SPACE2) == (fin, inf)


@given(observation_sets(), observation_sets())
def test_close_monotone(a, b):
    union = (a[0] | b[0], a[1] | b[1])
    fa, ia = close(*a, W, SPACE2)
    fu, iu = close(*union, W, SPACE2)
    assert fa <= fu and ia <= iu


@given(observation_sets())
def test_closed_sets_hold_empty_incomplete_traces(obs):
    fin, inf = close(*obs, W, SPACE2)
    starts = {t.initial for t in fin} | {l.initial for l in inf}
    assert all(Trace(s, (), INC) in fin for s in starts)


def test_window_validation():
    with pytest.raises(ContractViolation):
        Window(1, 0, 0)
    with pytest.raises(ContractViolation):
        Window(-1, 0, 1)
    with pytest.raises(ValueError):
        StateSpace(0)
