from __future__ import annotations

import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from syncfair.syntax import random_ast
from syncfair.traces import ENV, PGM, Lasso, StateSpace, Step

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")

SPACE1 = StateSpace(1)
SPACE2 = StateSpace(2)


@st.composite
def walks(draw, space: StateSpace, start: int, min_len: int = 0, max_len: int = 4):
    n = draw(st.integers(min_len, max_len))
    cur, out = start, []
    for _ in range(n):
        kind = draw(st.sampled_from((PGM, ENV)))
        nxt = draw(st.integers(0, space.size - 1))
        out.append(Step(kind, cur, nxt))
        cur = nxt
    return tuple(out)


@st.composite
def lassos(draw, space: StateSpace = SPACE2, max_prefix: int = 3, max_period: int = 3):
    """Arbitrary (not necessarily canonical) well-formed lassos."""
    s0 = draw(st.integers(0, space.size - 1))
    prefix = draw(walks(space, s0, 0, max_prefix))
    mid = prefix[-1].post if prefix else s0
    body = draw(walks(space, mid, 0, max_period - 1))
    end = body[-1].post if body else mid
    kind = draw(st.sampled_from((PGM, ENV)))
    period = body + (Step(kind, end, mid),)
    return Lasso(s0, prefix, period)


def commands(space: StateSpace = SPACE2, max_depth: int = 3):
    """Random command terms, drawn through a seeded generator."""
    return st.integers(0, 2**32 - 1).map(
        lambda seed: random_ast(random.Random(seed), max_depth, space))
