"""Window equality and refinement with counterexamples, plus diagnostics.

Refinement ``c [= d`` holds when every observation of ``d`` is one of ``c``
(``d`` implements ``c``).  Confirmations are only up to the window used;
refutations are exact because each witness is a genuine member of one side
and not the other.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .denotation import statuses
from .machine import BOT_SET, Machine, compile_command
from .syntax import Cmd
from .traces import Lasso, StateSpace, Status, Trace, Window, iter_cycles

LHS = "lhs"
RHS = "rhs"


class Relation(enum.Enum):
    EQUAL = "Equal"
    REFINES = "RefinesTo"        # window(rhs) is a proper subset of window(lhs)
    REFINED_BY = "RefinedBy"     # window(lhs) is a proper subset of window(rhs)
    INCOMPARABLE = "Incomparable"


class Witness(NamedTuple):
    side: str                    # the side whose window contains the observation
    observation: Trace | Lasso

    def __str__(self) -> str:
        return f"{self.side}: {self.observation}"


@dataclass(frozen=True)
class Verdict:
    claim: str                   # "equal" or "refines"
    relation: Relation
    holds: bool
    witness: Optional[Witness]
    window: Window

    def describe(self) -> str:
        if self.holds:
            what = "Equal" if self.claim == "equal" else "RefinesTo"
            return f"{what} (up to window {self.window})"
        return f"refuted: {self.relation.value}; witness only in {self.witness}"


def _relation(lhs_only: bool, rhs_only: bool) -> Relation:
    if lhs_only and rhs_only:
        return Relation.INCOMPARABLE
    if lhs_only:
        return Relation.REFINES
    if rhs_only:
        return Relation.REFINED_BY
    return Relation.EQUAL


def _differences(m1: Machine, m2: Machine, space: StateSpace, w: Window,
                 want: frozenset[str]) -> dict[str, Trace | Lasso]:
    """First observation (shortest finite traces first, then lassos) found
    only on each wanted side.  Searches the product of the two run-set
    automata, skipping product states already explored at smaller depth."""
    found: dict[str, Trace | Lasso] = {}

    def note(side: str, obs) -> bool:
        if side in want and side not in found:
            found[side] = obs
        return want <= found.keys()

    # finite traces, breadth first over all initial states together
    seen = set()
    layer = []
    for s0 in space.states:
        node = (s0, m1.initial(), m2.initial())
        if node not in seen:
            seen.add(node)
            layer.append((s0, (), node))
    for depth in range(w.N + 1):
        nxt = []
        for s0, path, (cur, S1, S2) in layer:
            st1, st2 = statuses(m1, S1), statuses(m2, S2)
            if st1 != st2:
                for st in (Status.INC, Status.TERM, Status.ABORT):
                    if (st in st1) != (st in st2):
                        if note(LHS if st in st1 else RHS, Trace(s0, path, st)):
                            return found
            if depth == w.N or (not S1 and not S2) or (S1 == BOT_SET and S2 == BOT_SET):
                continue
            for s in space.steps_from(cur):
                node = (s.post, m1.advance(S1, s), m2.advance(S2, s))
                if node not in seen:
                    seen.add(node)
                    nxt.append((s0, path + (s,), node))
        layer = nxt

    # lassos: prefixes breadth first, keyed also by the last step because
    # canonical lassos may not end their prefix with the period's last step
    cycles = {q: list(iter_cycles(space, q, w.L)) for q in space.states}
    seen_l = set()
    queue: deque = deque()
    for s0 in space.states:
        node = (s0, m1.initial(), m2.initial(), None)
        if node not in seen_l:
            seen_l.add(node)
            queue.append((s0, (), node))
    while queue:
        s0, path, (cur, S1, S2, last) = queue.popleft()
        if not S1 and not S2:
            continue
        if not (S1 == BOT_SET and S2 == BOT_SET):
            for cyc in cycles[cur]:
                if last is not None and last == cyc[-1]:
                    continue
                a1, a2 = m1.accepts_period(S1, cyc), m2.accepts_period(S2, cyc)
                if a1 != a2 and note(LHS if a1 else RHS, Lasso(s0, path, cyc)):
                    return found
        if len(path) < w.K:
            for s in space.steps_from(cur):
                node = (s.post, m1.advance(S1, s), m2.advance(S2, s), s)
                if node not in seen_l:
                    seen_l.add(node)
                    queue.append((s0, path + (s,), node))
    return found


def compare(c: Cmd, d: Cmd, space: StateSpace, w: Window,
            want=(LHS, RHS)) -> dict[str, Trace | Lasso]:
    return _differences(compile_command(c, space), compile_command(d, space), space, w,
                        frozenset(want))


def check_equal(c: Cmd, d: Cmd, space: StateSpace, w: Window) -> Verdict:
    diff = compare(c, d, space, w)
    rel = _relation(LHS in diff, RHS in diff)
    witness = None
    for side in (LHS, RHS):
        if side in diff:
            witness = Witness(side, diff[side])
            break
    if witness is not None and RHS in diff and LHS in diff:
        a, b = diff[LHS], diff[RHS]
        # prefer the shorter observation, finite before infinite
        if _obs_key(b) < _obs_key(a):
            witness = Witness(RHS, b)
    return Verdict("equal", rel, rel is Relation.EQUAL, witness, w)


def check_refines(c: Cmd, d: Cmd, space: StateSpace, w: Window) -> Verdict:
    """``c [= d``: every observation of ``d`` in the window is one of ``c``."""
    diff = compare(c, d, space, w)
    rel = _relation(LHS in diff, RHS in diff)
    witness = Witness(RHS, diff[RHS]) if RHS in diff else None
    return Verdict("refines", rel, witness is None, witness, w)


def _obs_key(obs: Trace | Lasso) -> tuple:
    if isinstance(obs, Lasso):
        return (1,) + obs.sort_key()
    return (0,) + obs.sort_key()


# --------------------------------------------------------------------------
# diagnostics

@dataclass(frozen=True)
class Diagnostics:
    has_terminated: bool
    has_aborted: bool
    has_lasso: bool
    progress_horizon: Optional[int]   # longest stuck trace; None if none
    longest_trace: int                # longest member trace within the window

    def as_dict(self) -> dict:
        return {"has_terminated": self.has_terminated, "has_aborted": self.has_aborted,
                "has_lasso": self.has_lasso, "progress_horizon": self.progress_horizon,
                "longest_trace": self.longest_trace}


def diagnostics(c: Cmd, space: StateSpace, w: Window) -> Diagnostics:
    """A stuck trace is an incomplete-only member (it neither terminates nor
    aborts) that is not a prefix of a longer member trace or of the
    unrolling of a member lasso, all within the window."""
    from .denotation import denote

    den = denote(c, space, w)
    has_term = any(t.status is Status.TERM for t in den.finite)
    has_abort = any(t.status is Status.ABORT for t in den.finite)
    complete = {(t.initial, t.steps) for t in den.finite if t.status is not Status.INC}
    extended = set()
    for t in den.finite:
        for k in range(len(t.steps)):
            extended.add((t.initial, t.steps[:k]))
    for lasso in den.infinite:
        run = lasso.unroll(w.N)
        for k in range(w.N + 1):
            extended.add((lasso.initial, run[:k]))
    horizon: Optional[int] = None
    longest = 0
    for t in den.finite:
        longest = max(longest, len(t.steps))
        key = (t.initial, t.steps)
        if key in complete or key in extended:
            continue
        horizon = max(horizon or 0, len(t.steps))
    return Diagnostics(has_term, has_abort, bool(den.infinite), horizon, longest)
