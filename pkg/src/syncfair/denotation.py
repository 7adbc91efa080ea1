"""Window denotations: the exact finite fragment of a command's trace set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .machine import BOT_SET, Machine, compile_command
from .syntax import Cmd
from .traces import Lasso, StateSpace, Status, Step, Trace, Window, iter_cycles

DEFAULT_CAP = 2_000_000


class ResourceLimitError(RuntimeError):
    """The materialized window would exceed the configured size cap."""


@dataclass(frozen=True)
class Denotation:
    window: Window
    space: StateSpace
    finite: frozenset[Trace]
    infinite: frozenset[Lasso]

    def __contains__(self, obs: object) -> bool:
        if isinstance(obs, Lasso):
            return obs in self.infinite
        return obs in self.finite

    def __len__(self) -> int:
        return len(self.finite) + len(self.infinite)

    def members(self) -> list[Trace | Lasso]:
        """Finite traces shortest first, then lassos."""
        return (sorted(self.finite, key=Trace.sort_key)
                + sorted(self.infinite, key=Lasso.sort_key))


def walk_prefixes(m: Machine, space: StateSpace, start: int,
                  max_len: int) -> Iterator[tuple[tuple[Step, ...], frozenset[int]]]:
    """Every contiguous step sequence from ``start`` up to ``max_len`` whose
    run set is non-empty, with that run set; shortest first."""
    layer = [((), m.initial())]
    for depth in range(max_len + 1):
        nxt = []
        for path, S in layer:
            if not S:
                continue
            yield path, S
            if depth == max_len:
                continue
            cur = path[-1].post if path else start
            for s in space.steps_from(cur):
                nxt.append((path + (s,), m.advance(S, s)))
        layer = nxt


def statuses(m: Machine, S: frozenset[int]) -> tuple[Status, ...]:
    if not S:
        return ()
    if S == BOT_SET:
        return (Status.TERM, Status.ABORT, Status.INC)
    if m.any_term(S):
        return (Status.TERM, Status.INC)
    return (Status.INC,)


def denote(c: Cmd, space: StateSpace, w: Window, cap: Optional[int] = DEFAULT_CAP) -> Denotation:
    """Materialize the window of ``c``: all member traces of length <= N and
    all canonical member lassos with prefix <= K and period <= L."""
    m = compile_command(c, space)
    finite: set[Trace] = set()
    infinite: set[Lasso] = set()
    cycles = {q: list(iter_cycles(space, q, w.L)) for q in space.states}

    def guard() -> None:
        if cap is not None and len(finite) + len(infinite) > cap:
            raise ResourceLimitError(f"window of {c} exceeds {cap} observations")

    for s0 in space.states:
        for path, S in walk_prefixes(m, space, s0, max(w.N, w.K)):
            if len(path) <= w.N:
                finite.update(Trace(s0, path, st) for st in statuses(m, S))
            if len(path) <= w.K:
                end = path[-1].post if path else s0
                for cyc in cycles[end]:
                    if path and path[-1] == cyc[-1]:
                        continue
                    if m.accepts_period(S, cyc):
                        infinite.add(Lasso(s0, path, cyc))
            guard()
    return Denotation(w, space, frozenset(finite), frozenset(infinite))


def is_member(obs: Trace | Lasso, c: Cmd, space: StateSpace) -> bool:
    """Membership of one observation, computed from the machine."""
    m = compile_command(c, space)
    if isinstance(obs, Lasso):
        return m.accepts_period(m.run(obs.prefix), obs.period)
    return obs.status in statuses(m, m.run(obs.steps))


def can_abort(c: Cmd, space: StateSpace) -> bool:
    """Whether some behaviour of ``c`` aborts (exact, not window-bounded):
    searches the machine's states paired with the current program state."""
    m = compile_command(c, space)
    init = m.initial()
    if init == BOT_SET:
        return True
    todo = [(q, s0) for q in init for s0 in space.states]
    seen = set(todo)
    while todo:
        q, cur = todo.pop()
        for s in space.steps_from(cur):
            nxt = m.step(q, s)
            if nxt == BOT_SET:
                return True
            for r in nxt:
                if (r, s.post) not in seen:
                    seen.add((r, s.post))
                    todo.append((r, s.post))
    return False
