"""Finite state spaces, atomic steps, Aczel traces and lassos.

A trace is a state-contiguous finite step sequence with an end status; a
lasso is an ultimately periodic infinite step sequence kept in canonical
form.  The textual syntax used throughout the package is::

    0: p(0,1) e(1,1) !term        # finite trace from state 0
    0: p(0,1) [e(1,1)]^w          # lasso, the bracketed period repeats forever
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

PGM = "p"
ENV = "e"
KINDS = (PGM, ENV)


class ContractViolation(ValueError):
    """A value handed to the trace core breaks a structural invariant."""


@dataclass(frozen=True)
class StateSpace:
    size: int

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or self.size < 1:
            raise ContractViolation(f"state space size must be >= 1, got {self.size!r}")

    @property
    def states(self) -> range:
        return range(self.size)

    def steps_from(self, state: int) -> tuple[Step, ...]:
        return tuple(Step(kind, state, post) for kind in KINDS for post in self.states)

    def all_steps(self) -> tuple[Step, ...]:
        return tuple(s for state in self.states for s in self.steps_from(state))

    def __contains__(self, state: object) -> bool:
        return isinstance(state, int) and 0 <= state < self.size


class Step(NamedTuple):
    kind: str
    pre: int
    post: int

    def __str__(self) -> str:
        return f"{self.kind}({self.pre},{self.post})"

    @property
    def is_program(self) -> bool:
        return self.kind == PGM


class Status(enum.Enum):
    TERM = "term"
    ABORT = "abort"
    INC = "inc"

    @property
    def marker(self) -> str:
        return "!" + self.value


class Trace(NamedTuple):
    initial: int
    steps: tuple[Step, ...]
    status: Status

    def __str__(self) -> str:
        body = " ".join(str(s) for s in self.steps)
        return f"{self.initial}: {body + ' ' if body else ''}{self.status.marker}"

    @property
    def final(self) -> int:
        return self.steps[-1].post if self.steps else self.initial

    def sort_key(self) -> tuple:
        return (len(self.steps), self.initial, self.steps, self.status.value)


class Lasso(NamedTuple):
    initial: int
    prefix: tuple[Step, ...]
    period: tuple[Step, ...]

    def __str__(self) -> str:
        head = " ".join(str(s) for s in self.prefix)
        cyc = " ".join(str(s) for s in self.period)
        return f"{self.initial}: {head + ' ' if head else ''}[{cyc}]^w"

    def unroll(self, n: int) -> tuple[Step, ...]:
        """The first ``n`` steps of the infinite sequence."""
        out = list(self.prefix[:n])
        i = 0
        while len(out) < n:
            out.append(self.period[i % len(self.period)])
            i += 1
        return tuple(out)

    def suffix(self, n: int) -> Lasso:
        """The lasso obtained by dropping the first ``n`` steps (canonical)."""
        if n <= len(self.prefix):
            rest = self.prefix[n:]
            start = rest[0].pre if rest else self.period[0].pre
            return canonicalize_lasso(Lasso(start, rest, self.period))
        k = (n - len(self.prefix)) % len(self.period)
        period = self.period[k:] + self.period[:k]
        return canonicalize_lasso(Lasso(period[0].pre, (), period))

    def sort_key(self) -> tuple:
        return (len(self.prefix) + len(self.period), len(self.period), self.initial,
                self.prefix, self.period)


@dataclass(frozen=True)
class Window:
    """Observation window: finite traces up to ``N`` steps, lassos with
    canonical prefix at most ``K`` and period at most ``L``."""

    N: int
    K: int
    L: int

    def __post_init__(self) -> None:
        if self.N < 0 or self.K < 0 or self.L < 1:
            raise ContractViolation(f"invalid window {self}")

    def __str__(self) -> str:
        return f"(N={self.N}, K={self.K}, L={self.L})"

    def fits(self, obs: Trace | Lasso) -> bool:
        if isinstance(obs, Lasso):
            return len(obs.prefix) <= self.K and len(obs.period) <= self.L
        return len(obs.steps) <= self.N

    def as_dict(self) -> dict[str, int]:
        return {"N": self.N, "K": self.K, "L": self.L}


# --------------------------------------------------------------------------
# validation

def _check_contiguous(initial: int, steps: Iterable[Step], space: StateSpace | None) -> int:
    cur = initial
    for s in steps:
        if not isinstance(s, Step) or s.kind not in KINDS:
            raise ContractViolation(f"not a step: {s!r}")
        if space is not None and (s.pre not in space or s.post not in space):
            raise ContractViolation(f"step {s} outside state space of size {space.size}")
        if s.pre != cur:
            raise ContractViolation(f"step {s} does not start in state {cur}")
        cur = s.post
    return cur


def check_trace(t: Trace, space: StateSpace | None = None) -> Trace:
    if space is not None and t.initial not in space:
        raise ContractViolation(f"initial state {t.initial} outside state space")
    if not isinstance(t.status, Status):
        raise ContractViolation(f"bad status {t.status!r}")
    _check_contiguous(t.initial, t.steps, space)
    return t


def check_lasso(lasso: Lasso, space: StateSpace | None = None) -> Lasso:
    if not lasso.period:
        raise ContractViolation("lasso period must be non-empty")
    if space is not None and lasso.initial not in space:
        raise ContractViolation(f"initial state {lasso.initial} outside state space")
    mid = _check_contiguous(lasso.initial, lasso.prefix, space)
    end = _check_contiguous(mid, lasso.period, space)
    if end != mid:
        raise ContractViolation(f"period of {lasso} is not a state cycle")
    return lasso


# --------------------------------------------------------------------------
# lassos

def primitive_root(word: tuple) -> tuple:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def canonicalize_lasso(lasso: Lasso) -> Lasso:
    """Unique representative: primitive period, shortest prefix."""
    check_lasso(lasso)
    prefix, period = lasso.prefix, primitive_root(lasso.period)
    while prefix and prefix[-1] == period[-1]:
        prefix = prefix[:-1]
        period = period[-1:] + period[:-1]
    initial = prefix[0].pre if prefix else period[0].pre
    return Lasso(initial, prefix, period)


def is_canonical(lasso: Lasso) -> bool:
    return canonicalize_lasso(lasso) == lasso


# --------------------------------------------------------------------------
# enumeration of the observation universe

def iter_paths(space: StateSpace, start: int, max_len: int) -> Iterator[tuple[Step, ...]]:
    """All contiguous step sequences from ``start`` of length <= ``max_len``,
    shortest first."""
    layer: list[tuple[Step, ...]] = [()]
    for _ in range(max_len + 1):
        yield from layer
        nxt = []
        for path in layer:
            cur = path[-1].post if path else start
            nxt.extend(path + (s,) for s in space.steps_from(cur))
        layer = nxt


def iter_cycles(space: StateSpace, state: int, max_len: int) -> Iterator[tuple[Step, ...]]:
    """Primitive closed walks at ``state`` of length 1..max_len."""
    for path in iter_paths(space, state, max_len):
        if path and path[-1].post == state and primitive_root(path) == path:
            yield path


def iter_lassos(space: StateSpace, K: int, L: int,
                start: int | None = None) -> Iterator[Lasso]:
    """Every canonical lasso with prefix <= K and period <= L."""
    starts = space.states if start is None else (start,)
    cycles = {q: list(iter_cycles(space, q, L)) for q in space.states}
    for s0 in starts:
        for prefix in iter_paths(space, s0, K):
            mid = prefix[-1].post if prefix else s0
            for cyc in cycles[mid]:
                if prefix and prefix[-1] == cyc[-1]:
                    continue
                yield Lasso(s0, prefix, cyc)


def iter_traces(space: StateSpace, N: int) -> Iterator[Trace]:
    for s0 in space.states:
        for path in iter_paths(space, s0, N):
            for status in Status:
                yield Trace(s0, path, status)


# --------------------------------------------------------------------------
# closure

def close(traces: Iterable[Trace], lassos: Iterable[Lasso], w: Window,
          space: StateSpace) -> tuple[frozenset[Trace], frozenset[Lasso]]:
    """Prefix-incomplete closure plus abort closure, restricted to ``w``.

    Every prefix of a member (the member itself included) is present marked
    incomplete; every aborted trace brings all of its contiguous extensions
    within the window, with every status, and every lasso that extends it.
    """
    fin: set[Trace] = set()
    inf: set[Lasso] = set()
    for t in traces:
        check_trace(t, space)
        if len(t.steps) <= w.N:
            fin.add(t)
    for lasso in lassos:
        lasso = canonicalize_lasso(check_lasso(lasso, space))
        if w.fits(lasso):
            inf.add(lasso)

    aborted = [t for t in fin if t.status is Status.ABORT]
    if aborted:
        window_lassos = list(iter_lassos(space, w.K, w.L))
        for t in aborted:
            n = len(t.steps)
            for ext in iter_paths(space, t.final, w.N - n):
                for status in Status:
                    fin.add(Trace(t.initial, t.steps + ext, status))
            inf.update(l for l in window_lassos
                       if l.initial == t.initial and l.unroll(n) == t.steps)

    for t in list(fin):
        for k in range(len(t.steps) + 1):
            fin.add(Trace(t.initial, t.steps[:k], Status.INC))
    for lasso in inf:
        for k in range(w.N + 1):
            fin.add(Trace(lasso.initial, lasso.unroll(k), Status.INC))
    return frozenset(fin), frozenset(inf)


# --------------------------------------------------------------------------
# textual syntax

_STEP_RE = re.compile(r"([pe])\(\s*(\d+)\s*,\s*(\d+)\s*\)")
_OBS_RE = re.compile(r"^\s*(\d+)\s*:(.*)$")


def parse_steps(text: str) -> tuple[Step, ...]:
    text = text.strip()
    steps = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _STEP_RE.match(text, pos)
        if not m:
            raise ContractViolation(f"cannot read a step at {text[pos:]!r}")
        steps.append(Step(m.group(1), int(m.group(2)), int(m.group(3))))
        pos = m.end()
    return tuple(steps)


def parse_observation(text: str) -> Trace | Lasso:
    """Inverse of ``str`` on traces and lassos."""
    m = _OBS_RE.match(text)
    if not m:
        raise ContractViolation(f"expected '<state>: ...', got {text!r}")
    initial, body = int(m.group(1)), m.group(2).strip()
    lasso = re.match(r"^(.*)\[(.*)\]\^w$", body)
    if lasso:
        return check_lasso(Lasso(initial, parse_steps(lasso.group(1)),
                                 parse_steps(lasso.group(2))))
    for status in Status:
        if body.endswith(status.marker):
            steps = parse_steps(body[: -len(status.marker)])
            return check_trace(Trace(initial, steps, status))
    raise ContractViolation(f"missing status marker in {text!r}")
