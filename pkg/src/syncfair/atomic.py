"""The Boolean algebra of atomic step commands and the step-level sync tables.

An atomic command is a set of steps.  Choice between atomic commands is set
union and conjunction is intersection, so the full set ``alpha`` is the least
element in the refinement order and the empty set is the infeasible top.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .traces import ENV, PGM, ContractViolation, StateSpace, Step


@dataclass(frozen=True)
class AtomicCommand:
    space: StateSpace
    steps: frozenset[Step]

    def __post_init__(self) -> None:
        for s in self.steps:
            if s.kind not in (PGM, ENV) or s.pre not in self.space or s.post not in self.space:
                raise ContractViolation(f"step {s} not in the step universe of {self.space}")

    def _same_space(self, other: AtomicCommand) -> None:
        if other.space != self.space:
            raise ContractViolation("atomic commands over different state spaces")

    def choice(self, other: AtomicCommand) -> AtomicCommand:
        self._same_space(other)
        return AtomicCommand(self.space, self.steps | other.steps)

    def join(self, other: AtomicCommand) -> AtomicCommand:
        self._same_space(other)
        return AtomicCommand(self.space, self.steps & other.steps)

    def __contains__(self, step: object) -> bool:
        return step in self.steps

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return "{" + ", ".join(str(s) for s in sorted(self.steps)) + "}"


def atomic_of(space: StateSpace, steps: Iterable[Step]) -> AtomicCommand:
    return AtomicCommand(space, frozenset(steps))


def atomic_pi(space: StateSpace) -> AtomicCommand:
    return atomic_of(space, (s for s in space.all_steps() if s.kind == PGM))


def atomic_eps(space: StateSpace) -> AtomicCommand:
    return atomic_of(space, (s for s in space.all_steps() if s.kind == ENV))


def atomic_alpha(space: StateSpace) -> AtomicCommand:
    return atomic_of(space, space.all_steps())


def atomic_negate(a: AtomicCommand) -> AtomicCommand:
    return AtomicCommand(a.space, frozenset(a.space.all_steps()) - a.steps)


def step_sync_par(s1: Step, s2: Step) -> Optional[Step]:
    """A program step matches the identical environment step; two identical
    environment steps stay an environment step; anything else is infeasible."""
    if s1.pre != s2.pre or s1.post != s2.post:
        return None
    if s1.kind == PGM and s2.kind == PGM:
        return None
    return s1 if s1.kind == PGM else s2


def step_sync_conj(s1: Step, s2: Step) -> Optional[Step]:
    return s1 if s1 == s2 else None


SyncTable = Callable[[Step, Step], Optional[Step]]


def lift_sync(table: SyncTable, a: AtomicCommand, b: AtomicCommand) -> AtomicCommand:
    a._same_space(b)
    out = set()
    for s in a.steps:
        for t in b.steps:
            r = table(s, t)
            if r is not None:
                out.add(r)
    return AtomicCommand(a.space, frozenset(out))


def sync_preimage(table: SyncTable, step: Step) -> list[tuple[Step, Step]]:
    """All pairs of steps that synchronise to ``step``.  Both tables only
    relate steps with the same pre and post state as the result."""
    cands = [Step(k, step.pre, step.post) for k in (PGM, ENV)]
    return [(a, b) for a in cands for b in cands if table(a, b) == step]
