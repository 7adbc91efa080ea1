"""Motivating programs encoded as commands, with the facts they should show.

The encodings are illustrative only: the term language has no assignment or
loops, so they are spelled out by hand over a two-state space holding ``x``
(0 or 1).  ``y`` is abstracted away since it never affects control.

* ``x := 1`` is ``skip ; pgm{(0,1),(1,1)} ; skip``.
* ``do x != 1 -> y := y + 1 od`` iterates ``skip ; pgm{(0,0)}`` (the guard
  test is folded into the body's program step, which needs ``x = 0``) and
  exits through ``skip ; pgm{(1,1)} ; skip``.
* ``do true -> y := y + 1 od`` is ``inf(skip ; pgm{(0,0),(1,1)})``.

A program step ``p(0,0)`` is a step of the ``x != 1`` loop taken before the
assignment; a period made only of those is the left process being pre-empted
forever.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .check import Diagnostics, diagnostics
from .denotation import Denotation, denote
from .syntax import Cmd, parse
from .traces import ENV, PGM, Lasso, StateSpace, Status, Window

SPACE = StateSpace(2)
DEFAULT_WINDOW = Window(5, 3, 3)

ASSIGN = "(skip; pgm{(0,1),(1,1)}; skip)"
LOOP_NE = "(om(skip; pgm{(0,0)}); skip; pgm{(1,1)}; skip)"
LOOP_TRUE = "inf(skip; pgm{(0,0),(1,1)})"


def _preempting(lasso: Lasso) -> bool:
    """Period consists solely of ``x != 1`` loop steps before ``x := 1``."""
    return all(s.kind == PGM and s.pre == 0 and s.post == 0 for s in lasso.period)


def _env_only(lasso: Lasso) -> bool:
    return all(s.kind == ENV for s in lasso.period)


Facts = dict[str, object]


@dataclass(frozen=True)
class ExampleCase:
    name: str
    title: str                     # the program in the usual notation
    ast: Cmd
    expected: Facts
    facts: Callable[["ExampleCase", Window], Facts] = field(repr=False)
    space: StateSpace = SPACE

    def evaluate(self, w: Window = DEFAULT_WINDOW) -> "ExampleResult":
        got = self.facts(self, w)
        return ExampleResult(self.name, got == self.expected, got, self.expected,
                             diagnostics(self.ast, self.space, w))


@dataclass(frozen=True)
class ExampleResult:
    name: str
    passed: bool
    facts: Facts
    expected: Facts
    diagnostics: Diagnostics

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "facts": self.facts,
                "expected": self.expected, "diagnostics": self.diagnostics.as_dict()}


def _den(c: Cmd, w: Window) -> Denotation:
    return denote(c, SPACE, w)


def _ex_term(case: ExampleCase, w: Window) -> Facts:
    fair_version = parse(f"({ASSIGN} && fair) || ({LOOP_NE} && fair)")
    return {
        "preemption_lasso": any(map(_preempting, _den(case.ast, w).infinite)),
        "preemption_lasso_when_fair": any(map(_preempting, _den(fair_version, w).infinite)),
    }


def _inc_y_loop(case: ExampleCase, w: Window) -> Facts:
    fair_version = parse(f"{LOOP_TRUE} && fair")
    return {
        "env_only_lasso": any(map(_env_only, _den(case.ast, w).infinite)),
        "env_only_lasso_when_fair": any(map(_env_only, _den(fair_version, w).infinite)),
    }


def _fair_term(case: ExampleCase, w: Window) -> Facts:
    den = _den(case.ast, w)
    return {
        "has_terminated": any(t.status is Status.TERM for t in den.finite),
        "preemption_lasso": any(map(_preempting, den.infinite)),
    }


def _stuck(case: ExampleCase, w: Window) -> Facts:
    diag = diagnostics(case.ast, SPACE, w)
    return {
        "has_lasso": diag.has_lasso,
        "has_terminated": diag.has_terminated,
        "bounded_horizon": diag.progress_horizon is not None,
    }


def _example2(case: ExampleCase, w: Window) -> Facts:
    return {"has_lasso": diagnostics(case.ast, SPACE, w).has_lasso}


def _cases() -> dict[str, ExampleCase]:
    specs = [
        ("ex-term", "x := 1 || do x != 1 -> y := y + 1 od",
         f"{ASSIGN} || {LOOP_NE}",
         {"preemption_lasso": True, "preemption_lasso_when_fair": False}, _ex_term),
        ("inc-y-loop", "do true -> y := y + 1 od",
         LOOP_TRUE,
         {"env_only_lasso": True, "env_only_lasso_when_fair": False}, _inc_y_loop),
        ("fair-term", "(x := 1 && fair) || (do x != 1 -> y := y + 1 od && fair)",
         f"({ASSIGN} && fair) || ({LOOP_NE} && fair)",
         {"has_terminated": True, "preemption_lasso": False}, _fair_term),
        ("example1", "(x := 1 && fair) || (do true -> y := y + 1 od && fair)",
         f"({ASSIGN} && fair) || ({LOOP_TRUE} && fair)",
         {"has_lasso": False, "has_terminated": False, "bounded_horizon": True}, _stuck),
        ("example2", "(x := 1 && fair); skip || (do true -> y := y + 1 od && fair); skip",
         f"({ASSIGN} && fair); skip || ({LOOP_TRUE} && fair); skip",
         {"has_lasso": True}, _example2),
    ]
    return {name: ExampleCase(name, title, parse(text), expected, facts)
            for name, title, text, expected, facts in specs}


CASES = _cases()
EXAMPLE_NAMES = tuple(CASES)


def build_example(name: str) -> ExampleCase:
    try:
        return CASES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(EXAMPLE_NAMES)}") from None


def run_examples(w: Window = DEFAULT_WINDOW) -> list[ExampleResult]:
    return [case.evaluate(w) for case in CASES.values()]
