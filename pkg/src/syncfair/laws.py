"""Catalog of algebraic laws, binding generators and the law-suite runner.

Each law is a template over quantified variables.  Sorts:

``command``       any command term
``atomic``        a term denoting a set of atomic steps
``natural``       0..3
``commands``      a possibly empty finite set of commands (size 0..3)
``commands+``     a non-empty finite set of commands (size 1..3)
``sync``          one of the two synchronisation operators, ``||`` or ``&&``

Conditional laws get their premise from a constructive generator, so every
generated binding satisfies it.  The two induction laws quantify over an
arbitrary ``x``; they are probed as implications on sampled ``x``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator, Optional

from .atomic import AtomicCommand, lift_sync, step_sync_conj, step_sync_par
from .check import check_equal, check_refines
from .denotation import ResourceLimitError, can_abort
from .syntax import (ALPHA, EPS, PI, Abort, Atomic, Chaos, Choice, Cmd, Conj, Fair, FairPar,
                     Fin, Inf, Join, Magic, Nil, Om, Par, Pow, Seq, Skip, Term, choice_of,
                     random_ast, to_text)
from .traces import ENV, PGM, StateSpace, Window

EQ = "="
REF = "[="
IMPL = "=>"

KIND_LABEL = {EQ: "equation", REF: "refinement", IMPL: "sampled implication"}


class Bindings(dict):
    """Variable name to value; values are terms, term tuples, ints or one of
    the sync operator classes."""

    def __getattr__(self, name):
        try:
            return self[name]
        except KeyError:
            raise AttributeError(name) from None

    def render(self) -> dict[str, str]:
        return {k: render_value(v) for k, v in self.items()}


def render_value(v) -> str:
    if v is Par:
        return "||"
    if v is Conj:
        return "&&"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, tuple):
        return "{" + ", ".join(to_text(x) for x in v) + "}"
    return to_text(v)


@dataclass(frozen=True)
class Context:
    space: StateSpace
    window: Window


Clauses = Callable[[Bindings, Context], list[tuple[Cmd, Cmd]]]


@dataclass(frozen=True)
class LawSpec:
    name: str
    group: str
    formula: str
    quantifiers: tuple[tuple[str, str], ...]
    relation: str
    clauses: Clauses
    premise: Optional[str] = None
    # for implications: the premise as a refinement lhs [= rhs
    hypothesis: Optional[Clauses] = None

    @property
    def kind(self) -> str:
        return KIND_LABEL[self.relation]

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.quantifiers)


# --------------------------------------------------------------------------
# helpers for templates

SYNC_IDENTITY = {Par: Skip(), Conj: Chaos()}
ATOMIC_IDENTITY = {Par: EPS, Conj: ALPHA}
SYNC_TABLE = {Par: step_sync_par, Conj: step_sync_conj}


def atomic_term(a: AtomicCommand) -> Cmd:
    """A term denoting exactly the atomic command ``a``."""
    pgm = tuple(sorted((s.pre, s.post) for s in a.steps if s.kind == PGM))
    env = tuple(sorted((s.pre, s.post) for s in a.steps if s.kind == ENV))
    parts = []
    if pgm:
        parts.append(Atomic("pgm", pgm))
    if env:
        parts.append(Atomic("env", env))
    return choice_of(parts) if parts else Atomic("pgm", ())


def atomic_value(t: Cmd, space: StateSpace) -> AtomicCommand:
    if isinstance(t, Atomic):
        return t.resolve(space)
    if isinstance(t, Choice):
        out = atomic_value(t.options[0], space)
        for o in t.options[1:]:
            out = out.choice(atomic_value(o, space))
        return out
    raise TypeError(f"{to_text(t)} is not an atomic term")


def pw(c: Cmd, i: int) -> Cmd:
    return Pow(c, i)


def seqs(*cs: Cmd) -> Cmd:
    out = cs[0]
    for c in cs[1:]:
        out = Seq(out, c)
    return out


def fin_iteration_bound(w: Window) -> int:
    """Powers beyond this add nothing to a window: a minimal chunk
    decomposition of an observation in the window has at most
    max(N, K + L) non-empty chunks."""
    return max(w.N, w.K + w.L) + 1


FAIR, SKIP, CHAOS, TERM = Fair(), Skip(), Chaos(), Term()
NIL, MAGIC, ABORT = Nil(), Magic(), Abort()
FIN_ALPHA = Fin(ALPHA)
INF_ALPHA = Inf(ALPHA)


def _law(name, group, formula, quantifiers, relation, clauses, premise=None, hypothesis=None):
    return LawSpec(name, group, formula, tuple(quantifiers), relation, clauses, premise,
                   hypothesis)


C, A, N_, CS, CS1, S = "command", "atomic", "natural", "commands", "commands+", "sync"


def catalog() -> list[LawSpec]:
    L = _law
    laws = [
        # -- sequential composition
        L("seq-assoc", "sequential", "c0;(c1;c2) = (c0;c1);c2",
          [("c0", C), ("c1", C), ("c2", C)], EQ,
          lambda b, x: [(Seq(b.c0, Seq(b.c1, b.c2)), Seq(Seq(b.c0, b.c1), b.c2))]),
        L("seq-identity", "sequential", "c;nil = c = nil;c", [("c", C)], EQ,
          lambda b, x: [(Seq(b.c, NIL), b.c), (Seq(NIL, b.c), b.c)]),
        L("seq-annihilation-left", "sequential", "abort;c = abort", [("c", C)], EQ,
          lambda b, x: [(Seq(ABORT, b.c), ABORT)]),
        L("seq-distr-right", "sequential", "(+C);d = +{c;d | c in C}",
          [("C", CS), ("d", C)], EQ,
          lambda b, x: [(Seq(choice_of(b.C), b.d), choice_of(Seq(c, b.d) for c in b.C))]),
        L("seq-distr-left", "sequential", "D nonempty => c;(+D) = +{c;d | d in D}",
          [("c", C), ("D", CS1)], EQ,
          lambda b, x: [(Seq(b.c, choice_of(b.D)), choice_of(Seq(b.c, d) for d in b.D))]),
        # -- synchronisation
        L("sync-assoc", "synchronisation", "c0 (x) (c1 (x) c2) = (c0 (x) c1) (x) c2",
          [("op", S), ("c0", C), ("c1", C), ("c2", C)], EQ,
          lambda b, x: [(b.op(b.c0, b.op(b.c1, b.c2)), b.op(b.op(b.c0, b.c1), b.c2))]),
        L("sync-commutative", "synchronisation", "c (x) d = d (x) c",
          [("op", S), ("c", C), ("d", C)], EQ,
          lambda b, x: [(b.op(b.c, b.d), b.op(b.d, b.c))]),
        L("sync-id", "synchronisation", "c (x) id = c  (id: skip for ||, chaos for &&)",
          [("op", S), ("c", C)], EQ,
          lambda b, x: [(b.op(b.c, SYNC_IDENTITY[b.op]), b.c)]),
        L("sync-inf-distrib", "synchronisation", "D nonempty => c (x) (+D) = +{c (x) d | d in D}",
          [("op", S), ("c", C), ("D", CS1)], EQ,
          lambda b, x: [(b.op(b.c, choice_of(b.D)), choice_of(b.op(b.c, d) for d in b.D))]),
        L("sync-env", "synchronisation", "a (x) id = a  (id: eps for ||, alpha for &&)",
          [("op", S), ("a", A)], EQ,
          lambda b, x: [(b.op(b.a, ATOMIC_IDENTITY[b.op]), b.a)]),
        L("sync-nil-nil", "synchronisation", "nil (x) nil = nil", [("op", S)], EQ,
          lambda b, x: [(b.op(NIL, NIL), NIL)]),
        L("sync-nil-atomic", "synchronisation", "nil (x) a;c = magic",
          [("op", S), ("a", A), ("c", C)], EQ,
          lambda b, x: [(b.op(NIL, Seq(b.a, b.c)), MAGIC)]),
        L("par-closure", "synchronisation", "a (x) b is atomic",
          [("op", S), ("a", A), ("b", A)], EQ,
          lambda b, x: [(b.op(b.a, b.b), atomic_term(lift_sync(
              SYNC_TABLE[b.op], atomic_value(b.a, x.space), atomic_value(b.b, x.space))))]),
        L("sync-interchange-seq-atomic", "synchronisation",
          "(a;c) (x) (b;d) = (a (x) b);(c (x) d)",
          [("op", S), ("a", A), ("c", C), ("b", A), ("d", C)], EQ,
          lambda b, x: [(b.op(Seq(b.a, b.c), Seq(b.b, b.d)),
                         Seq(b.op(b.a, b.b), b.op(b.c, b.d)))]),
        L("sync-inf", "synchronisation", "inf(a) (x) inf(b) = inf(a (x) b)",
          [("op", S), ("a", A), ("b", A)], EQ,
          lambda b, x: [(b.op(Inf(b.a), Inf(b.b)), Inf(b.op(b.a, b.b)))]),
        L("sync-interchange-seq", "synchronisation",
          "(c0;d0) (x) (c1;d1) [= (c0 (x) c1);(d0 (x) d1)",
          [("op", S), ("c0", C), ("d0", C), ("c1", C), ("d1", C)], REF,
          lambda b, x: [(b.op(Seq(b.c0, b.d0), Seq(b.c1, b.d1)),
                         Seq(b.op(b.c0, b.c1), b.op(b.d0, b.d1)))]),
        L("par-abort", "parallel and conjunction", "c || abort = abort", [("c", C)], EQ,
          lambda b, x: [(Par(b.c, ABORT), ABORT)]),
        L("conjoin-abort", "parallel and conjunction", "c && abort = abort", [("c", C)], EQ,
          lambda b, x: [(Conj(b.c, ABORT), ABORT)]),
        L("conjoin-idempotent", "parallel and conjunction", "c && c = c", [("c", C)], EQ,
          lambda b, x: [(Conj(b.c, b.c), b.c)]),
        L("par-pi-pi", "parallel and conjunction", "pi || pi = magic", [], EQ,
          lambda b, x: [(Par(PI, PI), MAGIC)]),
        L("conjoin-pi-env", "parallel and conjunction", "pi && eps = magic", [], EQ,
          lambda b, x: [(Conj(PI, EPS), MAGIC)]),
        L("conjoin-par-finite", "parallel and conjunction", "c && alpha^i = c || eps^i",
          [("c", C), ("i", N_)], EQ,
          lambda b, x: [(Conj(b.c, pw(ALPHA, b.i)), Par(b.c, pw(EPS, b.i)))]),
        L("conjoin-par-infinite", "parallel and conjunction",
          "c && inf(alpha) = c || inf(eps)", [("c", C)], EQ,
          lambda b, x: [(Conj(b.c, INF_ALPHA), Par(b.c, Inf(EPS)))]),
        L("sync-initial", "parallel and conjunction",
          "(c0 && alpha^i);d0 || (c1 && alpha^i);d1 = "
          "((c0 && alpha^i) || (c1 && alpha^i));(d0 || d1)",
          [("c0", C), ("d0", C), ("c1", C), ("d1", C), ("i", N_)], EQ,
          lambda b, x: [(Par(Seq(Conj(b.c0, pw(ALPHA, b.i)), b.d0),
                             Seq(Conj(b.c1, pw(ALPHA, b.i)), b.d1)),
                         Seq(Par(Conj(b.c0, pw(ALPHA, b.i)), Conj(b.c1, pw(ALPHA, b.i))),
                             Par(b.d0, b.d1)))]),
        L("conjoin-sync-initial", "parallel and conjunction",
          "(c0 && alpha^i);d0 && (c1 && alpha^i);d1 = (c0 && c1 && alpha^i);(d0 && d1)",
          [("c0", C), ("d0", C), ("c1", C), ("d1", C), ("i", N_)], EQ,
          lambda b, x: [(Conj(Seq(Conj(b.c0, pw(ALPHA, b.i)), b.d0),
                              Seq(Conj(b.c1, pw(ALPHA, b.i)), b.d1)),
                         Seq(Conj(Conj(b.c0, b.c1), pw(ALPHA, b.i)), Conj(b.d0, b.d1)))]),
        L("conjoin-interchange-par", "parallel and conjunction",
          "(c0 || d0) && (c1 || d1) [= (c0 && c1) || (d0 && d1)",
          [("c0", C), ("d0", C), ("c1", C), ("d1", C)], REF,
          lambda b, x: [(Conj(Par(b.c0, b.d0), Par(b.c1, b.d1)),
                         Par(Conj(b.c0, b.c1), Conj(b.d0, b.d1)))]),
        # -- iteration
        L("finite-unfold", "iteration", "fin(c) = nil + c;fin(c)", [("c", C)], EQ,
          lambda b, x: [(Fin(b.c), Choice((NIL, Seq(b.c, Fin(b.c)))))]),
        L("omega-unfold", "iteration", "om(c) = nil + c;om(c)", [("c", C)], EQ,
          lambda b, x: [(Om(b.c), Choice((NIL, Seq(b.c, Om(b.c)))))]),
        L("isolation", "iteration", "om(c) = fin(c) + inf(c)", [("c", C)], EQ,
          lambda b, x: [(Om(b.c), Choice((Fin(b.c), Inf(b.c))))]),
        L("finite-iteration", "iteration",
          "fin(c) = +{c^i | i natural}  (powers up to the window's chunk bound)",
          [("c", C)], EQ,
          lambda b, x: [(Fin(b.c), choice_of(
              pw(b.c, i) for i in range(fin_iteration_bound(x.window) + 1)))]),
        L("omega-induction", "iteration", "d + c;x [= x  =>  om(c);d [= x",
          [("c", C), ("d", C), ("x", C)], IMPL,
          lambda b, x: [(Seq(Om(b.c), b.d), b.x)], premise="omega-candidates",
          hypothesis=lambda b, x: [(Choice((b.d, Seq(b.c, b.x))), b.x)]),
        L("finite-induction", "iteration", "x [= d + c;x  =>  x [= fin(c);d",
          [("c", C), ("d", C), ("x", C)], IMPL,
          lambda b, x: [(b.x, Seq(Fin(b.c), b.d))], premise="finite-candidates",
          hypothesis=lambda b, x: [(b.x, Choice((b.d, Seq(b.c, b.x))))]),
        L("finite-leapfrog", "iteration", "c;fin(d;c) = fin(c;d);c", [("c", C), ("d", C)], EQ,
          lambda b, x: [(Seq(b.c, Fin(Seq(b.d, b.c))), Seq(Fin(Seq(b.c, b.d)), b.c))]),
        L("omega-leapfrog", "iteration", "c;om(d;c) = om(c;d);c", [("c", C), ("d", C)], EQ,
          lambda b, x: [(Seq(b.c, Om(Seq(b.d, b.c))), Seq(Om(Seq(b.c, b.d)), b.c))]),
        L("omega-decomposition", "iteration", "om(c + d) = om(c);om(d;om(c))",
          [("c", C), ("d", C)], EQ,
          lambda b, x: [(Om(Choice((b.c, b.d))), Seq(Om(b.c), Om(Seq(b.d, Om(b.c)))))]),
        L("finite-finite-prefix", "iteration",
          "fin(a);c || fin(b);d = fin(a || b);((c || d) + (c || b;fin(b);d) + (a;fin(a);c || d))",
          [("a", A), ("b", A), ("c", C), ("d", C)], EQ,
          lambda b, x: [(Par(Seq(Fin(b.a), b.c), Seq(Fin(b.b), b.d)),
                         Seq(Fin(Par(b.a, b.b)), Choice((
                             Par(b.c, b.d),
                             Par(b.c, seqs(b.b, Fin(b.b), b.d)),
                             Par(seqs(b.a, Fin(b.a), b.c), b.d)))))]),
        L("finite-omega-prefix", "iteration",
          "fin(a);c || om(b);d = fin(a || b);((c || d) + (c || b;om(b);d) + (a;fin(a);c || d))",
          [("a", A), ("b", A), ("c", C), ("d", C)], EQ,
          lambda b, x: [(Par(Seq(Fin(b.a), b.c), Seq(Om(b.b), b.d)),
                         Seq(Fin(Par(b.a, b.b)), Choice((
                             Par(b.c, b.d),
                             Par(b.c, seqs(b.b, Om(b.b), b.d)),
                             Par(seqs(b.a, Fin(b.a), b.c), b.d)))))]),
        L("iterate-pi-par-pi", "iteration", "om(pi;c) || om(pi;d) = nil",
          [("c", C), ("d", C)], EQ,
          lambda b, x: [(Par(Om(Seq(PI, b.c)), Om(Seq(PI, b.d))), NIL)]),
        L("iterate-pi-sync-atomic", "iteration",
          "om(pi;c) (x) a;d = (pi (x) a);(c;om(pi;c) (x) d)",
          [("op", S), ("c", C), ("a", A), ("d", C)], EQ,
          lambda b, x: [(b.op(Om(Seq(PI, b.c)), Seq(b.a, b.d)),
                         Seq(b.op(PI, b.a), b.op(Seq(b.c, Om(Seq(PI, b.c))), b.d)))]),
        L("distribute-infeasible-suffix", "iteration", "c (x) d;magic = (c (x) d);magic",
          [("op", S), ("c", C), ("d", C)], EQ,
          lambda b, x: [(b.op(b.c, Seq(b.d, MAGIC)), Seq(b.op(b.c, b.d), MAGIC))]),
        L("infinite-annihilates", "iteration",
          "(c && inf(alpha));d1 = (c && inf(alpha));d2",
          [("c", C), ("d1", C), ("d2", C)], EQ,
          lambda b, x: [(Seq(Conj(b.c, INF_ALPHA), b.d1), Seq(Conj(b.c, INF_ALPHA), b.d2))]),
        L("sync-termination", "iteration",
          "c = c && fin(alpha), d = d && fin(alpha) => "
          "(c;fin(a) || d;fin(b));(om(a) || om(b)) = c;om(a) || d;om(b)",
          [("c", C), ("d", C), ("a", A), ("b", A)], EQ,
          lambda b, x: [(Seq(Par(Seq(b.c, Fin(b.a)), Seq(b.d, Fin(b.b))),
                             Par(Om(b.a), Om(b.b))),
                         Par(Seq(b.c, Om(b.a)), Seq(b.d, Om(b.b))))],
          premise="conj-fin"),
        L("par-skip", "iteration", "(c;skip || d;skip);skip = c;skip || d;skip",
          [("c", C), ("d", C)], EQ,
          lambda b, x: [(Seq(Par(Seq(b.c, SKIP), Seq(b.d, SKIP)), SKIP),
                         Par(Seq(b.c, SKIP), Seq(b.d, SKIP)))]),
        # -- fairness
        L("chaos-fair", "fair", "chaos [= fair", [], REF, lambda b, x: [(CHAOS, FAIR)]),
        L("introduce-fair", "fair", "c [= c && fair", [("c", C)], REF,
          lambda b, x: [(b.c, Conj(b.c, FAIR))]),
        L("fair-fair", "fair", "fair;fair = fair", [], EQ,
          lambda b, x: [(Seq(FAIR, FAIR), FAIR)]),
        L("fair-distrib-seq", "fair", "(c;d) && fair [= (c && fair);(d && fair)",
          [("c", C), ("d", C)], REF,
          lambda b, x: [(Conj(Seq(b.c, b.d), FAIR), Seq(Conj(b.c, FAIR), Conj(b.d, FAIR)))]),
        L("skip-fair", "fair", "skip && fair = fin(eps)", [], EQ,
          lambda b, x: [(Conj(SKIP, FAIR), Fin(EPS))]),
        L("term-fair", "fair", "term && fair = fin(alpha)", [], EQ,
          lambda b, x: [(Conj(TERM, FAIR), FIN_ALPHA)]),
        L("fair-termination", "fair", "term [= c  =>  fin(alpha) [= c && fair",
          [("c", C)], REF, lambda b, x: [(FIN_ALPHA, Conj(b.c, FAIR))],
          premise="term-refined"),
        # -- fairness and concurrency
        L("fair-par-fair-expand", "fair and concurrency",
          "fair || fair = fin(eps);(nil + pi;(fair || fair))", [], EQ,
          lambda b, x: [(Par(FAIR, FAIR),
                         Seq(Fin(EPS), Choice((NIL, Seq(PI, Par(FAIR, FAIR))))))]),
        L("fair-par-fair", "fair and concurrency", "fair [= fair || fair", [], REF,
          lambda b, x: [(FAIR, Par(FAIR, FAIR))]),
        L("fair-distrib-par-both", "fair and concurrency",
          "(c || d) && fair [= (c && fair) || (d && fair)", [("c", C), ("d", C)], REF,
          lambda b, x: [(Conj(Par(b.c, b.d), FAIR), Par(Conj(b.c, FAIR), Conj(b.d, FAIR)))]),
        L("fair-par-chaos-expand", "fair and concurrency",
          "fair || chaos = fin(eps);(nil + pi;(fair || chaos))", [], EQ,
          lambda b, x: [(Par(FAIR, CHAOS),
                         Seq(Fin(EPS), Choice((NIL, Seq(PI, Par(FAIR, CHAOS))))))]),
        L("fair-par-chaos", "fair and concurrency", "fair || chaos = fair", [], EQ,
          lambda b, x: [(Par(FAIR, CHAOS), FAIR)]),
        L("fair-distrib-par-one", "fair and concurrency",
          "(c || d) && fair [= (c && fair) || d", [("c", C), ("d", C)], REF,
          lambda b, x: [(Conj(Par(b.c, b.d), FAIR), Par(Conj(b.c, FAIR), b.d))]),
        # -- fair parallel
        L("fair-parallel-commutes", "fair parallel", "c ||f d = d ||f c",
          [("c", C), ("d", C)], EQ, lambda b, x: [(FairPar(b.c, b.d), FairPar(b.d, b.c))]),
        L("fair-parallel-distrib", "fair parallel",
          "D nonempty => c ||f (+D) = +{c ||f d | d in D}", [("c", C), ("D", CS1)], EQ,
          lambda b, x: [(FairPar(b.c, choice_of(b.D)),
                         choice_of(FairPar(b.c, d) for d in b.D))]),
        L("fair-par-monotonic", "fair parallel", "d1 [= d2  =>  c ||f d1 [= c ||f d2",
          [("c", C), ("d1", C), ("d2", C)], REF,
          lambda b, x: [(FairPar(b.c, b.d1), FairPar(b.c, b.d2))], premise="refines-pair"),
        L("fair-parallel-nil", "fair parallel", "c ||f nil = (c && fair);skip", [("c", C)], EQ,
          lambda b, x: [(FairPar(b.c, NIL), Seq(Conj(b.c, FAIR), SKIP))]),
        L("introduce-fair-skip", "fair parallel", "c ||f d [= ((c ||f d) && fair);skip",
          [("c", C), ("d", C)], REF,
          lambda b, x: [(FairPar(b.c, b.d), Seq(Conj(FairPar(b.c, b.d), FAIR), SKIP))]),
        L("finite-absorb-fair-skip", "fair parallel",
          "(((c && fin(alpha)) ||f (d && fin(alpha))) && fair);skip = "
          "(c && fin(alpha)) ||f (d && fin(alpha))", [("c", C), ("d", C)], EQ,
          lambda b, x: [(Seq(Conj(FairPar(Conj(b.c, FIN_ALPHA), Conj(b.d, FIN_ALPHA)), FAIR),
                             SKIP),
                         FairPar(Conj(b.c, FIN_ALPHA), Conj(b.d, FIN_ALPHA)))]),
        L("infinite-absorb-fair-skip", "fair parallel",
          "(((c && inf(alpha)) ||f d) && fair);skip = (c && inf(alpha)) ||f d",
          [("c", C), ("d", C)], EQ,
          lambda b, x: [(Seq(Conj(FairPar(Conj(b.c, INF_ALPHA), b.d), FAIR), SKIP),
                         FairPar(Conj(b.c, INF_ALPHA), b.d))]),
        L("absorb-fair-skip", "fair parallel", "((c ||f d) && fair);skip = c ||f d",
          [("c", C), ("d", C)], EQ,
          lambda b, x: [(Seq(Conj(FairPar(b.c, b.d), FAIR), SKIP), FairPar(b.c, b.d))]),
        L("fair-parallel-associative", "fair parallel", "(c ||f d) ||f e = c ||f (d ||f e)",
          [("c", C), ("d", C), ("e", C)], EQ,
          lambda b, x: [(FairPar(FairPar(b.c, b.d), b.e), FairPar(b.c, FairPar(b.d, b.e)))]),
    ]
    return laws


def law_by_name(name: str) -> LawSpec:
    for law in catalog():
        if law.name == name:
            return law
    raise KeyError(name)


# --------------------------------------------------------------------------
# binding generation

COMMAND_CORPUS: tuple[Cmd, ...] = (
    ABORT, MAGIC, NIL, SKIP, CHAOS, TERM, FAIR, PI, EPS, Seq(PI, EPS), Fin(PI), Om(EPS),
    Inf(ALPHA))

RANDOM_LEAVES = (ABORT, MAGIC, NIL, SKIP, CHAOS, TERM, FAIR, PI, EPS, ALPHA)


def curated_atomics(space: StateSpace) -> list[Cmd]:
    out: list[Cmd] = [PI, EPS, ALPHA]
    for kind in ("pgm", "env"):
        for i in space.states:
            for j in space.states:
                out.append(Atomic(kind, ((i, j),)))
    for kind in ("pgm", "env"):
        for i in space.states:
            for j in space.states:
                out.append(Atomic(kind, ((i, j),), True))
    out.append(Atomic("pgm", ()))
    return out


def all_atomics(space: StateSpace) -> list[Cmd]:
    steps = space.all_steps()
    out = []
    for mask in range(1 << len(steps)):
        chosen = [s for k, s in enumerate(steps) if mask >> k & 1]
        out.append(atomic_term(AtomicCommand(space, frozenset(chosen))))
    return out


def random_atomic_term(rng: random.Random, space: StateSpace) -> Cmd:
    steps = space.all_steps()
    chosen = [s for s in steps if rng.random() < 0.5]
    return atomic_term(AtomicCommand(space, frozenset(chosen)))


def random_command(rng: random.Random, space: StateSpace, depth: int) -> Cmd:
    if rng.random() < 0.3:
        return rng.choice(COMMAND_CORPUS)
    return random_ast(rng, depth, space, leaves=RANDOM_LEAVES, leaf_bias=0.25)


class _Draw:
    """Draws values per sort; the first draws walk the curated lists."""

    def __init__(self, rng: random.Random, space: StateSpace, depth: int):
        self.rng, self.space, self.depth = rng, space, depth
        self.atomics = curated_atomics(space)

    def value(self, sort: str, k: int):
        rng = self.rng
        if sort == S:
            return (Par, Conj)[k % 2] if k < 2 else rng.choice((Par, Conj))
        if sort == N_:
            return k % 4 if k < 4 else rng.randrange(4)
        if sort == A:
            if k < len(self.atomics) and rng.random() < 0.6:
                return self.atomics[k]
            return (rng.choice(self.atomics) if rng.random() < 0.5
                    else random_atomic_term(rng, self.space))
        if sort == C:
            if k < len(COMMAND_CORPUS):
                return COMMAND_CORPUS[k] if rng.random() < 0.5 else self.command()
            return self.command()
        if sort in (CS, CS1):
            lo = 0 if sort == CS else 1
            n = rng.randint(lo, 3)
            return tuple(self.command() for _ in range(n))
        raise ValueError(f"unknown sort {sort}")

    def command(self) -> Cmd:
        return random_command(self.rng, self.space, self.depth)


def finite_domain(law: LawSpec, space: StateSpace) -> Optional[list[Bindings]]:
    """All bindings when every sort is finite, else None."""
    domains = []
    for var, sort in law.quantifiers:
        if sort == S:
            domains.append([Par, Conj])
        elif sort == N_:
            domains.append(list(range(4)))
        elif sort == A and len(space.all_steps()) <= 8:
            domains.append(all_atomics(space))
        else:
            return None
    return [Bindings(zip(law.variables, vals)) for vals in product(*domains)]


def _premise(law: LawSpec, b: Bindings, draw: _Draw) -> Bindings:
    rng = draw.rng
    if law.premise == "term-refined":
        # term && c' refines term exactly when it cannot abort
        for _ in range(50):
            if not can_abort(Conj(TERM, b.c), draw.space):
                break
            b["c"] = draw.command()
        else:
            b["c"] = SKIP
        b["c"] = Conj(TERM, b.c)
    elif law.premise == "healthy":
        b["c"] = Seq(b.c, SKIP)
    elif law.premise == "conj-fin":
        b["c"] = Conj(b.c, FIN_ALPHA)
        b["d"] = Conj(b.d, FIN_ALPHA)
    elif law.premise == "refines-pair":
        b["d1"] = Choice((b.d2, draw.command()))
    elif law.premise == "omega-candidates":
        y = draw.command()
        b["x"] = rng.choice([
            Seq(Om(b.c), b.d), Seq(Fin(b.c), b.d), Seq(Om(b.c), Join(b.d, y)),
            Seq(Om(Join(b.c, y)), b.d), MAGIC, b.x, b.x])
    elif law.premise == "finite-candidates":
        y = draw.command()
        b["x"] = rng.choice([
            Seq(Fin(b.c), b.d), Seq(Om(b.c), b.d), Seq(Fin(Choice((b.c, y))), b.d),
            Seq(Om(Choice((b.c, y))), b.d), ABORT, b.x, b.x])
    return b


PREMISE_GENERATORS = ("term-refined", "healthy", "conj-fin", "refines-pair",
                      "omega-candidates", "finite-candidates")


def generate_bindings(law: LawSpec, space: StateSpace, budget: int, seed: int,
                      depth: int = 3) -> Iterator[Bindings]:
    """Up to ``budget`` distinct bindings; exhaustive when the domain is finite
    and no larger than the budget."""
    domain = finite_domain(law, space)
    if domain is not None and len(domain) <= budget:
        yield from domain
        return
    rng = random.Random(f"{seed}:{law.name}:{space.size}")
    draw = _Draw(rng, space, depth)
    seen = set()
    k = 0
    attempts = 0
    while len(seen) < budget and attempts < budget * 20:
        attempts += 1
        b = Bindings((var, draw.value(sort, k)) for var, sort in law.quantifiers)
        b = _premise(law, b, draw)
        key = tuple(sorted(b.render().items()))
        k += 1
        if key in seen:
            continue
        seen.add(key)
        yield b


# --------------------------------------------------------------------------
# checking

@dataclass
class Violation:
    bindings: dict[str, str]
    side: str
    witness: str
    clause: int = 0

    def as_dict(self) -> dict:
        return {"bindings": self.bindings, "witnessSide": self.side, "witness": self.witness}


@dataclass
class InstanceResult:
    status: str                      # pass | fail | vacuous | skipped
    violation: Optional[Violation] = None
    note: str = ""


def check_law(law: LawSpec, b: Bindings, space: StateSpace, w: Window) -> InstanceResult:
    ctx = Context(space, w)
    try:
        if law.relation == IMPL:
            for lhs, rhs in law.hypothesis(b, ctx):
                if not check_refines(lhs, rhs, space, w).holds:
                    return InstanceResult("vacuous")
        for idx, (lhs, rhs) in enumerate(law.clauses(b, ctx)):
            if law.relation == EQ:
                v = check_equal(lhs, rhs, space, w)
            else:
                v = check_refines(lhs, rhs, space, w)
            if not v.holds:
                return InstanceResult("fail", Violation(b.render(), v.witness.side,
                                                        str(v.witness.observation), idx))
    except (ResourceLimitError, RecursionError) as exc:
        return InstanceResult("skipped", note=str(exc))
    return InstanceResult("pass")


@dataclass
class LawReport:
    law: str
    kind: str
    states: int
    window: Window
    instances: int = 0
    vacuous: int = 0
    skipped: int = 0
    exhaustive: bool = False
    violations: list[Violation] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def status(self) -> str:
        if self.violations:
            return "fail"
        if self.instances == 0 or self.skipped:
            return "skipped"
        return "pass"

    def as_dict(self) -> dict:
        """Deterministic for a fixed configuration (no timings)."""
        return {"law": self.law, "status": self.status, "instances": self.instances,
                "violations": [v.as_dict() for v in self.violations],
                "window": self.window.as_dict(), "states": self.states, "kind": self.kind,
                "exhaustive": self.exhaustive, "vacuous": self.vacuous,
                "skipped": self.skipped}


@dataclass(frozen=True)
class RunConfig:
    states: int = 2
    bound: int = 5
    lasso_prefix: int = 3
    lasso_period: int = 3
    samples: int = 100
    depth: int = 3
    seed: int = 2024
    only: Optional[tuple[str, ...]] = None
    max_violations: int = 3

    @property
    def window(self) -> Window:
        return Window(self.bound, self.lasso_prefix, self.lasso_period)

    @property
    def space(self) -> StateSpace:
        return StateSpace(self.states)


def run_law(law: LawSpec, cfg: RunConfig) -> LawReport:
    space, w = cfg.space, cfg.window
    rep = LawReport(law.name, law.kind, space.size, w)
    domain = finite_domain(law, space)
    rep.exhaustive = domain is not None and len(domain) <= cfg.samples
    start = time.perf_counter()
    for b in generate_bindings(law, space, cfg.samples, cfg.seed, cfg.depth):
        res = check_law(law, b, space, w)
        if res.status == "skipped":
            rep.skipped += 1
            continue
        rep.instances += 1
        if res.status == "vacuous":
            rep.vacuous += 1
        elif res.status == "fail" and len(rep.violations) < cfg.max_violations:
            rep.violations.append(res.violation)
    rep.seconds = time.perf_counter() - start
    return rep


def run_suite(cfg: RunConfig) -> list[LawReport]:
    laws = catalog()
    if cfg.only:
        unknown = set(cfg.only) - {l.name for l in laws}
        if unknown:
            raise KeyError(f"unknown law(s): {', '.join(sorted(unknown))}")
        laws = [l for l in laws if l.name in cfg.only]
    return [run_law(law, cfg) for law in laws]


# --------------------------------------------------------------------------
# mutants: statements that are false and must be refuted

@dataclass(frozen=True)
class Mutant:
    name: str
    relation: str
    lhs: Cmd
    rhs: Cmd


def _reverse_fair_distrib_candidates() -> list[tuple[Cmd, Cmd]]:
    corpus = COMMAND_CORPUS
    return [(c, d) for c in corpus for d in corpus]


def find_reverse_fair_distrib(space: StateSpace, w: Window) -> Optional[Mutant]:
    """Search the corpus for c, d refuting
    (c && fair) || (d && fair) [= (c || d) && fair."""
    for c, d in _reverse_fair_distrib_candidates():
        lhs = Par(Conj(c, FAIR), Conj(d, FAIR))
        rhs = Conj(Par(c, d), FAIR)
        if not check_refines(lhs, rhs, space, w).holds:
            return Mutant(f"reverse fair-distrib-par-both (c = {to_text(c)}, d = {to_text(d)})",
                          REF, lhs, rhs)
    return None


def mutants(space: StateSpace, w: Window) -> list[Mutant]:
    out = [
        Mutant("pi || pi = pi", EQ, Par(PI, PI), PI),
        Mutant("term && chaos = fin(alpha)", EQ, Conj(TERM, CHAOS), FIN_ALPHA),
        Mutant("fair [= chaos", REF, FAIR, CHAOS),
        Mutant("skip && fair = skip", EQ, Conj(SKIP, FAIR), SKIP),
        Mutant("fin(eps) = om(eps)", EQ, Fin(EPS), Om(EPS)),
        Mutant("nil || pi = pi", EQ, Par(NIL, PI), PI),
        Mutant("nil ||f nil = nil && fair", EQ, FairPar(NIL, NIL), Conj(NIL, FAIR)),
        Mutant("(nil || eps);(pi || nil) [= (nil;pi) || (eps;nil)", REF,
               Seq(Par(NIL, EPS), Par(PI, NIL)), Par(Seq(NIL, PI), Seq(EPS, NIL))),
    ]
    rev = find_reverse_fair_distrib(space, w)
    if rev is not None:
        out.append(rev)
    return out


@dataclass
class MutantReport:
    name: str
    refuted: bool
    side: Optional[str] = None
    witness: Optional[str] = None
    witness_object: object = None

    def as_dict(self) -> dict:
        return {"mutant": self.name, "status": "refuted" if self.refuted else "survived",
                "witnessSide": self.side, "witness": self.witness}


def run_mutants(space: StateSpace, w: Window) -> list[MutantReport]:
    out = []
    for m in mutants(space, w):
        check = check_equal if m.relation == EQ else check_refines
        v = check(m.lhs, m.rhs, space, w)
        if v.holds:
            out.append(MutantReport(m.name, False))
        else:
            out.append(MutantReport(m.name, True, v.witness.side, str(v.witness.observation),
                                    v.witness.observation))
    return out
