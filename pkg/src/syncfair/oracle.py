"""Brute-force membership oracle, independent of the automata engine.

Membership is decided directly from the trace decompositions of each
operator: split points for sequencing and iteration, enumeration of step
ownership for synchronisation.  Infinite observations need bounded searches
(how far to look for a split point or an aborting prefix, how far to unroll a
lasso before guessing the components of a parallel composition).  The bounds
are generous for small terms; answers are always sound and are complete
whenever the relevant witness lies within the bounds.
"""

from __future__ import annotations

from itertools import product
from typing import NamedTuple

from .atomic import step_sync_conj, step_sync_par, sync_preimage
from .syntax import (LEAVES, Abort, Atomic, Choice, Cmd, Conj, FairPar, Fin, Inf, Join, Magic,
                     Nil, Om, Par, Pow, Seq, expand)
from .traces import (Lasso, StateSpace, Status, Step, Trace, Window, canonicalize_lasso,
                     iter_lassos, iter_traces)

TERM, ABORT, INC = Status.TERM, Status.ABORT, Status.INC


class OracleLimitError(RuntimeError):
    """The requested membership question is too large for brute force."""


def _end(initial: int, w: tuple[Step, ...]) -> int:
    return w[-1].post if w else initial


class Oracle:
    def __init__(self, space: StateSpace, repeat: int = 4, unroll: int = 1,
                 period_mult: int = 2, max_choices: int = 1 << 14):
        self.space = space
        self.repeat = repeat            # split/abort search reaches |u| + repeat*|v|
        self.unroll = unroll            # extra period copies in a sync prefix
        self.period_mult = period_mult  # period powers tried for sync components
        self.max_choices = max_choices
        self._fin: dict = {}
        self._inf: dict = {}
        self._chain: dict = {}

    # -- entry points -----------------------------------------------------

    def member(self, obs: Trace | Lasso, c: Cmd) -> bool:
        c = expand(c)
        if isinstance(obs, Lasso):
            return self.lasso(c, canonicalize_lasso(obs))
        return self.fin(c, obs.initial, obs.steps, obs.status)

    # -- finite observations ----------------------------------------------

    def fin(self, c: Cmd, s0: int, w: tuple[Step, ...], st: Status) -> bool:
        key = (c, s0, w, st)
        got = self._fin.get(key)
        if got is None:
            if st is not ABORT and self.fin(c, s0, w, ABORT):
                got = True
            else:
                got = self._fin_core(c, s0, w, st)
            self._fin[key] = got
        return got

    def _fin_core(self, c: Cmd, s0: int, w: tuple[Step, ...], st: Status) -> bool:
        if isinstance(c, Abort):
            return True
        if isinstance(c, Magic):
            return st is INC and not w
        if isinstance(c, Nil):
            return st is not ABORT and not w
        if isinstance(c, Atomic):
            if st is ABORT:
                return False
            steps = c.resolve(self.space).steps
            if st is INC and not w:
                return True
            return len(w) == 1 and w[0] in steps
        if isinstance(c, Choice):
            return any(self.fin(o, s0, w, st) for o in c.options)
        if isinstance(c, Join):
            return self.fin(c.left, s0, w, st) and self.fin(c.right, s0, w, st)
        if isinstance(c, Seq):
            if st is not TERM and self.fin(c.left, s0, w, st):
                return True
            return any(self.fin(c.left, s0, w[:k], TERM)
                       and self.fin(c.right, _end(s0, w[:k]), w[k:], st)
                       for k in range(len(w) + 1))
        if isinstance(c, (Par, Conj)):
            table = step_sync_par if isinstance(c, Par) else step_sync_conj
            if st is ABORT:
                for k in range(len(w) + 1):
                    for w1, w2 in self._split(table, w[:k]):
                        if ((self.fin(c.left, s0, w1, ABORT) and self.fin(c.right, s0, w2, INC))
                                or (self.fin(c.left, s0, w1, INC)
                                    and self.fin(c.right, s0, w2, ABORT))):
                            return True
                return False
            return any(self.fin(c.left, s0, w1, st) and self.fin(c.right, s0, w2, st)
                       for w1, w2 in self._split(table, w))
        if isinstance(c, (Fin, Om)):
            if isinstance(c, Om) and self._om_degenerate(c.body):
                return True
            body = c.body
            if st is TERM:
                return self.chain(body, s0, w)
            return any(self.chain(body, s0, w[:k])
                       and self.fin(body, _end(s0, w[:k]), w[k:], st)
                       for k in range(len(w) + 1))
        if isinstance(c, Inf):
            return self.fin(Seq(Om(c.body), Magic()), s0, w, st)
        if isinstance(c, Pow):
            return self.fin(_pow(c), s0, w, st)
        raise TypeError(f"unexpected term {c!r}")

    def _om_degenerate(self, body: Cmd) -> bool:
        return any(self.fin(body, s, (), TERM) for s in self.space.states)

    def chain(self, c: Cmd, s0: int, w: tuple[Step, ...]) -> bool:
        """``w`` splits into non-empty terminated observations of ``c``."""
        key = (c, s0, w)
        got = self._chain.get(key)
        if got is None:
            reach = [True] + [False] * len(w)
            for j in range(1, len(w) + 1):
                reach[j] = any(reach[i] and self.fin(c, _end(s0, w[:i]), w[i:j], TERM)
                               for i in range(j))
            got = reach[-1]
            self._chain[key] = got
        return got

    def _split(self, table, w: tuple[Step, ...]):
        options = [sync_preimage(table, s) for s in w]
        count = 1
        for o in options:
            count *= len(o)
        if count > self.max_choices:
            raise OracleLimitError(f"too many step decompositions for {len(w)} steps")
        for pick in product(*options):
            yield tuple(a for a, _ in pick), tuple(b for _, b in pick)

    # -- infinite observations --------------------------------------------

    def lasso(self, c: Cmd, lasso: Lasso) -> bool:
        key = (c, lasso)
        got = self._inf.get(key)
        if got is None:
            horizon = len(lasso.prefix) + self.repeat * len(lasso.period)
            if self.fin(c, lasso.initial, lasso.unroll(horizon), ABORT):
                got = True
            else:
                got = self._lasso_core(c, lasso, horizon)
            self._inf[key] = got
        return got

    def _lasso_core(self, c: Cmd, lasso: Lasso, horizon: int) -> bool:
        s0 = lasso.initial
        if isinstance(c, (Abort,)):
            return True
        if isinstance(c, (Magic, Nil, Atomic)):
            return False
        if isinstance(c, Choice):
            return any(self.lasso(o, lasso) for o in c.options)
        if isinstance(c, Join):
            return self.lasso(c.left, lasso) and self.lasso(c.right, lasso)
        if isinstance(c, Seq):
            if self.lasso(c.left, lasso):
                return True
            return any(self.fin(c.left, s0, lasso.unroll(n), TERM)
                       and self.lasso(c.right, lasso.suffix(n))
                       for n in range(horizon + 1))
        if isinstance(c, Conj):
            return self.lasso(c.left, lasso) and self.lasso(c.right, lasso)
        if isinstance(c, Par):
            return self._par_lasso(c, lasso)
        if isinstance(c, (Fin, Om)):
            body = c.body
            if isinstance(c, Om) and self._om_degenerate(body):
                return True
            if any(self.chain(body, s0, lasso.unroll(n)) and self.lasso(body, lasso.suffix(n))
                   for n in range(horizon + 1)):
                return True
            return isinstance(c, Om) and self._chunk_cycle(body, lasso)
        if isinstance(c, Inf):
            return self.lasso(Seq(Om(c.body), Magic()), lasso)
        if isinstance(c, Pow):
            return self.lasso(_pow(c), lasso)
        raise TypeError(f"unexpected term {c!r}")

    def _chunk_cycle(self, body: Cmd, lasso: Lasso) -> bool:
        """Infinitely many non-empty terminated chunks: a chunk boundary ``b``
        after the prefix, reachable by chunks, from which ``m`` whole periods
        split into chunks again (and hence forever)."""
        k, p = len(lasso.prefix), len(lasso.period)
        for b in range(k, k + (self.repeat + 1) * p):
            head = lasso.unroll(b)
            if not self.chain(body, lasso.initial, head):
                continue
            start = _end(lasso.initial, head)
            for m in range(1, self.repeat + 1):
                seg = lasso.unroll(b + m * p)[b:]
                if self.chain(body, start, seg):
                    return True
        return False

    def _par_lasso(self, c: Par, lasso: Lasso) -> bool:
        """Guess each step's owner over an unrolled prefix and a powered
        period; both components must then be lassos of their commands."""
        s0 = lasso.initial
        for a in range(self.unroll + 1):
            head = lasso.prefix + lasso.period * a
            for m in range(1, self.period_mult + 1):
                cyc = lasso.period * m
                for h1, h2 in self._split(step_sync_par, head):
                    for c1, c2 in self._split(step_sync_par, cyc):
                        if (self.lasso(c.left, canonicalize_lasso(Lasso(s0, h1, c1)))
                                and self.lasso(c.right, canonicalize_lasso(Lasso(s0, h2, c2)))):
                            return True
        return False


def _pow(c: Pow) -> Cmd:
    if c.exponent == 0:
        return Nil()
    out = c.body
    for _ in range(c.exponent - 1):
        out = Seq(out, c.body)
    return out


def oracle_member(obs: Trace | Lasso, ast: Cmd, space: StateSpace,
                  oracle: Oracle | None = None) -> bool:
    """Whether ``obs`` belongs to the trace set of ``ast`` (brute force)."""
    return (oracle or Oracle(space)).member(obs, ast)


# --------------------------------------------------------------------------
# exhaustive agreement with the automata engine

def small_terms(space: StateSpace, max_exponent: int = 3) -> list[Cmd]:
    """Every term of depth at most 2 over the constants, the atomic
    commands pi, eps, alpha and the empty program step set."""
    leaves = list(LEAVES) + [Atomic("pgm", ())]
    out = list(leaves)
    for leaf in leaves:
        out += [Fin(leaf), Om(leaf), Inf(leaf)]
        out += [Pow(leaf, i) for i in range(max_exponent + 1)]
    for a in leaves:
        for b in leaves:
            out += [Seq(a, b), Choice((a, b)), Join(a, b), Par(a, b), Conj(a, b),
                    FairPar(a, b)]
    return out


class Disagreement(NamedTuple):
    term: Cmd
    observation: Trace | Lasso
    engine: bool
    oracle: bool


class Agreement(NamedTuple):
    terms: int
    observations: int
    disagreements: list[Disagreement]
    limits: int            # questions the oracle declined as too large


def check_agreement(terms: list[Cmd], space: StateSpace, w: Window) -> Agreement:
    """Compare window membership from the engine with the oracle on every
    observation in the window."""
    from .denotation import denote

    observations = list(iter_traces(space, w.N)) + list(iter_lassos(space, w.K, w.L))
    bad: list[Disagreement] = []
    limits = 0
    oracle = Oracle(space)       # its caches are keyed by subterm, so sharing is safe
    for c in terms:
        den = denote(c, space, w)
        for obs in observations:
            try:
                got = oracle.member(obs, c)
            except OracleLimitError:
                limits += 1
                continue
            if got != (obs in den):
                bad.append(Disagreement(c, obs, obs in den, got))
    return Agreement(len(terms), len(observations), bad, limits)
