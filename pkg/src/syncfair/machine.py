"""Exact trace automata for commands.

Each command compiles to a nondeterministic automaton over steps whose states
are built lazily.  Reading a finite step sequence from the initial states
gives a run set ``S``:

* the trace with any status is a member if ``S`` is ``{BOT}`` (abort reached),
* the trace is an incomplete member iff ``S`` is non-empty,
* it is a terminated member iff some state in ``S`` is terminal.

An infinite sequence is a member iff it has an aborting prefix or some run
over it is accepting under a generalized Buchi condition (``n_acc`` sets,
every accepting run visits each set infinitely often; with ``n_acc == 0``
every infinite run is accepting).  The run set containing ``BOT`` collapses
to ``{BOT}`` because an aborted prefix brings every extension with it.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Optional

from .atomic import SyncTable, step_sync_conj, step_sync_par, sync_preimage
from .syntax import (Abort, Atomic, Choice, Cmd, Conj, Fin, Inf, Join, Magic, Nil, Om,
                     Par, Pow, Seq, expand)
from .traces import StateSpace, Step

BOT = -1
BOT_SET = frozenset((BOT,))
REDUCE_LIMIT = 4000   # largest machine explored eagerly for state merging
EMPTY = frozenset()
RunSet = frozenset


class Machine:
    """Base class: interns structured states to small integers and caches
    transitions.  Subclasses implement ``_initial``, ``_succ``, ``_term`` and
    ``_acc`` on structured states; ``BOT`` may appear among successors."""

    n_acc = 0

    def __init__(self) -> None:
        self._ids: dict[Hashable, int] = {}
        self._raw: list[Hashable] = []
        self._term: list[bool] = []
        self._accs: list[frozenset[int]] = []
        self._steps: dict[tuple[int, Step], frozenset[int]] = {}
        self._advance: dict[tuple[frozenset[int], Step], frozenset[int]] = {}
        self._lasso: dict[tuple[frozenset[int], tuple[Step, ...]], bool] = {}
        self._good: dict[tuple[Step, ...], dict[tuple[int, int], bool]] = {}
        self._init: Optional[frozenset[int]] = None

    # -- interning --------------------------------------------------------

    def _intern_all(self, raws: Iterable[Hashable]) -> frozenset[int]:
        out = set()
        for raw in raws:
            if raw == BOT:
                return BOT_SET
            q = self._ids.get(raw)
            if q is None:
                q = len(self._raw)
                self._ids[raw] = q
                self._raw.append(raw)
                self._term.append(self._term_of(raw))
                self._accs.append(frozenset(self._acc_of(raw)))
            out.add(q)
        return frozenset(out)

    def _initial(self) -> Iterable[Hashable]:
        raise NotImplementedError

    def _succ(self, raw: Hashable, s: Step) -> Iterable[Hashable]:
        raise NotImplementedError

    def _term_of(self, raw: Hashable) -> bool:
        raise NotImplementedError

    def _acc_of(self, raw: Hashable) -> Iterable[int]:
        return ()

    # -- public interface -------------------------------------------------

    def initial(self) -> frozenset[int]:
        if self._init is None:
            self._init = self._intern_all(self._initial())
        return self._init

    def step(self, q: int, s: Step) -> frozenset[int]:
        if q == BOT:
            return BOT_SET
        key = (q, s)
        got = self._steps.get(key)
        if got is None:
            got = self._intern_all(self._succ(self._raw[q], s))
            self._steps[key] = got
        return got

    def is_term(self, q: int) -> bool:
        return q == BOT or self._term[q]

    def acc(self, q: int) -> frozenset[int]:
        return self._accs[q]

    def advance(self, S: frozenset[int], s: Step) -> frozenset[int]:
        """Run set after reading one more step."""
        if S == BOT_SET:
            return BOT_SET
        key = (S, s)
        got = self._advance.get(key)
        if got is None:
            acc: set[int] = set()
            for q in S:
                nxt = self.step(q, s)
                if nxt == BOT_SET:
                    acc = {BOT}
                    break
                acc |= nxt
            got = frozenset(acc)
            self._advance[key] = got
        return got

    def run(self, steps: Iterable[Step]) -> frozenset[int]:
        S = self.initial()
        for s in steps:
            if not S:
                break
            S = self.advance(S, s)
        return S

    def any_term(self, S: frozenset[int]) -> bool:
        return any(self.is_term(q) for q in S)

    def accepts_period(self, S: frozenset[int], period: tuple[Step, ...]) -> bool:
        """Whether some run from ``S`` over ``period`` repeated forever is
        accepting (an abort along the way counts)."""
        if not S:
            return False
        if BOT in S:
            return True
        key = (S, period)
        got = self._lasso.get(key)
        if got is None:
            good = self._good.get(period)
            if good is None:
                good = self._good[period] = {}
            got = False
            for q in S:
                node = (q, 0)
                if node not in good:
                    self._explore(node, period, good)
                if good[node]:
                    got = True
                    break
            self._lasso[key] = got
        return got

    def _explore(self, root: tuple[int, int], period: tuple[Step, ...],
                 good: dict[tuple[int, int], bool]) -> None:
        """Decide, for every node of the product graph over (state, position
        in period) reachable from ``root`` and not yet decided, whether an
        accepting run starts there.  Tarjan's algorithm emits components
        after every component they reach, so one pass settles each."""
        n = len(period)
        need = frozenset(range(self.n_acc))
        index: dict = {}
        low: dict = {}
        stack: list = []
        on_stack: set = set()
        succ: dict = {}
        counter = 0

        def successors(node):
            q, i = node
            nxt = self.step(q, period[i])
            j = (i + 1) % n
            return [(BOT, j)] if nxt == BOT_SET else [(r, j) for r in nxt]

        def visit(node):
            nonlocal counter
            index[node] = low[node] = counter
            counter += 1
            stack.append(node)
            on_stack.add(node)
            succ[node] = successors(node)
            return iter(succ[node])

        work = [(root, visit(root))]
        while work:
            node, it = work[-1]
            advanced = False
            for m in it:
                if m[0] == BOT or m in good:
                    continue
                if m not in index:
                    work.append((m, visit(m)))
                    advanced = True
                    break
                if m in on_stack:
                    low[node] = min(low[node], index[m])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] != index[node]:
                continue
            comp = []
            while True:
                m = stack.pop()
                on_stack.discard(m)
                comp.append(m)
                if m == node:
                    break
            members = set(comp)
            ok = False
            cyclic = len(comp) > 1 or node in succ[node]
            if cyclic:
                labels: set[int] = set()
                for q, _ in comp:
                    labels |= self._accs[q]
                ok = need <= labels
            if not ok:
                for m in comp:
                    for r in succ[m]:
                        if r[0] == BOT or (r not in members and good.get(r)):
                            ok = True
                            break
                    if ok:
                        break
            for m in comp:
                good[m] = ok


# --------------------------------------------------------------------------
# primitive machines

class AbortMachine(Machine):
    def _initial(self):
        return (BOT,)


class MagicMachine(Machine):
    def _initial(self):
        return ("m",)

    def _succ(self, raw, s):
        return ()

    def _term_of(self, raw):
        return False


class NilMachine(Machine):
    def _initial(self):
        return ("n",)

    def _succ(self, raw, s):
        return ()

    def _term_of(self, raw):
        return True


class AtomicMachine(Machine):
    def __init__(self, steps: frozenset[Step]):
        super().__init__()
        self.steps = steps

    def _initial(self):
        return ("I",)

    def _succ(self, raw, s):
        return ("T",) if raw == "I" and s in self.steps else ()

    def _term_of(self, raw):
        return raw == "T"


# --------------------------------------------------------------------------
# composite machines

def _shift(indices: Iterable[int], by: int) -> set[int]:
    return {i + by for i in indices}


class SeqMachine(Machine):
    def __init__(self, c: Machine, d: Machine):
        super().__init__()
        self.c, self.d = c, d
        self.n_acc = c.n_acc + d.n_acc

    def _after_c(self, qs: frozenset[int]):
        out = []
        for q in qs:
            if q == BOT:
                return [BOT]
            out.append(("L", q))
            if self.c.is_term(q):
                out.extend(("R", r) if r != BOT else BOT for r in self.d.initial())
        return out

    def _initial(self):
        return self._after_c(self.c.initial())

    def _succ(self, raw, s):
        tag, q = raw
        if tag == "L":
            return self._after_c(self.c.step(q, s))
        return [("R", r) if r != BOT else BOT for r in self.d.step(q, s)]

    def _term_of(self, raw):
        return raw[0] == "R" and self.d.is_term(raw[1])

    def _acc_of(self, raw):
        tag, q = raw
        if tag == "L":
            return set(self.c.acc(q)) | set(range(self.c.n_acc, self.n_acc))
        return set(range(self.c.n_acc)) | _shift(self.d.acc(q), self.c.n_acc)


class ChoiceMachine(Machine):
    def __init__(self, parts: list[Machine]):
        super().__init__()
        self.parts = parts
        self.offsets = []
        total = 0
        for m in parts:
            self.offsets.append(total)
            total += m.n_acc
        self.n_acc = total

    @staticmethod
    def _tag(i, qs):
        return [BOT if q == BOT else (i, q) for q in qs]

    def _initial(self):
        out = []
        for i, m in enumerate(self.parts):
            out.extend(self._tag(i, m.initial()))
        return out

    def _succ(self, raw, s):
        i, q = raw
        return self._tag(i, self.parts[i].step(q, s))

    def _term_of(self, raw):
        i, q = raw
        return self.parts[i].is_term(q)

    def _acc_of(self, raw):
        i, q = raw
        off = self.offsets[i]
        own = self.parts[i]
        labels = set(range(self.n_acc)) - set(range(off, off + own.n_acc))
        return labels | _shift(own.acc(q), off)


class JoinMachine(Machine):
    """Intersection.  Once one side has aborted it allows everything, so the
    product continues as the other side alone."""

    def __init__(self, c: Machine, d: Machine):
        super().__init__()
        self.c, self.d = c, d
        self.n_acc = c.n_acc + d.n_acc

    def _pairs(self, cs, ds):
        if cs == BOT_SET and ds == BOT_SET:
            return [BOT]
        if cs == BOT_SET:
            return [("R", q) for q in ds]
        if ds == BOT_SET:
            return [("L", q) for q in cs]
        return [("B", p, q) for p in cs for q in ds]

    def _initial(self):
        return self._pairs(self.c.initial(), self.d.initial())

    def _succ(self, raw, s):
        if raw[0] == "B":
            return self._pairs(self.c.step(raw[1], s), self.d.step(raw[2], s))
        if raw[0] == "L":
            return [BOT if q == BOT else ("L", q) for q in self.c.step(raw[1], s)]
        return [BOT if q == BOT else ("R", q) for q in self.d.step(raw[1], s)]

    def _term_of(self, raw):
        if raw[0] == "B":
            return self.c.is_term(raw[1]) and self.d.is_term(raw[2])
        if raw[0] == "L":
            return self.c.is_term(raw[1])
        return self.d.is_term(raw[1])

    def _acc_of(self, raw):
        m = self.c.n_acc
        if raw[0] == "B":
            return set(self.c.acc(raw[1])) | _shift(self.d.acc(raw[2]), m)
        if raw[0] == "L":
            return set(self.c.acc(raw[1])) | set(range(m, self.n_acc))
        return set(range(m)) | _shift(self.d.acc(raw[1]), m)


class SyncMachine(Machine):
    """Lock-step product under a step synchronisation table."""

    def __init__(self, c: Machine, d: Machine, table: SyncTable):
        super().__init__()
        self.c, self.d, self.table = c, d, table
        self.n_acc = c.n_acc + d.n_acc
        self._pre: dict[Step, list[tuple[Step, Step]]] = {}

    def _pairs(self, cs, ds):
        if not cs or not ds:
            return []
        if cs == BOT_SET or ds == BOT_SET:
            return [BOT]
        return [(p, q) for p in cs for q in ds]

    def _initial(self):
        return self._pairs(self.c.initial(), self.d.initial())

    def _succ(self, raw, s):
        pre = self._pre.get(s)
        if pre is None:
            pre = self._pre[s] = sync_preimage(self.table, s)
        out = []
        for a, b in pre:
            out.extend(self._pairs(self.c.step(raw[0], a), self.d.step(raw[1], b)))
        return out

    def _term_of(self, raw):
        return self.c.is_term(raw[0]) and self.d.is_term(raw[1])

    def _acc_of(self, raw):
        return set(self.c.acc(raw[0])) | _shift(self.d.acc(raw[1]), self.c.n_acc)


class OmMachine(Machine):
    """Possibly infinite iteration of non-empty terminated chunks.  ``H`` is
    the hub between chunks; visiting it infinitely often is accepting."""

    def __init__(self, c: Machine):
        super().__init__()
        self.c = c
        self.n_acc = c.n_acc

    def _lift(self, qs):
        out = []
        for q in qs:
            if q == BOT:
                return [BOT]
            out.append(("C", q))
            if self.c.is_term(q):
                out.append("H")
        return out

    def _initial(self):
        return ("H",)

    def _succ(self, raw, s):
        if raw == "H":
            out = []
            for q in self.c.initial():
                out.extend(self._lift(self.c.step(q, s)))
            return out
        return self._lift(self.c.step(raw[1], s))

    def _term_of(self, raw):
        return raw == "H"

    def _acc_of(self, raw):
        if raw == "H":
            return range(self.n_acc)
        return self.c.acc(raw[1])


class FinMachine(Machine):
    """Finitely many terminated chunks, optionally followed by one chunk that
    does not terminate.  ``A`` states lead back to the hub; ``B`` states run
    the final chunk and carry its acceptance (set 0 marks being in ``B``)."""

    def __init__(self, c: Machine):
        super().__init__()
        self.c = c
        self.n_acc = 1 + c.n_acc

    def _lift(self, qs, final: bool):
        out = []
        for q in qs:
            if q == BOT:
                return [BOT]
            out.append(("A", q))
            if final:
                out.append(("B", q))
            if self.c.is_term(q):
                out.append("H")
        return out

    def _initial(self):
        return ("H",)

    def _succ(self, raw, s):
        if raw == "H":
            out = []
            for q in self.c.initial():
                out.extend(self._lift(self.c.step(q, s), True))
            return out
        tag, q = raw
        nxt = self.c.step(q, s)
        if tag == "A":
            return self._lift(nxt, False)
        return [BOT if r == BOT else ("B", r) for r in nxt]

    def _term_of(self, raw):
        return raw == "H"

    def _acc_of(self, raw):
        if raw != "H" and raw[0] == "B":
            return {0} | _shift(self.c.acc(raw[1]), 1)
        return ()


# --------------------------------------------------------------------------
# explicit machines and reduction

class ExplicitMachine(Machine):
    """A fully explored machine given by tables over block numbers."""

    def __init__(self, n_acc: int, init: frozenset, table: list[dict[Step, tuple]],
                 term: list[bool], accs: list[frozenset[int]]):
        super().__init__()
        self.n_acc = n_acc
        self._init_raw = init
        self._table = table
        self._term_raw = term
        self._acc_raw = accs

    def _initial(self):
        return self._init_raw

    def _succ(self, raw, s):
        return self._table[raw].get(s, ())

    def _term_of(self, raw):
        return self._term_raw[raw]

    def _acc_of(self, raw):
        return self._acc_raw[raw]


def reduce_machine(m: Machine, letters: tuple[Step, ...], limit: int) -> Machine:
    """Explore ``m`` completely and merge bisimilar states.  Gives up and
    returns ``m`` itself once more than ``limit`` states are reachable.

    Two clean-ups precede the merge: a dead state (no successors, not
    terminal) is dropped from any set that has other members, since it only
    witnesses non-emptiness; and acceptance labels are cleared on states with
    no infinite future."""
    init = m.initial()
    if init == BOT_SET:
        return AbortMachine()
    order = sorted(init)
    seen = set(order)
    succ: dict[int, list[frozenset[int]]] = {}
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        row = [m.step(q, s) for s in letters]
        succ[q] = row
        for nxt in row:
            for r in nxt:
                if r != BOT and r not in seen:
                    seen.add(r)
                    order.append(r)
                    if len(order) > limit:
                        return m
    dead = {q for q in order if not m.is_term(q) and not any(succ[q])}

    def prune(S: frozenset[int]) -> frozenset[int]:
        if S == BOT_SET or len(S) < 2:
            return S
        kept = S - dead
        return kept if kept else frozenset((min(S),))

    rows = {q: [prune(S) for S in succ[q]] for q in order}
    init = prune(init)
    # states with an infinite future: greatest set closed under "has a
    # successor inside the set" (BOT counts as an infinite future)
    live = set(order)
    changed = True
    while changed:
        changed = False
        for q in list(live):
            if not any(S == BOT_SET or (S & live) for S in rows[q]):
                live.discard(q)
                changed = True
    label = {q: (m.is_term(q), m.acc(q) if q in live else frozenset()) for q in order}
    # partition refinement
    keys = sorted(set(label.values()), key=lambda k: (k[0], sorted(k[1])))
    block = {q: keys.index(label[q]) for q in order}
    count = len(keys)
    while True:
        sigs: dict = {}
        new_block = {}
        for q in order:
            sig = (block[q], tuple(
                BOT if S == BOT_SET else frozenset(block[r] for r in S) for S in rows[q]))
            new_block[q] = sigs.setdefault(sig, len(sigs))
        block = new_block
        if len(sigs) == count:
            break
        count = len(sigs)
    table: list[dict[Step, tuple]] = [None] * count  # type: ignore[list-item]
    term = [False] * count
    accs = [frozenset()] * count
    for q in order:
        b = block[q]
        if table[b] is not None:
            continue
        entry = {}
        for s, S in zip(letters, rows[q]):
            if S == BOT_SET:
                entry[s] = (BOT,)
            elif S:
                entry[s] = tuple(sorted({block[r] for r in S}))
        table[b] = entry
        term[b], accs[b] = label[q]
    start = frozenset(block[q] for q in init)
    return ExplicitMachine(m.n_acc, start, table, term, accs)


# --------------------------------------------------------------------------
# compilation

class Compiler:
    """Compiles expanded terms to machines, sharing machines for repeated
    subterms.  One compiler per state space."""

    def __init__(self, space: StateSpace, reduce_limit: int = REDUCE_LIMIT):
        self.space = space
        self.reduce_limit = reduce_limit
        self.letters = tuple(space.all_steps())
        self._cache: dict[Cmd, Machine] = {}

    def __call__(self, c: Cmd) -> Machine:
        m = self._cache.get(c)
        if m is None:
            m = self._build(c)
            if self.reduce_limit and not isinstance(
                    m, (AbortMachine, MagicMachine, NilMachine, AtomicMachine, ExplicitMachine)):
                m = reduce_machine(m, self.letters, self.reduce_limit)
            self._cache[c] = m
        return m

    def _build(self, c: Cmd) -> Machine:
        if isinstance(c, Abort):
            return AbortMachine()
        if isinstance(c, Magic):
            return MagicMachine()
        if isinstance(c, Nil):
            return NilMachine()
        if isinstance(c, Atomic):
            return AtomicMachine(c.resolve(self.space).steps)
        if isinstance(c, Seq):
            return SeqMachine(self(c.left), self(c.right))
        if isinstance(c, Choice):
            parts = [self(o) for o in c.options]
            if any(BOT in m.initial() for m in parts):
                return AbortMachine()
            return ChoiceMachine(parts)
        if isinstance(c, Join):
            return JoinMachine(self(c.left), self(c.right))
        if isinstance(c, Par):
            return SyncMachine(self(c.left), self(c.right), step_sync_par)
        if isinstance(c, Conj):
            return SyncMachine(self(c.left), self(c.right), step_sync_conj)
        if isinstance(c, (Fin, Om)):
            body = self(c.body)
            init = body.initial()
            if BOT in init:
                return AbortMachine()
            if isinstance(c, Om) and body.any_term(init):
                # nil is a fixed point of x = c;x, so the least one is abort
                return AbortMachine()
            return FinMachine(body) if isinstance(c, Fin) else OmMachine(body)
        if isinstance(c, Inf):
            return SeqMachine(self(Om(c.body)), MagicMachine())
        if isinstance(c, Pow):
            if c.exponent == 0:
                return NilMachine()
            out = self(c.body)
            for _ in range(c.exponent - 1):
                out = SeqMachine(out, self(c.body))
            return out
        # named constants and fair parallel
        return self(expand(c))


_COMPILERS: dict[StateSpace, Compiler] = {}


def compile_command(c: Cmd, space: StateSpace) -> Machine:
    comp = _COMPILERS.get(space)
    if comp is None:
        comp = _COMPILERS[space] = Compiler(space)
    return comp(c)


def clear_caches() -> None:
    _COMPILERS.clear()
