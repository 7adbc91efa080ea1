"""Command terms: AST, parser, minimal-parenthesis printer, macro expansion.

Grammar, loosest binding first::

    cmd    := choice
    choice := join ("+" join)*
    join   := sync ("^" sync)*
    sync   := seq (("||" | "&&" | "||f") seq)*     one operator per level
    seq    := atom (";" atom)*
    atom   := abort | magic | nil | skip | chaos | term | fair
            | atomlit | "!" atomlit
            | fin(cmd) | om(cmd) | inf(cmd) | pow(cmd, nat) | "(" cmd ")"
    atomlit := (pgm | env) "{" pairs "}" | pi | eps | alpha
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Union

from .atomic import AtomicCommand, atomic_alpha, atomic_eps, atomic_negate, atomic_of, atomic_pi
from .traces import ENV, PGM, StateSpace, Step


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


# --------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Abort:
    pass


@dataclass(frozen=True)
class Magic:
    pass


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Chaos:
    pass


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Fair:
    pass


ATOMIC_BASES = ("pi", "eps", "alpha", "pgm", "env")


@dataclass(frozen=True)
class Atomic:
    """An atomic step command.  ``base`` is one of ``pi``, ``eps``, ``alpha``
    or a literal kind ``pgm``/``env`` listing its ``(pre, post)`` pairs."""

    base: str
    pairs: tuple[tuple[int, int], ...] = ()
    negated: bool = False

    def resolve(self, space: StateSpace) -> AtomicCommand:
        if self.base == "pi":
            a = atomic_pi(space)
        elif self.base == "eps":
            a = atomic_eps(space)
        elif self.base == "alpha":
            a = atomic_alpha(space)
        else:
            kind = PGM if self.base == "pgm" else ENV
            a = atomic_of(space, (Step(kind, i, j) for i, j in self.pairs))
        return atomic_negate(a) if self.negated else a


@dataclass(frozen=True)
class Seq:
    left: "Cmd"
    right: "Cmd"


@dataclass(frozen=True)
class Choice:
    options: tuple["Cmd", ...]

    def __post_init__(self) -> None:
        if len(self.options) < 2:
            raise ValueError("Choice needs at least two options; use choice_of")


@dataclass(frozen=True)
class Join:
    left: "Cmd"
    right: "Cmd"


@dataclass(frozen=True)
class Par:
    left: "Cmd"
    right: "Cmd"


@dataclass(frozen=True)
class Conj:
    left: "Cmd"
    right: "Cmd"


@dataclass(frozen=True)
class FairPar:
    left: "Cmd"
    right: "Cmd"


@dataclass(frozen=True)
class Fin:
    body: "Cmd"


@dataclass(frozen=True)
class Om:
    body: "Cmd"


@dataclass(frozen=True)
class Inf:
    body: "Cmd"


@dataclass(frozen=True)
class Pow:
    body: "Cmd"
    exponent: int

    def __post_init__(self) -> None:
        if self.exponent < 0:
            raise ValueError("Pow exponent must be a natural number")


Cmd = Union[Abort, Magic, Nil, Skip, Chaos, Term, Fair, Atomic, Seq, Choice, Join,
            Par, Conj, FairPar, Fin, Om, Inf, Pow]

CONSTANTS = {"abort": Abort, "magic": Magic, "nil": Nil, "skip": Skip,
             "chaos": Chaos, "term": Term, "fair": Fair}
ITERATIONS = {"fin": Fin, "om": Om, "inf": Inf}
SYNC_OPS = {"||": Par, "&&": Conj, "||f": FairPar}
BINARY = (Seq, Join, Par, Conj, FairPar)
UNARY = (Fin, Om, Inf, Pow)

PI = Atomic("pi")
EPS = Atomic("eps")
ALPHA = Atomic("alpha")


def choice_of(options) -> Cmd:
    """n-ary choice; the empty choice is magic."""
    options = tuple(options)
    if not options:
        return Magic()
    if len(options) == 1:
        return options[0]
    return Choice(options)


def join_of(options) -> Cmd:
    """n-ary join; the empty join is abort."""
    options = tuple(options)
    if not options:
        return Abort()
    out = options[0]
    for o in options[1:]:
        out = Join(out, o)
    return out


def children(c: Cmd) -> tuple[Cmd, ...]:
    if isinstance(c, BINARY):
        return (c.left, c.right)
    if isinstance(c, Choice):
        return c.options
    if isinstance(c, UNARY):
        return (c.body,)
    return ()


def depth(c: Cmd) -> int:
    """Leaves have depth 1."""
    kids = children(c)
    return 1 + (max(depth(k) for k in kids) if kids else 0)


def subterms(c: Cmd) -> Iterator[Cmd]:
    yield c
    for k in children(c):
        yield from subterms(k)


# --------------------------------------------------------------------------
# macro expansion

SKIP_X = Om(EPS)
CHAOS_X = Om(ALPHA)
TERM_X = Seq(Fin(ALPHA), Om(EPS))
FAIR_X = Seq(Fin(EPS), Om(Seq(PI, Fin(EPS))))


def expand(c: Cmd) -> Cmd:
    """Replace skip, chaos, term, fair and fair-parallel by their definitions."""
    if isinstance(c, Skip):
        return SKIP_X
    if isinstance(c, Chaos):
        return CHAOS_X
    if isinstance(c, Term):
        return TERM_X
    if isinstance(c, Fair):
        return FAIR_X
    if isinstance(c, FairPar):
        left, right = expand(c.left), expand(c.right)
        return Par(Seq(Conj(left, FAIR_X), SKIP_X), Seq(Conj(right, FAIR_X), SKIP_X))
    if isinstance(c, Choice):
        return Choice(tuple(expand(o) for o in c.options))
    if isinstance(c, BINARY):
        return type(c)(expand(c.left), expand(c.right))
    if isinstance(c, Pow):
        return Pow(expand(c.body), c.exponent)
    if isinstance(c, UNARY):
        return type(c)(expand(c.body))
    return c


# --------------------------------------------------------------------------
# printing

_LEVEL_CHOICE, _LEVEL_JOIN, _LEVEL_SYNC, _LEVEL_SEQ, _LEVEL_ATOM = range(1, 6)
_SYNC_SYMBOL = {Par: "||", Conj: "&&", FairPar: "||f"}


def _level(c: Cmd) -> int:
    if isinstance(c, Choice):
        return _LEVEL_CHOICE
    if isinstance(c, Join):
        return _LEVEL_JOIN
    if isinstance(c, (Par, Conj, FairPar)):
        return _LEVEL_SYNC
    if isinstance(c, Seq):
        return _LEVEL_SEQ
    return _LEVEL_ATOM


def _wrap(c: Cmd, ok: bool) -> str:
    s = to_text(c)
    return s if ok else f"({s})"


def to_text(c: Cmd) -> str:
    """Render with the fewest parentheses that parse back to the same tree."""
    if isinstance(c, Atomic):
        bang = "!" if c.negated else ""
        if c.base in ("pi", "eps", "alpha"):
            return bang + c.base
        pairs = ",".join(f"({i},{j})" for i, j in c.pairs)
        return f"{bang}{c.base}{{{pairs}}}"
    for name, cls in CONSTANTS.items():
        if type(c) is cls:
            return name
    if isinstance(c, Pow):
        return f"pow({to_text(c.body)}, {c.exponent})"
    for name, cls in ITERATIONS.items():
        if type(c) is cls:
            return f"{name}({to_text(c.body)})"
    if isinstance(c, Choice):
        return " + ".join(_wrap(o, _level(o) > _LEVEL_CHOICE) for o in c.options)
    lvl = _level(c)
    sym = {Seq: ";", Join: "^"}.get(type(c)) or _SYNC_SYMBOL[type(c)]
    # left-associative: the left operand may repeat the same operator
    left_ok = _level(c.left) > lvl or type(c.left) is type(c)
    right_ok = _level(c.right) > lvl
    return f"{_wrap(c.left, left_ok)} {sym} {_wrap(c.right, right_ok)}"


# --------------------------------------------------------------------------
# parsing

_SYMBOLS = ("||f", "||", "&&", "+", "^", ";", "(", ")", "{", "}", ",", "!")


@dataclass
class _Token:
    kind: str      # "id", "nat", "sym", "eof"
    text: str
    line: int
    col: int


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    i, line, col = 0, 1, 1
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and _is_ident_char(text[j]):
                j += 1
            toks.append(_Token("id", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(_Token("nat", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                # "||fair" is "||" followed by the identifier "fair"
                if sym == "||f" and i + 3 < len(text) and _is_ident_char(text[i + 3]):
                    continue
                toks.append(_Token("sym", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Token("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.toks[self.pos]

    def error(self, msg: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.tok
        shown = tok.text if tok.kind != "eof" else "end of input"
        return ParseError(f"{msg} (found {shown!r})", tok.line, tok.col)

    def accept(self, sym: str) -> bool:
        if self.tok.kind == "sym" and self.tok.text == sym:
            self.pos += 1
            return True
        return False

    def expect(self, sym: str) -> None:
        if not self.accept(sym):
            raise self.error(f"expected {sym!r}")

    def parse(self) -> Cmd:
        c = self.choice()
        if self.tok.kind != "eof":
            raise self.error("unexpected token")
        return c

    def choice(self) -> Cmd:
        opts = [self.join()]
        while self.accept("+"):
            opts.append(self.join())
        return choice_of(opts)

    def join(self) -> Cmd:
        c = self.sync()
        while self.accept("^"):
            c = Join(c, self.sync())
        return c

    def sync(self) -> Cmd:
        c = self.seq()
        op = None
        while self.tok.kind == "sym" and self.tok.text in SYNC_OPS:
            tok = self.tok
            if op is not None and tok.text != op:
                raise self.error(f"cannot mix {op!r} and {tok.text!r} without parentheses", tok)
            op = tok.text
            self.pos += 1
            c = SYNC_OPS[op](c, self.seq())
        return c

    def seq(self) -> Cmd:
        c = self.atom()
        while self.accept(";"):
            c = Seq(c, self.atom())
        return c

    def atom(self) -> Cmd:
        tok = self.tok
        if self.accept("("):
            c = self.choice()
            self.expect(")")
            return c
        if self.accept("!"):
            lit = self.atomlit()
            if lit is None:
                raise self.error("'!' applies only to atomic literals")
            return Atomic(lit.base, lit.pairs, True)
        if tok.kind != "id":
            raise self.error("expected a command")
        if tok.text in CONSTANTS:
            self.pos += 1
            return CONSTANTS[tok.text]()
        if tok.text in ITERATIONS or tok.text == "pow":
            self.pos += 1
            self.expect("(")
            body = self.choice()
            if tok.text == "pow":
                self.expect(",")
                n = self.tok
                if n.kind != "nat":
                    raise self.error("exponent must be a natural number literal")
                self.pos += 1
                self.expect(")")
                return Pow(body, int(n.text))
            self.expect(")")
            return ITERATIONS[tok.text](body)
        lit = self.atomlit()
        if lit is None:
            raise self.error(f"unknown identifier {tok.text!r}")
        return lit

    def atomlit(self) -> Atomic | None:
        tok = self.tok
        if tok.kind != "id" or tok.text not in ATOMIC_BASES:
            return None
        self.pos += 1
        if tok.text in ("pi", "eps", "alpha"):
            return Atomic(tok.text)
        self.expect("{")
        pairs = []
        if not self.accept("}"):
            while True:
                self.expect("(")
                i = self.nat()
                self.expect(",")
                j = self.nat()
                self.expect(")")
                pairs.append((i, j))
                if self.accept("}"):
                    break
                self.expect(",")
        return Atomic(tok.text, tuple(pairs))

    def nat(self) -> int:
        if self.tok.kind != "nat":
            raise self.error("expected a state number")
        v = int(self.tok.text)
        self.pos += 1
        return v


def parse(text: str) -> Cmd:
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# random terms

LEAVES = (Abort(), Magic(), Nil(), Skip(), Chaos(), Term(), Fair(), PI, EPS, ALPHA)


def random_atomic(rng: random.Random, space: StateSpace) -> Atomic:
    r = rng.random()
    if r < 0.5:
        return Atomic(rng.choice(("pi", "eps", "alpha")), (), rng.random() < 0.2)
    base = rng.choice(("pgm", "env"))
    pairs = sorted({(rng.randrange(space.size), rng.randrange(space.size))
                    for _ in range(rng.randint(0, space.size))})
    return Atomic(base, tuple(pairs), rng.random() < 0.2)


def random_ast(rng: random.Random, max_depth: int, space: StateSpace | None = None,
               leaves=LEAVES, ops=None, leaf_bias: float = 0.3) -> Cmd:
    """A random term with depth at most ``max_depth`` (leaves count as 1)."""
    space = space or StateSpace(2)
    ops = ops or ("seq", "choice", "join", "par", "conj", "fairpar",
                  "fin", "om", "inf", "pow")
    if max_depth <= 1 or rng.random() < leaf_bias:
        if rng.random() < 0.25:
            return random_atomic(rng, space)
        return rng.choice(leaves)
    sub = lambda: random_ast(rng, max_depth - 1, space, leaves, ops, leaf_bias)  # noqa: E731
    op = rng.choice(ops)
    if op == "choice":
        return Choice(tuple(sub() for _ in range(rng.randint(2, 3))))
    if op == "pow":
        return Pow(sub(), rng.randint(0, 3))
    if op in ("fin", "om", "inf"):
        return {"fin": Fin, "om": Om, "inf": Inf}[op](sub())
    cls = {"seq": Seq, "join": Join, "par": Par, "conj": Conj, "fairpar": FairPar}[op]
    return cls(sub(), sub())
