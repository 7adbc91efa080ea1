from __future__ import annotations

import random

import pytest
from hypothesis import given

from conftest import commands
from syncfair.syntax import (ALPHA, EPS, PI, Abort, Atomic, Choice, Conj, Fair, FairPar, Fin,
                             Join, Magic, Nil, Om, Par, ParseError, Pow, Seq, Skip, depth, expand,
                             parse, random_ast, to_text)


def test_parse_seq():
    assert parse("pi ; eps") == Seq(PI, EPS)


def test_parse_fair_expansion():
    assert parse("fin(eps) ; om(pi ; fin(eps))") == expand(Fair())


def test_unknown_identifier_reported_at_token():
    with pytest.raises(ParseError) as err:
        parse("nil || p")
    assert (err.value.line, err.value.column) == (1, 8)
    assert "'p'" in str(err.value)


def test_error_position_on_later_line():
    with pytest.raises(ParseError) as err:
        parse("nil ;\n  pi ;\n  )")
    assert (err.value.line, err.value.column) == (3, 3)


def test_mixed_sync_operators_rejected():
    with pytest.raises(ParseError):
        parse("nil || pi && eps")
    assert parse("(nil || pi) && eps") == Conj(Par(Nil(), PI), EPS)


@pytest.mark.parametrize("text", ["pow(pi, x)", "pow(pi, -1)", "pow(pi)", "fin pi", "pgm{(0)}",
                                  "!nil", "nil +", "(nil", "nil $ pi"])
def test_bad_syntax(text):
    with pytest.raises(ParseError):
        parse(text)


def test_precedence():
    assert parse("nil + pi ^ eps || skip ; fair") == Choice(
        (Nil(), Join(PI, Par(EPS, Seq(Skip(), Fair())))))
    assert parse("nil || pi || eps") == Par(Par(Nil(), PI), EPS)
    assert parse("nil ||f nil") == FairPar(Nil(), Nil())
    assert parse("nil||fair") == Par(Nil(), Fair())


def test_literals():
    assert parse("pgm{(0,1),(1,1)}") == Atomic("pgm", ((0, 1), (1, 1)))
    assert parse("!env{(0,0)}") == Atomic("env", ((0, 0),), True)
    assert parse("pgm{}") == Atomic("pgm", ())
    assert parse("pow(alpha, 3)") == Pow(ALPHA, 3)


def test_printer_examples():
    assert to_text(Seq(Nil(), PI)) == "nil ; pi"
    assert to_text(FairPar(Nil(), Nil())) == "nil ||f nil"
    assert to_text(Choice((Nil(), Magic()))) == "nil + magic"


def test_printer_minimal_parentheses():
    assert to_text(Seq(Par(Nil(), PI), EPS)) == "(nil || pi) ; eps"
    assert to_text(Par(Nil(), Seq(PI, EPS))) == "nil || pi ; eps"
    assert to_text(Par(Nil(), Par(PI, EPS))) == "nil || (pi || eps)"
    assert to_text(Choice((Choice((Nil(), PI)), EPS))) == "(nil + pi) + eps"
    assert to_text(Fin(Choice((Nil(), Abort())))) == "fin(nil + abort)"


def test_depth_counts_leaves_as_one():
    assert depth(Nil()) == 1
    assert depth(Seq(Nil(), Om(PI))) == 3


def test_expansion_of_constants():
    assert expand(Skip()) == Om(EPS)
    assert expand(parse("term")) == Seq(Fin(ALPHA), Om(EPS))
    assert expand(parse("chaos")) == Om(ALPHA)
    fp = expand(parse("nil ||f pi"))
    assert fp == expand(parse("(nil && fair) ; skip || (pi && fair) ; skip"))


@given(commands(max_depth=5))
def test_round_trip(c):
    assert parse(to_text(c)) == c


def test_random_terms_respect_depth():
    rng = random.Random(7)
    for _ in range(200):
        assert depth(random_ast(rng, 4)) <= 4
