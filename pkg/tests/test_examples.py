from __future__ import annotations

import pytest

from syncfair.examples import EXAMPLE_NAMES, build_example, run_examples
from syncfair.syntax import to_text


def test_names():
    assert EXAMPLE_NAMES == ("ex-term", "inc-y-loop", "fair-term", "example1", "example2")


def test_unknown_example():
    with pytest.raises(KeyError):
        build_example("example3")


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_example_matches_expectation(name):
    result = build_example(name).evaluate()
    assert result.passed, (result.facts, result.expected)


def test_infeasible_versus_feasible_fair_parallel():
    results = {r.name: r for r in run_examples()}
    ex1, ex2 = results["example1"].diagnostics, results["example2"].diagnostics
    assert not ex1.has_lasso and not ex1.has_terminated and ex1.progress_horizon is not None
    assert ex2.has_lasso


def test_encodings_use_the_term_language():
    case = build_example("fair-term")
    assert "fair" in to_text(case.ast)
    assert case.space.size == 2
