from __future__ import annotations

import json

import pytest

from conftest import SPACE1, SPACE2
from syncfair.check import check_refines
from syncfair.laws import (CS, CS1, EQ, IMPL, PREMISE_GENERATORS, REF, Bindings, RunConfig,
                           catalog, check_law, generate_bindings, law_by_name, run_law,
                           run_mutants)
from syncfair.syntax import ALPHA, Conj, FairPar, Fin, Term, parse, subterms
from syncfair.traces import Lasso, Window

NAMES = """
seq-assoc seq-identity seq-annihilation-left seq-distr-right seq-distr-left sync-assoc
sync-commutative sync-id sync-inf-distrib sync-env sync-nil-nil sync-nil-atomic par-closure
sync-interchange-seq-atomic sync-inf sync-interchange-seq par-abort conjoin-abort
conjoin-idempotent par-pi-pi conjoin-pi-env conjoin-par-finite conjoin-par-infinite sync-initial
conjoin-sync-initial conjoin-interchange-par finite-unfold omega-unfold isolation
finite-iteration omega-induction finite-induction finite-leapfrog omega-leapfrog
omega-decomposition finite-finite-prefix finite-omega-prefix iterate-pi-par-pi
iterate-pi-sync-atomic distribute-infeasible-suffix infinite-annihilates sync-termination
par-skip chaos-fair introduce-fair fair-fair fair-distrib-seq skip-fair term-fair
fair-termination fair-par-fair-expand fair-par-fair fair-distrib-par-both fair-par-chaos-expand
fair-par-chaos fair-distrib-par-one fair-parallel-commutes fair-parallel-distrib
fair-par-monotonic fair-parallel-nil introduce-fair-skip finite-absorb-fair-skip
infinite-absorb-fair-skip absorb-fair-skip fair-parallel-associative
""".split()

W = Window(5, 3, 3)


def test_catalog_is_complete():
    laws = catalog()
    assert len(laws) >= 52
    assert [l.name for l in laws] == NAMES
    assert len({l.name for l in laws}) == len(laws)


def test_catalog_metadata():
    term_fair = law_by_name("term-fair")
    assert term_fair.relation == EQ and term_fair.quantifiers == ()
    assert law_by_name("sync-interchange-seq").relation == REF
    assert law_by_name("fair-termination").premise == "term-refined"
    for name in ("omega-induction", "finite-induction"):
        assert law_by_name(name).relation == IMPL
        assert law_by_name(name).kind == "sampled implication"
    for law in catalog():
        assert law.premise is None or law.premise in PREMISE_GENERATORS
        assert law.formula


def test_binding_budget():
    bindings = list(generate_bindings(law_by_name("seq-assoc"), SPACE2, 5, seed=1))
    assert len(bindings) == 5
    assert all(set(b) == {"c0", "c1", "c2"} for b in bindings)


def test_bindings_deterministic():
    law = law_by_name("fair-parallel-associative")
    a = [b.render() for b in generate_bindings(law, SPACE2, 20, seed=3)]
    b = [b.render() for b in generate_bindings(law, SPACE2, 20, seed=3)]
    assert a == b


def test_sync_termination_premise():
    law = law_by_name("sync-termination")
    assert law.premise == "conj-fin"
    for b in generate_bindings(law, SPACE2, 30, seed=2):
        for var in ("c", "d"):
            assert isinstance(b[var], Conj) and b[var].right == Fin(ALPHA)


def test_nonempty_choice_sets():
    law = law_by_name("fair-parallel-distrib")
    assert dict(law.quantifiers)["D"] == CS1
    assert all(b["D"] for b in generate_bindings(law, SPACE2, 100, seed=4))
    assert any(sort == CS for l in catalog() for _, sort in l.quantifiers)


def test_term_refined_premise_holds():
    for b in generate_bindings(law_by_name("fair-termination"), SPACE2, 30, seed=6):
        assert check_refines(Term(), b["c"], SPACE2, W).holds


def test_fair_parallel_bindings_use_fair_parallel():
    law = law_by_name("fair-parallel-associative")
    (b,) = list(generate_bindings(law, SPACE2, 1, seed=1))
    lhs, rhs = law.clauses(b, None)[0]
    assert any(isinstance(t, FairPar) for t in subterms(lhs))


def test_exhaustive_for_small_domains():
    law = law_by_name("sync-env")
    rep = run_law(law, RunConfig(states=1, samples=100))
    assert rep.exhaustive and rep.instances == 8 and rep.status == "pass"


@pytest.mark.parametrize("name", ["term-fair", "skip-fair", "fair-par-chaos", "chaos-fair"])
def test_closed_laws_pass(name):
    law = law_by_name(name)
    assert check_law(law, next(iter(generate_bindings(law, SPACE2, 1, 0))), SPACE2, W).status \
        == "pass"


def test_report_json_is_deterministic():
    cfg = RunConfig(samples=10, only=("seq-assoc",))
    a = json.dumps(run_law(law_by_name("seq-assoc"), cfg).as_dict(), sort_keys=True)
    b = json.dumps(run_law(law_by_name("seq-assoc"), cfg).as_dict(), sort_keys=True)
    assert a == b
    assert set(json.loads(a)) >= {"law", "status", "instances", "violations", "window"}


def test_known_counterexample_reported():
    law = law_by_name("sync-initial")
    b = Bindings(c0=parse("nil"), d0=parse("abort"), c1=parse("pi"), d1=parse("nil"), i=0)
    res = check_law(law, b, SPACE1, Window(3, 1, 2))
    assert res.status == "fail"
    assert res.violation.side == "lhs"


def test_mutants_are_refuted():
    reports = run_mutants(SPACE2, W)
    names = [m.name for m in reports]
    assert "pi || pi = pi" in names and "term && chaos = fin(alpha)" in names
    assert "fair [= chaos" in names
    assert any(n.startswith("reverse fair-distrib-par-both") for n in names)
    assert all(m.refuted for m in reports)
    term_chaos = next(m for m in reports if m.name == "term && chaos = fin(alpha)")
    assert isinstance(term_chaos.witness_object, Lasso)
