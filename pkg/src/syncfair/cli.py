"""Command-line front end.

Exit status: 0 when every check passes, 1 on a violation (a refuted claim, a
failing law, a surviving mutant, a failing example, an engine/oracle
disagreement), 2 on usage, parse or resource errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from typing import Optional, Sequence

from .check import check_equal, check_refines, diagnostics
from .denotation import DEFAULT_CAP, ResourceLimitError, denote
from .examples import DEFAULT_WINDOW as EXAMPLE_WINDOW
from .examples import SPACE as EXAMPLE_SPACE
from .examples import run_examples
from .laws import RunConfig, catalog, run_law, run_mutants
from .oracle import check_agreement, small_terms
from .syntax import Cmd, ParseError, depth, parse, random_ast, subterms, to_text
from .traces import StateSpace, Status, Window

OK, VIOLATION, USAGE = 0, 1, 2

DEFAULTS = {"states": 2, "bound": 5, "lasso_prefix": 3, "lasso_period": 3,
            "samples": 100, "depth": 3, "seed": 2024}
ORACLE_DEFAULTS = {"states": 1, "bound": 3, "lasso_prefix": 1, "lasso_period": 2,
                   "samples": 0, "depth": 2}


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--states", type=int, help="state space size (default 2)")
    p.add_argument("--bound", type=int, help="longest finite trace N (default 5)")
    p.add_argument("--lasso-prefix", type=int, help="longest lasso prefix K (default 3)")
    p.add_argument("--lasso-period", type=int, help="longest lasso period L (default 3)")
    p.add_argument("--samples", type=int, help="bindings per law (default 100)")
    p.add_argument("--depth", type=int, help="random term depth (default 3)")
    p.add_argument("--seed", type=int, help="random seed (default 2024)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                   help="largest window materialized by eval (observations)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="syncfair",
        description="Window semantics and law checking for a synchronous refinement "
                    "algebra with fairness.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="summarize the window of a term")
    p.add_argument("term", nargs="?")
    p.add_argument("--file", help="read the term from a file")
    p.add_argument("--traces", action="store_true", help="list every member")

    for name, what in (("equal", "window equality"), ("refines", "t1 [= t2 (t2 implements t1)")):
        p = sub.add_parser(name, parents=[common], help=what)
        p.add_argument("terms", nargs="*", metavar="term")
        p.add_argument("--file", help="read both terms from a file")

    p = sub.add_parser("laws", parents=[common], help="run the law suite")
    p.add_argument("--only", action="append", metavar="NAME", help="run only this law")
    p.add_argument("--mutants", action="store_true", help="also run the mutant statements")
    p.add_argument("--list", action="store_true", help="list the catalog and exit")

    sub.add_parser("examples", parents=[common], help="check the example programs")

    p = sub.add_parser("oracle-check", parents=[common],
                       help="compare the engine with the brute-force oracle")
    return parser


# --------------------------------------------------------------------------
# helpers

def _setting(args, name: str, defaults: dict = DEFAULTS):
    value = getattr(args, name, None)
    return defaults[name] if value is None else value


def _window(args, defaults: dict = DEFAULTS) -> Window:
    try:
        return Window(_setting(args, "bound", defaults), _setting(args, "lasso_prefix", defaults),
                      _setting(args, "lasso_period", defaults))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _space(args, defaults: dict = DEFAULTS) -> StateSpace:
    n = _setting(args, "states", defaults)
    if n < 1:
        raise UsageError("--states must be at least 1")
    return StateSpace(n)


def _read_terms(args, positional: Sequence[str], count: int) -> list[Cmd]:
    texts = list(positional)
    if args.file:
        if texts:
            raise UsageError("give terms either on the command line or with --file")
        with open(args.file, encoding="utf-8") as fh:
            content = fh.read()
        lines = content.splitlines()
        if any(line.strip() == "---" for line in lines):
            texts, cur = [], []
            for line in lines:
                if line.strip() == "---":
                    texts.append("\n".join(cur))
                    cur = []
                else:
                    cur.append(line)
            texts.append("\n".join(cur))
        else:
            texts = [line for line in lines if line.strip() and not line.lstrip().startswith("#")]
        texts = [t for t in texts if t.strip()]
    if len(texts) != count:
        raise UsageError(f"expected {count} term(s), got {len(texts)}")
    out = []
    for text in texts:
        try:
            out.append(parse(text))
        except ParseError as exc:
            raise UsageError(_parse_message(text, exc)) from None
    return out


def _parse_message(text: str, exc: ParseError) -> str:
    lines = text.splitlines() or [""]
    line = lines[min(exc.line, len(lines)) - 1]
    return f"parse error: {exc}\n  {line}\n  {' ' * (exc.column - 1)}^"


def _offending(c: Cmd, space: StateSpace, w: Window, cap: int) -> Cmd:
    """Smallest subterm whose window alone exceeds the cap."""
    for sub in sorted(set(subterms(c)), key=lambda t: (depth(t), to_text(t))):
        try:
            denote(sub, space, w, cap)
        except ResourceLimitError:
            return sub
    return c


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


# --------------------------------------------------------------------------
# subcommands

def cmd_eval(args) -> int:
    (c,) = _read_terms(args, [args.term] if args.term else [], 1)
    space, w = _space(args), _window(args)
    try:
        den = denote(c, space, w, args.cap)
    except ResourceLimitError:
        culprit = _offending(c, space, w, args.cap)
        raise UsageError(f"resource cap {args.cap} exceeded by subterm {to_text(culprit)}") \
            from None
    diag = diagnostics(c, space, w)
    counts = {st.value: sum(1 for t in den.finite if t.status is st) for st in Status}
    payload = {"term": to_text(c), "states": space.size, "window": w.as_dict(),
               "finite": counts, "lassos": len(den.infinite), "diagnostics": diag.as_dict()}
    lines = [f"term: {to_text(c)}",
             f"window: {w} over {space.size} state(s)",
             "finite traces: " + ", ".join(f"{k} {v}" for k, v in counts.items()),
             f"lassos: {len(den.infinite)}",
             "diagnostics: " + ", ".join(f"{k}={v}" for k, v in diag.as_dict().items())]
    if args.traces:
        members = [str(m) for m in den.members()]
        payload["members"] = members
        lines += ["members:"] + [f"  {m}" for m in members]
    _emit(args, payload, lines)
    return OK


def cmd_compare(args) -> int:
    c, d = _read_terms(args, args.terms, 2)
    space, w = _space(args), _window(args)
    verdict = (check_equal if args.command == "equal" else check_refines)(c, d, space, w)
    payload = {"claim": args.command, "lhs": to_text(c), "rhs": to_text(d),
               "states": space.size, "window": w.as_dict(),
               "holds": verdict.holds, "relation": verdict.relation.value,
               "witness": None if verdict.witness is None else {
                   "side": verdict.witness.side,
                   "observation": str(verdict.witness.observation)}}
    _emit(args, payload, [verdict.describe()])
    return OK if verdict.holds else VIOLATION


def cmd_laws(args) -> int:
    laws = catalog()
    if args.list:
        payload = {"laws": [{"name": l.name, "group": l.group, "formula": l.formula,
                             "kind": l.kind} for l in laws]}
        _emit(args, payload, [f"{l.name:30s} {l.formula}" for l in laws])
        return OK
    names = {l.name for l in laws}
    unknown = sorted(set(args.only or ()) - names)
    if unknown:
        raise UsageError(f"unknown law(s): {', '.join(unknown)}")
    cfg = RunConfig(states=_setting(args, "states"), bound=_setting(args, "bound"),
                    lasso_prefix=_setting(args, "lasso_prefix"),
                    lasso_period=_setting(args, "lasso_period"),
                    samples=_setting(args, "samples"), depth=_setting(args, "depth"),
                    seed=_setting(args, "seed"),
                    only=tuple(args.only) if args.only else None)
    _space(args), _window(args)
    selected = [l for l in laws if not cfg.only or l.name in cfg.only]
    lines = []
    reports = []
    failed = 0
    start = time.perf_counter()
    for law in selected:
        rep = run_law(law, cfg)
        reports.append(rep)
        failed += rep.status == "fail"
        extra = f", {rep.vacuous} vacuous" if rep.vacuous else ""
        extra += f", {rep.skipped} skipped" if rep.skipped else ""
        lines.append(f"{rep.status.upper():7s} {rep.law:30s} {rep.instances:4d} instances"
                     f"{extra}  {rep.seconds:6.2f}s")
        for v in rep.violations:
            binding = ", ".join(f"{k} = {val}" for k, val in v.bindings.items()) or "-"
            lines.append(f"        {binding}")
            lines.append(f"        witness only in {v.side}: {v.witness}")
    payload = {"states": cfg.states, "window": cfg.window.as_dict(), "samples": cfg.samples,
               "depth": cfg.depth, "seed": cfg.seed,
               "laws": [r.as_dict() for r in reports]}
    survived = 0
    if args.mutants:
        muts = run_mutants(cfg.space, cfg.window)
        payload["mutants"] = [m.as_dict() for m in muts]
        for m in muts:
            survived += not m.refuted
            state = "REFUTED " if m.refuted else "SURVIVED"
            lines.append(f"{state} {m.name}" + (f"  [{m.side}: {m.witness}]" if m.refuted else ""))
    passed = sum(r.status == "pass" for r in reports)
    lines.append(f"{passed}/{len(reports)} laws pass over {cfg.states} state(s), window "
                 f"{cfg.window}; {time.perf_counter() - start:.1f}s")
    _emit(args, payload, lines)
    return VIOLATION if failed or survived else OK


def cmd_examples(args) -> int:
    if args.states not in (None, EXAMPLE_SPACE.size):
        raise UsageError(f"the examples use {EXAMPLE_SPACE.size} states")
    w = _window(args, {**DEFAULTS, "bound": EXAMPLE_WINDOW.N,
                       "lasso_prefix": EXAMPLE_WINDOW.K, "lasso_period": EXAMPLE_WINDOW.L})
    results = run_examples(w)
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name}")
        for k, v in r.facts.items():
            want = r.expected.get(k)
            lines.append(f"     {k} = {v} (expected {want})")
        lines.append("     diagnostics: " + ", ".join(
            f"{k}={v}" for k, v in r.diagnostics.as_dict().items()))
    payload = {"window": w.as_dict(), "examples": [r.as_dict() for r in results]}
    _emit(args, payload, lines)
    return OK if all(r.passed for r in results) else VIOLATION


def cmd_oracle_check(args) -> int:
    space, w = _space(args, ORACLE_DEFAULTS), _window(args, ORACLE_DEFAULTS)
    terms = small_terms(space)
    max_depth = _setting(args, "depth", ORACLE_DEFAULTS)
    samples = _setting(args, "samples", ORACLE_DEFAULTS)
    if max_depth > 2 and samples:
        rng = random.Random(_setting(args, "seed"))
        terms += [random_ast(rng, max_depth, space) for _ in range(samples)]
    report = check_agreement(terms, space, w)
    payload = {"states": space.size, "window": w.as_dict(), "terms": report.terms,
               "observations": report.observations, "oracle_limits": report.limits,
               "disagreements": [{"term": to_text(d.term), "observation": str(d.observation),
                                  "engine": d.engine, "oracle": d.oracle}
                                 for d in report.disagreements]}
    lines = [f"{report.terms} terms x {report.observations} observations over "
             f"{space.size} state(s), window {w}: {len(report.disagreements)} disagreements"]
    if report.limits:
        lines.append(f"{report.limits} questions too large for the oracle were skipped")
    for d in report.disagreements[:20]:
        lines.append(f"  {to_text(d.term)} on {d.observation}: engine {d.engine}, "
                     f"oracle {d.oracle}")
    _emit(args, payload, lines)
    return VIOLATION if report.disagreements else OK


COMMANDS = {"eval": cmd_eval, "equal": cmd_compare, "refines": cmd_compare,
            "laws": cmd_laws, "examples": cmd_examples, "oracle-check": cmd_oracle_check}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:          # argparse reports usage errors this way
        return USAGE if exc.code else OK
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (OSError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
