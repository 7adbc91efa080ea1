"""Executable trace semantics for a synchronous concurrent refinement
algebra with fairness: commands compile to exact trace automata, windows of
their trace sets are compared exactly, and a catalog of algebraic laws is
checked on generated bindings."""

from .atomic import AtomicCommand
from .check import Diagnostics, Relation, Verdict, Witness, check_equal, check_refines, diagnostics
from .denotation import Denotation, ResourceLimitError, denote, is_member
from .examples import build_example, run_examples
from .laws import LawReport, LawSpec, RunConfig, catalog, check_law, generate_bindings, run_suite
from .oracle import oracle_member
from .syntax import ParseError, parse, to_text
from .traces import (ContractViolation, Lasso, StateSpace, Status, Step, Trace, Window,
                     canonicalize_lasso, close)

__all__ = [
    "AtomicCommand", "ContractViolation", "Denotation", "Diagnostics", "Lasso", "LawReport",
    "LawSpec", "ParseError", "Relation", "ResourceLimitError", "RunConfig", "StateSpace",
    "Status", "Step", "Trace", "Verdict", "Window", "Witness", "build_example",
    "canonicalize_lasso", "catalog", "check_equal", "check_law", "check_refines", "close",
    "denote", "diagnostics", "generate_bindings", "is_member", "oracle_member", "parse",
    "run_examples", "run_suite", "to_text",
]
