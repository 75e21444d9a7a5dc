"""Exact plausibility of propositional queries by counting satisfying assignments."""

__version__ = "0.1.0"

from .formula import (  # noqa: E402
    FALSE, TRUE, And, Const, Formula, FormulaSyntaxError, Iff, Implies, Not, Or, Symbol,
    SymbolTable, conjoin, disjoin, exactly_one, parse, substitute, symbols, to_text,
)
from .semantics import (  # noqa: E402
    Order, TruthAssignment, UnsatisfiablePremise, compare_implication, count_models,
    entails, equivalent, evaluate, models, satisfiable,
)
from .plausibility import (  # noqa: E402
    LawCheck, Plausibility, check_probability_laws, plausibility, plausibility_detail,
    upsilon1, upsilon2,
)
from .canonical import ReductionTrace, reduce_to_urn, verify_change_of_variables  # noqa: E402

__all__ = [
    "__version__", "Formula", "Symbol", "Not", "And", "Or", "Implies", "Iff", "Const",
    "TRUE", "FALSE", "SymbolTable", "FormulaSyntaxError", "parse", "to_text", "symbols",
    "substitute", "exactly_one", "conjoin", "disjoin", "TruthAssignment", "Order",
    "UnsatisfiablePremise", "evaluate", "count_models", "satisfiable", "entails",
    "equivalent", "compare_implication", "models", "Plausibility", "plausibility",
    "plausibility_detail", "upsilon1", "upsilon2", "LawCheck", "check_probability_laws",
    "ReductionTrace", "reduce_to_urn", "verify_change_of_variables",
]
