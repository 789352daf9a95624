"""BDDL surface syntax: lexer, AST, parser, and canonical printer."""

from bddlkit.syntax.ast import (
    ActivityDefinition,
    And,
    AtomicFormula,
    CategoryName,
    ConstantName,
    DomainDefinition,
    Exists,
    Expr,
    ForAll,
    ForN,
    ForNPairs,
    ForPairs,
    Iff,
    Imply,
    Literal,
    Not,
    Or,
    PredicateDef,
    RoomName,
    Term,
    VariableName,
)
from bddlkit.syntax.parser import parse_domain, parse_problem
from bddlkit.syntax.printer import format_expr, format_literal, print_canonical

__all__ = [
    "ActivityDefinition",
    "And",
    "AtomicFormula",
    "CategoryName",
    "ConstantName",
    "DomainDefinition",
    "Exists",
    "Expr",
    "ForAll",
    "ForN",
    "ForNPairs",
    "ForPairs",
    "Iff",
    "Imply",
    "Literal",
    "Not",
    "Or",
    "PredicateDef",
    "RoomName",
    "Term",
    "VariableName",
    "format_expr",
    "format_literal",
    "parse_domain",
    "parse_problem",
    "print_canonical",
]
