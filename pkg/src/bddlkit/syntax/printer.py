"""Canonical pretty-printer for BDDL ASTs.

The layout is fixed so that printing is deterministic and
``parse_problem(print_canonical(d)) == d`` holds for every valid
definition: two-space indent, one object declaration or init literal
per line, atoms inline, operator and quantifier bodies indented.
Constants are always printed without the '?' prefix.
"""

from __future__ import annotations

from bddlkit.syntax.ast import (
    ActivityDefinition,
    And,
    AtomicFormula,
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
)

_INDENT = "  "


def format_literal(literal: Literal) -> str:
    """Render a ground literal on one line."""
    return str(literal)


def format_expr(expr: Expr, depth: int = 0) -> str:
    """Render an expression subtree starting at ``depth`` indent levels."""
    pad = _INDENT * depth
    if isinstance(expr, AtomicFormula):
        return pad + str(expr)
    if isinstance(expr, Not) and isinstance(expr.child, AtomicFormula):
        return f"{pad}(not {expr.child})"
    inner = depth + 1
    if isinstance(expr, (And, Or)):
        head = "and" if isinstance(expr, And) else "or"
        lines = [f"{pad}({head}"]
        lines += [format_expr(child, inner) for child in expr.children]
    elif isinstance(expr, Not):
        lines = [f"{pad}(not", format_expr(expr.child, inner)]
    elif isinstance(expr, (Imply, Iff)):
        head = "imply" if isinstance(expr, Imply) else "iff"
        left = expr.antecedent if isinstance(expr, Imply) else expr.left
        right = expr.consequent if isinstance(expr, Imply) else expr.right
        lines = [f"{pad}({head}", format_expr(left, inner), format_expr(right, inner)]
    elif isinstance(expr, (ForAll, Exists)):
        head = "forall" if isinstance(expr, ForAll) else "exists"
        binder = f"({expr.variable} - {expr.variable.category})"
        lines = [f"{pad}({head} {binder}", format_expr(expr.body, inner)]
    elif isinstance(expr, ForN):
        binder = f"({expr.variable} - {expr.variable.category})"
        lines = [f"{pad}(for_n ({expr.count}) {binder}", format_expr(expr.body, inner)]
    elif isinstance(expr, ForPairs):
        first = f"({expr.first} - {expr.first.category})"
        second = f"({expr.second} - {expr.second.category})"
        lines = [f"{pad}(for_pairs {first} {second}", format_expr(expr.body, inner)]
    elif isinstance(expr, ForNPairs):
        first = f"({expr.first} - {expr.first.category})"
        second = f"({expr.second} - {expr.second.category})"
        lines = [
            f"{pad}(for_n_pairs ({expr.count}) {first} {second}",
            format_expr(expr.body, inner),
        ]
    else:
        raise TypeError(f"not an expression: {expr!r}")
    lines.append(f"{pad})")
    return "\n".join(lines)


def print_canonical(definition: ActivityDefinition) -> str:
    """Render a full activity definition in canonical form."""
    lines = [f"(define (problem {definition.problem_name})"]
    lines.append(f"{_INDENT}(:domain {definition.domain_name})")

    if definition.objects:
        lines.append(f"{_INDENT}(:objects")
        for constant, category in definition.objects:
            lines.append(f"{_INDENT * 2}{constant} - {category}")
        lines.append(f"{_INDENT})")
    else:
        lines.append(f"{_INDENT}(:objects)")

    if definition.init:
        lines.append(f"{_INDENT}(:init")
        for literal in definition.init:
            lines.append(f"{_INDENT * 2}{literal}")
        lines.append(f"{_INDENT})")
    else:
        lines.append(f"{_INDENT}(:init)")

    if definition.goal is None:
        lines.append(f"{_INDENT}(:goal (and))")
    else:
        lines.append(f"{_INDENT}(:goal")
        lines.append(format_expr(definition.goal, 2))
        lines.append(f"{_INDENT})")

    lines.append(")")
    return "\n".join(lines) + "\n"
