"""Recursive-descent parser for BDDL problem and domain files.

Sections are required in canonical order: ``(:domain ...)``,
``(:objects ...)``, ``(:init ...)``, ``(:goal ...)``.  Semantic checks
(predicate registry, arity, variable scoping, constant declarations,
init groundness) run inline during the descent so every diagnostic
points at the offending token.
"""

from __future__ import annotations

from bddlkit.errors import BddlParseError
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
from bddlkit.syntax.lexer import Token, tokenize

_SECTIONS = ("domain", "objects", "init", "goal")
_OPERATORS = frozenset({"and", "or", "not", "imply", "iff"})
_QUANTIFIERS = frozenset({"forall", "exists", "for_n", "for_pairs", "for_n_pairs"})


class _Parser:
    def __init__(self, text: str, registry: DomainDefinition | None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.registry = registry
        self.declared: dict[ConstantName, CategoryName] = {}
        self.scope: dict[CategoryName, VariableName] = {}

    # -- token plumbing -----------------------------------------------------

    def _cur(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def _error(self, message: str, tok: Token | None = None) -> BddlParseError:
        tok = tok or self._cur()
        return BddlParseError(message, tok.line, tok.column)

    def _expect(self, kind: str, what: str) -> Token:
        tok = self._cur()
        if tok.kind != kind:
            shown = tok.value if tok.kind != "eof" else "end of input"
            raise self._error(f"expected {what}, found {shown!r}")
        return self._advance()

    def _expect_word(self, value: str) -> Token:
        tok = self._expect("word", f"'{value}'")
        if tok.value != value:
            raise self._error(f"expected '{value}', found {tok.value!r}", tok)
        return tok

    def _expect_section(self, expected: str) -> None:
        self._expect("lparen", "'('")
        tok = self._expect("keyword", f"section ':{expected}'")
        if tok.value != expected:
            if tok.value in _SECTIONS:
                raise self._error(
                    f"expected section ':{expected}', found ':{tok.value}'", tok
                )
            raise self._error(f"unknown section ':{tok.value}'", tok)

    # -- names --------------------------------------------------------------

    def _parse_category(self) -> CategoryName:
        tok = self._expect("word", "a category name")
        try:
            return CategoryName.parse(tok.value)
        except ValueError as exc:
            raise self._error(str(exc), tok) from None

    def _parse_constant(self, tok: Token) -> ConstantName:
        try:
            return ConstantName.parse(tok.value)
        except ValueError as exc:
            raise self._error(str(exc), tok) from None

    def _check_declared(self, constant: ConstantName, tok: Token) -> ConstantName:
        if constant not in self.declared:
            raise self._error(f"constant {constant} used without declaration", tok)
        return constant

    def _classify_term(self, tok: Token, *, ground_only: bool) -> Term:
        """Interpret an argument token as a constant, variable, or room.

        A '?'-prefixed token that ends in the ``_<digits>`` instance
        suffix refers to a declared constant (the goal sections of
        activity files use that spelling); any other '?' token is a
        variable.  Dotted tokens are constants; bare identifiers are
        room names.
        """
        text = tok.value
        if text.startswith("?"):
            body = text[1:]
            stem, sep, suffix = body.rpartition("_")
            if sep and suffix.isdigit():
                return self._check_declared(self._parse_constant_text(body, tok), tok)
            if ground_only:
                raise self._error("init literals must be ground", tok)
            try:
                category = CategoryName.parse(body)
            except ValueError as exc:
                raise self._error(str(exc), tok) from None
            if category not in self.scope:
                raise self._error(f"free variable ?{category}", tok)
            return self.scope[category]
        if "." in text:
            return self._check_declared(self._parse_constant_text(text, tok), tok)
        try:
            return RoomName(text)
        except ValueError as exc:
            raise self._error(str(exc), tok) from None

    def _parse_constant_text(self, text: str, tok: Token) -> ConstantName:
        try:
            return ConstantName.parse(text)
        except ValueError as exc:
            raise self._error(str(exc), tok) from None

    # -- formulas -----------------------------------------------------------

    def _parse_atom(self, head: Token, *, ground_only: bool) -> AtomicFormula:
        if self.registry is None:
            raise self._error(f"unknown predicate symbol {head.value!r}", head)
        pred = self.registry.lookup(head.value)
        if pred is None:
            raise self._error(f"unknown predicate symbol {head.value!r}", head)
        args: list[Term] = []
        while self._cur().kind == "word":
            args.append(self._classify_term(self._advance(), ground_only=ground_only))
        self._expect("rparen", "')'")
        if len(args) != pred.arity:
            raise self._error(
                f"predicate {pred.symbol!r} expects {pred.arity} argument(s), got {len(args)}",
                head,
            )
        return AtomicFormula(pred.symbol, tuple(args))

    def _parse_binder(self) -> VariableName:
        """Parse ``(?category - category)`` and push it onto the scope."""
        self._expect("lparen", "'('")
        tok = self._expect("word", "a quantified variable")
        if not tok.value.startswith("?"):
            raise self._error(f"expected a '?' variable, found {tok.value!r}", tok)
        body = tok.value[1:]
        stem, sep, suffix = body.rpartition("_")
        if sep and suffix.isdigit():
            raise self._error("cannot quantify over a constant", tok)
        try:
            category = CategoryName.parse(body)
        except ValueError as exc:
            raise self._error(str(exc), tok) from None
        self._expect("dash", "'-'")
        declared = self._parse_category()
        if declared != category:
            raise self._error(
                f"variable ?{category} must be declared with its own category, found {declared}",
                tok,
            )
        self._expect("rparen", "')'")
        if category in self.scope:
            raise self._error(f"variable ?{category} shadows an enclosing binder", tok)
        variable = VariableName(category)
        self.scope[category] = variable
        return variable

    def _pop_binder(self, variable: VariableName) -> None:
        del self.scope[variable.category]

    def _parse_count(self) -> int:
        self._expect("lparen", "'('")
        tok = self._expect("int", "a count")
        self._expect("rparen", "')'")
        return int(tok.value)

    def _parse_expr(self) -> Expr:
        self._expect("lparen", "'('")
        head = self._expect("word", "an operator, quantifier, or predicate")
        return self._parse_form(head)

    def _parse_form(self, head: Token) -> Expr:
        name = head.value
        if name in _OPERATORS:
            if name == "not":
                child = self._parse_expr()
                self._expect("rparen", "')'")
                return Not(child)
            if name in ("imply", "iff"):
                left = self._parse_expr()
                right = self._parse_expr()
                self._expect("rparen", "')'")
                return Imply(left, right) if name == "imply" else Iff(left, right)
            children: list[Expr] = []
            while self._cur().kind == "lparen":
                children.append(self._parse_expr())
            self._expect("rparen", "')'")
            if not children:
                raise self._error(f"'{name}' requires at least one child", head)
            return And(tuple(children)) if name == "and" else Or(tuple(children))
        if name in _QUANTIFIERS:
            if name in ("forall", "exists"):
                variable = self._parse_binder()
                body = self._parse_expr()
                self._pop_binder(variable)
                self._expect("rparen", "')'")
                return (ForAll if name == "forall" else Exists)(variable, body)
            if name == "for_n":
                count = self._parse_count()
                variable = self._parse_binder()
                body = self._parse_expr()
                self._pop_binder(variable)
                self._expect("rparen", "')'")
                return ForN(count, variable, body)
            count = self._parse_count() if name == "for_n_pairs" else None
            first = self._parse_binder()
            second = self._parse_binder()
            body = self._parse_expr()
            self._pop_binder(second)
            self._pop_binder(first)
            self._expect("rparen", "')'")
            if count is None:
                return ForPairs(first, second, body)
            return ForNPairs(count, first, second, body)
        return self._parse_atom(head, ground_only=False)

    # -- sections -----------------------------------------------------------

    def _parse_objects(self) -> tuple[tuple[ConstantName, CategoryName], ...]:
        self._expect_section("objects")
        entries: list[tuple[ConstantName, CategoryName]] = []
        group: list[tuple[ConstantName, Token]] = []
        while True:
            tok = self._cur()
            if tok.kind == "word":
                self._advance()
                group.append((self._parse_constant(tok), tok))
                continue
            if tok.kind == "dash":
                self._advance()
                if not group:
                    raise self._error("expected constant names before '-'", tok)
                category = self._parse_category()
                for constant, where in group:
                    if constant in self.declared:
                        raise self._error(f"duplicate declaration of {constant}", where)
                    self.declared[constant] = category
                    entries.append((constant, category))
                group = []
                continue
            if tok.kind == "rparen":
                if group:
                    raise self._error("constants lack a '- category' declaration", group[0][1])
                self._advance()
                return tuple(entries)
            raise self._error("expected a constant name, '-', or ')'")

    def _parse_init(self) -> tuple[Literal, ...]:
        self._expect_section("init")
        literals: list[Literal] = []
        while self._cur().kind == "lparen":
            self._advance()
            head = self._expect("word", "a predicate or 'not'")
            if head.value == "not":
                self._expect("lparen", "'('")
                inner = self._expect("word", "a predicate")
                formula = self._parse_atom(inner, ground_only=True)
                self._expect("rparen", "')'")
                literals.append(Literal(formula, negated=True))
            else:
                literals.append(Literal(self._parse_atom(head, ground_only=True)))
        self._expect("rparen", "')'")
        return tuple(literals)

    def _parse_goal(self) -> Expr | None:
        self._expect_section("goal")
        # the degenerate empty goal is written (:goal (and)) and parses
        # to None; an empty (and) anywhere else is an error
        checkpoint = self.pos
        self._expect("lparen", "'('")
        head = self._cur()
        if head.kind == "word" and head.value == "and":
            self._advance()
            if self._cur().kind == "rparen":
                self._advance()
                self._expect("rparen", "')'")
                return None
        self.pos = checkpoint
        goal = self._parse_expr()
        self._expect("rparen", "')'")
        return goal

    def parse_problem(self) -> ActivityDefinition:
        self._expect("lparen", "'('")
        self._expect_word("define")
        self._expect("lparen", "'('")
        self._expect_word("problem")
        problem_name = self._expect("word", "a problem name").value
        self._expect("rparen", "')'")

        self._expect_section("domain")
        domain_name = self._expect("word", "a domain name").value
        self._expect("rparen", "')'")

        objects = self._parse_objects()
        init = self._parse_init()
        goal = self._parse_goal()

        self._expect("rparen", "')'")
        tok = self._cur()
        if tok.kind != "eof":
            raise self._error(f"unexpected trailing input {tok.value!r}", tok)
        return ActivityDefinition(problem_name, domain_name, objects, init, goal)

    # -- domain files -------------------------------------------------------

    def parse_domain(self) -> DomainDefinition:
        self._expect("lparen", "'('")
        self._expect_word("define")
        self._expect("lparen", "'('")
        self._expect_word("domain")
        name = self._expect("word", "a domain name").value
        self._expect("rparen", "')'")

        self._expect("lparen", "'('")
        tok = self._expect("keyword", "section ':predicates'")
        if tok.value != "predicates":
            raise self._error(f"unknown section ':{tok.value}'", tok)
        predicates: list[PredicateDef] = []
        seen: set[str] = set()
        while self._cur().kind == "lparen":
            predicates.append(self._parse_predicate_def(seen))
        self._expect("rparen", "')'")
        self._expect("rparen", "')'")
        tok = self._cur()
        if tok.kind != "eof":
            raise self._error(f"unexpected trailing input {tok.value!r}", tok)
        return DomainDefinition(name, tuple(predicates))

    def _parse_predicate_def(self, seen: set[str]) -> PredicateDef:
        self._advance()  # lparen
        head = self._expect("word", "a predicate symbol")
        if head.value in seen:
            raise self._error(f"duplicate predicate symbol {head.value!r}", head)
        params = 0
        required: str | None = None
        while self._cur().kind == "word":
            tok = self._advance()
            if not tok.value.startswith("?"):
                raise self._error(f"expected a '?' parameter, found {tok.value!r}", tok)
            params += 1
            if self._cur().kind == "dash":
                # a property annotation gates the predicate on its
                # first argument's category
                self._advance()
                prop = self._expect("word", "a property name")
                if params != 1:
                    raise self._error(
                        "property annotations are only supported on the first parameter",
                        prop,
                    )
                required = prop.value
        self._expect("rparen", "')'")
        if params not in (1, 2):
            raise self._error(
                f"predicate {head.value!r} must take 1 or 2 parameters, got {params}", head
            )
        seen.add(head.value)
        return PredicateDef(head.value, params, required)


def parse_problem(text: str, domain: DomainDefinition) -> ActivityDefinition:
    """Parse an activity definition, checking atoms against ``domain``."""
    return _Parser(text, domain).parse_problem()


def parse_domain(text: str) -> DomainDefinition:
    """Parse a domain file into a predicate registry."""
    return _Parser(text, None).parse_domain()
