"""Lexer, parser, and printer behaviour, including the shipped corpus."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bddlkit
from bddlkit.errors import BddlParseError
from bddlkit.syntax import parse_domain, parse_problem, print_canonical
from bddlkit.syntax.ast import (
    ActivityDefinition,
    And,
    AtomicFormula,
    Exists,
    ForAll,
    ForNPairs,
    Iff,
    Imply,
    Literal,
    Not,
    Or,
    RoomName,
    VariableName,
)
from bddlkit.syntax.lexer import tokenize

from conftest import cat, const

DOMAIN = bddlkit.standard_domain()


def problem(objects="", init="", goal="(and)"):
    return parse_problem(
        f"""
        (define (problem test_1)
          (:domain igibson)
          (:objects {objects})
          (:init {init})
          (:goal {goal})
        )
        """,
        DOMAIN,
    )


# ---------------------------------------------------------------------------
# lexer
# ---------------------------------------------------------------------------


class TestLexer:
    def test_token_positions(self):
        tokens = tokenize("(ontop\n  a.n.01_1 b)")
        kinds = [(t.kind, t.value, t.line, t.column) for t in tokens]
        assert kinds == [
            ("lparen", "(", 1, 1),
            ("word", "ontop", 1, 2),
            ("word", "a.n.01_1", 2, 3),
            ("word", "b", 2, 12),
            ("rparen", ")", 2, 13),
            ("eof", "", 2, 14),
        ]

    def test_comments_and_case(self):
        tokens = tokenize("; header\n(FORALL ?X) ; trailing\n")
        assert [t.value for t in tokens if t.kind != "eof"] == ["(", "forall", "?x", ")"]

    def test_integers_and_keywords(self):
        tokens = tokenize("(:init (1) x2)")
        assert [(t.kind, t.value) for t in tokens][1:-1] == [
            ("keyword", "init"),
            ("lparen", "("),
            ("int", "1"),
            ("rparen", ")"),
            ("word", "x2"),
            ("rparen", ")"),
        ]

    def test_stray_character(self):
        with pytest.raises(BddlParseError) as err:
            tokenize("(ontop @)")
        assert err.value.line == 1 and err.value.column == 8


# ---------------------------------------------------------------------------
# golden corpus
# ---------------------------------------------------------------------------


class TestGoldenCorpus:
    def test_packing_lunches_shape(self, packing):
        assert packing.problem_name == "packing_lunches_1"
        assert packing.domain_name == "igibson"
        assert len(packing.objects) == 7
        assert [str(c) for c, _ in packing.objects] == [
            "shelf.n.01_1",
            "water.n.06_1",
            "countertop.n.01_1",
            "apple.n.01_1",
            "electric_refrigerator.n.01_1",
            "hamburger.n.01_1",
            "basket.n.01_1",
        ]
        assert len(packing.init) == 7
        assert all(lit.formula.is_ground for lit in packing.init)
        rooms = [lit for lit in packing.init if lit.formula.predicate == "inroom"]
        assert len(rooms) == 3
        assert all(lit.formula.args[1] == RoomName("kitchen") for lit in rooms)

        goal = packing.goal
        assert isinstance(goal, And) and len(goal.children) == 4
        pair_parts = goal.children[:3]
        assert all(isinstance(c, ForNPairs) and c.count == 1 for c in pair_parts)
        assert pair_parts[0].first == VariableName(cat("hamburger.n.01"))
        assert pair_parts[0].second == VariableName(cat("basket.n.01"))
        tail = goal.children[3]
        assert isinstance(tail, ForAll)
        # ?countertop.n.01_1 inside the forall body is a constant reference
        assert tail.body == AtomicFormula(
            "ontop",
            (VariableName(cat("basket.n.01")), const("countertop.n.01_1")),
        )

    def test_serving_shape(self, serving):
        assert serving.problem_name == "serving_hors_d_oeuvres_1"
        assert len(serving.objects) == 9
        grouped = [str(c) for c, k in serving.objects if k == cat("tray.n.01")]
        assert grouped == ["tray.n.01_1", "tray.n.01_2"]
        assert len(serving.init) == 9
        goal = serving.goal
        assert isinstance(goal, And) and len(goal.children) == 2
        assert all(isinstance(c, Exists) for c in goal.children)
        first_body = goal.children[0].body
        assert isinstance(first_body, And) and len(first_body.children) == 2
        assert isinstance(first_body.children[1].body, Not)

    def test_corpus_round_trips(self, domain):
        for path in bddlkit.corpus_activities():
            first = parse_problem(path.read_text(), domain)
            second = parse_problem(print_canonical(first), domain)
            assert first == second, path.name


# ---------------------------------------------------------------------------
# parser diagnostics
# ---------------------------------------------------------------------------


class TestParserErrors:
    def expect_error(self, text, fragment, line=None):
        with pytest.raises(BddlParseError) as err:
            parse_problem(text, DOMAIN)
        assert fragment in str(err.value)
        if line is not None:
            assert err.value.line == line
        return err.value

    def test_unknown_predicate(self):
        with pytest.raises(BddlParseError) as err:
            problem(objects="apple.n.01_1 - apple.n.01", init="(levitates apple.n.01_1)")
        assert "unknown predicate symbol 'levitates'" in str(err.value)

    def test_wrong_arity(self):
        with pytest.raises(BddlParseError) as err:
            problem(objects="apple.n.01_1 - apple.n.01", init="(ontop apple.n.01_1)")
        assert "expects 2 argument(s), got 1" in str(err.value)

    def test_free_variable(self):
        with pytest.raises(BddlParseError) as err:
            problem(objects="apple.n.01_1 - apple.n.01", goal="(cooked ?apple.n.01)")
        assert "free variable" in str(err.value)

    def test_init_must_be_ground(self):
        with pytest.raises(BddlParseError) as err:
            problem(objects="apple.n.01_1 - apple.n.01", init="(cooked ?apple.n.01)")
        assert "init literals must be ground" in str(err.value)

    def test_undeclared_constant(self):
        with pytest.raises(BddlParseError) as err:
            problem(init="(cooked apple.n.01_1)")
        assert "used without declaration" in str(err.value)

    def test_duplicate_declaration(self):
        with pytest.raises(BddlParseError) as err:
            problem(objects="apple.n.01_1 apple.n.01_1 - apple.n.01")
        assert "duplicate declaration" in str(err.value)

    def test_binder_category_mismatch(self):
        with pytest.raises(BddlParseError) as err:
            problem(
                objects="apple.n.01_1 - apple.n.01",
                goal="(forall (?apple.n.01 - basket.n.01) (cooked ?apple.n.01))",
            )
        assert "must be declared with its own category" in str(err.value)

    def test_shadowed_binder(self):
        with pytest.raises(BddlParseError) as err:
            problem(
                objects="apple.n.01_1 - apple.n.01",
                goal=(
                    "(forall (?apple.n.01 - apple.n.01)"
                    " (exists (?apple.n.01 - apple.n.01) (cooked ?apple.n.01)))"
                ),
            )
        assert "shadows an enclosing binder" in str(err.value)

    def test_quantifying_a_constant(self):
        with pytest.raises(BddlParseError) as err:
            problem(
                objects="apple.n.01_1 - apple.n.01",
                goal="(forall (?apple.n.01_1 - apple.n.01) (cooked ?apple.n.01_1))",
            )
        assert "cannot quantify over a constant" in str(err.value)

    def test_section_order(self):
        text = """
        (define (problem p_1)
          (:domain igibson)
          (:init)
          (:objects)
          (:goal (and))
        )
        """
        with pytest.raises(BddlParseError) as err:
            parse_problem(text, DOMAIN)
        assert "expected section ':objects', found ':init'" in str(err.value)

    def test_error_carries_position(self):
        err = self.expect_error(
            "(define (problem p_1)\n  (:domain igibson)\n  (:objects\n    oops\n  )\n"
            "  (:init)\n  (:goal (and))\n)\n",
            "not a constant name",
            line=4,
        )
        assert err.column == 5
        assert str(err).startswith("line 4, column 5: ")

    def test_missing_category_for_group(self):
        with pytest.raises(BddlParseError) as err:
            problem(objects="apple.n.01_1")
        assert "lack a '- category' declaration" in str(err.value)

    def test_trailing_input(self):
        with pytest.raises(BddlParseError) as err:
            parse_problem(
                "(define (problem p_1) (:domain d) (:objects) (:init) (:goal (and))) junk",
                DOMAIN,
            )
        assert "trailing input" in str(err.value)

    def test_empty_and_only_allowed_at_top(self):
        with pytest.raises(BddlParseError) as err:
            problem(objects="apple.n.01_1 - apple.n.01", goal="(or (and) (cooked apple.n.01_1))")
        assert "requires at least one child" in str(err.value)

    def test_nested_not_in_init(self):
        with pytest.raises(BddlParseError) as err:
            problem(
                objects="apple.n.01_1 - apple.n.01",
                init="(not (not (cooked apple.n.01_1)))",
            )
        assert "unknown predicate symbol 'not'" in str(err.value)


class TestParserAccepts:
    def test_empty_goal_is_none(self):
        assert problem().goal is None

    def test_grouped_object_declaration(self):
        d = problem(objects="tray.n.01_1 tray.n.01_2 - tray.n.01 cup.n.01_1 - cup.n.01")
        assert [(str(c), str(k)) for c, k in d.objects] == [
            ("tray.n.01_1", "tray.n.01"),
            ("tray.n.01_2", "tray.n.01"),
            ("cup.n.01_1", "cup.n.01"),
        ]

    def test_negated_init_literal(self):
        d = problem(
            objects="apple.n.01_1 - apple.n.01",
            init="(not (cooked apple.n.01_1)) (onfloor apple.n.01_1)",
        )
        assert d.init[0] == Literal(AtomicFormula("cooked", (const("apple.n.01_1"),)), True)
        assert not d.init[1].negated

    def test_question_prefixed_constant_reference(self):
        d = problem(
            objects="apple.n.01_1 - apple.n.01 basket.n.01_1 - basket.n.01",
            goal="(inside ?apple.n.01_1 ?basket.n.01_1)",
        )
        assert d.goal == AtomicFormula(
            "inside", (const("apple.n.01_1"), const("basket.n.01_1"))
        )

    def test_imply_iff_for_n(self):
        d = problem(
            objects="apple.n.01_1 apple.n.01_2 - apple.n.01",
            goal=(
                "(and (imply (cooked apple.n.01_1) (cooked apple.n.01_2))"
                " (iff (sliced apple.n.01_1) (sliced apple.n.01_2))"
                " (for_n (2) (?apple.n.01 - apple.n.01) (cooked ?apple.n.01)))"
            ),
        )
        assert isinstance(d.goal.children[0], Imply)
        assert isinstance(d.goal.children[1], Iff)
        assert d.goal.children[2].count == 2


# ---------------------------------------------------------------------------
# domain files
# ---------------------------------------------------------------------------


class TestDomainFiles:
    def test_standard_domain_contents(self, domain):
        cooked = domain.require("cooked")
        assert cooked.arity == 1 and cooked.required_property == "cookable"
        ontop = domain.require("ontop")
        assert ontop.arity == 2 and ontop.required_property is None
        assert domain.lookup("levitates") is None

    def test_property_annotation_parsing(self):
        d = parse_domain(
            "(define (domain mini) (:predicates (wet ?x - soakable) (near ?x ?y)))"
        )
        assert d.require("wet").required_property == "soakable"
        assert d.require("near").arity == 2

    def test_duplicate_predicate_rejected(self):
        with pytest.raises(BddlParseError):
            parse_domain("(define (domain mini) (:predicates (wet ?x) (wet ?y)))")

    def test_bad_arity_rejected(self):
        with pytest.raises(BddlParseError) as err:
            parse_domain("(define (domain mini) (:predicates (triple ?x ?y ?z)))")
        assert "1 or 2 parameters" in str(err.value)


# ---------------------------------------------------------------------------
# canonical printing round trip, property-based
# ---------------------------------------------------------------------------

_CATS = [cat("apple.n.01"), cat("basket.n.01"), cat("tray.n.01")]
_CONSTS = {c: [bddlkit.ConstantName(c, i) for i in (1, 2)] for c in _CATS}
_DECLS = tuple((n, c) for c in _CATS for n in _CONSTS[c])
_UNARY = ["onfloor"]
_BINARY = ["ontop", "inside", "nextto", "under"]


def _atoms(scope: tuple):
    """Atom strategy over the fixed declarations plus in-scope variables."""
    terms = st.sampled_from(
        [n for ns in _CONSTS.values() for n in ns] + [VariableName(c) for c in scope]
    )
    unary = st.builds(
        lambda p, a: AtomicFormula(p, (a,)), st.sampled_from(_UNARY), terms
    )
    binary = st.builds(
        lambda p, a, b: AtomicFormula(p, (a, b)), st.sampled_from(_BINARY), terms, terms
    )
    return st.one_of(unary, binary)


def _exprs(scope: tuple, depth: int):
    atom = _atoms(scope)
    if depth == 0:
        return atom
    sub = _exprs(scope, depth - 1)
    options = [
        atom,
        st.builds(Not, sub),
        st.builds(lambda cs: And(tuple(cs)), st.lists(sub, min_size=1, max_size=3)),
        st.builds(lambda cs: Or(tuple(cs)), st.lists(sub, min_size=1, max_size=3)),
        st.builds(Imply, sub, sub),
        st.builds(Iff, sub, sub),
    ]
    fresh = [c for c in _CATS if c not in scope]
    if fresh:
        def quantified(maker):
            return st.sampled_from(fresh).flatmap(
                lambda c: st.builds(maker(c), _exprs(scope + (c,), depth - 1))
            )

        options.append(quantified(lambda c: (lambda b: ForAll(VariableName(c), b))))
        options.append(quantified(lambda c: (lambda b: Exists(VariableName(c), b))))
    if len(fresh) >= 2:
        pairs = st.permutations(fresh).map(lambda p: (p[0], p[1]))
        options.append(
            pairs.flatmap(
                lambda cc: st.builds(
                    lambda b: ForNPairs(1, VariableName(cc[0]), VariableName(cc[1]), b),
                    _exprs(scope + cc, depth - 1),
                )
            )
        )
    return st.one_of(options)


_ground_literals = st.builds(
    Literal,
    _atoms(()).filter(lambda a: a.is_ground),
    st.booleans(),
)

_definitions = st.builds(
    lambda init, goal: ActivityDefinition("generated_1", "igibson", _DECLS, tuple(init), goal),
    st.lists(_ground_literals, max_size=5),
    st.one_of(st.none(), _exprs((), 2)),
)


class TestRoundTrip:
    @settings(max_examples=200, deadline=None)
    @given(_definitions)
    def test_print_parse_round_trip(self, definition):
        text = print_canonical(definition)
        assert parse_problem(text, DOMAIN) == definition

    def test_canonical_output_is_stable(self, packing):
        once = print_canonical(packing)
        again = print_canonical(parse_problem(once, DOMAIN))
        assert once == again
