"""Goal semantics against independent oracles.

The golden activities are checked oracle-first: the expected option
sets are derived by the naive set-algebra expansion (and written out by
hand below), and only then compared with ``flatten``.
"""

import random

import pytest

from bddlkit.errors import FeasibilityError, WorldError
from bddlkit.logic import (
    activity_volume,
    evaluate,
    flatten,
    maximum_matching_size,
    substitute,
)
from bddlkit.syntax.ast import (
    And,
    AtomicFormula,
    Exists,
    ForAll,
    ForN,
    ForNPairs,
    ForPairs,
    Literal,
    Not,
    VariableName,
)
from bddlkit.world import logical_snapshot

import oracles
from conftest import build_world, cat, const


def v(name):
    return VariableName(cat(name))


# ---------------------------------------------------------------------------
# maximum matching
# ---------------------------------------------------------------------------


class TestMatching:
    def test_textbook_cases(self):
        assert maximum_matching_size([], {}) == 0
        assert maximum_matching_size(["a"], {"a": ["x"]}) == 1
        # two left vertices fighting over one right vertex
        assert maximum_matching_size(["a", "b"], {"a": ["x"], "b": ["x"]}) == 1
        # perfect matching requires the alternating-path search
        adjacency = {"a": ["x", "y"], "b": ["x"], "c": ["z"]}
        assert maximum_matching_size(["a", "b", "c"], adjacency) == 3

    @pytest.mark.parametrize("seed", range(200))
    def test_agrees_with_exhaustive_search(self, seed):
        rng = random.Random(seed)
        left = [f"l{i}" for i in range(rng.randint(0, 6))]
        right = [f"r{i}" for i in range(rng.randint(0, 6))]
        adjacency = {
            u: [w for w in right if rng.random() < 0.35] for u in left
        }
        assert maximum_matching_size(left, adjacency) == oracles.brute_matching_size(
            left, adjacency
        )


# ---------------------------------------------------------------------------
# evaluate versus the naive expansion
# ---------------------------------------------------------------------------


class TestEvaluateOracle:
    @pytest.mark.parametrize("chunk", range(10))
    def test_500_random_goals(self, taxonomy, domain, config, chunk):
        universe = oracles.logic_universe()
        state = oracles.logic_world(taxonomy, config, chunk)
        for i in range(50):
            rng = random.Random(chunk * 1000 + i)
            goal = oracles.random_goal(rng, depth=2)
            got = evaluate(goal, state, {}, universe, taxonomy, domain)
            want = oracles.naive_evaluate(goal, state, {}, universe, taxonomy, domain)
            assert got == want, goal

    def test_empty_goal_is_true(self, taxonomy, domain, config):
        state = oracles.logic_world(taxonomy, config, 0)
        assert evaluate(None, state, {}, oracles.logic_universe(), taxonomy, domain)

    def test_unbound_variable_is_an_error(self, taxonomy, domain, config):
        state = oracles.logic_world(taxonomy, config, 0)
        loose = AtomicFormula("onfloor", (v("cup.n.01"),))
        with pytest.raises(WorldError, match="unbound variable"):
            evaluate(loose, state, {}, oracles.logic_universe(), taxonomy, domain)


# ---------------------------------------------------------------------------
# golden activity flattening, oracle first
# ---------------------------------------------------------------------------


def fact(pred, *args):
    return (pred, *args)


class TestGoldenFlattening:
    def test_packing_lunches(self, packing, taxonomy, domain):
        universe = list(packing.objects)
        oracle = oracles.naive_options(packing.goal, {}, universe, taxonomy)
        # one conjunction: each pair quantifier has exactly one mapping
        expected = {
            frozenset(
                {
                    (fact("inside", "hamburger.n.01_1", "basket.n.01_1"), False),
                    (fact("inside", "water.n.06_1", "basket.n.01_1"), False),
                    (fact("inside", "apple.n.01_1", "basket.n.01_1"), False),
                    (fact("ontop", "basket.n.01_1", "countertop.n.01_1"), False),
                }
            )
        }
        assert oracle == expected

        opts = flatten(packing.goal, universe, taxonomy, domain)
        assert not opts.truncated
        assert oracles.option_set(opts) == oracle
        assert activity_volume(opts) == 4

    def test_serving_hors_d_oeuvres(self, serving, taxonomy, domain):
        universe = list(serving.objects)
        tray_goal_a, tray_goal_b = serving.goal.children

        # each exists-child alone offers one option per tray
        options_a = oracles.naive_options(tray_goal_a, {}, universe, taxonomy)
        options_b = oracles.naive_options(tray_goal_b, {}, universe, taxonomy)
        assert len(options_a) == 2 and len(options_b) == 2

        # crossing them yields 4 candidates; picking the same tray twice
        # contradicts (sausages both on and off it), leaving 2
        candidates = [a | b for a in options_a for b in options_b]
        assert len(candidates) == 4
        consistent = [c for c in candidates if oracles._consistent(c)]
        assert len(consistent) == 2

        oracle = oracles.naive_options(serving.goal, {}, universe, taxonomy)
        assert oracle == set(map(frozenset, consistent))

        def tray_option(sausage_tray, cherry_tray):
            out = set()
            for i in (1, 2):
                out.add((fact("ontop", f"sausage.n.01_{i}", sausage_tray), False))
                out.add((fact("ontop", f"cherry.n.03_{i}", sausage_tray), True))
                out.add((fact("ontop", f"cherry.n.03_{i}", cherry_tray), False))
                out.add((fact("ontop", f"sausage.n.01_{i}", cherry_tray), True))
            return frozenset(out)

        assert oracle == {
            tray_option("tray.n.01_1", "tray.n.01_2"),
            tray_option("tray.n.01_2", "tray.n.01_1"),
        }

        opts = flatten(serving.goal, universe, taxonomy, domain)
        assert not opts.truncated
        assert len(opts) == 2
        assert all(len(option) == 8 for option in opts.options)
        assert oracles.option_set(opts) == oracle
        assert activity_volume(opts) == 8

    def test_remaining_corpus_flattens_cleanly(self, domain, taxonomy):
        import bddlkit
        from bddlkit.syntax import parse_problem

        for path in bddlkit.corpus_activities():
            definition = parse_problem(path.read_text(), domain)
            universe = list(definition.objects)
            opts = flatten(definition.goal, universe, taxonomy, domain)
            assert not opts.truncated, path.name
            assert oracles.option_set(opts) == oracles.naive_options(
                definition.goal, {}, universe, taxonomy
            ), path.name
            assert activity_volume(opts) >= 1


# ---------------------------------------------------------------------------
# flattening versus the oracle on random goals
# ---------------------------------------------------------------------------


class TestFlattenOracle:
    @pytest.mark.parametrize("chunk", range(6))
    def test_random_goals_match_and_mean_what_they_say(self, taxonomy, domain, config, chunk):
        universe = oracles.logic_universe()
        state = oracles.logic_world(taxonomy, config, 100 + chunk)
        facts = logical_snapshot(state, universe, taxonomy, domain)
        compared = 0
        i = 0
        while compared < 20:
            rng = random.Random(chunk * 10_000 + i)
            i += 1
            goal = oracles.random_goal(rng, depth=2, count_limit=2)
            opts = flatten(goal, universe, taxonomy, domain)
            if opts.truncated:
                continue
            compared += 1
            assert oracles.option_set(opts) == oracles.naive_options(
                goal, {}, universe, taxonomy
            ), goal
            # an option set satisfied by the facts iff the goal evaluates true
            satisfied = any(
                all((lit.formula.key() in facts) != lit.negated for lit in option)
                for option in opts.options
            )
            assert satisfied == evaluate(goal, state, {}, universe, taxonomy, domain), goal

    def test_flattening_is_deterministic(self, serving, taxonomy, domain):
        universe = list(serving.objects)
        first = flatten(serving.goal, universe, taxonomy, domain)
        second = flatten(serving.goal, universe, taxonomy, domain)
        assert first == second  # option order included


# ---------------------------------------------------------------------------
# caps, duals, and edge semantics
# ---------------------------------------------------------------------------


def onfloor(name):
    return AtomicFormula("onfloor", (const(name),))


class TestCapsAndEdges:
    def test_cap_truncation(self, taxonomy, domain):
        universe = oracles.logic_universe()
        goal = ForN(2, v("apple.n.01"), AtomicFormula("onfloor", (v("apple.n.01"),)))
        full = flatten(goal, universe, taxonomy, domain)
        assert not full.truncated and len(full) == 3

        capped = flatten(goal, universe, taxonomy, domain, cap=2)
        assert capped.truncated and len(capped) == 2
        assert oracles.option_set(capped) <= oracles.naive_options(
            goal, {}, universe, taxonomy
        )

        exact = flatten(goal, universe, taxonomy, domain, cap=3)
        assert not exact.truncated and len(exact) == 3

        with pytest.raises(FeasibilityError, match="cap must be positive"):
            flatten(goal, universe, taxonomy, domain, cap=0)

    def test_empty_goal_flattens_to_one_empty_option(self, taxonomy, domain):
        opts = flatten(None, oracles.logic_universe(), taxonomy, domain)
        assert opts.options == ((),) and not opts.truncated
        with pytest.raises(FeasibilityError, match="no volume"):
            activity_volume(opts)

    def test_volume_needs_an_option(self):
        from bddlkit.logic import GoalOptions

        with pytest.raises(FeasibilityError, match="no options"):
            activity_volume(GoalOptions((), False))
        assert activity_volume(GoalOptions(((Literal(onfloor("cup.n.01_1")),),), False)) == 1

    def test_negated_forall_equals_exists_not(self, taxonomy, domain):
        universe = oracles.logic_universe()
        body = AtomicFormula("onfloor", (v("cup.n.01"),))
        a = flatten(Not(ForAll(v("cup.n.01"), body)), universe, taxonomy, domain)
        b = flatten(Exists(v("cup.n.01"), Not(body)), universe, taxonomy, domain)
        assert oracles.option_set(a) == oracles.option_set(b)

    def test_negated_for_n_counts_failures(self, taxonomy, domain):
        universe = oracles.logic_universe()  # three apples
        body = AtomicFormula("onfloor", (v("apple.n.01"),))
        goal = Not(ForN(2, v("apple.n.01"), body))
        opts = flatten(goal, universe, taxonomy, domain)
        # fewer than 2 on the floor means at least 2 of the 3 are off it
        want = oracles.naive_options(goal, {}, universe, taxonomy)
        assert oracles.option_set(opts) == want
        assert all(len(option) == 2 for option in opts.options)
        assert all(neg for option in want for _key, neg in option)

    def test_for_n_count_edges(self, taxonomy, domain, config):
        universe = oracles.logic_universe()
        body = AtomicFormula("onfloor", (v("cup.n.01"),))
        state = oracles.logic_world(taxonomy, config, 3)

        trivially_true = ForN(0, v("cup.n.01"), body)
        assert evaluate(trivially_true, state, {}, universe, taxonomy, domain)
        assert flatten(trivially_true, universe, taxonomy, domain).options == ((),)

        impossible = ForN(5, v("cup.n.01"), body)  # only two cups exist
        assert not evaluate(impossible, state, {}, universe, taxonomy, domain)
        assert flatten(impossible, universe, taxonomy, domain).options == ()
        # and its negation is trivially true
        assert flatten(Not(impossible), universe, taxonomy, domain).options == ((),)

    def test_for_pairs_vacuous_and_lopsided(self, taxonomy, domain, config):
        universe = oracles.logic_universe()
        # no towels are declared, so the pairing is vacuously complete
        vacuous = ForPairs(
            v("towel.n.01"),
            v("cup.n.01"),
            AtomicFormula("nextto", (v("towel.n.01"), v("cup.n.01"))),
        )
        state = oracles.logic_world(taxonomy, config, 4)
        assert evaluate(vacuous, state, {}, universe, taxonomy, domain)
        assert flatten(vacuous, universe, taxonomy, domain).options == ((),)

        # one rag, two cups: covering the smaller pool means one pair
        lopsided = ForPairs(
            v("rag.n.01"),
            v("cup.n.01"),
            AtomicFormula("inside", (v("rag.n.01"), v("cup.n.01"))),
        )
        world = build_world(
            taxonomy,
            config,
            {"rag.n.01_1": (0, 0, 0.15), "cup.n.01_1": (0, 0, 0.15), "cup.n.01_2": (1, 0, 0.15)},
            containment={"rag.n.01_1": "cup.n.01_2"},
        )
        small_universe = [
            (const("rag.n.01_1"), cat("rag.n.01")),
            (const("cup.n.01_1"), cat("cup.n.01")),
            (const("cup.n.01_2"), cat("cup.n.01")),
        ]
        assert evaluate(lopsided, world, {}, small_universe, taxonomy, domain)
        opts = flatten(lopsided, small_universe, taxonomy, domain)
        assert len(opts) == 2  # rag into either cup

    def test_pair_quantifiers_are_injective(self, taxonomy, domain, config):
        # both cups in one basket: two inside facts but only one pairing
        world = build_world(
            taxonomy,
            config,
            {
                "cup.n.01_1": (0, 0, 0.3),
                "cup.n.01_2": (0, 0, 0.3),
                "basket.n.01_1": ((0, 0, 0.3), {"bounding_radius": 0.3}),
                "basket.n.01_2": (2, 0, 0.3),
            },
            containment={"cup.n.01_1": "basket.n.01_1", "cup.n.01_2": "basket.n.01_1"},
        )
        universe = [(n, n.category) for n in world.objects]
        goal = ForNPairs(
            2,
            v("cup.n.01"),
            v("basket.n.01"),
            AtomicFormula("inside", (v("cup.n.01"), v("basket.n.01"))),
        )
        assert not evaluate(goal, world, {}, universe, taxonomy, domain)
        assert not oracles.naive_evaluate(goal, world, {}, universe, taxonomy, domain)
        one_pair = ForNPairs(
            1,
            v("cup.n.01"),
            v("basket.n.01"),
            AtomicFormula("inside", (v("cup.n.01"), v("basket.n.01"))),
        )
        assert evaluate(one_pair, world, {}, universe, taxonomy, domain)


class TestSubstitute:
    def test_constants_replace_throughout(self, packing):
        # the countertop constant appears inside the trailing forall
        mapping = {const("countertop.n.01_1"): const("countertop.n.01_9")}
        replaced = substitute(packing.goal, mapping)
        tail = replaced.children[3]
        assert tail.body.args[1] == const("countertop.n.01_9")
        # variables and the other children are untouched
        assert tail.body.args[0] == v("basket.n.01")
        assert replaced.children[:3] == packing.goal.children[:3]

    def test_variables_can_be_ground(self):
        body = AtomicFormula("inside", (v("cup.n.01"), const("basket.n.01_1")))
        ground = substitute(body, {v("cup.n.01"): const("cup.n.01_2")})
        assert ground == AtomicFormula(
            "inside", (const("cup.n.01_2"), const("basket.n.01_1"))
        )
        assert ground.is_ground
