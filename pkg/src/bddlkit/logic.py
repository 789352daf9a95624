"""Goal-expression semantics: evaluation, flattening, activity volume.

``evaluate`` judges a goal directly against a state.  The pair
quantifiers are decided by maximum bipartite matching over the child
relation, so a one-to-one pairing is never double-counted.

``flatten`` compiles a goal into :class:`GoalOptions`: a disjunction of
conjunctions of ground literals ("options").  Negation is pushed to
the literals by polarity propagation (the usual negation-normal-form
rules, with counting quantifiers dualised against the instance count
and pair quantifiers expanded over explicit injective mappings).
Option lists are deterministic, deduplicated under a canonical literal
order, never contain a literal together with its negation, and are
truncated at ``cap`` with a flag rather than allowed to explode.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Iterator, Mapping, Sequence

from bddlkit.errors import FeasibilityError, WorldError
from bddlkit.syntax.ast import (
    And,
    AtomicFormula,
    CategoryName,
    ConstantName,
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
    Term,
    VariableName,
)
from bddlkit.syntax.ast import DomainDefinition
from bddlkit.taxonomy import Taxonomy
from bddlkit.world.predicates import eval_atomic
from bddlkit.world.state import SceneState

Binding = Mapping[VariableName, ConstantName]
Universe = Sequence[tuple[ConstantName, CategoryName]]
Option = tuple[Literal, ...]

DEFAULT_FLATTEN_CAP = 1000


@dataclass(frozen=True)
class GoalOptions:
    """Flattened goal: satisfy any one option by satisfying all of its
    literals.  ``truncated`` marks an incomplete enumeration; only
    untruncated results are exact."""

    options: tuple[Option, ...]
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.options)


# ---------------------------------------------------------------------------
# substitution and grounding
# ---------------------------------------------------------------------------


def substitute(expr: Expr, mapping: Mapping[Term, Term]) -> Expr:
    """Replace terms (variables or constants) throughout an expression."""
    if isinstance(expr, AtomicFormula):
        return AtomicFormula(expr.predicate, tuple(mapping.get(a, a) for a in expr.args))
    if isinstance(expr, Not):
        return Not(substitute(expr.child, mapping))
    if isinstance(expr, And):
        return And(tuple(substitute(c, mapping) for c in expr.children))
    if isinstance(expr, Or):
        return Or(tuple(substitute(c, mapping) for c in expr.children))
    if isinstance(expr, Imply):
        return Imply(substitute(expr.antecedent, mapping), substitute(expr.consequent, mapping))
    if isinstance(expr, Iff):
        return Iff(substitute(expr.left, mapping), substitute(expr.right, mapping))
    if isinstance(expr, ForAll):
        return ForAll(expr.variable, substitute(expr.body, mapping))
    if isinstance(expr, Exists):
        return Exists(expr.variable, substitute(expr.body, mapping))
    if isinstance(expr, ForN):
        return ForN(expr.count, expr.variable, substitute(expr.body, mapping))
    if isinstance(expr, ForPairs):
        return ForPairs(expr.first, expr.second, substitute(expr.body, mapping))
    if isinstance(expr, ForNPairs):
        return ForNPairs(expr.count, expr.first, expr.second, substitute(expr.body, mapping))
    raise TypeError(f"not an expression: {expr!r}")


def _ground(formula: AtomicFormula, binding: Binding) -> AtomicFormula:
    args = []
    for arg in formula.args:
        if isinstance(arg, VariableName):
            value = binding.get(arg)
            if value is None:
                raise WorldError(f"unbound variable {arg} in {formula}")
            args.append(value)
        else:
            args.append(arg)
    return AtomicFormula(formula.predicate, tuple(args))


# ---------------------------------------------------------------------------
# maximum bipartite matching (Hopcroft-Karp)
# ---------------------------------------------------------------------------


def maximum_matching_size(
    left: Sequence, adjacency: Mapping, *, _inf: float = float("inf")
) -> int:
    """Size of a maximum matching; ``adjacency`` maps each left vertex
    to its right neighbours in a deterministic order."""
    match_left = {u: None for u in left}
    match_right: dict = {}
    dist: dict = {}

    def bfs() -> bool:
        queue = deque()
        for u in left:
            if match_left[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _inf
        reached = _inf
        while queue:
            u = queue.popleft()
            if dist[u] < reached:
                for v in adjacency.get(u, ()):
                    w = match_right.get(v)
                    if w is None:
                        reached = dist[u] + 1
                    elif dist[w] == _inf:
                        dist[w] = dist[u] + 1
                        queue.append(w)
        return reached != _inf

    def dfs(u) -> bool:
        for v in adjacency.get(u, ()):
            w = match_right.get(v)
            if w is None or (dist[w] == dist[u] + 1 and dfs(w)):
                match_left[u] = v
                match_right[v] = u
                return True
        dist[u] = _inf
        return False

    size = 0
    while bfs():
        for u in left:
            if match_left[u] is None and dfs(u):
                size += 1
    return size


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def evaluate(
    expr: Expr | None,
    state: SceneState,
    binding: Binding,
    universe: Universe,
    taxonomy: Taxonomy,
    domain: DomainDefinition,
) -> bool:
    """Truth of a goal expression in a state.  ``None`` (the empty goal)
    is trivially true."""
    if expr is None:
        return True
    if isinstance(expr, AtomicFormula):
        return eval_atomic(state, _ground(expr, binding), taxonomy, domain)
    if isinstance(expr, Not):
        return not evaluate(expr.child, state, binding, universe, taxonomy, domain)
    if isinstance(expr, And):
        return all(
            evaluate(c, state, binding, universe, taxonomy, domain) for c in expr.children
        )
    if isinstance(expr, Or):
        return any(
            evaluate(c, state, binding, universe, taxonomy, domain) for c in expr.children
        )
    if isinstance(expr, Imply):
        return not evaluate(
            expr.antecedent, state, binding, universe, taxonomy, domain
        ) or evaluate(expr.consequent, state, binding, universe, taxonomy, domain)
    if isinstance(expr, Iff):
        return evaluate(expr.left, state, binding, universe, taxonomy, domain) == evaluate(
            expr.right, state, binding, universe, taxonomy, domain
        )

    if isinstance(expr, (ForAll, Exists, ForN)):
        instances = taxonomy.instances_of(expr.variable.category, universe)

        def holds(instance: ConstantName) -> bool:
            inner = {**binding, expr.variable: instance}
            return evaluate(expr.body, state, inner, universe, taxonomy, domain)

        if isinstance(expr, ForAll):
            return all(holds(i) for i in instances)
        if isinstance(expr, Exists):
            return any(holds(i) for i in instances)
        satisfied = sum(1 for i in instances if holds(i))
        return satisfied >= expr.count

    if isinstance(expr, (ForPairs, ForNPairs)):
        first_pool = taxonomy.instances_of(expr.first.category, universe)
        second_pool = taxonomy.instances_of(expr.second.category, universe)
        adjacency: dict[ConstantName, list[ConstantName]] = {}
        for a in first_pool:
            row = []
            for b in second_pool:
                inner = {**binding, expr.first: a, expr.second: b}
                if evaluate(expr.body, state, inner, universe, taxonomy, domain):
                    row.append(b)
            adjacency[a] = row
        size = maximum_matching_size(first_pool, adjacency)
        if isinstance(expr, ForPairs):
            return size == min(len(first_pool), len(second_pool))
        return size >= expr.count

    raise TypeError(f"not an expression: {expr!r}")


# ---------------------------------------------------------------------------
# flattening
# ---------------------------------------------------------------------------


def _merge_options(a: Option, b: Option) -> Option | None:
    """Union of two consistent literal sets, canonically ordered; None
    when the union would contain a literal and its negation."""
    signs: dict[AtomicFormula, bool] = {lit.formula: lit.negated for lit in a}
    for lit in b:
        seen = signs.get(lit.formula)
        if seen is None:
            signs[lit.formula] = lit.negated
        elif seen != lit.negated:
            return None
    return tuple(
        sorted((Literal(f, neg) for f, neg in signs.items()), key=Literal.sort_key)
    )


class _Expander:
    def __init__(self, universe: Universe, taxonomy: Taxonomy, cap: int):
        self.universe = universe
        self.taxonomy = taxonomy
        self.cap = cap
        self.truncated = False

    def _or_combine(self, children: Iterable[list[Option]]) -> list[Option]:
        out: dict[Option, None] = {}
        for options in children:
            for option in options:
                if option not in out:
                    if len(out) >= self.cap:
                        self.truncated = True
                        return list(out)
                    out[option] = None
            if self.truncated:
                break
        return list(out)

    def _and_combine(self, children: Iterable[list[Option]]) -> list[Option]:
        acc: list[Option] = [()]
        for options in children:
            if not options:
                return []
            merged: dict[Option, None] = {}
            capped = False
            for left in acc:
                for right in options:
                    combined = _merge_options(left, right)
                    if combined is None or combined in merged:
                        continue
                    if len(merged) >= self.cap:
                        capped = True
                        break
                    merged[combined] = None
                if capped:
                    break
            if capped:
                self.truncated = True
            acc = list(merged)
            if not acc:
                return []
            if self.truncated:
                # best effort only: stop refining once capped
                break
        return acc

    def expand(self, expr: Expr, binding: Binding, negated: bool) -> list[Option]:
        if isinstance(expr, AtomicFormula):
            return [(Literal(_ground(expr, binding), negated),)]
        if isinstance(expr, Not):
            return self.expand(expr.child, binding, not negated)
        if isinstance(expr, And):
            children = (self.expand(c, binding, negated) for c in expr.children)
            return self._or_combine(children) if negated else self._and_combine(children)
        if isinstance(expr, Or):
            children = (self.expand(c, binding, negated) for c in expr.children)
            return self._and_combine(children) if negated else self._or_combine(children)
        if isinstance(expr, Imply):
            rewritten = Or((Not(expr.antecedent), expr.consequent))
            return self.expand(rewritten, binding, negated)
        if isinstance(expr, Iff):
            rewritten = And(
                (
                    Or((Not(expr.left), expr.right)),
                    Or((Not(expr.right), expr.left)),
                )
            )
            return self.expand(rewritten, binding, negated)

        if isinstance(expr, (ForAll, Exists, ForN)):
            instances = self.taxonomy.instances_of(expr.variable.category, self.universe)

            def per_instance(items: Sequence[ConstantName]) -> Iterator[list[Option]]:
                for instance in items:
                    yield self.expand(expr.body, {**binding, expr.variable: instance}, negated)

            if isinstance(expr, ForAll):
                conjunctive = not negated
            elif isinstance(expr, Exists):
                conjunctive = negated
            else:
                # a counting quantifier negates to a counting quantifier
                # over the complement: "fewer than n hold" means "at
                # least |C| - n + 1 fail"
                count = len(instances) - expr.count + 1 if negated else expr.count
                subsets = (
                    list(combinations(instances, count)) if 0 <= count <= len(instances) else []
                )
                if count <= 0:
                    return [()]
                children = (self._and_combine(per_instance(s)) for s in subsets)
                return self._or_combine(children)
            if conjunctive:
                return self._and_combine(per_instance(instances))
            return self._or_combine(per_instance(instances))

        if isinstance(expr, (ForPairs, ForNPairs)):
            first_pool = self.taxonomy.instances_of(expr.first.category, self.universe)
            second_pool = self.taxonomy.instances_of(expr.second.category, self.universe)
            if isinstance(expr, ForPairs):
                mappings = _covering_mappings(first_pool, second_pool)
            else:
                mappings = _n_pair_mappings(first_pool, second_pool, expr.count)

            def per_mapping(pairs) -> Iterator[list[Option]]:
                for a, b in pairs:
                    inner = {**binding, expr.first: a, expr.second: b}
                    yield self.expand(expr.body, inner, negated)

            if negated:
                # true when every injective mapping has a failing pair
                children = (self._or_combine(per_mapping(m)) for m in mappings)
                return self._and_combine(children)
            children = (self._and_combine(per_mapping(m)) for m in mappings)
            return self._or_combine(children)

        raise TypeError(f"not an expression: {expr!r}")


def _covering_mappings(
    first_pool: Sequence[ConstantName], second_pool: Sequence[ConstantName]
) -> Iterator[tuple[tuple[ConstantName, ConstantName], ...]]:
    """Injective mappings covering every instance of the smaller pool,
    in a deterministic order."""
    if len(first_pool) <= len(second_pool):
        for chosen in permutations(second_pool, len(first_pool)):
            yield tuple(zip(first_pool, chosen))
    else:
        for chosen in permutations(first_pool, len(second_pool)):
            yield tuple(zip(chosen, second_pool))


def _n_pair_mappings(
    first_pool: Sequence[ConstantName], second_pool: Sequence[ConstantName], count: int
) -> Iterator[tuple[tuple[ConstantName, ConstantName], ...]]:
    """Injective mappings of exactly ``count`` pairs."""
    if count == 0:
        yield ()
        return
    if count > len(first_pool) or count > len(second_pool):
        return
    for subset in combinations(first_pool, count):
        for chosen in permutations(second_pool, count):
            yield tuple(zip(subset, chosen))


def flatten(
    goal: Expr | None,
    universe: Universe,
    taxonomy: Taxonomy,
    domain: DomainDefinition,
    cap: int = DEFAULT_FLATTEN_CAP,
) -> GoalOptions:
    """Compile a goal into its ground options over ``universe``.

    The empty goal yields a single empty option.  An unsatisfiable goal
    (every candidate option self-contradictory) yields no options.
    """
    if cap < 1:
        raise FeasibilityError(f"cap must be positive: {cap}")
    if goal is None:
        return GoalOptions(((),), False)
    expander = _Expander(universe, taxonomy, cap)
    options = expander.expand(goal, {}, False)
    return GoalOptions(tuple(options), expander.truncated)


def activity_volume(opts: GoalOptions) -> int:
    """Length of the shortest option: the least number of ground
    literals that must hold simultaneously to reach the goal."""
    if not opts.options:
        raise FeasibilityError("goal has no options; nothing to measure")
    shortest = min(len(option) for option in opts.options)
    if shortest == 0:
        raise FeasibilityError("the empty goal has no volume")
    return shortest
