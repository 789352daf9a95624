"""AST value types for BDDL activity and domain definitions.

Everything here is an immutable dataclass with structural equality, so a
parse -> print -> parse round trip can be checked with ``==`` and ASTs
can be used as dict keys.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from bddlkit.errors import BddlParseError

# ---------------------------------------------------------------------------
# names and terms
# ---------------------------------------------------------------------------

_CATEGORY_RE = re.compile(r"^([a-z0-9_]+)\.([a-z])\.(\d{2})$")
_ROOM_RE = re.compile(r"^[a-z][a-z0-9_]*$")


@dataclass(frozen=True, order=True)
class CategoryName:
    """A WordNet-style synset name such as ``electric_refrigerator.n.01``."""

    lemma: str
    pos: str
    sense: int

    def __post_init__(self):
        if not self.lemma or not re.fullmatch(r"[a-z0-9_]+", self.lemma):
            raise ValueError(f"bad category lemma: {self.lemma!r}")
        if len(self.pos) != 1 or not self.pos.isalpha():
            raise ValueError(f"bad part-of-speech tag: {self.pos!r}")
        if self.sense < 1:
            raise ValueError(f"sense index must be positive: {self.sense}")

    def __str__(self) -> str:
        return f"{self.lemma}.{self.pos}.{self.sense:02d}"

    @classmethod
    def parse(cls, text: str) -> CategoryName:
        m = _CATEGORY_RE.match(text)
        if m is None:
            raise ValueError(f"not a category name: {text!r}")
        return cls(m.group(1), m.group(2), int(m.group(3)))


@dataclass(frozen=True, order=True)
class ConstantName:
    """A category plus a positive instance index, e.g. ``apple.n.01_2``.

    The index is separated from the category by the final underscore of
    the token; lemmas themselves may contain underscores.
    """

    category: CategoryName
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"instance index must be positive: {self.index}")

    def __str__(self) -> str:
        return f"{self.category}_{self.index}"

    @classmethod
    def parse(cls, text: str) -> ConstantName:
        stem, sep, suffix = text.rpartition("_")
        if not sep or not suffix.isdigit():
            raise ValueError(f"not a constant name: {text!r}")
        return cls(CategoryName.parse(stem), int(suffix))


@dataclass(frozen=True, order=True)
class VariableName:
    """A quantified variable.  Variables are always named by their category."""

    category: CategoryName

    def __str__(self) -> str:
        return f"?{self.category}"


@dataclass(frozen=True, order=True)
class RoomName:
    """A bare room identifier used as the second argument of ``inroom``."""

    name: str

    def __post_init__(self):
        if not _ROOM_RE.match(self.name):
            raise ValueError(f"bad room name: {self.name!r}")

    def __str__(self) -> str:
        return self.name


Term = ConstantName | VariableName | RoomName

# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomicFormula:
    """A predicate applied to one or two terms."""

    predicate: str
    args: tuple[Term, ...]

    def __post_init__(self):
        if not 1 <= len(self.args) <= 2:
            raise ValueError(f"predicate arity must be 1 or 2, got {len(self.args)}")

    def __str__(self) -> str:
        return "(" + " ".join([self.predicate, *(str(a) for a in self.args)]) + ")"

    @property
    def is_ground(self) -> bool:
        return not any(isinstance(a, VariableName) for a in self.args)

    def key(self) -> tuple[str, ...]:
        """Compact hashable form used for fact sets: ``(predicate, *args)``."""
        return (self.predicate, *(str(a) for a in self.args))


@dataclass(frozen=True)
class Literal:
    """An atomic formula or its negation.  Ground in ``:init`` and in options."""

    formula: AtomicFormula
    negated: bool = False

    def __str__(self) -> str:
        return f"(not {self.formula})" if self.negated else str(self.formula)

    def negate(self) -> Literal:
        return Literal(self.formula, not self.negated)

    def sort_key(self) -> tuple:
        return (self.formula.key(), self.negated)


@dataclass(frozen=True)
class Not:
    child: Expr


@dataclass(frozen=True)
class And:
    children: tuple[Expr, ...]

    def __post_init__(self):
        if not self.children:
            raise ValueError("and requires at least one child")


@dataclass(frozen=True)
class Or:
    children: tuple[Expr, ...]

    def __post_init__(self):
        if not self.children:
            raise ValueError("or requires at least one child")


@dataclass(frozen=True)
class Imply:
    antecedent: Expr
    consequent: Expr


@dataclass(frozen=True)
class Iff:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class ForAll:
    variable: VariableName
    body: Expr


@dataclass(frozen=True)
class Exists:
    variable: VariableName
    body: Expr


@dataclass(frozen=True)
class ForN:
    """Body must hold for at least ``count`` instances of the category."""

    count: int
    variable: VariableName
    body: Expr

    def __post_init__(self):
        if self.count < 0:
            raise ValueError(f"count must be non-negative: {self.count}")


@dataclass(frozen=True)
class ForPairs:
    """Body must hold under a one-to-one pairing that covers every instance
    of at least one of the two categories."""

    first: VariableName
    second: VariableName
    body: Expr


@dataclass(frozen=True)
class ForNPairs:
    """Body must hold for at least ``count`` one-to-one pairs."""

    count: int
    first: VariableName
    second: VariableName
    body: Expr

    def __post_init__(self):
        if self.count < 0:
            raise ValueError(f"count must be non-negative: {self.count}")


Expr = (
    AtomicFormula
    | Not
    | And
    | Or
    | Imply
    | Iff
    | ForAll
    | Exists
    | ForN
    | ForPairs
    | ForNPairs
)

# ---------------------------------------------------------------------------
# top-level definitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PredicateDef:
    """Signature of a predicate: symbol, arity, and the semantic property a
    category must carry for the predicate to apply (None for ungated
    kinematic predicates)."""

    symbol: str
    arity: int
    required_property: str | None = None

    def __post_init__(self):
        if self.arity not in (1, 2):
            raise ValueError(f"arity must be 1 or 2: {self.arity}")


@dataclass(frozen=True)
class DomainDefinition:
    """A named registry of predicate signatures."""

    name: str
    predicates: tuple[PredicateDef, ...]
    _by_symbol: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        by_symbol: dict[str, PredicateDef] = {}
        for pred in self.predicates:
            if pred.symbol in by_symbol:
                raise ValueError(f"duplicate predicate symbol: {pred.symbol}")
            by_symbol[pred.symbol] = pred
        object.__setattr__(self, "_by_symbol", by_symbol)

    def lookup(self, symbol: str) -> PredicateDef | None:
        return self._by_symbol.get(symbol)

    def require(self, symbol: str) -> PredicateDef:
        pred = self._by_symbol.get(symbol)
        if pred is None:
            raise BddlParseError(f"unknown predicate symbol: {symbol!r}")
        return pred


@dataclass(frozen=True)
class ActivityDefinition:
    """A parsed ``(define (problem ...))`` form.

    ``objects`` maps every declared constant to its declared category, in
    declaration order.  ``goal`` is None for the degenerate empty goal
    ``(:goal (and))``, which is trivially satisfied.
    """

    problem_name: str
    domain_name: str
    objects: tuple[tuple[ConstantName, CategoryName], ...]
    init: tuple[Literal, ...]
    goal: Expr | None

    def declared_category(self, constant: ConstantName) -> CategoryName | None:
        for name, category in self.objects:
            if name == constant:
                return category
        return None
