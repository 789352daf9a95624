"""Object category hierarchy with property inheritance.

The taxonomy is a DAG of synset names; a node may have several parents
and inherits the union of their properties.  Whether a unary predicate
applies to a category is decided here, via the property named in the
predicate's registry entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import yaml

from bddlkit.errors import TaxonomyError
from bddlkit.syntax.ast import CategoryName, ConstantName, PredicateDef


@dataclass(frozen=True)
class Synset:
    name: CategoryName
    parents: tuple[CategoryName, ...]
    properties: frozenset[str]


class Taxonomy:
    """Immutable category DAG with ancestor and property queries."""

    def __init__(self, synsets: Iterable[Synset], version: int):
        self.version = version
        self._nodes: dict[CategoryName, Synset] = {}
        for synset in synsets:
            if synset.name in self._nodes:
                raise TaxonomyError(f"duplicate category: {synset.name}")
            self._nodes[synset.name] = synset
        for synset in self._nodes.values():
            for parent in synset.parents:
                if parent not in self._nodes:
                    raise TaxonomyError(
                        f"category {synset.name} names unknown parent {parent}"
                    )
        self._check_acyclic()
        self._ancestors: dict[CategoryName, frozenset[CategoryName]] = {}
        self._properties: dict[CategoryName, frozenset[str]] = {}

    def _check_acyclic(self) -> None:
        WHITE, GREY, BLACK = 0, 1, 2
        colour = {name: WHITE for name in self._nodes}
        for root in self._nodes:
            if colour[root] != WHITE:
                continue
            stack: list[tuple[CategoryName, int]] = [(root, 0)]
            colour[root] = GREY
            while stack:
                name, child_index = stack[-1]
                parents = self._nodes[name].parents
                if child_index < len(parents):
                    stack[-1] = (name, child_index + 1)
                    parent = parents[child_index]
                    if colour[parent] == GREY:
                        raise TaxonomyError(f"cycle through category {parent}")
                    if colour[parent] == WHITE:
                        colour[parent] = GREY
                        stack.append((parent, 0))
                else:
                    colour[name] = BLACK
                    stack.pop()

    def __contains__(self, category: CategoryName) -> bool:
        return category in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def categories(self) -> list[CategoryName]:
        return list(self._nodes)

    def _require(self, category: CategoryName) -> Synset:
        synset = self._nodes.get(category)
        if synset is None:
            raise TaxonomyError(f"unknown category: {category}")
        return synset

    def ancestors(self, category: CategoryName) -> frozenset[CategoryName]:
        """All categories reachable upward from ``category``, inclusive."""
        cached = self._ancestors.get(category)
        if cached is not None:
            return cached
        synset = self._require(category)
        found = {category}
        for parent in synset.parents:
            found |= self.ancestors(parent)
        result = frozenset(found)
        self._ancestors[category] = result
        return result

    def is_a(self, category: CategoryName, ancestor: CategoryName) -> bool:
        """True when ``category`` equals or descends from ``ancestor``."""
        self._require(ancestor)
        return ancestor in self.ancestors(category)

    def properties_of(self, category: CategoryName) -> frozenset[str]:
        """Own plus inherited properties of a category."""
        cached = self._properties.get(category)
        if cached is not None:
            return cached
        merged: set[str] = set()
        for name in self.ancestors(category):
            merged |= self._nodes[name].properties
        result = frozenset(merged)
        self._properties[category] = result
        return result

    def has_property(self, category: CategoryName, prop: str) -> bool:
        return prop in self.properties_of(category)

    def applicable(self, predicate: PredicateDef, category: CategoryName) -> bool:
        """Whether the predicate may be stated about instances of the category.

        Monotone under the hierarchy: a property granted to a category
        is inherited by every descendant.
        """
        if predicate.required_property is None:
            return True
        return predicate.required_property in self.properties_of(category)

    def instances_of(
        self,
        category: CategoryName,
        objects: Iterable[tuple[ConstantName, CategoryName]],
    ) -> list[ConstantName]:
        """Constants whose declared category satisfies ``is_a``, in
        declaration order."""
        return [name for name, declared in objects if self.is_a(declared, category)]


def load_taxonomy(path: str | Path) -> Taxonomy:
    """Load a taxonomy from its YAML file."""
    raw = yaml.safe_load(Path(path).read_text())
    if not isinstance(raw, dict) or "synsets" not in raw:
        raise TaxonomyError(f"taxonomy file must hold a 'synsets' mapping: {path}")
    version = raw.get("taxonomy_version")
    if not isinstance(version, int):
        raise TaxonomyError("taxonomy file must carry an integer taxonomy_version")
    synsets = []
    for name, body in raw["synsets"].items():
        body = body or {}
        try:
            category = CategoryName.parse(str(name))
            parents = tuple(CategoryName.parse(str(p)) for p in body.get("parents", []))
        except ValueError as exc:
            raise TaxonomyError(str(exc)) from None
        properties = body.get("properties", [])
        if not isinstance(properties, list):
            raise TaxonomyError(f"properties of {name} must be a list")
        synsets.append(Synset(category, parents, frozenset(map(str, properties))))
    return Taxonomy(synsets, version)
