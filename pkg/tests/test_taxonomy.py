"""Category DAG: inheritance, predicate gating, and loader validation."""

import pytest

from bddlkit.errors import TaxonomyError
from bddlkit.taxonomy import Synset, Taxonomy, load_taxonomy

from conftest import cat, const


def tiny(*synsets):
    return Taxonomy(synsets, version=1)


def syn(name, parents=(), props=()):
    return Synset(cat(name), tuple(cat(p) for p in parents), frozenset(props))


class TestHierarchy:
    def test_shipped_size_and_version(self, taxonomy):
        assert taxonomy.version == 1
        assert len(taxonomy) == 67
        assert len(taxonomy.categories()) == 67

    def test_ancestors_inclusive(self, taxonomy):
        assert taxonomy.ancestors(cat("apple.n.01")) == {
            cat("apple.n.01"),
            cat("fruit.n.01"),
            cat("food.n.01"),
            cat("matter.n.03"),
            cat("entity.n.01"),
        }

    def test_is_a(self, taxonomy):
        assert taxonomy.is_a(cat("apple.n.01"), cat("food.n.01"))
        assert taxonomy.is_a(cat("apple.n.01"), cat("apple.n.01"))
        assert not taxonomy.is_a(cat("apple.n.01"), cat("artifact.n.01"))
        assert not taxonomy.is_a(cat("food.n.01"), cat("apple.n.01"))

    def test_is_a_unknown_ancestor(self, taxonomy):
        with pytest.raises(TaxonomyError, match="unknown category"):
            taxonomy.is_a(cat("apple.n.01"), cat("rocket.n.01"))

    def test_property_union_down_a_chain(self, taxonomy):
        assert taxonomy.properties_of(cat("apple.n.01")) == {
            "cookable",
            "burnable",
            "freezable",
            "sliceable",
        }

    def test_multi_parent_union(self, taxonomy):
        # bowl sits under both tableware and container
        assert taxonomy.is_a(cat("bowl.n.01"), cat("container.n.01"))
        assert taxonomy.is_a(cat("bowl.n.01"), cat("tableware.n.01"))
        assert taxonomy.properties_of(cat("bowl.n.01")) == {"dustyable", "stainable"}

    def test_inheritance_is_monotone(self, taxonomy):
        # every property carried by an ancestor shows up on the descendant
        for name in taxonomy.categories():
            props = taxonomy.properties_of(name)
            for ancestor in taxonomy.ancestors(name):
                assert taxonomy.properties_of(ancestor) <= props

    def test_appliance_properties(self, taxonomy):
        fridge = taxonomy.properties_of(cat("electric_refrigerator.n.01"))
        assert {"openable", "toggleable", "cold_source", "dustyable"} <= fridge
        assert "heat_source" not in fridge
        assert taxonomy.has_property(cat("knife.n.01"), "slicer")
        assert not taxonomy.has_property(cat("fork.n.01"), "slicer")


class TestApplicability:
    def test_gated_predicates(self, taxonomy, domain):
        cooked = domain.require("cooked")
        frozen = domain.require("frozen")
        assert taxonomy.applicable(cooked, cat("apple.n.01"))
        assert taxonomy.applicable(frozen, cat("water.n.06"))
        # beverages freeze but are not cooked
        assert not taxonomy.applicable(cooked, cat("water.n.06"))
        assert not taxonomy.applicable(cooked, cat("basket.n.01"))

    def test_ungated_predicates_apply_everywhere(self, taxonomy, domain):
        ontop = domain.require("ontop")
        for name in taxonomy.categories():
            assert taxonomy.applicable(ontop, name)

    def test_instances_preserve_declaration_order(self, taxonomy):
        objects = [
            (const("tray.n.01_1"), cat("tray.n.01")),
            (const("apple.n.01_1"), cat("apple.n.01")),
            (const("bowl.n.01_1"), cat("bowl.n.01")),
            (const("tray.n.01_2"), cat("tray.n.01")),
        ]
        found = taxonomy.instances_of(cat("container.n.01"), objects)
        assert found == [
            const("tray.n.01_1"),
            const("bowl.n.01_1"),
            const("tray.n.01_2"),
        ]
        assert taxonomy.instances_of(cat("food.n.01"), objects) == [const("apple.n.01_1")]


class TestConstruction:
    def test_duplicate_category(self):
        with pytest.raises(TaxonomyError, match="duplicate category"):
            tiny(syn("a.n.01"), syn("a.n.01"))

    def test_unknown_parent(self):
        with pytest.raises(TaxonomyError, match="names unknown parent"):
            tiny(syn("a.n.01", parents=["b.n.01"]))

    def test_cycle(self):
        with pytest.raises(TaxonomyError, match="cycle through category"):
            tiny(
                syn("a.n.01", parents=["b.n.01"]),
                syn("b.n.01", parents=["c.n.01"]),
                syn("c.n.01", parents=["a.n.01"]),
            )

    def test_diamond_is_fine(self):
        t = tiny(
            syn("top.n.01", props=["p"]),
            syn("left.n.01", parents=["top.n.01"], props=["q"]),
            syn("right.n.01", parents=["top.n.01"], props=["r"]),
            syn("leaf.n.01", parents=["left.n.01", "right.n.01"]),
        )
        assert t.properties_of(cat("leaf.n.01")) == {"p", "q", "r"}


class TestLoader:
    def test_round_trip_from_disk(self, tmp_path):
        path = tmp_path / "t.yaml"
        path.write_text(
            "taxonomy_version: 3\n"
            "synsets:\n"
            "  a.n.01: {}\n"
            "  b.n.01:\n"
            "    parents: [a.n.01]\n"
            "    properties: [cookable]\n"
        )
        t = load_taxonomy(path)
        assert t.version == 3
        assert t.has_property(cat("b.n.01"), "cookable")

    def test_missing_synsets_key(self, tmp_path):
        path = tmp_path / "t.yaml"
        path.write_text("taxonomy_version: 1\n")
        with pytest.raises(TaxonomyError, match="'synsets' mapping"):
            load_taxonomy(path)

    def test_missing_version(self, tmp_path):
        path = tmp_path / "t.yaml"
        path.write_text("synsets:\n  a.n.01: {}\n")
        with pytest.raises(TaxonomyError, match="taxonomy_version"):
            load_taxonomy(path)

    def test_bad_category_name(self, tmp_path):
        path = tmp_path / "t.yaml"
        path.write_text("taxonomy_version: 1\nsynsets:\n  Apple: {}\n")
        with pytest.raises(TaxonomyError, match="not a category name"):
            load_taxonomy(path)

    def test_properties_must_be_a_list(self, tmp_path):
        path = tmp_path / "t.yaml"
        path.write_text(
            "taxonomy_version: 1\nsynsets:\n  a.n.01:\n    properties: cookable\n"
        )
        with pytest.raises(TaxonomyError, match="must be a list"):
            load_taxonomy(path)
