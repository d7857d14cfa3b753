"""Core model invariants: triple construction rules and provenance closure."""

import pytest

from ukgfuse import (
    DomainMismatchError,
    InvariantViolationError,
    UKGraph,
    UnknownIdError,
)


@pytest.fixture
def graph(empty_graph):
    empty_graph.add_source("S3", 0.9, id="S3")
    return empty_graph


class TestNewTriple:
    def test_valid_mention(self, graph):
        t = graph.new_triple("ThomasAquinas", "graduates", "diploma3", 1.0,
                             "mention", source="S3")
        assert t.kind == "mention"
        assert t.source == "S3"
        assert not t.provenance
        assert t.id in graph.triples

    def test_zero_certainty_is_permitted(self, graph):
        t = graph.new_triple("X", "p", "v", 0.0, "mention", source="S3")
        assert t.certainty == 0.0

    def test_factoid_without_provenance_rejected(self, graph):
        with pytest.raises(InvariantViolationError):
            graph.new_triple("X", "p", "v", 0.5, "factoid")

    def test_mention_without_source_rejected(self, graph):
        with pytest.raises(UnknownIdError):
            graph.new_triple("X", "p", "v", 0.5, "mention")

    def test_mention_with_unregistered_source_rejected(self, graph):
        with pytest.raises(UnknownIdError):
            graph.new_triple("X", "p", "v", 0.5, "mention", source="ghost")

    def test_certainty_out_of_range(self, graph):
        with pytest.raises(InvariantViolationError):
            graph.new_triple("X", "p", "v", 1.5, "mention", source="S3")
        with pytest.raises(InvariantViolationError):
            graph.new_triple("X", "p", "v", -0.1, "mention", source="S3")

    def test_factoid_cannot_carry_source(self, graph):
        m = graph.new_triple("X", "p", "v", 0.5, "mention", source="S3")
        with pytest.raises(InvariantViolationError):
            graph.new_triple("X", "p", "v", 0.5, "factoid",
                             provenance={m.id}, source="S3")

    def test_fresh_unique_ids(self, graph):
        a = graph.new_triple("X", "p", "v", 0.5, "mention", source="S3")
        b = graph.new_triple("X", "p", "v", 0.5, "mention", source="S3")
        assert a.id != b.id  # same statement twice stays two mentions

    def test_domain_mismatch_taxonomy(self, graph):
        with pytest.raises(DomainMismatchError):
            graph.new_triple("d", "isA", "baccalaureate", 0.5, "mention", source="S3")

    def test_domain_mismatch_year(self, graph):
        with pytest.raises(DomainMismatchError):
            graph.new_triple("d", "awardedIn", "not-a-year", 0.5, "mention", source="S3")

    def test_domain_mismatch_entity(self, graph):
        with pytest.raises(DomainMismatchError):
            graph.new_triple("X", "graduates", 12, 0.5, "mention", source="S3")

    def test_unknown_predicate_is_autodeclared(self, graph):
        graph.new_triple("X", "neverSeen", 42, 0.5, "mention", source="S3")
        assert graph.predicates["neverSeen"].value_domain == "int"

    def test_provenance_must_exist(self, graph):
        with pytest.raises(UnknownIdError):
            graph.new_triple("X", "p", "v", 0.5, "factoid", provenance={"nope"})


class TestProvenanceClosure:
    @pytest.fixture
    def lineage(self, empty_graph):
        g = empty_graph
        g.add_source("S1", 0.9, id="S1")
        g.add_source("S2", 0.8, id="S2")
        m1 = g.new_triple("X", "p", "v", 0.9, "mention", source="S1")
        m2 = g.new_triple("X", "p", "v", 0.8, "mention", source="S2")
        f = g.new_triple("X", "p", "v", 0.98, "factoid", provenance={m1.id, m2.id})
        fact = g.new_triple("X", "p", "v", 0.98, "fact", provenance={f.id})
        return g, m1, m2, f, fact

    def test_mention_base_case(self, lineage):
        g, m1, *_ = lineage
        mentions, sources = g.provenance_closure(m1.id)
        assert mentions == {m1.id}
        assert sources == {"S1"}

    def test_factoid_reaches_both_sources(self, lineage):
        g, m1, m2, f, _ = lineage
        mentions, sources = g.provenance_closure(f.id)
        assert mentions == {m1.id, m2.id}
        assert sources == {"S1", "S2"}

    def test_fact_closure_is_transitive(self, lineage):
        g, m1, m2, f, fact = lineage
        assert g.provenance_closure(fact.id) == g.provenance_closure(f.id)

    def test_closure_is_monotone_over_parents(self, lineage):
        g, m1, m2, f, fact = lineage
        child_mentions, child_sources = g.provenance_closure(fact.id)
        for parent in g.triples[fact.id].provenance:
            pm, ps = g.provenance_closure(parent)
            assert pm <= child_mentions
            assert ps <= child_sources

    def test_unknown_id(self, lineage):
        g, *_ = lineage
        with pytest.raises(UnknownIdError):
            g.provenance_closure("missing")


def test_all_certainties_stay_in_unit_interval(fused_graph):
    for t in fused_graph.triples.values():
        assert 0.0 <= t.certainty <= 1.0


def test_source_reliability_validated():
    g = UKGraph()
    with pytest.raises(InvariantViolationError):
        g.add_source("bad", 1.2)
