"""Phase behavior: capture, association fixpoint, establishment, hypothesis
testing and feedback propagation."""

import pytest

from ukgfuse import (
    CredibilityRangeError,
    Statement,
    UKGraph,
    UnknownIdError,
    VerdictNotActionableError,
    apply_declarations,
    associate,
    capture,
    decompose,
    establish,
    make_hypothesis,
    propagate_feedback,
)
from ukgfuse import test_hypothesis as run_hypothesis
from ukgfuse.store import graph_to_records

from conftest import make_golden_graph


def snapshot(graph):
    return sorted((t.subject, t.predicate, t.object, t.kind, round(t.certainty, 12))
                  for t in graph.triples.values())


class TestCapture:
    def test_certainty_is_reliability_times_credibility(self, empty_graph, config):
        empty_graph.add_source("S", 0.9, id="S")
        (m,) = capture(empty_graph, "S", [Statement("X", "p", "v", 1.0)], config)
        assert m.certainty == 0.9
        assert m.credibility == 1.0

    def test_fully_reliable_source_spawns_immediate_fact(self, empty_graph, config):
        empty_graph.add_source("R", 1.0, id="R")
        (m,) = capture(empty_graph, "R", [Statement("X", "p", "v", 1.0)], config)
        assert m.kind == "mention"
        facts = empty_graph.facts()
        assert len(facts) == 1
        assert facts[0].provenance == {m.id}
        assert facts[0].certainty == 1.0

    def test_zero_reliability_absorbs(self, empty_graph, config):
        empty_graph.add_source("Z", 0.0, id="Z")
        (m,) = capture(empty_graph, "Z", [Statement("X", "p", "v", 0.7)], config)
        assert m.certainty == 0.0

    def test_unknown_source(self, empty_graph, config):
        with pytest.raises(UnknownIdError):
            capture(empty_graph, "ghost", [Statement("X", "p", "v", 1.0)], config)

    def test_credibility_out_of_range(self, empty_graph, config):
        empty_graph.add_source("S", 0.9, id="S")
        with pytest.raises(CredibilityRangeError):
            capture(empty_graph, "S", [Statement("X", "p", "v", 1.3)], config)


class TestAssociate:
    def test_empty_graph_is_a_fixpoint(self, empty_graph, config):
        report = associate(empty_graph, config)
        assert not report.new_factoids
        assert not empty_graph.triples

    def test_two_consistent_mentions_one_factoid_two_passes(self, empty_graph, config):
        empty_graph.add_source("A", 1.0, id="A")
        empty_graph.new_triple("X", "bornIn", "Paris", 0.8, "mention", source="A")
        empty_graph.new_triple("X", "bornIn", "Versailles", 0.6, "mention", source="A")
        report = associate(empty_graph, config)
        assert len(report.new_factoids) == 1
        assert report.iterations == 2  # second pass adds nothing
        factoid = empty_graph.triples[report.new_factoids[0]]
        assert factoid.object == "ParisianRegion"
        assert factoid.certainty == 0.92

    def test_idempotent(self, golden_graph, config):
        associate(golden_graph, config)
        once = snapshot(golden_graph)
        report = associate(golden_graph, config)
        assert snapshot(golden_graph) == once
        assert not report.new_factoids
        assert not report.revised

    def test_never_deletes_mentions(self, golden_graph, config):
        before = {t.id for t in golden_graph.mentions()}
        associate(golden_graph, config)
        after = {t.id for t in golden_graph.mentions()}
        assert before <= after

    def test_golden_end_state(self, golden_graph, config):
        report = associate(golden_graph, config)
        assert report.merges == {"diploma3": "diploma2"}
        derived = {(t.predicate, t.object): t.certainty
                   for t in golden_graph.derived()}
        assert derived[("graduates", "diploma2")] == 0.99
        assert derived[("awardedIn", 1256)] == 0.98
        assert derived[("isA", "master")] == pytest.approx(0.576)

    def test_conflict_revises_existing_factoid(self, empty_graph, config):
        g = empty_graph
        g.add_source("A", 0.9, id="A")
        g.add_source("B", 0.7, id="B")
        capture(g, "A", [Statement("d", "isA", "master", 1.0)], config)
        capture(g, "B", [Statement("d", "isA", "master", 1.0)], config)
        associate(g, config)
        (master,) = [t for t in g.derived() if t.object == "master"]
        assert master.certainty == 0.97
        g.add_source("C", 1.0, id="C")
        capture(g, "C", [Statement("d", "isA", "doctorate", 0.4)], config)
        report = associate(g, config)
        assert master.id in report.revised
        assert g.triples[master.id].certainty == 0.582


class TestDecompose:
    def test_mention_is_a_single_node(self, empty_graph, config):
        empty_graph.add_source("S", 0.9, id="S")
        (m,) = capture(empty_graph, "S", [Statement("X", "p", "v", 1.0)], config)
        tree = decompose(empty_graph, m.id)
        assert tree.triple_id == m.id
        assert tree.source == "S"
        assert tree.children == []

    def test_rule1_factoid_has_two_leaves(self, empty_graph, config):
        empty_graph.add_source("A", 1.0, id="A")
        m1 = empty_graph.new_triple("X", "bornIn", "Paris", 0.8, "mention", source="A")
        m2 = empty_graph.new_triple("X", "bornIn", "Versailles", 0.6, "mention", source="A")
        report = associate(empty_graph, config)
        tree = decompose(empty_graph, report.new_factoids[0])
        assert sorted(c.triple_id for c in tree.children) == sorted([m1.id, m2.id])
        assert all(not c.children for c in tree.children)

    def test_nested_factoids_expose_four_leaves(self, empty_graph):
        g = empty_graph
        g.add_source("S", 0.9, id="S")
        ms = [g.new_triple("X", "p", f"v{i}", 0.5, "mention", source="S")
              for i in range(4)]
        f1 = g.new_triple("X", "p", "va", 0.7, "factoid",
                          provenance={ms[0].id, ms[1].id})
        f2 = g.new_triple("X", "p", "vb", 0.7, "factoid",
                          provenance={ms[2].id, ms[3].id})
        top = g.new_triple("X", "p", "vc", 0.8, "factoid",
                           provenance={f1.id, f2.id})
        tree = decompose(g, top.id)
        leaves = [grandchild for child in tree.children
                  for grandchild in child.children]
        assert len(tree.children) == 2
        assert sorted(l.triple_id for l in leaves) == sorted(m.id for m in ms)

    def test_unknown_id(self, empty_graph):
        with pytest.raises(UnknownIdError):
            decompose(empty_graph, "nope")

    def test_collapse_after_merge_rewires_provenance(self, config, tmp_path):
        # two subjects later resolved to one: their same-key factoids must
        # collapse without leaving dangling provenance in triples that
        # referenced the dropped duplicate
        from ukgfuse import save

        g = UKGraph()
        apply_declarations(g, config)
        for i in range(4):
            g.add_source(f"S{i}", 1.0, id=f"S{i}")
        # subject alphaaa2: a conflict pair leaves its master factoid holding
        # the doctorate factoid in provenance
        m1 = g.new_triple("alphaaa2", "isA", "master", 0.5, "mention", source="S0")
        m2 = g.new_triple("alphaaa2", "isA", "doctorate", 0.3, "mention", source="S1")
        a2 = g.new_triple("alphaaa2", "isA", "master", 0.5, "factoid",
                          provenance={m1.id})
        x2 = g.new_triple("alphaaa2", "isA", "doctorate", 0.3, "factoid",
                          provenance={m2.id})
        g.new_triple("alphaaa2", "isA", "doctorate", 0.9, "mention", source="S2")
        associate(g, config)
        assert x2.id in g.triples[a2.id].provenance
        # subject alphaaa1 holds its own doctorate factoid; labels are close
        # enough that the next association merges the two subjects
        m4 = g.new_triple("alphaaa1", "isA", "doctorate", 0.4, "mention",
                          source="S3")
        x1 = g.new_triple("alphaaa1", "isA", "doctorate", 0.4, "factoid",
                          provenance={m4.id})
        report = associate(g, config)
        assert report.merges == {"alphaaa2": "alphaaa1"}
        survivors = {x1.id, x2.id} & set(g.triples)
        assert len(survivors) == 1  # duplicates collapsed
        for t in g.triples.values():
            for pid in t.provenance:
                assert pid in g.triples, f"{t.id} dangles on {pid}"
        save(g, config, str(tmp_path / "state.jsonl"))  # integrity check passes

    def test_mutual_conflict_revisions_stay_decomposable(self, config):
        # two derived values revise each other in one pass when a fresh
        # strong mention arrives; the provenance back-edge must not loop
        g = UKGraph()
        apply_declarations(g, config)
        for i in range(3):
            g.add_source(f"S{i}", 1.0, id=f"S{i}")
        m1 = g.new_triple("x", "isA", "master", 0.5, "mention", source="S0")
        m2 = g.new_triple("x", "isA", "doctorate", 0.3, "mention", source="S1")
        a = g.new_triple("x", "isA", "master", 0.5, "factoid", provenance={m1.id})
        b = g.new_triple("x", "isA", "doctorate", 0.3, "factoid", provenance={m2.id})
        g.new_triple("x", "isA", "doctorate", 0.9, "mention", source="S2")
        associate(g, config)
        assert b.id in g.triples[a.id].provenance
        assert a.id in g.triples[b.id].provenance
        tree = decompose(g, a.id)
        ids = set()
        stack = [tree]
        while stack:
            node = stack.pop()
            ids.add(node.triple_id)
            stack.extend(node.children)
        assert {m1.id, m2.id} <= ids
        mentions, sources = g.provenance_closure(a.id)
        assert sources == {"S0", "S1", "S2"}


class TestEstablish:
    def test_golden_facts(self, fused_graph):
        facts = {(t.predicate, t.object) for t in fused_graph.facts()}
        assert facts == {("graduates", "diploma2"), ("awardedIn", 1256)}

    def test_promotions_are_audited(self, fused_graph):
        promoted = [e for e in fused_graph.audit if e.action == "promote"]
        assert len(promoted) == 2

    def test_demotion_after_conflict(self, empty_graph, config):
        g = empty_graph
        g.add_source("A", 0.9, id="A")
        g.add_source("B", 0.7, id="B")
        capture(g, "A", [Statement("d", "isA", "master", 1.0)], config)
        capture(g, "B", [Statement("d", "isA", "master", 1.0)], config)
        associate(g, config)
        establish(g, config)
        assert {t.object for t in g.facts()} == {"master"}
        g.add_source("C", 0.8, id="C")
        capture(g, "C", [Statement("d", "isA", "doctorate", 0.5)], config)
        associate(g, config)
        establish(g, config)
        assert g.facts() == []
        assert any(e.action == "demote" for e in g.audit)


class TestHypotheses:
    def test_reference_conjunction_confirmed(self, fused_graph, config):
        hyp = make_hypothesis(fused_graph,
                              [("?p", "graduates", "?d"), ("?d", "awardedIn", 1256)],
                              theta=0.9)
        verdict = run_hypothesis(fused_graph, hyp, config)
        assert verdict.status == "confirmed"
        assert verdict.score == 0.98
        best = verdict.bindings[0]
        assert best.assignments == {"?p": "ThomasAquinas", "?d": "diploma2"}

    def test_empty_graph_is_undetermined(self, empty_graph, config):
        hyp = make_hypothesis(empty_graph,
                              [("?p", "graduates", "?d"), ("?d", "awardedIn", 1256)],
                              theta=0.9)
        verdict = run_hypothesis(empty_graph, hyp, config)
        assert verdict.status == "undetermined"
        assert verdict.bindings == []

    def test_contradicted_pattern_is_infirmed(self, end_state_graph, config):
        with pytest.warns(UserWarning):
            build = make_hypothesis(end_state_graph, [("diploma2", "isA", "doctorate")],
                                    theta=0.5)
        verdict = run_hypothesis(end_state_graph, build, config)
        assert verdict.status == "infirmed"
        assert verdict.contradicting  # the 0.58 master factoid conflicts

    def test_single_pattern_warns_but_registers(self, end_state_graph):
        with pytest.warns(UserWarning):
            make_hypothesis(end_state_graph, [("diploma2", "isA", "master")], theta=0.5)

    def test_theta_zero_with_any_match_is_never_undetermined(self, fused_graph, config):
        hyp = make_hypothesis(fused_graph, [("?p", "graduates", "?d"),
                                            ("?d", "isA", "?k")], theta=0.0)
        verdict = run_hypothesis(fused_graph, hyp, config)
        assert verdict.status == "confirmed"

    def test_unknown_predicate(self, fused_graph, config):
        with pytest.raises(UnknownIdError):
            make_hypothesis(fused_graph, [("?p", "frobnicates", "?d"),
                                          ("?d", "awardedIn", 1256)], theta=0.9)


def _single_mention_fact_state(config):
    """One source at 0.95 asserting one statement that establishes as a fact."""
    graph = UKGraph()
    apply_declarations(graph, config)
    graph.add_source("W", 0.95, id="W")
    graph.add_source("R", 0.99, id="R")
    capture(graph, "W", [Statement("d", "isA", "master", 1.0)], config)
    # an unrelated strong statement the hypothesis can be contradicted by
    capture(graph, "R", [Statement("d2", "isA", "doctorate", 1.0)], config)
    associate(graph, config)
    establish(graph, config)
    return graph


class TestPropagateFeedback:
    def test_confirmed_moves_reliability_toward_one(self, fused_graph, config):
        hyp = make_hypothesis(fused_graph,
                              [("?p", "graduates", "?d"), ("?d", "awardedIn", 1256)],
                              theta=0.9)
        verdict = run_hypothesis(fused_graph, hyp, config)
        report = propagate_feedback(fused_graph, verdict, config)
        changed = {c.source_id: (c.before, c.after) for c in report.reliability_changes}
        assert changed["S1"] == (0.9, 0.9 + 0.1 * (1 - 0.9))
        assert changed["S2"] == (0.8, 0.8 + 0.1 * (1 - 0.8))
        assert changed["S3"] == (0.9, 0.91)

    def test_reliability_one_is_a_fixed_point(self, empty_graph, config):
        g = empty_graph
        g.add_source("R", 1.0, id="R")
        capture(g, "R", [Statement("X", "p", "v", 1.0)], config)
        associate(g, config)
        establish(g, config)
        hyp = make_hypothesis(g, [("X", "p", "v"), ("X", "p", "v")], theta=0.9)
        verdict = run_hypothesis(g, hyp, config)
        report = propagate_feedback(g, verdict, config)
        (change,) = report.reliability_changes
        assert change.after == 1.0

    def test_infirmed_demotes_single_mention_fact(self, config):
        graph = _single_mention_fact_state(config)
        fact = [t for t in graph.facts() if t.subject == "d"]
        assert fact and fact[0].certainty == 0.95
        with pytest.warns(UserWarning):
            hyp = make_hypothesis(graph, [("d", "isA", "doctorate")], theta=0.9)
        verdict = run_hypothesis(graph, hyp, config)
        assert verdict.status == "infirmed"
        report = propagate_feedback(graph, verdict, config)
        assert graph.sources["W"].reliability == pytest.approx(0.855)
        assert any(d["subject"] == "d" for d in report.demoted_facts)
        assert not [t for t in graph.facts() if t.subject == "d"]
        assert any(e.action == "demote" for e in graph.audit)

    def test_undetermined_verdict_is_not_actionable(self, empty_graph, config):
        hyp = make_hypothesis(empty_graph,
                              [("?p", "graduates", "?d"), ("?d", "awardedIn", 1256)],
                              theta=0.9)
        verdict = run_hypothesis(empty_graph, hyp, config)
        with pytest.raises(VerdictNotActionableError):
            propagate_feedback(empty_graph, verdict, config)

    def test_double_propagation_rejected(self, fused_graph, config):
        hyp = make_hypothesis(fused_graph,
                              [("?p", "graduates", "?d"), ("?d", "awardedIn", 1256)],
                              theta=0.9)
        verdict = run_hypothesis(fused_graph, hyp, config)
        propagate_feedback(fused_graph, verdict, config)
        with pytest.raises(Exception):
            propagate_feedback(fused_graph, verdict, config)

    def test_surviving_facts_clear_threshold(self, fused_graph, config):
        hyp = make_hypothesis(fused_graph,
                              [("?p", "graduates", "?d"), ("?d", "awardedIn", 1256)],
                              theta=0.9)
        verdict = run_hypothesis(fused_graph, hyp, config)
        propagate_feedback(fused_graph, verdict, config)
        for t in fused_graph.facts():
            assert t.certainty > config.fact_threshold

    def test_mention_count_never_decreases(self, config):
        graph = make_golden_graph(config)
        counts = [len(graph.mentions())]
        associate(graph, config)
        counts.append(len(graph.mentions()))
        establish(graph, config)
        counts.append(len(graph.mentions()))
        hyp = make_hypothesis(graph,
                              [("?p", "graduates", "?d"), ("?d", "awardedIn", 1256)],
                              theta=0.9)
        verdict = run_hypothesis(graph, hyp, config)
        propagate_feedback(graph, verdict, config)
        counts.append(len(graph.mentions()))
        assert counts == sorted(counts)


def test_pipeline_determinism(config):
    def run():
        graph = make_golden_graph(config)
        associate(graph, config)
        establish(graph, config)
        hyp = make_hypothesis(graph,
                              [("?p", "graduates", "?d"), ("?d", "awardedIn", 1256)],
                              theta=0.9)
        verdict = run_hypothesis(graph, hyp, config)
        propagate_feedback(graph, verdict, config)
        establish(graph, config)
        return graph_to_records(graph, config)

    assert run() == run()
