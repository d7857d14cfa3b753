"""Composition rules over pairs of statements sharing a subject and predicate.

Value-consistent pairs (concept distance within the predicate's threshold)
generalize to their lowest common ancestor with a reinforcing aggregator.
Value-inconsistent pairs keep the higher-certainty value, discounted by the
challenger.  Fact classification promotes everything whose certainty clears
the fact threshold and demotes anything that no longer does.

The rules are pure: they inspect a graph snapshot and return candidate
emissions; applying them (and deciding between creation and revision) is the
pipeline's job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .errors import InvariantViolationError
from .model import (
    KIND_FACT,
    KIND_FACTOID,
    KIND_MENTION,
    CompositeFactoid,
    UKGraph,
    UncertainTriple,
    Value,
    check_unit,
)

CONSISTENT_KINDS = ("max", "avg", "min", "noisy-or")
INCONSISTENT_KINDS = ("min", "difference", "discount")


@dataclass(frozen=True)
class AggregatorKind:
    """Which aggregation functions combine consistent / inconsistent pairs."""

    consistent: str = "noisy-or"
    inconsistent: str = "discount"

    def __post_init__(self):
        if self.consistent not in CONSISTENT_KINDS:
            raise InvariantViolationError(f"unknown consistent aggregator {self.consistent!r}")
        if self.inconsistent not in INCONSISTENT_KINDS:
            raise InvariantViolationError(f"unknown inconsistent aggregator {self.inconsistent!r}")


def aggreg_consistent(p1: float, p2: float, kind: str = "noisy-or") -> float:
    """Combine two certainties that confirm each other."""
    check_unit(p1, "p1")
    check_unit(p2, "p2")
    if kind == "max":
        return max(p1, p2)
    if kind == "min":
        return min(p1, p2)
    if kind == "avg":
        return (p1 + p2) / 2.0
    if kind == "noisy-or":
        return 1.0 - (1.0 - p1) * (1.0 - p2)
    raise InvariantViolationError(f"unknown consistent aggregator {kind!r}")


def aggreg_consistent_many(values, kind: str = "noisy-or") -> float:
    """n-ary form of aggreg_consistent; order-independent for every kind."""
    vals = list(values)
    if not vals:
        raise InvariantViolationError("nothing to aggregate")
    for v in vals:
        check_unit(v, "certainty")
    if kind == "max":
        return max(vals)
    if kind == "min":
        return min(vals)
    if kind == "avg":
        return sum(vals) / len(vals)
    if kind == "noisy-or":
        acc = 1.0
        for v in vals:
            acc *= 1.0 - v
        return 1.0 - acc
    raise InvariantViolationError(f"unknown consistent aggregator {kind!r}")


def aggreg_inconsistent(p1: float, p2: float, kind: str = "discount") -> float:
    """Revise the winner p1 against the conflicting challenger p2 (p1 >= p2)."""
    check_unit(p1, "p1")
    check_unit(p2, "p2")
    if kind == "min":
        return min(p1, p2)
    if kind == "difference":
        return max(p1 - p2, 0.0)
    if kind == "discount":
        return p1 * (1.0 - p2)
    raise InvariantViolationError(f"unknown inconsistent aggregator {kind!r}")


# ---------------------------------------------------------------------------
# Rule application over a graph snapshot
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RuleCandidate:
    """One emission from a composition rule, before pipeline application.

    rule=1: object is the generalization (lca) of the pair, certainty their
    consistent aggregate.  rule=2: object is the winning value, certainty the
    winner discounted by the challenger once.
    """

    rule: int
    subject: str
    predicate: str
    object: Value
    certainty: float
    pair: tuple[str, str]
    winner_id: str | None = None
    challenger_id: str | None = None
    challenger_certainty: float | None = None


def object_distance(graph: UKGraph, predicate: str, v1: Value, v2: Value) -> float:
    """Concept distance for taxonomy domains; 0/inf for scalar (in)equality."""
    pred = graph.predicates.get(predicate)
    tax_name = pred.taxonomy_name if pred else None
    if tax_name is not None:
        return float(graph.taxonomies[tax_name].concept_distance(str(v1), str(v2)))
    return 0.0 if v1 == v2 else math.inf


def generalize(graph: UKGraph, predicate: str, v1: Value, v2: Value) -> Value:
    """lca for taxonomy domains; the shared value otherwise."""
    pred = graph.predicates.get(predicate)
    tax_name = pred.taxonomy_name if pred else None
    if tax_name is not None:
        return graph.taxonomies[tax_name].lca(str(v1), str(v2))
    if v1 != v2:
        raise InvariantViolationError("cannot generalize distinct scalar values")
    return v1


def _consumed_index(graph: UKGraph) -> dict[str, set[frozenset[str]]]:
    """For each triple id, the pair-sets already absorbed by a derived triple.

    A pair {a, b} is consumed when some derived triple covers both members:
    either both sit in its provenance, or it *is* one member and carries the
    other in its provenance.
    """
    index: dict[str, set[frozenset[str]]] = {}
    for t in graph.triples.values():
        if t.kind == KIND_MENTION:
            continue
        ids = set(t.provenance) | {t.id}
        for a, b in combinations(sorted(ids), 2):
            index.setdefault(a, set()).add(frozenset((a, b)))
    return index


def _pair_consumed(index, a: str, b: str) -> bool:
    return frozenset((a, b)) in index.get(a, ())


def _shadowed(graph: UKGraph, t: UncertainTriple,
              derived: dict[tuple[str, str, Value], UncertainTriple]) -> bool:
    """A mention whose statement already lives in a derived triple above it.

    Its evidence is represented by that triple, so it stays out of pair
    enumeration (otherwise the same statement would weigh in twice).
    """
    if t.kind != KIND_MENTION:
        return False
    twin = derived.get(t.key())
    return twin is not None and t.id in twin.provenance


def _grouped_pairs(graph: UKGraph):
    """Unordered pairs of distinct triples sharing (subject, predicate)."""
    derived = graph.derived_by_key()
    groups: dict[tuple[str, str], list[UncertainTriple]] = {}
    for t in graph.triples.values():
        if _shadowed(graph, t, derived):
            continue
        groups.setdefault((t.subject, t.predicate), []).append(t)
    for key in sorted(groups):
        members = sorted(groups[key], key=lambda t: t.id)
        for t1, t2 in combinations(members, 2):
            yield t1, t2


def apply_rule1(graph: UKGraph, config) -> list[RuleCandidate]:
    """Candidates for all value-consistent pairs not yet consumed.

    Pairs whose generalization already exists as a derived triple are skipped:
    the evidence has been folded in before.
    """
    consumed = _consumed_index(graph)
    derived_keys = set(graph.derived_by_key())
    out: list[RuleCandidate] = []
    for t1, t2 in _grouped_pairs(graph):
        if _pair_consumed(consumed, t1.id, t2.id):
            continue
        dist = object_distance(graph, t1.predicate, t1.object, t2.object)
        tau = graph.effective_tau(t1.predicate, config.tau)
        if dist > tau:
            continue
        obj = generalize(graph, t1.predicate, t1.object, t2.object)
        if (t1.subject, t1.predicate, obj) in derived_keys:
            continue
        out.append(RuleCandidate(
            rule=1, subject=t1.subject, predicate=t1.predicate, object=obj,
            certainty=aggreg_consistent(t1.certainty, t2.certainty,
                                        config.aggregators.consistent),
            pair=(t1.id, t2.id),
        ))
    return out


def apply_rule2(graph: UKGraph, config) -> list[RuleCandidate]:
    """Candidates for all value-inconsistent pairs not yet consumed.

    The higher-certainty triple wins (ties broken by lexicographic object,
    then id); its value is kept with the challenger's certainty discounted
    off.  A challenger must clear the conflict floor to count.
    """
    consumed = _consumed_index(graph)
    out: list[RuleCandidate] = []
    for t1, t2 in _grouped_pairs(graph):
        if _pair_consumed(consumed, t1.id, t2.id):
            continue
        dist = object_distance(graph, t1.predicate, t1.object, t2.object)
        tau = graph.effective_tau(t1.predicate, config.tau)
        if dist <= tau:
            continue
        winner, loser = sorted((t1, t2), key=lambda t: (-t.certainty, str(t.object), t.id))[:2]
        if loser.certainty <= config.conflict_floor:
            continue
        out.append(RuleCandidate(
            rule=2, subject=winner.subject, predicate=winner.predicate,
            object=winner.object,
            certainty=aggreg_inconsistent(winner.certainty, loser.certainty,
                                          config.aggregators.inconsistent),
            pair=(t1.id, t2.id),
            winner_id=winner.id, challenger_id=loser.id,
            challenger_certainty=loser.certainty,
        ))
    return out


# ---------------------------------------------------------------------------
# Fact classification
# ---------------------------------------------------------------------------


@dataclass
class FactReport:
    """Outcome of one fact-classification sweep."""

    promoted: list[str] = field(default_factory=list)
    demoted: list[str] = field(default_factory=list)
    mention_facts: list[str] = field(default_factory=list)
    facts_by_subject: dict[str, list[str]] = field(default_factory=dict)
    composites: dict[str, CompositeFactoid] = field(default_factory=dict)


def build_facts(graph: UKGraph, pi: float) -> FactReport:
    """Classify triples against the fact threshold and register composites.

    Derived triples with certainty strictly above pi become facts, others
    drop back to factoids.  Mentions above pi spawn a fact triple carrying
    them as provenance (the mention itself is never altered).  Every subject
    with at least two statements gets its composite (the statements taken
    together, scored by their weakest member).
    """
    pi = check_unit(pi, "fact threshold")
    report = FactReport()
    derived_keys = set(graph.derived_by_key())

    for tid in sorted(graph.triples):
        t = graph.triples[tid]
        if t.kind == KIND_MENTION:
            if t.certainty > pi and t.key() not in derived_keys:
                fact = graph.new_triple(t.subject, t.predicate, t.object, t.certainty,
                                        KIND_FACT, provenance={t.id})
                derived_keys.add(fact.key())
                report.mention_facts.append(fact.id)
        elif t.certainty > pi:
            if t.kind == KIND_FACTOID:
                graph.replace_triple(tid, kind=KIND_FACT)
                report.promoted.append(tid)
        elif t.kind == KIND_FACT:
            graph.replace_triple(tid, kind=KIND_FACTOID)
            report.demoted.append(tid)

    by_subject: dict[str, list[UncertainTriple]] = {}
    for t in graph.triples.values():
        by_subject.setdefault(t.subject, []).append(t)
    for subject in sorted(by_subject):
        members = by_subject[subject]
        report.facts_by_subject[subject] = sorted(
            t.id for t in members if t.kind == KIND_FACT)
        if len(members) >= 2:
            composite = CompositeFactoid(
                id=f"cf:{subject}", subject=subject,
                members=frozenset(t.id for t in members),
                certainty=min(t.certainty for t in members),
            )
            graph.composites[subject] = composite
            report.composites[subject] = composite
    return report
