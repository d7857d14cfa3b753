"""The five process phases driving a graph state.

capture        statements -> mentions (source reliability x stated credibility)
associate      entity resolution + forward chaining of the composition rules
establish      fact classification sweep
test_hypothesis  conjunctive pattern matching over factoids and facts
propagate_feedback  verdict -> source reliabilities -> recomputed graph

One pipeline run owns its graph exclusively; reads (decompose,
test_hypothesis) are safe against a quiescent graph.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

from .errors import (
    CredibilityRangeError,
    InvariantViolationError,
    NonTerminationError,
    UnknownIdError,
    VerdictNotActionableError,
)
from .fusion import (
    AggregatorKind,
    FactReport,
    aggreg_consistent_many,
    aggreg_inconsistent,
    apply_rule1,
    apply_rule2,
    build_facts,
    object_distance,
)
from .model import (
    DOMAIN_ENTITY,
    KIND_FACT,
    KIND_FACTOID,
    KIND_MENTION,
    STATUS_CONFIRMED,
    STATUS_INFIRMED,
    STATUS_UNDETERMINED,
    CompositeFactoid,
    Hypothesis,
    Statement,
    TriplePattern,
    UKGraph,
    UncertainTriple,
    Value,
    check_unit,
)
from .similarity import SimilarityConfig, resolve_entities
from .taxonomy import Taxonomy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FusionConfig:
    """Every tunable of the pipeline, loadable from one JSON object."""

    aggregators: AggregatorKind = AggregatorKind()
    fact_threshold: float = 0.9
    tau: dict[str, int] = field(default_factory=dict)
    alpha: float = 0.1
    theta: float = 0.9
    auto_fact_reliability: float = 1.0
    conflict_floor: float = 0.0
    similarity: SimilarityConfig = SimilarityConfig()
    epsilon: float = 1e-9
    max_iterations: int = 1000
    predicates: dict[str, dict] = field(default_factory=dict)
    taxonomies: tuple[dict, ...] = ()

    def __post_init__(self):
        check_unit(self.fact_threshold, "pi")
        check_unit(self.theta, "theta")
        check_unit(self.auto_fact_reliability, "auto_fact_reliability")
        check_unit(self.conflict_floor, "conflict_floor")
        if not 0.0 < self.alpha < 1.0:
            raise InvariantViolationError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.max_iterations < 1:
            raise InvariantViolationError("max_iterations must be >= 1")
        for name, t in self.tau.items():
            if t < 0:
                raise InvariantViolationError(f"tau[{name!r}] must be >= 0")

    def to_dict(self) -> dict:
        return {
            "aggregators": {
                "consistent": self.aggregators.consistent,
                "inconsistent": self.aggregators.inconsistent,
            },
            "pi": self.fact_threshold,
            "tau": dict(self.tau),
            "alpha": self.alpha,
            "theta": self.theta,
            "auto_fact_reliability": self.auto_fact_reliability,
            "conflict_floor": self.conflict_floor,
            "similarity": self.similarity.to_dict(),
            "epsilon": self.epsilon,
            "max_iterations": self.max_iterations,
            "predicates": dict(self.predicates),
            "taxonomies": list(self.taxonomies),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FusionConfig":
        agg = data.get("aggregators", {})
        return cls(
            aggregators=AggregatorKind(
                consistent=agg.get("consistent", "noisy-or"),
                inconsistent=agg.get("inconsistent", "discount"),
            ),
            fact_threshold=data.get("pi", 0.9),
            tau={k: int(v) for k, v in data.get("tau", {}).items()},
            alpha=data.get("alpha", 0.1),
            theta=data.get("theta", 0.9),
            auto_fact_reliability=data.get("auto_fact_reliability", 1.0),
            conflict_floor=data.get("conflict_floor", 0.0),
            similarity=SimilarityConfig.from_dict(data.get("similarity", {})),
            epsilon=data.get("epsilon", 1e-9),
            max_iterations=data.get("max_iterations", 1000),
            predicates=data.get("predicates", {}),
            taxonomies=tuple(data.get("taxonomies", ())),
        )


def apply_declarations(graph: UKGraph, config: FusionConfig) -> None:
    """Materialize the config's taxonomy and predicate declarations into a graph."""
    for tax_data in config.taxonomies:
        tax = Taxonomy.from_dict(tax_data)
        if tax.name not in graph.taxonomies:
            graph.add_taxonomy(tax)
    for name, decl in config.predicates.items():
        if name in graph.predicates:
            continue
        graph.declare_predicate(
            name,
            value_domain=decl.get("domain", "string"),
            tau=int(decl.get("tau", config.tau.get(name, 0))),
        )


# ---------------------------------------------------------------------------
# Phase 1: information capture
# ---------------------------------------------------------------------------


def capture(graph: UKGraph, source_id: str, statements, config: FusionConfig
            ) -> list[UncertainTriple]:
    """Turn statements from one source into mentions.

    Mention certainty is the product of the source's reliability and the
    statement's own credibility.  Statements from sources at or above
    auto_fact_reliability additionally spawn an immediate fact.
    """
    source = graph.sources.get(source_id)
    if source is None:
        raise UnknownIdError(f"unknown source {source_id!r}")
    mentions = []
    for st in statements:
        credibility = check_unit(st.credibility, "credibility", CredibilityRangeError)
        certainty = source.reliability * credibility
        mention = graph.new_triple(
            st.subject, st.predicate, st.object, certainty, KIND_MENTION,
            source=source_id, credibility=credibility,
        )
        mentions.append(mention)
        if source.reliability >= config.auto_fact_reliability:
            if mention.key() not in graph.derived_by_key():
                fact = graph.new_triple(st.subject, st.predicate, st.object,
                                        certainty, KIND_FACT, provenance={mention.id})
                graph.log("auto_fact", triple=fact.id, mention=mention.id,
                          source=source_id)
    logger.info("captured %d mentions from source %s", len(mentions), source_id)
    return mentions


# ---------------------------------------------------------------------------
# Phase 2: factoid association (forward chaining to fixpoint)
# ---------------------------------------------------------------------------


@dataclass
class AssociateReport:
    merges: dict[str, str] = field(default_factory=dict)
    new_factoids: list[str] = field(default_factory=list)
    revised: list[str] = field(default_factory=list)
    iterations: int = 0


def _rewrite_merged(graph: UKGraph, merge_map: dict[str, str]) -> int:
    """Rewrite subjects (and entity-valued objects) onto canonical ids."""
    changed = 0
    moves = {k: v for k, v in merge_map.items() if k != v}
    if not moves:
        return 0
    for tid in sorted(graph.triples):
        t = graph.triples[tid]
        changes = {}
        if t.subject in moves:
            changes["subject"] = moves[t.subject]
        pred = graph.predicates.get(t.predicate)
        if pred is not None and pred.value_domain == DOMAIN_ENTITY and t.object in moves:
            changes["object"] = moves[str(t.object)]
        if changes:
            graph.replace_triple(tid, **changes)
            changed += 1
    for frm, to in sorted(moves.items()):
        if graph.merges.get(frm) != to:
            graph.merges[frm] = to
            graph.log("merge", entity=frm, canonical=to)
    # keep the stored map flattened
    for frm in list(graph.merges):
        graph.merges[frm] = graph.merges.get(graph.merges[frm], graph.merges[frm])
    return changed


def _collapse_duplicate_derived(graph: UKGraph, config: FusionConfig) -> int:
    """Merge derived triples that ended up sharing (subject, predicate, object).

    Happens after entity merges rewrite ids.  Mentions never collapse: the
    same statement from two sources stays two mentions.  Provenance edges
    pointing at a dropped duplicate are remapped onto its keeper.
    """
    by_key: dict[tuple, list[UncertainTriple]] = {}
    for t in graph.triples.values():
        if t.kind != KIND_MENTION:
            by_key.setdefault(t.key(), []).append(t)
    remapped: dict[str, str] = {}
    for key, group in sorted(by_key.items(), key=lambda kv: str(kv[0])):
        if len(group) < 2:
            continue
        group = sorted(group, key=lambda t: t.id)
        keeper = group[0]
        certainty = aggreg_consistent_many(
            [t.certainty for t in group], config.aggregators.consistent)
        provenance = frozenset().union(*(t.provenance for t in group))
        kind = KIND_FACT if any(t.kind == KIND_FACT for t in group) else KIND_FACTOID
        graph.replace_triple(keeper.id, certainty=certainty,
                             provenance=provenance - {keeper.id}, kind=kind)
        for t in group[1:]:
            graph.drop_triple(t.id)
            remapped[t.id] = keeper.id
    if remapped:
        for tid in sorted(graph.triples):
            t = graph.triples[tid]
            if t.provenance & remapped.keys():
                rewired = frozenset(remapped.get(pid, pid) for pid in t.provenance)
                graph.replace_triple(tid, provenance=rewired - {tid})
        for subject in list(graph.composites):
            comp = graph.composites[subject]
            if comp.members & remapped.keys():
                members = frozenset(remapped.get(mid, mid) for mid in comp.members)
                if len(members) < 2:
                    del graph.composites[subject]  # rebuilt at the next establish
                else:
                    graph.composites[subject] = CompositeFactoid(
                        id=comp.id, subject=comp.subject, members=members,
                        certainty=comp.certainty)
    return len(remapped)


def _apply_candidates(graph: UKGraph, config: FusionConfig,
                      rule1, rule2, report: AssociateReport,
                      epsilon: float) -> bool:
    """Apply one pass worth of rule emissions; returns whether anything moved."""
    changed = False

    # consistent-pair creations: same-key emissions collapse through the
    # n-ary consistent aggregator before a single factoid is created
    groups: dict[tuple, list] = {}
    for cand in rule1:
        groups.setdefault((cand.subject, cand.predicate, cand.object), []).append(cand)
    for key in sorted(groups, key=str):
        cands = groups[key]
        certainty = aggreg_consistent_many(
            [c.certainty for c in cands], config.aggregators.consistent)
        provenance = {tid for c in cands for tid in c.pair}
        triple = graph.new_triple(key[0], key[1], key[2], certainty,
                                  KIND_FACTOID, provenance=provenance)
        report.new_factoids.append(triple.id)
        changed = True

    # conflict revisions: revise the standing derived triple for the winning
    # value, or create it; each unique challenger discounts once
    rev_groups: dict[tuple, list] = {}
    for cand in rule2:
        rev_groups.setdefault((cand.subject, cand.predicate, cand.object), []).append(cand)
    derived = graph.derived_by_key()
    for key in sorted(rev_groups, key=str):
        cands = rev_groups[key]
        challengers: dict[str, float] = {}
        winner_ids: dict[str, float] = {}
        absorbed: set[str] = set()
        for c in cands:
            challengers[c.challenger_id] = c.challenger_certainty
            winner_ids[c.winner_id] = graph.triples[c.winner_id].certainty
            absorbed.update(c.pair)
        existing = derived.get(key)
        if existing is not None:
            base = existing.certainty
            for cid in sorted(challengers):
                if cid == existing.id:
                    continue
                base = aggreg_inconsistent(base, challengers[cid],
                                           config.aggregators.inconsistent)
            provenance = existing.provenance | (absorbed - {existing.id})
            if abs(base - existing.certainty) > epsilon or provenance != existing.provenance:
                graph.replace_triple(existing.id, certainty=base, provenance=provenance)
                report.revised.append(existing.id)
                changed = True
        else:
            base = max(winner_ids.values())
            for cid in sorted(challengers):
                base = aggreg_inconsistent(base, challengers[cid],
                                           config.aggregators.inconsistent)
            triple = graph.new_triple(key[0], key[1], key[2], base,
                                      KIND_FACTOID, provenance=absorbed)
            report.new_factoids.append(triple.id)
            derived[triple.key()] = triple
            changed = True
    return changed


def associate(graph: UKGraph, config: FusionConfig) -> AssociateReport:
    """Resolve entities, then chain the composition rules to a fixpoint."""
    report = AssociateReport()
    merge_map = resolve_entities(graph, config.similarity)
    report.merges = {k: v for k, v in merge_map.items() if k != v}
    _rewrite_merged(graph, merge_map)
    _collapse_duplicate_derived(graph, config)

    for iteration in range(1, config.max_iterations + 1):
        report.iterations = iteration
        rule1 = apply_rule1(graph, config)
        rule2 = apply_rule2(graph, config)
        if not rule1 and not rule2:
            break
        moved = _apply_candidates(graph, config, rule1, rule2, report, config.epsilon)
        _collapse_duplicate_derived(graph, config)
        if not moved:
            break
    else:
        raise NonTerminationError(
            f"association did not reach a fixpoint within {config.max_iterations} passes "
            f"({len(graph.triples)} triples, last pass emitted "
            f"{len(rule1)}+{len(rule2)} candidates)")
    logger.info("associate: %d new factoids, %d revisions, %d passes",
                len(report.new_factoids), len(report.revised), report.iterations)
    return report


# ---------------------------------------------------------------------------
# Backward chaining: decomposition of a datum into its constituents
# ---------------------------------------------------------------------------


@dataclass
class ProvenanceNode:
    """One node of a decomposition tree; mentions are leaves with a source."""

    triple_id: str
    kind: str
    subject: str
    predicate: str
    object: Value
    certainty: float
    source: str | None
    children: list["ProvenanceNode"] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "triple_id": self.triple_id,
            "kind": self.kind,
            "subject": self.subject,
            "predicate": self.predicate,
            "object": self.object,
            "certainty": self.certainty,
            "source": self.source,
            "children": [c.to_dict() for c in self.children],
        }


def decompose(graph: UKGraph, triple_id: str,
              _path: frozenset[str] = frozenset()) -> ProvenanceNode:
    """Provenance tree rooted at the given triple, down to source mentions.

    Mutual conflict revisions can make two derived triples reference each
    other; such back-edges are not descended into, so the tree stays finite.
    """
    if triple_id not in graph.triples:
        raise UnknownIdError(f"unknown triple {triple_id!r}")
    t = graph.triples[triple_id]
    node = ProvenanceNode(
        triple_id=t.id, kind=t.kind, subject=t.subject, predicate=t.predicate,
        object=t.object, certainty=t.certainty, source=t.source,
    )
    path = _path | {triple_id}
    for child_id in sorted(t.provenance):
        if child_id in path:
            continue
        node.children.append(decompose(graph, child_id, path))
    return node


# ---------------------------------------------------------------------------
# Phase 3: fact establishment
# ---------------------------------------------------------------------------


def establish(graph: UKGraph, config: FusionConfig) -> FactReport:
    """Run the fact-classification sweep and audit every status change."""
    report = build_facts(graph, config.fact_threshold)
    for tid in report.promoted:
        graph.log("promote", triple=tid, certainty=graph.triples[tid].certainty)
    for tid in report.mention_facts:
        graph.log("promote", triple=tid,
                  certainty=graph.triples[tid].certainty, from_mention=True)
    for tid in report.demoted:
        graph.log("demote", triple=tid, certainty=graph.triples[tid].certainty)
    logger.info("establish: %d promoted, %d mention facts, %d demoted",
                len(report.promoted), len(report.mention_facts), len(report.demoted))
    return report


# ---------------------------------------------------------------------------
# Phase 4: hypothesis testing
# ---------------------------------------------------------------------------


@dataclass
class Binding:
    assignments: dict[str, Value]
    score: float
    triple_ids: tuple[str, ...]


@dataclass
class Verdict:
    id: str
    hypothesis_id: str
    status: str
    score: float | None
    theta: float
    bindings: list[Binding] = field(default_factory=list)
    supporting: tuple[str, ...] = ()
    contradicting: tuple[str, ...] = ()
    propagated: bool = False


def make_hypothesis(graph: UKGraph, patterns, theta: float,
                    id: str | None = None) -> Hypothesis:
    """Register a hypothesis; single-pattern hypotheses are legal but warned about."""
    pats = tuple(TriplePattern(subject=p[0], predicate=p[1], object=p[2])
                 if not isinstance(p, TriplePattern) else p
                 for p in patterns)
    if len(pats) == 1:
        warnings.warn("hypothesis relates a single pattern; "
                      "conjunctions of two or more are the intended use",
                      stacklevel=2)
    for p in pats:
        if p.predicate not in graph.predicates:
            raise UnknownIdError(f"hypothesis references unknown predicate {p.predicate!r}")
    if id is None:
        graph.hypothesis_seq += 1
        id = f"h{graph.hypothesis_seq}"
    if id in graph.hypotheses:
        raise InvariantViolationError(f"hypothesis id {id!r} already registered")
    hyp = Hypothesis(id=id, patterns=pats, theta=check_unit(theta, "theta"))
    graph.hypotheses[id] = hyp
    return hyp


def _match_term(pattern_term: Value, value: Value, bindings: dict) -> dict | None:
    if TriplePattern.is_var(pattern_term):
        bound = bindings.get(pattern_term)
        if bound is None:
            new = dict(bindings)
            new[pattern_term] = value
            return new
        return bindings if bound == value else None
    return bindings if pattern_term == value else None


def _enumerate_bindings(graph: UKGraph, patterns, candidates) -> list[Binding]:
    results: list[Binding] = []

    def recurse(idx: int, bindings: dict, used: tuple[str, ...], score: float):
        if idx == len(patterns):
            results.append(Binding(assignments=dict(bindings),
                                   score=score, triple_ids=used))
            return
        pat = patterns[idx]
        for t in candidates:
            if t.predicate != pat.predicate:
                continue
            after_subject = _match_term(pat.subject, t.subject, bindings)
            if after_subject is None:
                continue
            after_object = _match_term(pat.object, t.object, after_subject)
            if after_object is None:
                continue
            recurse(idx + 1, after_object, used + (t.id,), min(score, t.certainty))

    recurse(0, {}, (), 1.0)
    results.sort(key=lambda b: (-b.score, sorted(map(str, b.assignments.items()))))
    return results


def _contradictions(graph: UKGraph, patterns, candidates, theta: float,
                    config: FusionConfig) -> list[str]:
    """Triples asserting an inconsistent value for a grounded pattern."""
    out: set[str] = set()
    for pat in patterns:
        if TriplePattern.is_var(pat.object):
            continue
        for t in candidates:
            if t.predicate != pat.predicate or t.certainty < theta:
                continue
            if not TriplePattern.is_var(pat.subject) and t.subject != pat.subject:
                continue
            dist = object_distance(graph, pat.predicate, t.object, pat.object)
            tau = graph.effective_tau(pat.predicate, config.tau)
            if dist > tau:
                out.add(t.id)
    return sorted(out)


def test_hypothesis(graph: UKGraph, hypothesis: Hypothesis | str,
                    config: FusionConfig) -> Verdict:
    """Match the hypothesis conjunction against factoids and facts.

    A binding scores the weakest of its matched certainties.  confirmed iff
    some binding reaches theta; infirmed iff none does but a pattern is
    contradicted at or above theta; undetermined otherwise.
    """
    if isinstance(hypothesis, str):
        if hypothesis not in graph.hypotheses:
            raise UnknownIdError(f"unknown hypothesis {hypothesis!r}")
        hypothesis = graph.hypotheses[hypothesis]
    for p in hypothesis.patterns:
        if p.predicate not in graph.predicates:
            raise UnknownIdError(f"hypothesis references unknown predicate {p.predicate!r}")
    theta = hypothesis.theta
    candidates = sorted(
        (t for t in graph.triples.values() if t.kind in (KIND_FACTOID, KIND_FACT)),
        key=lambda t: t.id)
    bindings = _enumerate_bindings(graph, hypothesis.patterns, candidates)
    qualifying = [b for b in bindings if b.score >= theta]

    graph.verdict_seq += 1
    vid = f"v{graph.verdict_seq}"
    if qualifying:
        supporting = sorted({tid for b in qualifying for tid in b.triple_ids})
        verdict = Verdict(id=vid, hypothesis_id=hypothesis.id, status=STATUS_CONFIRMED,
                          score=qualifying[0].score, theta=theta, bindings=bindings,
                          supporting=tuple(supporting))
    else:
        contradicting = _contradictions(graph, hypothesis.patterns, candidates,
                                        theta, config)
        best = bindings[0].score if bindings else None
        if contradicting:
            verdict = Verdict(id=vid, hypothesis_id=hypothesis.id, status=STATUS_INFIRMED,
                              score=best, theta=theta, bindings=bindings,
                              contradicting=tuple(contradicting))
        else:
            verdict = Verdict(id=vid, hypothesis_id=hypothesis.id,
                              status=STATUS_UNDETERMINED, score=best, theta=theta,
                              bindings=bindings)
    hypothesis.status = verdict.status
    graph.verdicts[vid] = verdict
    logger.info("hypothesis %s: %s (score=%s)", hypothesis.id, verdict.status, verdict.score)
    return verdict


# ---------------------------------------------------------------------------
# Phase 5: feedback propagation
# ---------------------------------------------------------------------------


@dataclass
class ReliabilityChange:
    source_id: str
    before: float
    after: float


@dataclass
class PropagationReport:
    verdict_id: str
    direction: str
    reliability_changes: list[ReliabilityChange] = field(default_factory=list)
    demoted_facts: list[dict] = field(default_factory=list)


def _recompute_from_mentions(graph: UKGraph, config: FusionConfig) -> None:
    """Drop rule-derived triples and rebuild the derived layer from mentions.

    Mentions keep their ids with refreshed certainties; single-provenance
    derived triples (auto facts, promoted mentions) survive with refreshed
    certainties; everything rule-derived is re-chained from scratch.
    """
    for tid in sorted(graph.triples):
        t = graph.triples[tid]
        if t.kind == KIND_MENTION:
            source = graph.sources[t.source]
            credibility = t.credibility if t.credibility is not None else 1.0
            graph.replace_triple(tid, certainty=source.reliability * credibility)
    for tid in sorted(graph.triples):
        t = graph.triples.get(tid)
        if t is None or t.kind == KIND_MENTION:
            continue
        if len(t.provenance) == 1:
            (parent_id,) = t.provenance
            parent = graph.triples.get(parent_id)
            if parent is not None and parent.kind == KIND_MENTION:
                graph.replace_triple(tid, certainty=parent.certainty)
                continue
        graph.drop_triple(tid)
    graph.composites.clear()
    associate(graph, config)


def propagate_feedback(graph: UKGraph, verdict: Verdict | str,
                       config: FusionConfig) -> PropagationReport:
    """Adjust source reliabilities per the verdict and recompute the graph.

    confirmed: every source behind the supporting triples moves reliability
    toward 1 by alpha * (1 - r).  infirmed: every source behind the
    contradicting triples is scaled down by (1 - alpha).  Mentions are then
    repriced, the derived layer rebuilt, and facts reclassified; facts whose
    recomputed certainty falls to or below the threshold come out demoted.
    """
    if isinstance(verdict, str):
        if verdict not in graph.verdicts:
            raise UnknownIdError(f"unknown verdict {verdict!r}")
        verdict = graph.verdicts[verdict]
    if verdict.status not in (STATUS_CONFIRMED, STATUS_INFIRMED):
        raise VerdictNotActionableError(
            f"verdict {verdict.id} is {verdict.status}; nothing to propagate")
    if verdict.propagated:
        raise InvariantViolationError(f"verdict {verdict.id} has already been propagated")

    triple_ids = verdict.supporting if verdict.status == STATUS_CONFIRMED \
        else verdict.contradicting
    sources: set[str] = set()
    for tid in triple_ids:
        _, src = graph.provenance_closure(tid)
        sources.update(src)

    report = PropagationReport(verdict_id=verdict.id, direction=verdict.status)
    alpha = config.alpha
    for sid in sorted(sources):
        before = graph.sources[sid].reliability
        if verdict.status == STATUS_CONFIRMED:
            after = before + alpha * (1.0 - before)
        else:
            after = before * (1.0 - alpha)
        graph.set_reliability(sid, after)
        graph.log("reliability", source=sid, before=before, after=after,
                  verdict=verdict.id)
        report.reliability_changes.append(ReliabilityChange(sid, before, after))

    facts_before = {t.key(): t for t in graph.facts()}
    _recompute_from_mentions(graph, config)
    establish(graph, config)
    still_fact = {t.key() for t in graph.facts()}
    for key, old in sorted(facts_before.items(), key=lambda kv: str(kv[0])):
        if key not in still_fact:
            now = graph.derived_by_key().get(key)
            report.demoted_facts.append({
                "triple": old.id,
                "subject": key[0], "predicate": key[1], "object": key[2],
                "certainty_before": old.certainty,
                "certainty_after": now.certainty if now else None,
            })

    verdict.propagated = True
    graph.log("propagate", verdict=verdict.id, direction=verdict.status,
              sources=sorted(sources))
    logger.info("propagated %s verdict %s across %d sources (%d facts demoted)",
                verdict.status, verdict.id, len(sources), len(report.demoted_facts))
    return report
