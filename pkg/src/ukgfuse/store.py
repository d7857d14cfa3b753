"""JSON-lines persistence of graph states, plus the mention input format.

An archive holds one tagged record per line: a header first, then config,
sources, taxonomies, predicates, entities, merges, triples, composites,
hypotheses, verdicts and audit entries, each block ordered by id so archives
diff cleanly.  Mention input files are JSON-lines of
{"s": ..., "p": ..., "o": ..., "credibility": ...}.
"""

from __future__ import annotations

import json
import logging
import os

from .errors import IntegrityError, ParseError, UnknownIdError, VersionMismatchError
from .model import (
    KIND_MENTION,
    AuditEntry,
    CompositeFactoid,
    Entity,
    Hypothesis,
    Predicate,
    Source,
    Statement,
    TriplePattern,
    UKGraph,
    UncertainTriple,
)
from .pipeline import Binding, FusionConfig, Verdict
from .taxonomy import Taxonomy

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def integrity_check(graph: UKGraph) -> None:
    """Verify every reference a triple carries resolves inside the state."""
    for t in graph.triples.values():
        for pid in t.provenance:
            if pid not in graph.triples:
                raise IntegrityError(f"triple {t.id} has dangling provenance id {pid!r}")
        if t.kind == KIND_MENTION and t.source not in graph.sources:
            raise IntegrityError(f"mention {t.id} references unknown source {t.source!r}")
        pred = graph.predicates.get(t.predicate)
        if pred is None:
            raise IntegrityError(f"triple {t.id} references undeclared predicate {t.predicate!r}")
        tax_name = pred.taxonomy_name
        if tax_name is not None:
            tax = graph.taxonomies.get(tax_name)
            if tax is None:
                raise IntegrityError(f"predicate {pred.name!r} references missing taxonomy")
            if t.object not in tax:
                raise IntegrityError(
                    f"triple {t.id} object {t.object!r} missing from taxonomy {tax_name!r}")
    for comp in graph.composites.values():
        for mid in comp.members:
            if mid not in graph.triples:
                raise IntegrityError(f"composite {comp.id} has dangling member {mid!r}")


def _triple_record(t: UncertainTriple) -> dict:
    rec = {
        "record": "triple", "id": t.id, "kind": t.kind,
        "s": t.subject, "p": t.predicate, "o": t.object,
        "certainty": t.certainty, "provenance": sorted(t.provenance),
    }
    if t.source is not None:
        rec["source"] = t.source
    if t.credibility is not None:
        rec["credibility"] = t.credibility
    return rec


def graph_to_records(graph: UKGraph, config: FusionConfig) -> list[dict]:
    records: list[dict] = [{
        "record": "header", "format_version": FORMAT_VERSION,
        "config": config.to_dict(),
        "counters": {
            "mention": graph.mention_seq, "source": graph.source_seq,
            "hypothesis": graph.hypothesis_seq, "verdict": graph.verdict_seq,
        },
    }]
    for sid in sorted(graph.sources):
        s = graph.sources[sid]
        records.append({"record": "source", "id": s.id, "name": s.name,
                        "category": s.category, "reliability": s.reliability})
    for name in sorted(graph.taxonomies):
        records.append({"record": "taxonomy", **graph.taxonomies[name].to_dict()})
    for name in sorted(graph.predicates):
        p = graph.predicates[name]
        records.append({"record": "predicate", "name": p.name,
                        "domain": p.value_domain, "tau": p.tau})
    for eid in sorted(graph.entities):
        e = graph.entities[eid]
        records.append({"record": "entity", "id": e.id, "label": e.label})
    for frm in sorted(graph.merges):
        records.append({"record": "merge", "entity": frm, "canonical": graph.merges[frm]})
    for tid in sorted(graph.triples):
        records.append(_triple_record(graph.triples[tid]))
    for subject in sorted(graph.composites):
        c = graph.composites[subject]
        records.append({"record": "composite", "id": c.id, "subject": c.subject,
                        "members": sorted(c.members), "certainty": c.certainty})
    for hid in sorted(graph.hypotheses):
        h = graph.hypotheses[hid]
        records.append({
            "record": "hypothesis", "id": h.id, "theta": h.theta, "status": h.status,
            "patterns": [{"s": p.subject, "p": p.predicate, "o": p.object}
                         for p in h.patterns],
        })
    for vid in sorted(graph.verdicts):
        v = graph.verdicts[vid]
        records.append({
            "record": "verdict", "id": v.id, "hypothesis": v.hypothesis_id,
            "status": v.status, "score": v.score, "theta": v.theta,
            "bindings": [{"assignments": b.assignments, "score": b.score,
                          "triples": list(b.triple_ids)} for b in v.bindings],
            "supporting": list(v.supporting), "contradicting": list(v.contradicting),
            "propagated": v.propagated,
        })
    for entry in graph.audit:
        records.append({"record": "audit", "seq": entry.seq,
                        "action": entry.action, "details": entry.details})
    return records


def save(graph: UKGraph, config: FusionConfig, path: str) -> None:
    """Write the state as deterministic JSON-lines (integrity-checked first)."""
    integrity_check(graph)
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        for rec in graph_to_records(graph, config):
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    os.replace(tmp, path)
    logger.debug("saved state to %s", path)


def load(path: str) -> tuple[UKGraph, FusionConfig]:
    """Read an archive back into a validated graph state."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read archive {path}: {exc}") from exc
    records = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: invalid JSON record: {exc}") from exc
    if not records or records[0].get("record") != "header":
        raise ParseError(f"{path}: missing header record")
    header = records[0]
    if header.get("format_version") != FORMAT_VERSION:
        raise VersionMismatchError(
            f"{path}: format_version {header.get('format_version')!r} not supported")

    graph = UKGraph()
    counters = header.get("counters", {})
    graph.mention_seq = counters.get("mention", 0)
    graph.source_seq = counters.get("source", 0)
    graph.hypothesis_seq = counters.get("hypothesis", 0)
    graph.verdict_seq = counters.get("verdict", 0)
    config = FusionConfig.from_dict(header.get("config", {}))

    try:
        for rec in records[1:]:
            kind = rec.get("record")
            if kind == "source":
                graph.sources[rec["id"]] = Source(
                    id=rec["id"], name=rec["name"],
                    reliability=rec["reliability"], category=rec.get("category", ""))
            elif kind == "taxonomy":
                graph.taxonomies[rec["name"]] = Taxonomy.from_dict(rec)
            elif kind == "predicate":
                graph.predicates[rec["name"]] = Predicate(
                    name=rec["name"], value_domain=rec["domain"], tau=rec["tau"])
            elif kind == "entity":
                graph.entities[rec["id"]] = Entity(id=rec["id"], label=rec["label"])
            elif kind == "merge":
                graph.merges[rec["entity"]] = rec["canonical"]
            elif kind == "triple":
                graph.triples[rec["id"]] = UncertainTriple(
                    id=rec["id"], subject=rec["s"], predicate=rec["p"], object=rec["o"],
                    certainty=rec["certainty"], kind=rec["kind"],
                    provenance=frozenset(rec.get("provenance", ())),
                    source=rec.get("source"), credibility=rec.get("credibility"))
            elif kind == "composite":
                graph.composites[rec["subject"]] = CompositeFactoid(
                    id=rec["id"], subject=rec["subject"],
                    members=frozenset(rec["members"]), certainty=rec["certainty"])
            elif kind == "hypothesis":
                graph.hypotheses[rec["id"]] = Hypothesis(
                    id=rec["id"],
                    patterns=tuple(TriplePattern(subject=p["s"], predicate=p["p"],
                                                 object=p["o"])
                                   for p in rec["patterns"]),
                    theta=rec["theta"], status=rec.get("status", "untested"))
            elif kind == "verdict":
                graph.verdicts[rec["id"]] = Verdict(
                    id=rec["id"], hypothesis_id=rec["hypothesis"], status=rec["status"],
                    score=rec.get("score"), theta=rec["theta"],
                    bindings=[Binding(assignments=b["assignments"], score=b["score"],
                                      triple_ids=tuple(b["triples"]))
                              for b in rec.get("bindings", ())],
                    supporting=tuple(rec.get("supporting", ())),
                    contradicting=tuple(rec.get("contradicting", ())),
                    propagated=rec.get("propagated", False))
            elif kind == "audit":
                graph.audit.append(AuditEntry(seq=rec["seq"], action=rec["action"],
                                              details=rec["details"]))
            else:
                raise ParseError(f"{path}: unknown record kind {kind!r}")
    except KeyError as exc:
        raise ParseError(f"{path}: record missing field {exc}") from exc

    integrity_check(graph)
    return graph, config


def import_mentions(graph: UKGraph, path: str, source_id: str) -> list[Statement]:
    """Parse a mention input file for the given registered source."""
    if source_id not in graph.sources:
        raise UnknownIdError(f"unknown source {source_id!r}")
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read mention file {path}: {exc}") from exc
    statements: list[Statement] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        try:
            subject, predicate, obj = rec["s"], rec["p"], rec["o"]
            credibility = rec["credibility"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"{path}:{lineno}: statement missing field {exc}") from exc
        if not isinstance(credibility, (int, float)) or isinstance(credibility, bool) \
                or not 0.0 <= credibility <= 1.0:
            raise ParseError(
                f"{path}:{lineno}: credibility {credibility!r} outside [0, 1]")
        statements.append(Statement(subject=subject, predicate=predicate,
                                    object=obj, credibility=float(credibility)))
    return statements
