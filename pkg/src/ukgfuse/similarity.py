"""Per-domain similarity functions and entity resolution.

Resolution decides which entity ids refer to the same real-world subject:
two entities merge when their labels are similar enough AND they are involved
with at least one common predicate (so namesakes in unrelated contexts stay
apart).  Merging is transitive; every merge class maps onto one canonical id.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .editdist import edit_distance
from .errors import InvariantViolationError
from .model import DOMAIN_ENTITY, UKGraph, check_unit

SIM_EXACT = "exact"
SIM_EDIT = "normalized-edit-distance"
SIM_NUMERIC = "numeric-proximity"
SIM_FUNCTIONS = (SIM_EXACT, SIM_EDIT, SIM_NUMERIC)


@dataclass(frozen=True)
class SimilarityConfig:
    """Which similarity function applies to entity labels, and when to merge."""

    merge_threshold: float = 0.85
    label_function: str = SIM_EDIT
    window: float = 1.0

    def __post_init__(self):
        check_unit(self.merge_threshold, "merge_threshold")
        if self.label_function not in SIM_FUNCTIONS:
            raise InvariantViolationError(
                f"unknown similarity function {self.label_function!r}")
        if self.window <= 0:
            raise InvariantViolationError("numeric-proximity window must be > 0")

    def to_dict(self) -> dict:
        return {
            "merge_threshold": self.merge_threshold,
            "label_function": self.label_function,
            "window": self.window,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SimilarityConfig":
        return cls(
            merge_threshold=data.get("merge_threshold", 0.85),
            label_function=data.get("label_function", SIM_EDIT),
            window=data.get("window", 1.0),
        )


def _normalize(s: str) -> str:
    # locale-naive: strip accents, fold case
    decomposed = unicodedata.normalize("NFKD", s)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    return stripped.casefold()


def sim_string(a: str, b: str) -> float:
    """1 - editDistance/max(len), on case-folded accent-stripped text."""
    na, nb = _normalize(a), _normalize(b)
    if not na and not nb:
        return 1.0
    return 1.0 - edit_distance(na, nb) / max(len(na), len(nb))


def sim_exact(a, b) -> float:
    return 1.0 if a == b else 0.0


def sim_numeric(a: float, b: float, window: float) -> float:
    if window <= 0:
        raise InvariantViolationError("numeric-proximity window must be > 0")
    return max(0.0, 1.0 - abs(a - b) / window)


def label_similarity(a: str, b: str, config: SimilarityConfig) -> float:
    if config.label_function == SIM_EXACT:
        return sim_exact(a, b)
    if config.label_function == SIM_NUMERIC:
        return sim_numeric(float(a), float(b), config.window)
    return sim_string(a, b)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the lexicographically smaller id as the class representative
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _predicate_signature(graph: UKGraph) -> dict[str, set[str]]:
    """Predicates each entity is involved with (as subject, or as entity object)."""
    sig: dict[str, set[str]] = {eid: set() for eid in graph.entities}
    for t in graph.triples.values():
        sig.setdefault(t.subject, set()).add(t.predicate)
        pred = graph.predicates.get(t.predicate)
        if pred is not None and pred.value_domain == DOMAIN_ENTITY:
            sig.setdefault(str(t.object), set()).add(t.predicate)
    return sig


def resolve_entities(graph: UKGraph, config: SimilarityConfig) -> dict[str, str]:
    """Partition entities into merge classes; returns id -> canonical id.

    The map is total over registered entities and idempotent (canonical ids
    map to themselves).
    """
    ids = sorted(graph.entities)
    sig = _predicate_signature(graph)
    uf = _UnionFind(ids)
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            if not (sig.get(a, set()) & sig.get(b, set())):
                continue
            sim = label_similarity(graph.entities[a].label, graph.entities[b].label, config)
            if sim >= config.merge_threshold:
                uf.union(a, b)
    # canonical id = smallest id of the class
    classes: dict[str, list[str]] = {}
    for eid in ids:
        classes.setdefault(uf.find(eid), []).append(eid)
    merge_map: dict[str, str] = {}
    for members in classes.values():
        canon = min(members)
        for eid in members:
            merge_map[eid] = canon
    return merge_map
