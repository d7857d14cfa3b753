"""Core data model: entities, predicates, sources, weighted triples, hypotheses.

A triple carries a certainty in [0, 1], a kind (mention / factoid / fact) and
a provenance set pointing at the triples it was derived from.  Mentions are
the only triples tied directly to a source; factoids and facts always reach
at least one mention through their provenance.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

from .errors import DomainMismatchError, InvariantViolationError, UnknownIdError
from .taxonomy import Taxonomy

if TYPE_CHECKING:  # pragma: no cover
    from .pipeline import Verdict

KIND_MENTION = "mention"
KIND_FACTOID = "factoid"
KIND_FACT = "fact"
KINDS = (KIND_MENTION, KIND_FACTOID, KIND_FACT)

DOMAIN_ENTITY = "entity"
DOMAIN_STRING = "string"
DOMAIN_INT = "int"
DOMAIN_YEAR = "year"
TAXONOMY_DOMAIN_PREFIX = "taxonomy:"

# Object values are either entity ids / taxonomy nodes / free strings (str)
# or integers (year, int).  The predicate's value domain says which.
Value = str | int


def check_unit(value, name: str = "certainty", exc=InvariantViolationError) -> float:
    """Validate a number in [0, 1] and return it as float."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise exc(f"{name} must be a number in [0, 1], got {value!r}")
    if not 0.0 <= value <= 1.0:
        raise exc(f"{name} must lie in [0, 1], got {value!r}")
    return float(value)


@dataclass(frozen=True)
class Entity:
    id: str
    label: str

    def __post_init__(self):
        if not self.id:
            raise InvariantViolationError("entity id must be non-empty")


@dataclass(frozen=True)
class Predicate:
    """A relation name with its value domain and consistency distance threshold."""

    name: str
    value_domain: str = DOMAIN_STRING
    tau: int = 0

    def __post_init__(self):
        if self.tau < 0:
            raise InvariantViolationError(f"tau must be >= 0, got {self.tau}")

    @property
    def taxonomy_name(self) -> str | None:
        if self.value_domain.startswith(TAXONOMY_DOMAIN_PREFIX):
            return self.value_domain[len(TAXONOMY_DOMAIN_PREFIX):]
        return None


@dataclass(frozen=True)
class Source:
    """A registered origin of mentions, trusted to some degree."""

    id: str
    name: str
    reliability: float
    category: str = ""

    def __post_init__(self):
        check_unit(self.reliability, "reliability")


@dataclass(frozen=True)
class UncertainTriple:
    """One weighted (subject, predicate, object) statement.

    kind=mention: provenance empty, source set, credibility records the
    certainty stated inside the source itself (reliability is factored into
    `certainty` at capture time).
    kind=factoid/fact: provenance non-empty, no direct source.
    """

    id: str
    subject: str
    predicate: str
    object: Value
    certainty: float
    kind: str
    provenance: frozenset[str] = frozenset()
    source: str | None = None
    credibility: float | None = None

    def __post_init__(self):
        check_unit(self.certainty, "certainty")
        if self.kind not in KINDS:
            raise InvariantViolationError(f"unknown triple kind {self.kind!r}")
        if self.kind == KIND_MENTION:
            if self.provenance:
                raise InvariantViolationError("a mention cannot carry provenance")
            if self.source is None:
                raise InvariantViolationError("a mention must be linked to a source")
        else:
            if not self.provenance:
                raise InvariantViolationError(f"a {self.kind} requires non-empty provenance")
            if self.source is not None:
                raise InvariantViolationError(f"a {self.kind} cannot be linked directly to a source")

    def key(self) -> tuple[str, str, Value]:
        return (self.subject, self.predicate, self.object)


@dataclass(frozen=True)
class TriplePattern:
    """One conjunct of a hypothesis; subject/object starting with '?' are variables."""

    subject: str
    predicate: str
    object: Value

    @staticmethod
    def is_var(term) -> bool:
        return isinstance(term, str) and term.startswith("?")


STATUS_UNTESTED = "untested"
STATUS_CONFIRMED = "confirmed"
STATUS_INFIRMED = "infirmed"
STATUS_UNDETERMINED = "undetermined"


@dataclass
class Hypothesis:
    """A conjunction of triple patterns with an acceptance threshold."""

    id: str
    patterns: tuple[TriplePattern, ...]
    theta: float
    status: str = STATUS_UNTESTED

    def __post_init__(self):
        if not self.patterns:
            raise InvariantViolationError("a hypothesis needs at least one pattern")
        check_unit(self.theta, "theta")


@dataclass(frozen=True)
class CompositeFactoid:
    """All statements currently attached to one subject, taken together."""

    id: str
    subject: str
    members: frozenset[str]
    certainty: float

    def __post_init__(self):
        if len(self.members) < 2:
            raise InvariantViolationError("a composite factoid needs at least two members")
        check_unit(self.certainty, "certainty")


@dataclass(frozen=True)
class Statement:
    """One parsed input statement destined for capture."""

    subject: str
    predicate: str
    object: Value
    credibility: float


@dataclass
class AuditEntry:
    seq: int
    action: str
    details: dict


def _derived_id(subject: str, predicate: str, obj: Value, provenance) -> str:
    material = "|".join([subject, predicate, repr(obj), *sorted(provenance)])
    return "d" + hashlib.sha1(material.encode("utf-8")).hexdigest()[:12]


@dataclass
class UKGraph:
    """Mutable container for one fused graph state.

    The value types above are immutable; all mutation funnels through this
    class (and the pipeline functions that drive it).
    """

    entities: dict[str, Entity] = field(default_factory=dict)
    predicates: dict[str, Predicate] = field(default_factory=dict)
    taxonomies: dict[str, Taxonomy] = field(default_factory=dict)
    sources: dict[str, Source] = field(default_factory=dict)
    triples: dict[str, UncertainTriple] = field(default_factory=dict)
    composites: dict[str, CompositeFactoid] = field(default_factory=dict)
    hypotheses: dict[str, Hypothesis] = field(default_factory=dict)
    verdicts: dict[str, "Verdict"] = field(default_factory=dict)
    merges: dict[str, str] = field(default_factory=dict)
    audit: list[AuditEntry] = field(default_factory=list)
    mention_seq: int = 0
    source_seq: int = 0
    hypothesis_seq: int = 0
    verdict_seq: int = 0

    # -- registration ------------------------------------------------------

    def add_source(self, name: str, reliability: float, category: str = "",
                   id: str | None = None) -> Source:
        if id is None:
            self.source_seq += 1
            id = f"s{self.source_seq}"
        if id in self.sources:
            raise InvariantViolationError(f"source id {id!r} already registered")
        src = Source(id=id, name=name, reliability=check_unit(reliability, "reliability"),
                     category=category)
        self.sources[id] = src
        return src

    def set_reliability(self, source_id: str, reliability: float) -> Source:
        if source_id not in self.sources:
            raise UnknownIdError(f"unknown source {source_id!r}")
        src = replace(self.sources[source_id], reliability=check_unit(reliability, "reliability"))
        self.sources[source_id] = src
        return src

    def ensure_entity(self, entity_id: str, label: str | None = None) -> Entity:
        if entity_id not in self.entities:
            self.entities[entity_id] = Entity(id=entity_id, label=label or entity_id)
        return self.entities[entity_id]

    def add_taxonomy(self, tax: Taxonomy) -> Taxonomy:
        if tax.name in self.taxonomies:
            raise InvariantViolationError(f"taxonomy {tax.name!r} already registered")
        self.taxonomies[tax.name] = tax
        return tax

    def declare_predicate(self, name: str, value_domain: str = DOMAIN_STRING,
                          tau: int = 0) -> Predicate:
        if name in self.predicates:
            raise InvariantViolationError(f"predicate {name!r} already declared")
        if value_domain.startswith(TAXONOMY_DOMAIN_PREFIX):
            tax_name = value_domain[len(TAXONOMY_DOMAIN_PREFIX):]
            if tax_name not in self.taxonomies:
                raise UnknownIdError(f"predicate {name!r} references unknown taxonomy {tax_name!r}")
        elif value_domain not in (DOMAIN_ENTITY, DOMAIN_STRING, DOMAIN_INT, DOMAIN_YEAR):
            raise DomainMismatchError(f"unknown value domain {value_domain!r}")
        pred = Predicate(name=name, value_domain=value_domain, tau=tau)
        self.predicates[name] = pred
        return pred

    def _auto_predicate(self, name: str, obj: Value) -> Predicate:
        domain = DOMAIN_INT if isinstance(obj, int) and not isinstance(obj, bool) else DOMAIN_STRING
        return self.declare_predicate(name, domain)

    def canonical(self, entity_id: str) -> str:
        return self.merges.get(entity_id, entity_id)

    # -- triples -----------------------------------------------------------

    def _validate_object(self, pred: Predicate, obj: Value) -> None:
        domain = pred.value_domain
        if domain == DOMAIN_ENTITY:
            if not isinstance(obj, str) or not obj:
                raise DomainMismatchError(
                    f"predicate {pred.name!r} expects an entity id, got {obj!r}")
        elif domain in (DOMAIN_INT, DOMAIN_YEAR):
            if isinstance(obj, bool) or not isinstance(obj, int):
                raise DomainMismatchError(
                    f"predicate {pred.name!r} expects an integer, got {obj!r}")
        elif domain == DOMAIN_STRING:
            if not isinstance(obj, str):
                raise DomainMismatchError(
                    f"predicate {pred.name!r} expects a string, got {obj!r}")
        else:
            tax = self.taxonomies.get(pred.taxonomy_name or "")
            if tax is None:
                raise UnknownIdError(
                    f"predicate {pred.name!r} references unknown taxonomy {pred.taxonomy_name!r}")
            if obj not in tax:
                raise DomainMismatchError(
                    f"value {obj!r} is not a node of taxonomy {tax.name!r}")

    def new_triple(self, subject: str, predicate: str, obj: Value, certainty: float,
                   kind: str, provenance=(), source: str | None = None,
                   credibility: float | None = None) -> UncertainTriple:
        """Create and register a triple, enforcing kind/provenance/source invariants."""
        pred = self.predicates.get(predicate)
        if pred is None:
            pred = self._auto_predicate(predicate, obj)
        self._validate_object(pred, obj)

        prov = frozenset(provenance)
        for pid in prov:
            if pid not in self.triples:
                raise UnknownIdError(f"provenance id {pid!r} does not exist")
        if kind == KIND_MENTION:
            if source is None or source not in self.sources:
                raise UnknownIdError(f"mention requires a registered source, got {source!r}")
            self.mention_seq += 1
            triple_id = f"m{self.mention_seq:06d}"
        else:
            triple_id = _derived_id(subject, predicate, obj, prov)
            if triple_id in self.triples:
                raise InvariantViolationError(
                    f"derived triple {triple_id} ({subject},{predicate},{obj!r}) already exists")

        self.ensure_entity(subject)
        if pred.value_domain == DOMAIN_ENTITY:
            self.ensure_entity(obj)  # type: ignore[arg-type]

        triple = UncertainTriple(
            id=triple_id, subject=subject, predicate=predicate, object=obj,
            certainty=check_unit(certainty, "certainty"), kind=kind,
            provenance=prov, source=source, credibility=credibility,
        )
        self.triples[triple_id] = triple
        return triple

    def replace_triple(self, triple_id: str, **changes) -> UncertainTriple:
        if triple_id not in self.triples:
            raise UnknownIdError(f"unknown triple {triple_id!r}")
        triple = replace(self.triples[triple_id], **changes)
        self.triples[triple_id] = triple
        return triple

    def drop_triple(self, triple_id: str) -> None:
        del self.triples[triple_id]

    def provenance_closure(self, triple_id: str) -> tuple[set[str], set[str]]:
        """Transitive closure down to mentions; returns (mention ids, source ids)."""
        if triple_id not in self.triples:
            raise UnknownIdError(f"unknown triple {triple_id!r}")
        mentions: set[str] = set()
        sources: set[str] = set()
        stack = [triple_id]
        seen: set[str] = set()
        while stack:
            tid = stack.pop()
            if tid in seen:
                continue
            seen.add(tid)
            t = self.triples.get(tid)
            if t is None:
                raise UnknownIdError(f"dangling provenance id {tid!r}")
            if t.kind == KIND_MENTION:
                mentions.add(t.id)
                sources.add(t.source)  # type: ignore[arg-type]
            else:
                stack.extend(t.provenance)
        return mentions, sources

    # -- queries -----------------------------------------------------------

    def mentions(self) -> list[UncertainTriple]:
        return [t for t in self.triples.values() if t.kind == KIND_MENTION]

    def derived(self) -> list[UncertainTriple]:
        return [t for t in self.triples.values() if t.kind != KIND_MENTION]

    def facts(self) -> list[UncertainTriple]:
        return [t for t in self.triples.values() if t.kind == KIND_FACT]

    def derived_by_key(self) -> dict[tuple[str, str, Value], UncertainTriple]:
        return {t.key(): t for t in self.triples.values() if t.kind != KIND_MENTION}

    def effective_tau(self, predicate: str, overrides: dict[str, int] | None = None) -> int:
        if overrides and predicate in overrides:
            return overrides[predicate]
        pred = self.predicates.get(predicate)
        return pred.tau if pred else 0

    def log(self, action: str, **details) -> AuditEntry:
        seq = self.audit[-1].seq + 1 if self.audit else 1
        entry = AuditEntry(seq=seq, action=action, details=details)
        self.audit.append(entry)
        return entry
