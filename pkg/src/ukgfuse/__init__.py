"""Uncertain knowledge-graph fusion for source-critical research.

Weighted statements captured from sources of differing reliability are fused
into factoids and facts by taxonomy-aware composition rules; hypotheses are
tested against the fused graph and their verdicts propagate back into the
reliability of the sources they rest on.
"""

from .errors import (
    CredibilityRangeError,
    DomainMismatchError,
    DuplicateNodeError,
    IntegrityError,
    InvariantViolationError,
    NonTerminationError,
    NotAnAncestorError,
    ParseError,
    SecondRootError,
    UKGError,
    UnknownIdError,
    VerdictNotActionableError,
    VersionMismatchError,
)
from .fusion import (
    AggregatorKind,
    FactReport,
    RuleCandidate,
    aggreg_consistent,
    aggreg_consistent_many,
    aggreg_inconsistent,
    apply_rule1,
    apply_rule2,
    build_facts,
)
from .model import (
    KIND_FACT,
    KIND_FACTOID,
    KIND_MENTION,
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
from .pipeline import (
    AssociateReport,
    Binding,
    FusionConfig,
    PropagationReport,
    ProvenanceNode,
    Verdict,
    apply_declarations,
    associate,
    capture,
    decompose,
    establish,
    make_hypothesis,
    propagate_feedback,
    test_hypothesis,
)
from .similarity import SimilarityConfig, resolve_entities, sim_exact, sim_numeric, sim_string
from .store import import_mentions, integrity_check, load, save
from .taxonomy import Taxonomy, load_taxonomy

__version__ = "0.1.0"
