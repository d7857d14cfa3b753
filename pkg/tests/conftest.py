"""Shared fixtures: the two reference taxonomies, configs, and canned graphs."""

import json

import pytest

from ukgfuse import (
    FusionConfig,
    Statement,
    Taxonomy,
    UKGraph,
    apply_declarations,
    associate,
    capture,
    establish,
)

PLACES = {
    "name": "places",
    "root": "Europe",
    "edges": [
        ["Europe", "France"],
        ["France", "ParisianRegion"],
        ["ParisianRegion", "Paris"],
        ["ParisianRegion", "Versailles"],
        ["Europe", "Italy"],
        ["Italy", "Roma"],
    ],
}

DIPLOMAS = {
    "name": "diplomas",
    "root": "diploma",
    "edges": [["diploma", "master"], ["diploma", "doctorate"]],
}

GOLDEN_CONFIG = {
    "aggregators": {"consistent": "noisy-or", "inconsistent": "discount"},
    "pi": 0.9,
    "alpha": 0.1,
    "theta": 0.9,
    "auto_fact_reliability": 1.0,
    "tau": {"bornIn": 1, "isA": 0},
    "predicates": {
        "graduates": {"domain": "entity"},
        "isA": {"domain": "taxonomy:diplomas", "tau": 0},
        "awardedIn": {"domain": "year"},
        "bornIn": {"domain": "taxonomy:places", "tau": 1},
    },
    "taxonomies": [DIPLOMAS, PLACES],
}

S1_STATEMENTS = [
    Statement("ThomasAquinas", "graduates", "diploma2", 1.0),
    Statement("diploma2", "isA", "master", 1.0),
]
S2_STATEMENTS = [Statement("diploma2", "awardedIn", 1256, 1.0)]
S3_STATEMENTS = [
    Statement("ThomasAquinas", "graduates", "diploma3", 1.0),
    Statement("diploma3", "isA", "doctorate", 0.4),
    Statement("diploma3", "awardedIn", 1256, 1.0),
]


@pytest.fixture
def places() -> Taxonomy:
    return Taxonomy.from_dict(PLACES)


@pytest.fixture
def diplomas() -> Taxonomy:
    return Taxonomy.from_dict(DIPLOMAS)


@pytest.fixture
def config() -> FusionConfig:
    return FusionConfig.from_dict(GOLDEN_CONFIG)


@pytest.fixture
def empty_graph(config) -> UKGraph:
    graph = UKGraph()
    apply_declarations(graph, config)
    return graph


def make_golden_graph(config) -> UKGraph:
    """Three sources on one historical figure; association not yet run."""
    graph = UKGraph()
    apply_declarations(graph, config)
    graph.add_source("S1", 0.9, id="S1")
    graph.add_source("S2", 0.8, id="S2")
    graph.add_source("S3", 0.9, id="S3")
    capture(graph, "S1", S1_STATEMENTS, config)
    capture(graph, "S2", S2_STATEMENTS, config)
    capture(graph, "S3", S3_STATEMENTS, config)
    return graph


@pytest.fixture
def golden_graph(config) -> UKGraph:
    return make_golden_graph(config)


@pytest.fixture
def fused_graph(config) -> UKGraph:
    graph = make_golden_graph(config)
    associate(graph, config)
    establish(graph, config)
    return graph


@pytest.fixture
def end_state_graph(config) -> UKGraph:
    """The canonical fused end state, built directly as derived triples."""
    graph = UKGraph()
    apply_declarations(graph, config)
    graph.add_source("S1", 0.9, id="S1")
    m1 = graph.new_triple("ThomasAquinas", "graduates", "diploma2", 0.9, "mention",
                          source="S1", credibility=1.0)
    m2 = graph.new_triple("diploma2", "isA", "master", 0.9, "mention",
                          source="S1", credibility=1.0)
    m3 = graph.new_triple("diploma2", "awardedIn", 1256, 0.9, "mention",
                          source="S1", credibility=1.0)
    graph.new_triple("ThomasAquinas", "graduates", "diploma2", 0.99, "factoid",
                     provenance={m1.id})
    graph.new_triple("diploma2", "isA", "master", 0.58, "factoid",
                     provenance={m2.id})
    graph.new_triple("diploma2", "awardedIn", 1256, 0.98, "factoid",
                     provenance={m3.id})
    return graph


def write_jsonl(path, rows) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    return str(path)
