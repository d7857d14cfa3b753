"""Rooted concept trees with node levels, lowest common ancestor and concept distance.

A taxonomy organizes one value domain (places, diploma kinds, ...) as a tree.
The root sits at level 0 and each child one level below its parent.  Concept
distance between two nodes is the smaller of their two ascent distances to
their lowest common ancestor, so a value close to the generalization of the
pair scores a small distance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (
    DuplicateNodeError,
    NotAnAncestorError,
    ParseError,
    SecondRootError,
    UnknownIdError,
)


@dataclass
class Taxonomy:
    """A rooted tree over a value domain. Immutable after construction."""

    name: str
    root: str | None = None
    parent: dict[str, str] = field(default_factory=dict)
    level: dict[str, int] = field(default_factory=dict)

    def __contains__(self, node: str) -> bool:
        return node in self.level

    @property
    def nodes(self) -> set[str]:
        return set(self.level)

    def add_node(self, node: str, parent: str | None = None) -> "Taxonomy":
        """Insert a node under `parent` (or as the root when parent is None)."""
        if node in self.level:
            raise DuplicateNodeError(f"node {node!r} already in taxonomy {self.name!r}")
        if parent is None:
            if self.root is not None:
                raise SecondRootError(
                    f"taxonomy {self.name!r} already rooted at {self.root!r}"
                )
            self.root = node
            self.level[node] = 0
        else:
            if parent not in self.level:
                raise UnknownIdError(f"unknown parent node {parent!r} in taxonomy {self.name!r}")
            self.parent[node] = parent
            self.level[node] = self.level[parent] + 1
        return self

    def _require(self, node: str) -> None:
        if node not in self.level:
            raise UnknownIdError(f"unknown node {node!r} in taxonomy {self.name!r}")

    def ancestors(self, node: str) -> list[str]:
        """Chain from `node` up to the root, inclusive on both ends."""
        self._require(node)
        chain = [node]
        while node in self.parent:
            node = self.parent[node]
            chain.append(node)
        return chain

    def is_ancestor_or_equal(self, ancestor: str, node: str) -> bool:
        self._require(ancestor)
        return ancestor in self.ancestors(node)

    def lca(self, v1: str, v2: str) -> str:
        """Lowest common ancestor of two nodes (either node may be the answer)."""
        self._require(v1)
        self._require(v2)
        seen = set(self.ancestors(v1))
        node = v2
        while True:
            if node in seen:
                return node
            node = self.parent[node]  # root is always in seen, so this terminates

    def dist_a(self, x: str, y: str) -> int:
        """Ascent distance from `x` up to its ancestor-or-equal `y`."""
        self._require(x)
        self._require(y)
        if not self.is_ancestor_or_equal(y, x):
            raise NotAnAncestorError(
                f"{y!r} is not an ancestor of {x!r} in taxonomy {self.name!r}"
            )
        return self.level[x] - self.level[y]

    def concept_distance(self, v1: str, v2: str) -> int:
        """min over the two ascent distances to the lowest common ancestor."""
        a = self.lca(v1, v2)
        return min(self.dist_a(v1, a), self.dist_a(v2, a))

    def to_dict(self) -> dict:
        edges = sorted([p, c] for c, p in self.parent.items())
        return {"name": self.name, "root": self.root, "edges": edges}

    @classmethod
    def from_dict(cls, data: dict) -> "Taxonomy":
        """Build from {"name", "root", "edges": [[parent, child], ...]} and validate."""
        try:
            name = data["name"]
            root = data["root"]
            edges = [(p, c) for p, c in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed taxonomy record: {exc}") from exc
        tax = cls(name=name)
        tax.add_node(root)
        pending = list(edges)
        while pending:
            progressed = []
            for parent, child in pending:
                if parent in tax.level:
                    tax.add_node(child, parent)
                    progressed.append((parent, child))
            if not progressed:
                orphans = sorted({p for p, _ in pending})
                raise UnknownIdError(
                    f"taxonomy {name!r}: parents never defined: {orphans}"
                )
            pending = [e for e in pending if e not in progressed]
        return tax


def load_taxonomy(path: str) -> Taxonomy:
    """Load and validate a taxonomy JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read taxonomy file {path}: {exc}") from exc
    return Taxonomy.from_dict(data)
