"""Path-based features over the biomedical literature graph.

Drug pairs are featurized by the relation labels along the undirected
simple paths connecting them: entry (position p, relation rel) counts the
paths whose p-th edge carries rel (positions are left-aligned, i.e. step
index counted from the first drug).  The vector has length n*r for maximum
path length n over a vocabulary of r relation types.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, NamedTuple

import numpy as np

DEFAULT_PATH_CAP = 10_000


class GraphError(ValueError):
    pass


def load_vocabulary(path=None) -> tuple[str, ...]:
    """Relation vocabulary, one name per line; defaults to the shipped list."""
    if path is None:
        ref = resources.files("ddikit.data").joinpath("relations.txt")
        text = ref.read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    vocab = tuple(
        line.strip() for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )
    if len(vocab) != len(set(vocab)):
        raise GraphError("duplicate relation names in vocabulary")
    return vocab


@dataclass(frozen=True)
class LiteratureGraph:
    """Undirected multigraph with relation-labeled edges."""

    nodes: frozenset[str]
    adjacency: dict  # node -> tuple of (neighbor, relation)
    vocabulary: tuple[str, ...]

    @property
    def relation_count(self) -> int:
        return len(self.vocabulary)

    def neighbors(self, node: str):
        return self.adjacency.get(node, ())

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, str]],
                   vocabulary: tuple[str, ...] | None = None) -> "LiteratureGraph":
        vocabulary = vocabulary or load_vocabulary()
        known = set(vocabulary)
        adjacency: dict[str, list] = {}
        nodes = set()
        for src, relation, dst in edges:
            if relation not in known:
                raise GraphError(f"relation {relation!r} not in vocabulary")
            if src == dst:
                raise GraphError(f"self-loop on {src!r}")
            nodes.add(src)
            nodes.add(dst)
            adjacency.setdefault(src, []).append((dst, relation))
            adjacency.setdefault(dst, []).append((src, relation))
        frozen = {k: tuple(sorted(v)) for k, v in adjacency.items()}
        return cls(nodes=frozenset(nodes), adjacency=frozen, vocabulary=vocabulary)

    @classmethod
    def from_csv(cls, path, vocabulary: tuple[str, ...] | None = None) -> "LiteratureGraph":
        """Load an edge list ``src,relation,dst``."""
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            edges = [(r["src"], r["relation"], r["dst"]) for r in reader]
        return cls.from_edges(edges, vocabulary)


class PathSet(NamedTuple):
    paths: list[tuple[str, ...]]  # ordered relation-label sequences
    truncated: bool


def enumerate_paths(graph: LiteratureGraph, a: str, b: str, max_len: int,
                    cap: int = DEFAULT_PATH_CAP) -> PathSet:
    """All simple undirected paths (1..max_len edges) from a to b, as their
    relation-label sequences; stops at `cap` paths and sets the flag."""
    if a == b:
        raise GraphError("path endpoints must differ")
    for node in (a, b):
        if node not in graph.nodes:
            raise GraphError(f"node {node!r} not in graph")
    paths: list[tuple[str, ...]] = []
    truncated = False

    def dfs(node, visited, labels):
        nonlocal truncated
        if truncated:
            return
        for neighbor, relation in graph.neighbors(node):
            if truncated:
                return
            if neighbor == b:
                paths.append(tuple(labels) + (relation,))
                if len(paths) >= cap:
                    truncated = True
                    return
            elif neighbor not in visited and len(labels) + 1 < max_len:
                visited.add(neighbor)
                labels.append(relation)
                dfs(neighbor, visited, labels)
                labels.pop()
                visited.remove(neighbor)

    dfs(a, {a}, [])
    return PathSet(paths=paths, truncated=truncated)


def featurize_pair(paths, n: int, vocabulary: tuple[str, ...]) -> np.ndarray:
    """Position-major count vector of length n*r:
    entry (p-1)*r + index(rel) counts paths whose p-th relation is rel."""
    if isinstance(paths, PathSet):
        paths = paths.paths
    index = {rel: i for i, rel in enumerate(vocabulary)}
    r = len(vocabulary)
    vec = np.zeros(n * r, dtype=np.int64)
    for labels in paths:
        if len(labels) > n:
            raise GraphError(f"path of length {len(labels)} exceeds n={n}")
        for p, rel in enumerate(labels):
            if rel not in index:
                raise GraphError(f"relation {rel!r} not in vocabulary")
            vec[p * r + index[rel]] += 1
    return vec


def build_dataset(graph: LiteratureGraph, pairs, gold_pairs, n: int):
    """One labeled feature row per drug pair.

    gold_pairs is order-insensitive; label 1 iff the pair is gold.  Returns
    (X, y, pairs) with X of shape (len(pairs), n*r).
    """
    gold = {frozenset(p) for p in gold_pairs}
    rows = []
    labels = []
    kept = []
    for a, b in pairs:
        if a == b:
            raise GraphError("pairs must be of distinct drugs")
        rows.append(featurize_pair(enumerate_paths(graph, a, b, n), n, graph.vocabulary))
        labels.append(1 if frozenset((a, b)) in gold else 0)
        kept.append((a, b))
    X = np.vstack(rows) if rows else np.zeros((0, n * graph.relation_count), dtype=np.int64)
    return X, np.array(labels, dtype=np.int64), kept


def load_gold_pairs(path) -> set[frozenset]:
    """Load ``cui_a,cui_b`` gold interaction pairs."""
    with open(path, newline="", encoding="utf-8") as fh:
        return {frozenset((r["cui_a"], r["cui_b"])) for r in csv.DictReader(fh)}
