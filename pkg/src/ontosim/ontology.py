"""Concept/relation/mapping file parsing and multi-vocabulary merging.

Input files are plain CSV so that licensed terminology releases never ship
with the toolkit; users export three flavors:

    concepts:  header ``id,label``   (one file per source vocabulary)
    relations: header ``child,parent``  (is-a direction child -> parent)
    mappings:  header ``left,right``  (cross-vocabulary equivalence links)

``merge_views`` fuses mapped concepts, attaches a virtual root above every
parentless concept and verifies the result is a DAG.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .errors import FormatError, GraphError

logger = logging.getLogger(__name__)

VIRTUAL_ROOT_ID = "__root__"
VIRTUAL_ROOT_VOCABULARY = "__virtual__"


@dataclass(frozen=True)
class Concept:
    """A node of one source vocabulary before merging."""

    id: str
    label: str
    vocabulary: str


@dataclass(frozen=True)
class OntologyView:
    """A merged, rooted, acyclic view over one or more vocabularies.

    After mapping fusion a node may carry several concept ids; nodes are
    represented by their member tuple (ids sorted) and addressed by the
    smallest member id (the canonical id). ``edges`` hold canonical ids.
    """

    concepts: dict[str, Concept]          # every loaded concept, by id
    groups: tuple[tuple[str, ...], ...]   # fused id groups, canonical order
    canonical: dict[str, str]             # any id -> canonical id
    edges: tuple[tuple[str, str], ...]    # (child, parent) canonical ids
    root: str                             # canonical id of the virtual root

    @property
    def node_count(self) -> int:
        return len(self.groups)


def _read_rows(stream: TextIO, expected_header: Sequence[str], kind: str):
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"{kind} file is empty, expected header "
                          f"{','.join(expected_header)}") from None
    header = [h.strip().lstrip("﻿") for h in header]
    if header != list(expected_header):
        raise FormatError(
            f"{kind} file has header {','.join(header)!r}, "
            f"expected {','.join(expected_header)!r}")
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(expected_header):
            raise FormatError(
                f"{kind} file line {lineno}: expected "
                f"{len(expected_header)} columns, got {len(row)}")
        yield lineno, row


def parse_concepts(stream: TextIO, vocabulary: str) -> list[Concept]:
    """Parse one vocabulary's concept CSV (header ``id,label``)."""
    concepts: list[Concept] = []
    seen: dict[str, int] = {}
    for lineno, (cid, label) in _read_rows(stream, ("id", "label"), "concept"):
        cid = cid.strip()
        if not cid:
            raise FormatError(f"concept file line {lineno}: empty id")
        if cid in seen:
            raise FormatError(
                f"concept file line {lineno}: duplicate id {cid!r} "
                f"(first seen on line {seen[cid]})")
        seen[cid] = lineno
        concepts.append(Concept(id=cid, label=label, vocabulary=vocabulary))
    return concepts


def parse_relations(stream: TextIO) -> tuple[list[tuple[str, str]], int]:
    """Parse a relation CSV (header ``child,parent``).

    Returns the deduplicated edge list in first-seen order plus the number
    of duplicate rows collapsed.
    """
    edges: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    duplicates = 0
    for lineno, (child, parent) in _read_rows(
            stream, ("child", "parent"), "relation"):
        child, parent = child.strip(), parent.strip()
        if child == parent:
            raise FormatError(
                f"relation file line {lineno}: self-loop {child!r}")
        edge = (child, parent)
        if edge in seen:
            duplicates += 1
            continue
        seen.add(edge)
        edges.append(edge)
    if duplicates:
        logger.warning("collapsed %d duplicate relation rows", duplicates)
    return edges, duplicates


def parse_mappings(stream: TextIO) -> list[tuple[str, str]]:
    """Parse a cross-vocabulary mapping CSV (header ``left,right``)."""
    links: list[tuple[str, str]] = []
    for _lineno, (left, right) in _read_rows(stream, ("left", "right"), "mapping"):
        links.append((left.strip(), right.strip()))
    return links


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        root = x
        while self.parent.get(root, root) != root:
            root = self.parent[root]
        while self.parent.get(x, x) != x:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the lexicographically smaller id as representative
            lo, hi = sorted((ra, rb))
            self.parent[hi] = lo


def _check_acyclic(nodes: Iterable[str], parents_of: dict[str, list[str]]) -> None:
    """Kahn's algorithm over parent edges; on failure report one cycle."""
    nodes = sorted(nodes)
    pending = {v: len(parents_of.get(v, ())) for v in nodes}
    children_of: dict[str, list[str]] = {}
    for v in nodes:
        for p in parents_of.get(v, ()):
            children_of.setdefault(p, []).append(v)
    queue = [v for v in nodes if pending[v] == 0]
    done = 0
    while queue:
        p = queue.pop()
        done += 1
        for c in children_of.get(p, ()):
            pending[c] -= 1
            if pending[c] == 0:
                queue.append(c)
    if done == len(nodes):
        return
    # every unprocessed node still has an unprocessed parent: walk until repeat
    start = min(v for v in nodes if pending[v] > 0)
    trail, seen_at = [start], {start: 0}
    while True:
        v = trail[-1]
        nxt = min(p for p in parents_of[v] if pending[p] > 0)
        if nxt in seen_at:
            cycle = trail[seen_at[nxt]:] + [nxt]
            raise GraphError("cycle detected: " + " -> ".join(cycle))
        seen_at[nxt] = len(trail)
        trail.append(nxt)


def merge_views(
    concept_lists: Sequence[Sequence[Concept]],
    edge_lists: Sequence[Sequence[tuple[str, str]]],
    mappings: Sequence[tuple[str, str]] = (),
) -> OntologyView:
    """Fuse vocabularies into one rooted DAG.

    Mapped concept pairs collapse into a single node (transitively); every
    parentless node gets an edge to a fresh virtual root; the result is
    checked for acyclicity.
    """
    concepts: dict[str, Concept] = {}
    for clist in concept_lists:
        for c in clist:
            if c.id == VIRTUAL_ROOT_ID:
                raise FormatError(
                    f"concept id {VIRTUAL_ROOT_ID!r} is reserved for the "
                    f"virtual root")
            if c.id in concepts:
                raise FormatError(f"duplicate concept id across files: {c.id!r}")
            concepts[c.id] = c

    unresolved = sorted(
        {e for edges in edge_lists for pair in edges for e in pair
         if e not in concepts})
    if unresolved:
        raise GraphError(
            "relation files reference unknown concept ids: "
            + ", ".join(unresolved))

    unresolved = sorted(
        {e for pair in mappings for e in pair if e not in concepts})
    if unresolved:
        raise GraphError(
            "mapping files reference unknown concept ids: "
            + ", ".join(unresolved))

    uf = _UnionFind()
    for left, right in mappings:
        uf.union(left, right)

    canonical = {cid: uf.find(cid) for cid in concepts}
    members: dict[str, set[str]] = {}
    for cid, rep in canonical.items():
        members.setdefault(rep, set()).add(cid)
    for rep, ids in members.items():
        vocabs = {concepts[i].vocabulary for i in ids}
        if len(ids) > 1 and len(vocabs) < len(ids):
            logger.warning(
                "mapping chain fused %d concepts sharing a vocabulary: %s",
                len(ids), ", ".join(sorted(ids)))

    edge_set: set[tuple[str, str]] = set()
    dropped_self = 0
    for edges in edge_lists:
        for child, parent in edges:
            c, p = canonical[child], canonical[parent]
            if c == p:
                dropped_self += 1
                continue
            edge_set.add((c, p))
    if dropped_self:
        logger.warning(
            "dropped %d is-a edges internal to fused nodes", dropped_self)

    has_parent = {c for c, _p in edge_set}
    root = VIRTUAL_ROOT_ID
    concepts[root] = Concept(id=root, label="virtual root",
                             vocabulary=VIRTUAL_ROOT_VOCABULARY)
    canonical[root] = root
    members[root] = {root}
    for rep in sorted(members):
        if rep != root and rep not in has_parent:
            edge_set.add((rep, root))

    parents_of: dict[str, list[str]] = {}
    for c, p in sorted(edge_set):
        parents_of.setdefault(c, []).append(p)
    _check_acyclic(members, parents_of)

    groups = tuple(tuple(sorted(members[rep])) for rep in sorted(members))
    return OntologyView(
        concepts=concepts,
        groups=groups,
        canonical=canonical,
        edges=tuple(sorted(edge_set)),
        root=root,
    )
