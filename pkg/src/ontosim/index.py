"""Immutable precomputed ontology index.

For every node the index stores the ancestor-or-self set (with minimal
up-edge distances, CSR layout), depth from the root, number of leaves in
the descendant-or-self set and the intrinsic information content

    ic(c) = -ln( (leaves(c)/subsumers(c) + 1) / (total_leaves + 1) )

which needs nothing but the hierarchy itself. All query operations are
pure reads, so one index can serve any number of concurrent readers.
"""

from __future__ import annotations

import io
import json
import zipfile
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, UnknownConceptError
from .ontology import OntologyView

FORMAT_VERSION = "ontosim-index/1"

# fixed zip entry timestamp so identical inputs serialize byte-identically
_ZIP_EPOCH = (1980, 1, 1, 0, 0, 0)


@dataclass(frozen=True, eq=False)
class OntologyIndex:
    ids: tuple[str, ...]                   # canonical id per ordinal (sorted)
    groups: tuple[tuple[str, ...], ...]    # all member ids per ordinal
    labels: tuple[str, ...]
    vocabularies: tuple[tuple[str, ...], ...]
    root: int                              # root ordinal
    anc_indptr: np.ndarray                 # int64, len n+1
    anc_ords: np.ndarray                   # int32, ancestor ordinals, ascending
    anc_dist: np.ndarray                   # int32, min up-edges to ancestor
    depth: np.ndarray                      # int32, root depth = 1
    leaf_count: np.ndarray                 # int64
    ic: np.ndarray                         # float64
    max_depth: int
    max_ic: float
    version: str = FORMAT_VERSION
    _ordinal_of: dict[str, int] = field(default_factory=dict, repr=False,
                                        compare=False)

    def __post_init__(self):
        lookup = {}
        for ordinal, group in enumerate(self.groups):
            for cid in group:
                lookup[cid] = ordinal
        object.__setattr__(self, "_ordinal_of", lookup)

    @property
    def concept_count(self) -> int:
        return len(self.ids)

    def ordinal(self, concept_id: str) -> int:
        try:
            return self._ordinal_of[concept_id]
        except KeyError:
            raise UnknownConceptError(concept_id) from None

    def has_concept(self, concept_id: str) -> bool:
        return concept_id in self._ordinal_of

    def ancestors(self, ordinal: int) -> np.ndarray:
        return self.anc_ords[self.anc_indptr[ordinal]:self.anc_indptr[ordinal + 1]]

    def up_distances(self, ordinal: int) -> np.ndarray:
        return self.anc_dist[self.anc_indptr[ordinal]:self.anc_indptr[ordinal + 1]]

    def subsumer_count(self, ordinal: int) -> int:
        return int(self.anc_indptr[ordinal + 1] - self.anc_indptr[ordinal])

    def ordinals_for_vocabulary(self, vocabulary: str) -> list[int]:
        return [i for i, tags in enumerate(self.vocabularies)
                if vocabulary in tags]


def build_index(view: OntologyView) -> OntologyIndex:
    """Precompute ancestor sets, depths, leaf counts and intrinsic IC."""
    ids = tuple(group[0] for group in view.groups)  # groups already sorted
    n = len(ids)
    ord_of = {cid: i for i, cid in enumerate(ids)}
    root = ord_of[view.root]

    parents: list[list[int]] = [[] for _ in range(n)]
    children: list[list[int]] = [[] for _ in range(n)]
    for child, parent in view.edges:
        c, p = ord_of[child], ord_of[parent]
        parents[c].append(p)
        children[p].append(c)

    # topological order (parents first) via Kahn from the root
    topo: list[int] = []
    pending = [len(ps) for ps in parents]
    stack = [i for i in range(n) if pending[i] == 0]
    while stack:
        v = stack.pop()
        topo.append(v)
        for c in children[v]:
            pending[c] -= 1
            if pending[c] == 0:
                stack.append(c)
    assert len(topo) == n, "view was not acyclic"

    # ancestor-or-self closure with minimal up-edge distances
    up: list[dict[int, int]] = [dict() for _ in range(n)]
    for v in topo:
        d = {v: 0}
        for p in parents[v]:
            for a, dist in up[p].items():
                nd = dist + 1
                prev = d.get(a)
                if prev is None or nd < prev:
                    d[a] = nd
        up[v] = d

    indptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        indptr[v + 1] = indptr[v] + len(up[v])
    anc_ords = np.empty(indptr[-1], dtype=np.int32)
    anc_dist = np.empty(indptr[-1], dtype=np.int32)
    depth = np.empty(n, dtype=np.int32)
    for v in range(n):
        items = sorted(up[v].items())
        anc_ords[indptr[v]:indptr[v + 1]] = [a for a, _ in items]
        anc_dist[indptr[v]:indptr[v + 1]] = [d for _, d in items]
        depth[v] = up[v][root] + 1

    # leaves in descendant-or-self sets, shared leaves counted once:
    # propagate leaf bitsets upward in reverse topological order
    leaf_index: dict[int, int] = {}
    for v in range(n):
        if not children[v]:
            leaf_index[v] = len(leaf_index)
    masks = [0] * n
    leaf_count = np.zeros(n, dtype=np.int64)
    for v in reversed(topo):
        mask = 1 << leaf_index[v] if v in leaf_index else 0
        for c in children[v]:
            mask |= masks[c]
        masks[v] = mask
        leaf_count[v] = mask.bit_count()
    del masks

    subsumers = np.diff(indptr).astype(np.float64)
    total_leaves = float(leaf_count[root])
    ic = -np.log((leaf_count / subsumers + 1.0) / (total_leaves + 1.0))
    ic[ic == 0.0] = 0.0  # normalize -0.0 at the root

    return OntologyIndex(
        ids=ids,
        groups=view.groups,
        labels=tuple(view.concepts[cid].label for cid in ids),
        vocabularies=tuple(
            tuple(sorted({view.concepts[m].vocabulary for m in group}))
            for group in view.groups),
        root=root,
        anc_indptr=indptr,
        anc_ords=anc_ords,
        anc_dist=anc_dist,
        depth=depth,
        leaf_count=leaf_count,
        ic=ic,
        max_depth=int(depth.max()),
        max_ic=float(ic.max()),
    )


def _select_lca(index: OntologyIndex, candidates: np.ndarray) -> int:
    """Among common ancestors pick max ic, then max depth, then min ordinal."""
    ic = index.ic[candidates]
    best = candidates[ic == ic.max()]
    if len(best) > 1:
        d = index.depth[best]
        best = best[d == d.max()]
    return int(best[0])  # ordinals ascend with ids, so [0] is the min id


def common_ancestors(index: OntologyIndex, o1: int, o2: int) -> np.ndarray:
    a1, a2 = index.ancestors(o1), index.ancestors(o2)
    common = np.intersect1d(a1, a2, assume_unique=True)
    return common


def lca(index: OntologyIndex, c1: str, c2: str) -> str:
    """Lowest common ancestor id under the max-ic/max-depth/min-id tie-break."""
    o1, o2 = index.ordinal(c1), index.ordinal(c2)
    return index.ids[_select_lca(index, common_ancestors(index, o1, o2))]


def shortest_path_nodes(index: OntologyIndex, c1: str, c2: str) -> int:
    """Minimal node count of an up-up path through a common ancestor."""
    o1, o2 = index.ordinal(c1), index.ordinal(c2)
    return path_nodes_by_ordinal(index, o1, o2)


def path_nodes_by_ordinal(index: OntologyIndex, o1: int, o2: int) -> int:
    a1, a2 = index.ancestors(o1), index.ancestors(o2)
    common, i1, i2 = np.intersect1d(a1, a2, assume_unique=True,
                                    return_indices=True)
    total = index.up_distances(o1)[i1] + index.up_distances(o2)[i2]
    return int(total.min()) + 1


def pair_stats(index: OntologyIndex, o1: int, o2: int) -> tuple[int, int]:
    """(lca ordinal, path node count) computed with one intersection."""
    a1, a2 = index.ancestors(o1), index.ancestors(o2)
    common, i1, i2 = np.intersect1d(a1, a2, assume_unique=True,
                                    return_indices=True)
    total = index.up_distances(o1)[i1] + index.up_distances(o2)[i2]
    return _select_lca(index, common), int(total.min()) + 1


def save_index(index: OntologyIndex, path: str) -> None:
    """Serialize to a versioned zip; identical inputs give identical bytes."""
    meta = {
        "version": index.version,
        "ids": list(index.ids),
        "groups": [list(g) for g in index.groups],
        "labels": list(index.labels),
        "vocabularies": [list(v) for v in index.vocabularies],
        "root": index.root,
        "max_depth": index.max_depth,
        "max_ic": index.max_ic,
    }
    arrays = {
        "anc_indptr": index.anc_indptr,
        "anc_ords": index.anc_ords,
        "anc_dist": index.anc_dist,
        "depth": index.depth,
        "leaf_count": index.leaf_count,
        "ic": index.ic,
    }
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_DEFLATED,
                         compresslevel=6) as zf:
        info = zipfile.ZipInfo("meta.json", date_time=_ZIP_EPOCH)
        zf.writestr(info, json.dumps(meta, sort_keys=True,
                                     separators=(",", ":")))
        for name in sorted(arrays):
            buf = io.BytesIO()
            np.save(buf, arrays[name], allow_pickle=False)
            info = zipfile.ZipInfo(f"{name}.npy", date_time=_ZIP_EPOCH)
            zf.writestr(info, buf.getvalue())


def load_index(path: str) -> OntologyIndex:
    try:
        zf = zipfile.ZipFile(path, "r")
    except (zipfile.BadZipFile, OSError) as exc:
        raise FormatError(f"cannot read index file {path!r}: {exc}") from exc
    with zf:
        try:
            meta = json.loads(zf.read("meta.json"))
        except KeyError:
            raise FormatError(f"index file {path!r} has no meta.json") from None
        if meta.get("version") != FORMAT_VERSION:
            raise FormatError(
                f"index file {path!r} has format version "
                f"{meta.get('version')!r}, this build reads {FORMAT_VERSION!r}")
        arrays = {}
        for name in ("anc_indptr", "anc_ords", "anc_dist", "depth",
                     "leaf_count", "ic"):
            arrays[name] = np.load(io.BytesIO(zf.read(f"{name}.npy")),
                                   allow_pickle=False)
    return OntologyIndex(
        ids=tuple(meta["ids"]),
        groups=tuple(tuple(g) for g in meta["groups"]),
        labels=tuple(meta["labels"]),
        vocabularies=tuple(tuple(v) for v in meta["vocabularies"]),
        root=meta["root"],
        anc_indptr=arrays["anc_indptr"],
        anc_ords=arrays["anc_ords"],
        anc_dist=arrays["anc_dist"],
        depth=arrays["depth"],
        leaf_count=arrays["leaf_count"],
        ic=arrays["ic"],
        max_depth=meta["max_depth"],
        max_ic=meta["max_ic"],
    )
