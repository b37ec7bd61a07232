"""ontosim: semantic similarity over merged concept hierarchies.

Builds one rooted DAG out of CSV-exported vocabularies, precomputes an
immutable index (ancestor sets, depths, leaf counts, intrinsic
information content) and evaluates six ontology-based similarity
measures on it, with batch sweeps, threshold-cluster evaluation and a
read-only HTTP facade.
"""

from .errors import (
    ContractError,
    FormatError,
    GraphError,
    OntosimError,
    UnknownConceptError,
    UnknownMeasureError,
)
from .index import OntologyIndex, build_index, lca, load_index, save_index, shortest_path_nodes
from .measures import (
    ALL_MEASURES,
    MeasureId,
    SimilarityRecord,
    batch_centroid_sweep,
    intrinsic_lch,
    lch,
    lin,
    parse_measure,
    resnik,
    rescale_minmax,
    similarity,
    sokal,
    wu_palmer,
)
from .ontology import (
    Concept,
    OntologyView,
    VIRTUAL_ROOT_ID,
    merge_views,
    parse_concepts,
    parse_mappings,
    parse_relations,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_MEASURES",
    "Concept",
    "ContractError",
    "FormatError",
    "GraphError",
    "MeasureId",
    "OntologyIndex",
    "OntologyView",
    "OntosimError",
    "SimilarityRecord",
    "UnknownConceptError",
    "UnknownMeasureError",
    "VIRTUAL_ROOT_ID",
    "batch_centroid_sweep",
    "build_index",
    "intrinsic_lch",
    "lca",
    "lch",
    "lin",
    "load_index",
    "merge_views",
    "parse_concepts",
    "parse_mappings",
    "parse_measure",
    "parse_relations",
    "resnik",
    "rescale_minmax",
    "save_index",
    "shortest_path_nodes",
    "similarity",
    "sokal",
    "wu_palmer",
]
