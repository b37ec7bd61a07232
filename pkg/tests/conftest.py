import io
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for the naive oracle module

from ontosim.index import build_index
from ontosim.ontology import Concept, merge_views, parse_concepts, parse_relations

TOY_CONCEPTS_CSV = "id,label\nA,Alpha\nB,Beta\nC,Gamma\nD,Delta\nE,Epsilon\n"
TOY_RELATIONS_CSV = "child,parent\nC,A\nD,A\nE,B\n"


def toy_view():
    """Five concepts under a virtual root: C,D below A; E below B."""
    concepts = parse_concepts(io.StringIO(TOY_CONCEPTS_CSV), "TOY")
    edges, _ = parse_relations(io.StringIO(TOY_RELATIONS_CSV))
    return merge_views([concepts], [edges])


@pytest.fixture(scope="session")
def toy_index():
    return build_index(toy_view())


@pytest.fixture
def toy_files(tmp_path):
    """Toy fixture written out as the CLI's input CSV files."""
    concepts = tmp_path / "concepts.csv"
    concepts.write_text(TOY_CONCEPTS_CSV)
    relations = tmp_path / "relations.csv"
    relations.write_text(TOY_RELATIONS_CSV)
    return {"concepts": concepts, "relations": relations, "dir": tmp_path}


def make_index(ids, edges, vocabulary="T"):
    """Index a raw (ids, child->parent edges) description."""
    view = merge_views(
        [[Concept(i, i, vocabulary) for i in ids]], [list(edges)])
    return build_index(view)
