"""Exception hierarchy shared across the toolkit.

Each class maps to one CLI exit code so pipelines can branch on failure
kind: format 2, graph 3, lookup 4, contract 5.
"""


class OntosimError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class FormatError(OntosimError):
    """Malformed input file: bad header, bad row, duplicate id, bad version."""

    exit_code = 2


class GraphError(OntosimError):
    """Structural problem in the merged graph: cycles, unresolved references."""

    exit_code = 3


class UnknownConceptError(OntosimError):
    """A concept id does not resolve in the index."""

    exit_code = 4

    def __init__(self, concept_id):
        super().__init__(f"unknown concept id: {concept_id}")
        self.concept_id = concept_id


class UnknownMeasureError(OntosimError):
    """A measure name is not one of the supported six."""

    exit_code = 4

    def __init__(self, name):
        super().__init__(f"unknown measure: {name}")
        self.name = name


class ContractError(OntosimError):
    """Caller violated an operation precondition (mixed records, empty sets...)."""

    exit_code = 5
