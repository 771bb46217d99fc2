"""Problem instances together with their text formats and seeded generators."""

from .formats import FORMAT_OF, FORMATS, parse_instance, serialize_instance
from .generators import (
    random_bipartite_graph,
    random_circuit,
    random_cnf,
    random_coverable_set_system,
    random_graph,
    random_instance,
    random_set_system,
    random_subset_sum,
)
from .types import (
    CnfFormula,
    Gate,
    Graph,
    Literal,
    SetSystem,
    SizeIndexedCounts,
    SubsetSumInstance,
    VspCircuit,
    elements_of,
    mask_of,
    popcount,
)

__all__ = [
    "CnfFormula",
    "FORMATS",
    "FORMAT_OF",
    "Gate",
    "Graph",
    "Literal",
    "SetSystem",
    "SizeIndexedCounts",
    "SubsetSumInstance",
    "VspCircuit",
    "elements_of",
    "mask_of",
    "parse_instance",
    "popcount",
    "random_bipartite_graph",
    "random_circuit",
    "random_cnf",
    "random_coverable_set_system",
    "random_graph",
    "random_instance",
    "random_set_system",
    "random_subset_sum",
    "serialize_instance",
]
