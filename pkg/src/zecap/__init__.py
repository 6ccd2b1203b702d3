"""Zero-error capacities of quantum channels: confusability spaces,
extendibility searches, and simulation of assisted-communication protocols."""

from .channel import CapacityBound, QuantumChannel, compute_k_space
from .subspace import MatrixSubspace, complement, span
from .unext import SearchConfig, decide_extendibility, seesaw_search, structural_rules

__version__ = "0.1.0"

__all__ = [
    "CapacityBound",
    "MatrixSubspace",
    "QuantumChannel",
    "SearchConfig",
    "complement",
    "compute_k_space",
    "decide_extendibility",
    "seesaw_search",
    "span",
    "structural_rules",
]
