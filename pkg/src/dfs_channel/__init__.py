from .multiplicity import best_multiplicity, build_table, k_value
from .types import MultiplicityTable, SectorIndex, SpinLabel
from .utils import VERSION

__all__ = [
    "MultiplicityTable",
    "SectorIndex",
    "SpinLabel",
    "VERSION",
    "best_multiplicity",
    "build_table",
    "k_value",
]
