from .canonical import MAX_EXTRACTION_NODES, extract_canonical_potentials
from .layout import ParamLayout, ParamVector, pack, unpack
from .potential_table import PotentialTable, energy, free_index
