"""Exact-arithmetic toolkit for rank-metric subspace families.

Everything is integer or rational arithmetic: counting formulas paired
with brute-force censuses, exact incidence/adjacency spectra,
multi-definition membership verdicts for vertex families, constructions
of the standard families, and exhaustive desk-scale searches.
"""

from .attenuated import SpaceParams, space
from .clsets import VertexSet, verdict
from .errors import ClformsError
from .gf import ExtField, FqField, ext_field, field_new

__version__ = "0.1.0"

__all__ = [
    "ClformsError",
    "ExtField",
    "FqField",
    "SpaceParams",
    "VertexSet",
    "__version__",
    "ext_field",
    "field_new",
    "space",
    "verdict",
]
