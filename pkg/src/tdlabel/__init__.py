"""Adjacency labels for graphs given by bounded-adhesion tree-decompositions
with product-structure torsos: bit-level codes, the weighted mixed labelling
framework, four scheme combinators, the skinny/short refinement, and a
verification and benchmarking harness."""

from .bits import BitLabel, MalformedLabel, frame, gamma, unframe
from .codes import alphabetic_code, nice_weights
from .graphs import Graph
from .decomposition import RootedForestDecomposition, tidy, torso, validate_decomposition
from .mls import (
    MixedLabelling,
    SchemeHandle,
    WitnessedInstance,
    adjacency_oracle,
    check_scheme_on_instance,
)
from .refine import heavy_set, skinny_refine
from .product import product_scheme
from .combinators import apex_scheme, compose_full, short_scheme, skinny_scheme, union_scheme

__all__ = [
    "BitLabel",
    "MalformedLabel",
    "frame",
    "gamma",
    "unframe",
    "alphabetic_code",
    "nice_weights",
    "Graph",
    "RootedForestDecomposition",
    "tidy",
    "torso",
    "validate_decomposition",
    "MixedLabelling",
    "SchemeHandle",
    "WitnessedInstance",
    "adjacency_oracle",
    "check_scheme_on_instance",
    "heavy_set",
    "skinny_refine",
    "product_scheme",
    "apex_scheme",
    "union_scheme",
    "skinny_scheme",
    "short_scheme",
    "compose_full",
]

__version__ = "0.1.0"
