"""Reference-class selection for interval-valued evidential probability."""

from refclass.core import (
    Bracket,
    Intersect,
    Interval,
    Prim,
    Product,
    Strength,
    bracket,
    canonicalize,
    disagrees,
    intersect,
    nests_in,
    stronger,
)
from refclass.kb import KnowledgeBase, load_kb, parse_kb
from refclass.selection import Config, prob

__all__ = [
    "Bracket",
    "Config",
    "Intersect",
    "Interval",
    "KnowledgeBase",
    "Prim",
    "Product",
    "Strength",
    "bracket",
    "canonicalize",
    "disagrees",
    "intersect",
    "load_kb",
    "nests_in",
    "parse_kb",
    "prob",
    "stronger",
]
