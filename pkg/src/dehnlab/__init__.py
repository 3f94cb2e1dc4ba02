"""
dehnlab: graphs of groups with cyclic edge groups, Dehn twists and their
lifts, mapping-torus normalization, van Kampen diagram surgery, and exact
desk-scale Dehn function estimation.
"""

from .words import (Alphabet, FreeWord, CyclicWord, GeneratorMap, free_reduce,
                    cyclic_reduce, primitive_root, apply_map, is_conjugate_free)
from .presentation import Presentation
from .oracle import Answer, WordProblemOracle, oracle_for

__all__ = [
    "Alphabet", "FreeWord", "CyclicWord", "GeneratorMap", "free_reduce",
    "cyclic_reduce", "primitive_root", "apply_map", "is_conjugate_free",
    "Presentation", "Answer", "WordProblemOracle", "oracle_for",
]

__version__ = "0.1.0"
