"""Canonical invariants of symmetric integer matrices up to Kirby equivalence.

The main entry points are :func:`canon` (matrix -> token package),
:func:`assemble` / :func:`realize` (token package -> matrix) and the
randomized Kirby-move harness in :mod:`linkcanon.kirby`.
"""

from .canon import LayerRecord, TokenPackage, canon, parse, serialize
from .dictionary import RealizationDescriptor, assemble, realize
from .errors import LinkcanonError
from .linkform import discriminant, linking_value

__all__ = [
    "LayerRecord",
    "LinkcanonError",
    "RealizationDescriptor",
    "TokenPackage",
    "assemble",
    "canon",
    "discriminant",
    "linking_value",
    "parse",
    "realize",
    "serialize",
]

__version__ = "0.1.0"
