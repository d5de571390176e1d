"""Sumset and difference-set laboratory for finite sets of integers."""

__version__ = "0.1.0"

from .errors import DomainError, ResourceError
from .setcore import (
    Classification,
    IntSet,
    SignedSet,
    classify,
    diffset,
    imbalance,
    is_symmetric,
    missing_counts,
    render,
    sumset,
)

__all__ = [
    "Classification",
    "DomainError",
    "IntSet",
    "ResourceError",
    "SignedSet",
    "classify",
    "diffset",
    "imbalance",
    "is_symmetric",
    "missing_counts",
    "render",
    "sumset",
]
