"""Exact generalized number lattices, compositions and lattice reduction."""

from .composition import compose, iit_solve
from .errors import LatticeError, PreconditionFailed
from .ground_linalg import GroundSet, LabeledMatrix, LabeledVector
from .gnl import (
    GNL,
    canonicalize,
    contains,
    contract,
    dualize,
    equal,
    intersect,
    member,
    minor,
    restrict,
    sum_,
)

__all__ = [
    "GNL",
    "GroundSet",
    "LabeledMatrix",
    "LabeledVector",
    "LatticeError",
    "PreconditionFailed",
    "canonicalize",
    "compose",
    "contains",
    "contract",
    "dualize",
    "equal",
    "intersect",
    "iit_solve",
    "member",
    "minor",
    "restrict",
    "sum_",
]
