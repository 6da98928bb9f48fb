from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from typing import Union, Tuple

__all__ = ["Label", "Witness", "Unknown", "SemiDecision"]

# label of a tree node: an integer residue, a rational (real presentation) or
# a tuple of those
Label = Union[int, Fraction, Tuple[int, ...]]

@dataclass(frozen=True)
class Witness:
    """
    Positive answer of an apartness semidecision: the two paths differ at
    ``level`` and agree at every level below it.
    """
    level: int

@dataclass(frozen=True)
class Unknown:
    """
    Negative-so-far answer: no difference found up to level ``fuel``.
    """
    fuel: int

SemiDecision = Union[Witness, Unknown]
