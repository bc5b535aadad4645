"""Freeness of 2x2 upper-triangular rational matrix morphisms on bounded languages."""

from .algebra import CanonicalForm, IntMat, SingularKind, UTMat2, canonical_form, direct_sum, kronecker, unit_matrix
from .decider import Branch, Instance, UnsupportedInstance, Verdict, decide, verify_witness
from .oracle import CollisionReport, search_collisions

__all__ = [
    "Branch",
    "CanonicalForm",
    "CollisionReport",
    "Instance",
    "IntMat",
    "SingularKind",
    "UTMat2",
    "UnsupportedInstance",
    "Verdict",
    "canonical_form",
    "decide",
    "direct_sum",
    "kronecker",
    "search_collisions",
    "unit_matrix",
    "verify_witness",
]
