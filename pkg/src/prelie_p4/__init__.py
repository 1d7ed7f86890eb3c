"""Nilpotent pre-Lie rings of order p^4, the braces they induce through the
group of flows, and the set-theoretic Yang-Baxter solutions of those braces."""

from .modarith import Shape
from .prelie import PreLieRing
from .brace import Brace
from .families import FamilySpec, build, canonical_spec, catalog_sample

__version__ = "0.1.0"

__all__ = ["Shape", "PreLieRing", "Brace", "FamilySpec", "build", "canonical_spec", "catalog_sample"]
