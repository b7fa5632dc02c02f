"""Exact-arithmetic kernel for simplicial homotopy theory at desk scale.

Subpackages:
  matrices       integer matrices and Smith normal form
  complexes      bounded chain complexes, homology, Hom/tensor, towers
  simplicial     simplicial sets in degeneracy-word normal form
  spaces         standard spaces, products, pushouts, invariants
  simpab         truncated simplicial abelian groups (Dold-Kan, bar, ...)
  homotopy       wrapping functor, cylinders, homotopy pushouts, certificates
  serialization  JSON file formats
  cli            deterministic command-line surface
"""

from .matrices import IntMatrix, smith_normal_form
from .complexes import (
    ChainComplex,
    ChainMap,
    HomologyGroup,
    TowerReport,
    ValidationError,
    check_quasi_iso,
    cone,
    hom_complex,
    homotopy_class_group,
    sigma_tower_report,
)

__all__ = [
    "IntMatrix",
    "smith_normal_form",
    "ChainComplex",
    "ChainMap",
    "HomologyGroup",
    "TowerReport",
    "ValidationError",
    "check_quasi_iso",
    "cone",
    "hom_complex",
    "homotopy_class_group",
    "sigma_tower_report",
]

__version__ = "0.1.0"
