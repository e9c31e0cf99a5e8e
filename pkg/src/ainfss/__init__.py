"""Exact computations with A∞-algebras, their ħ-deformations and the spectral sequences they carry."""

from .linalg import Field, LinearSolver, Matrix, nullspace, rank_of_vectors, rref, solve_linear, split_subspace
from .bigraded import BigradedMap, BigradedSpace, CohomologyData, check_square_zero, cohomology_with_section
from .ainf import (AInfinityAlgebra, AInfinityMorphism, StructureError, algebra_from_names, bar_square_check,
                   check_morphism, check_stasheff, from_dg)
from .deformations import (FilteredAInfinity, FormalBigradedDeformation, associated_graded, check_deformation,
                           check_filtered, reduce_mod, rees, rees_roundtrip_check, specialize_hbar_one)
from .transfer import deformation_transfer, kadeishvili_transfer, verify_quasi_iso
from .pages import (compare_pages, derive_couple, exact_couple_from_deformation, functor_D, pages_from_deformation,
                    pages_from_filtration, project_P, translate_T, weak_convergence_check)
from .document import parse, serialize
from .report import InternalInconsistency, Report

__version__ = "0.1.0"
