"""Exact arithmetic for the easier Waring problem on unitriangular groups."""

from .scalars import Scalar, parse_scalar, format_scalar
from .poly import Poly
from .matrices import NilMatrix, UniMatrix, exp, log, group_commutator
from .groupspec import GroupSpec, full_unitriangular_spec, heisenberg_spec
from .families import (
    AbelianizedFamily,
    MorphismFamily,
    PolyMorphism,
    abelianize,
    is_generating,
    validate_morphism,
)
from .moments import (
    MomentRepresentation,
    finite_difference_gadget,
    integral_guarantee,
    signed_power_identity,
    solve_moments_field,
    solve_moments_integral,
)
from .words import Word, eval_word
from .decompose import (
    DecompositionPlan,
    DerivedFamilyStage,
    build_commutator_family,
    build_plan,
    decompose_abelian,
    decompose_field,
    decompose_integral,
)
from .lattices import (
    IndexCertificate,
    Lattice,
    hermite_normal_form,
    lattice_index,
    stabilize_sumset,
    subgroup_certificate,
)
from .oracle import FiniteQuotientFamily, coverage_bfs, reduce_mod_p

__all__ = [name for name in dir() if not name.startswith("_")]
