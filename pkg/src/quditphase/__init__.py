"""Exact phase space toolkit for odd-dimensional qudit systems.

Weyl operators, discrete Wigner functions, stabilizer states, Clifford
dynamics and their finite field refinement, with exact arithmetic on the
paths where roundoff would matter.
"""

__version__ = "0.1.0"

from .zmod import System, UnitPhase, chi, element_order, inv
from .cyclotomic import CycArray
from .phasespace import (
    Submodule,
    SubgroupCharacter,
    affine_hull,
    characters_of,
    closure,
    complement,
    enumerate_isotropic,
    enumerate_maximal_isotropic,
    find_symplectic_similarity,
    is_isotropic,
    is_maximal_isotropic,
    is_symplectic,
    random_symplectic,
    symplectic_form,
    symplectic_group,
)
from .weyl import (
    basis_state,
    characteristic_function,
    irreducibility_sum,
    random_state,
    weyl_cyc,
    weyl_operator,
)
from .wigner import (
    WignerGrid,
    antisymmetric_projector,
    axiomatic_uniqueness_check,
    grid_from_csv,
    grid_overlap,
    grid_to_csv,
    grid_to_pgm,
    grid_to_svg,
    marginal,
    moyal_product,
    odd_parity_boundary_state,
    phase_point_operator,
    phase_point_operator_cyc,
    wigner_exact,
    wigner_of_operator,
    wigner_pure,
)
from .stabilizer import (
    enumerate_stabilizer_states,
    gauss_coefficient,
    graph_state,
    isotropic_count,
    maximal_isotropic_count,
    recover_quadratic_form,
    stabilizer_code_count,
    stabilizer_projector,
    stabilizer_state,
    stabilizer_state_count,
)
from .clifford import (
    clifford_from_affine,
    label_action,
    metaplectic,
    permutation_action,
    positivity_preservation_probe,
    recognize_clifford,
)
from .simplex import solve_equality_feasibility
from .hudson import (
    ClassificationResult,
    bochner_test,
    classify,
    classify_density,
    counterexample_mixture,
    modulus_diagnostics,
    self_correlation,
    stabilizer_decomposition_feasible,
    verify_hudson,
)
from .galois import (
    GaloisField,
    dual_basis,
    field_vs_module_stabilizer_gap,
    field_weyl,
    iota,
    multiparticle_ratio,
    verify_factorization,
)

__all__ = [
    "System",
    "UnitPhase",
    "chi",
    "element_order",
    "inv",
    "CycArray",
    "Submodule",
    "SubgroupCharacter",
    "affine_hull",
    "characters_of",
    "closure",
    "complement",
    "enumerate_isotropic",
    "enumerate_maximal_isotropic",
    "find_symplectic_similarity",
    "is_isotropic",
    "is_maximal_isotropic",
    "is_symplectic",
    "random_symplectic",
    "symplectic_form",
    "symplectic_group",
    "basis_state",
    "characteristic_function",
    "irreducibility_sum",
    "random_state",
    "weyl_cyc",
    "weyl_operator",
    "WignerGrid",
    "antisymmetric_projector",
    "axiomatic_uniqueness_check",
    "grid_from_csv",
    "grid_overlap",
    "grid_to_csv",
    "grid_to_pgm",
    "grid_to_svg",
    "marginal",
    "moyal_product",
    "odd_parity_boundary_state",
    "phase_point_operator",
    "phase_point_operator_cyc",
    "wigner_exact",
    "wigner_of_operator",
    "wigner_pure",
    "enumerate_stabilizer_states",
    "gauss_coefficient",
    "graph_state",
    "isotropic_count",
    "maximal_isotropic_count",
    "recover_quadratic_form",
    "stabilizer_code_count",
    "stabilizer_projector",
    "stabilizer_state",
    "stabilizer_state_count",
    "clifford_from_affine",
    "label_action",
    "metaplectic",
    "permutation_action",
    "positivity_preservation_probe",
    "recognize_clifford",
    "solve_equality_feasibility",
    "ClassificationResult",
    "bochner_test",
    "classify",
    "classify_density",
    "counterexample_mixture",
    "modulus_diagnostics",
    "self_correlation",
    "stabilizer_decomposition_feasible",
    "verify_hudson",
    "GaloisField",
    "dual_basis",
    "field_vs_module_stabilizer_gap",
    "field_weyl",
    "iota",
    "multiparticle_ratio",
    "verify_factorization",
    "__version__",
]
