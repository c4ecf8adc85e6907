"""Gamma matrices, hermitizing matrices and Dirac observables for constant metrics."""

from .clifford import (
    AlphaSet,
    GammaSet,
    Similarity,
    alpha_anticommutator_metric,
    alpha_from_gamma,
    build_gamma_for_metric,
    check_anticommutation,
    chiral_representation,
    dirac_representation,
    random_similarity,
    similarity_transform,
    solve_intertwiner,
    tensor_transform,
)
from .dynamics import (
    DynamicsConfig,
    Grid,
    GridField,
    GridOperator,
    Trajectory,
    build_hamiltonian,
    check_current_conservation,
    discrete_inner,
    evolve,
    plane_wave,
    spectrum,
)
from .errors import DiracError
from .hermitize import HermitizingPair, check_definiteness, solve_hermitizing, transport_hermitizing
from .metric import AffineMap, Metric, eta_to_g_map, is_admissible, validate_metric
from .observables import current, gamma5, hestenes_fields, solve_charge_conjugation

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "AlphaSet",
    "DiracError",
    "DynamicsConfig",
    "GammaSet",
    "Grid",
    "GridField",
    "GridOperator",
    "HermitizingPair",
    "Metric",
    "Similarity",
    "Trajectory",
    "alpha_anticommutator_metric",
    "alpha_from_gamma",
    "build_gamma_for_metric",
    "build_hamiltonian",
    "check_anticommutation",
    "check_current_conservation",
    "check_definiteness",
    "chiral_representation",
    "current",
    "dirac_representation",
    "discrete_inner",
    "eta_to_g_map",
    "evolve",
    "gamma5",
    "hestenes_fields",
    "is_admissible",
    "plane_wave",
    "random_similarity",
    "similarity_transform",
    "solve_charge_conjugation",
    "solve_hermitizing",
    "solve_intertwiner",
    "spectrum",
    "tensor_transform",
    "transport_hermitizing",
    "validate_metric",
]
