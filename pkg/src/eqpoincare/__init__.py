"""Exact equivariant Poincaré series and monodromy zeta functions of plane curve
singularities with a finite group action, over the modified Burnside ring."""

from .burnside import (EquippedGSet, TBClass, TBElement, eps, orbit_decompose, rho, rhohat,
                       symmetric_power, symmetric_power_set, tb_mul, tb_ring)
from .group_core import FiniteGroup, Subgroup, Character, cyclic_group, load_group
from .invariants import (FactoredZeta, RecoveredZeta, ZetaFactor, eps_reduction, poincare_from_resolution,
                         recover_zeta, statement1_rhohat_check, zeta_from_resolution)
from .resolution import ResolutionData, load_resolution, multiplicity_matrix, n_value, omega_vector, validate
from .series import (BinomialFactor, FactoredSeries, MultiSeries, expand_binomial, factorize,
                     map_coefficients, series_inverse, series_mul, substitute_monomial)

__all__ = [
    "BinomialFactor", "Character", "EquippedGSet", "FactoredSeries", "FactoredZeta", "FiniteGroup",
    "MultiSeries", "RecoveredZeta", "ResolutionData", "Subgroup", "TBClass", "TBElement", "ZetaFactor",
    "cyclic_group", "eps", "eps_reduction", "expand_binomial", "factorize", "load_group", "load_resolution",
    "map_coefficients", "multiplicity_matrix", "n_value", "omega_vector", "orbit_decompose",
    "poincare_from_resolution", "recover_zeta", "rho", "rhohat", "series_inverse", "series_mul",
    "statement1_rhohat_check", "substitute_monomial", "symmetric_power", "symmetric_power_set", "tb_mul",
    "tb_ring", "validate", "zeta_from_resolution",
]

__version__ = "0.1.0"
