"""Exact counting of abelian Kummer covers of the projective line over finite fields."""
from .abgroup import GroupSpec, Subgroup, subgroups
from .census import CensusConstraint, count_H, count_H_star, count_M, point_count_histogram
from .covers import KummerCover, true_genus, zeta_numerator
from .errors import BudgetExceeded, ConfigError, VerificationError
from .ffield import FieldCtx, make_field
from .polyring import MonicPoly

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "CensusConstraint", "ConfigError", "FieldCtx", "GroupSpec", "KummerCover",
    "MonicPoly", "Subgroup", "VerificationError", "count_H", "count_H_star", "count_M",
    "make_field", "point_count_histogram", "subgroups", "true_genus", "zeta_numerator",
]
