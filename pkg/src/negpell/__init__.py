"""2-parts of narrow class groups of real quadratic fields and the negative Pell equation."""

from .arith import SquareClass, hilbert, is_fundamental_discriminant, iter_pell_family, kronecker
from .pell import PellDiscriminant, PellVerdict, neg_pell_by_period, neg_pell_by_unit, negative_pell_solvable
from .quadforms import TwoPartProfile, narrow_class_group, oracle_profile, oracle_report
from .redei import (
    PairingMatrix,
    artin_pairing,
    is_acceptable,
    is_admissible,
    redei_symbol,
    rk4_via_redei_matrix,
    rk8_via_pairing,
    symbol_profile,
    verify_reflection,
)
from .densities import alpha, beta, corank_dist, markov_stationary, q_prob, theorem2_density
from .f2 import F2Matrix, corank, kernel_basis, random_symmetric, rank

__version__ = "0.1.0"
