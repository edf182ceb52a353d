"""Exact orbit-method computations for unipotent groups G = exp(g), g inside ut(N, F_p)."""

from .characters import ClassFunction, character_table, inner_product, kirillov_character
from .coadjoint import DualVector, Orbit, coadjoint_act, orbit, orbit_partition, stabilizer_basis
from .errors import BudgetExceeded, InternalConsistencyError, OrbitkitError, VerificationError
from .field import CyclotomicNumber, FieldElement, zeta_power
from .multiplicity import branching_table, induction_support, restriction_multiplicity, tensor_multiplicity
from .nilalg import GroupElement, LieAlgebra, NilMatrix, SubalgebraEmbedding, build_algebra, exp, heisenberg, log, ut
from .polarization import Polarization, polarize, verify_lagrangian_fiber

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ClassFunction",
    "CyclotomicNumber",
    "DualVector",
    "FieldElement",
    "GroupElement",
    "InternalConsistencyError",
    "LieAlgebra",
    "NilMatrix",
    "Orbit",
    "OrbitkitError",
    "Polarization",
    "SubalgebraEmbedding",
    "VerificationError",
    "branching_table",
    "build_algebra",
    "character_table",
    "coadjoint_act",
    "exp",
    "heisenberg",
    "induction_support",
    "inner_product",
    "kirillov_character",
    "log",
    "orbit",
    "orbit_partition",
    "polarize",
    "restriction_multiplicity",
    "stabilizer_basis",
    "tensor_multiplicity",
    "ut",
    "verify_lagrangian_fiber",
    "zeta_power",
]
