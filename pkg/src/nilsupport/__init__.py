"""Desk-scale support varieties for linear algebraic groups of exponential type.

Commuting tuples of p-nilpotent matrices over small finite fields stand in
for 1-parameter subgroups; modules are GL_n construction trees; the local
operator at a tuple yields Jordan types and support membership, and the
structural laws of the theory are mechanically verifiable on small grids.
"""

from .ffmat import (DegreeCapError, DimensionMismatchError, FieldSpec, Matrix,
                    PolyMatrix, SingularMatrixError, coeff, frob_power,
                    inverse, kernel_basis, poly_mul, rank, rref)
from .liealg import (DEFAULT_BUDGET, BudgetExceededError, NilTuple, bracket,
                     enumerate_cr, is_commuting_nilpotent, p_power, sample_cr)
from .repcore import (Ad, Def, Dual, EAModule, Ext, ModuleExpr, Sum, Sym,
                      Tensor, Triv, Twist, WeightTable, ea_free, evaluate,
                      is_irreducible_exhaustive, quotient_and_restrict,
                      regular_module, submodule_closure, weights)
from .oneparam import (OneParamSubgroup, exp_degree_bound, exp_nil, psg_eval,
                       truncate_formal)
from .support import (InvariantViolation, JordanType, LocalOperator,
                      SupportReport, VerifyReport, alpha_operator,
                      conjugate_tuple, enumerate_support, ga_alpha,
                      ga_alpha_generic, in_support, jordan_type,
                      lambda_reverse, mu_operator, sample_support,
                      scale_tuple, verify_properties)

__version__ = "0.1.0"
