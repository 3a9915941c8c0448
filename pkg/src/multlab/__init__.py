"""Exact computations in local multiplicity theory.

Hilbert-Samuel multiplicities, Koszul-type Euler characteristics and the
defect ``e_0(a; M) - c_1...c_d e_0(q; M)``, initial-form criteria in the
associated graded module, and local intersection numbers of plane curves,
all over ``F_p`` or ``Q``.
"""

__version__ = "0.1.0"

from .bezout import BezoutReport, classify, intersection_multiplicity
from .errors import (BackendMismatch, CeilingReached, CommonComponent, DimensionMismatch, HypothesisFailure,
                     InputError, InsufficientRange, MemoryLimitError, MultlabError, NegativeChi, NonConstant,
                     NonStabilizing, NotAtOrigin, NotSystemOfParameters, PolynomialSyntaxError, PropertyViolation,
                     RestrictionViolated)
from .exactla import QQ, Field, Matrix, Subspace, kernel_basis, left_kernel, rref
from .forms import (GradedPiece, QInitialForm, colon_constant, graded_piece, greg_probe, initial_degree_q,
                    sop_check, tangent_multiplicity)
from .hilbert import HilbertTable, e0_of_parameters, hs_table, verify_multiplicity_identities
from .koszul import (ChainComplex, ChainMap, ChiReport, KoszulSetup, chi_defect, chi_L, euler_char,
                     homology_dims, koszul_complex, mapping_cone)
from .localmodel import (ModuleSpec, RingSpec, TruncatedModel, annihilator_is_zero, build_model,
                         length_of_quotient, power_chain)
from .poly import Polynomial, binary_form_gcd, initial_form_m, parse

GF = Field
