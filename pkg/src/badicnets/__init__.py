"""Digital (t, m, s)-nets and (T, s)-sequences over GF(q) driven by b-adic
integer index sequences, with exact quality verification.

The construction multiplies the digit vector of an index value s_n (any
b-adic integer, not just n itself) by finite-row generating matrices over a
finite field, reading the results as output digits.  Quality is checked two
ways: rank conditions on the matrices (the T profile) and brute-force
counting of generated blocks against elementary intervals; star discrepancy
and its closed-form bounds are computed in exact rational arithmetic.

Hot kernels (block digit generation, interval counting) use a compiled
extension when available and a pure-Python fallback otherwise; see
`badicnets._backend.backend_name()`.
"""

from ._backend import backend_name
from .badic import (BAdicStream, PeriodicStream, ProceduralStream,
                    integer_digits, is_unit, mul_small, negate,
                    negative_block_check, pseudo_valuation, rational_digits,
                    truncate, unit_inverse)
from .discrepancy import (BoundBreakdown, DiscrepancyResult, delta_bound,
                          empirical_vs_bound, prop2_bound,
                          star_discrepancy_1d, star_discrepancy_exact)
from .engine import (BijectionFamily, DigitalPoint, DigitBlock,
                     generate_block, generate_point, generate_point_classical,
                     point_to_float, point_to_rational)
from .field import FieldSpec, FqElem, make_field
from .genmatrix import (GeneratingMatrix, MatrixSet, has_optimal_row_lengths,
                        identity_matrix, identity_matrix_set, load_matrix_set,
                        pairs_matrix, row_length, save_matrix_set,
                        stirling_matrix, stirling_matrix_set)
from .inputseq import (AffineSequence, AlternatingSequence, BeattySequence,
                       CustomSequence, IndexSequence, NaturalSequence,
                       NegativeShiftedSequence, QuadraticSequence,
                       RationalAffineSequence, SubsequenceView, UDVerdict,
                       empirical_ud_test, is_ud_expected, parse_sequence_spec)
from .quality import (NetReport, TProfile, check_condition1, check_condition2,
                      rank_gf, t_profile, verify_T_sequence, verify_net)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
