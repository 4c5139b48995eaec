"""orbitdex: exact local dynamics of polynomial germ maps.

Zero orders of isolated zeros, fixed-point indices of all iterates,
Dold indices and hidden periodic-orbit counts, plus the universality
decision for Jordan linear parts with root-of-unity eigenvalues and
constructive realization of admissible count sequences.  All arithmetic
is exact, over cyclotomic extensions of the rationals.
"""

from .cyclotomic import CyclotomicNumber, cyclotomic_polynomial, euler_phi, root_of_unity
from .germfile import GermDocument, GermParseError, parse_germ, print_germ
from .jordan import (CoordMask, JordanBlock, JordanSpec, SequenceTarget,
                     format_inline_matrix, global_order, is_admissible,
                     order_leq, parse_inline_matrix, period_mask, period_set)
from .multiplicity import (MultiplicityResult, NotIsolatedWithinBound, cronin,
                           multiplicity, truncated_quotient_dim)
from .orbits import (ConsistencyError, OrbitSpectrum, direct_iterate_index,
                     dold_index, fixed_point_index, hidden_orbit_count,
                     orbit_spectrum, solve_counts_triangular)
from .polynomials import GermMap, Poly, TermBudgetExceeded, variables
from .resonance import (NormalFormVerdict, ResonanceContext, divide_by_leads,
                        find_essential_blocks, is_resonant_monomial,
                        lead_variable_shape_ok, project, strip_eigenvalues,
                        validate_rnf)
from .universality import (ResidueWitness, UniversalityVerdict, chain_check,
                           chain_coprime_germ, chain_germ,
                           equal_order_universal, is_universal,
                           pairwise_coprime_universal, realize,
                           residue_search, two_chain_shape,
                           unit_spectrum_germ, unit_two_chain_shape)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
