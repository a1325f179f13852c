"""degenlab: exact-arithmetic verification laboratory.

Point counts, stability iterations and tangent computations for
degeneracy loci of two-term complexes, the generic determinantal family,
framed plane quiver data and blow-up quiver data.
"""

from .complexes import ComplexPoint, ThreeTermPoint
from .counting import (BudgetExceeded, CountPolynomial, CountTable,
                       fit_count_polynomial, gaussian_binomial,
                       general_linear_order, rank_count_formula)
from .fields import GF, QQ, Field, PrimeField, RationalField
from .matrices import (Matrix, Subspace, hstack, image, intersect, kernel,
                       preimage, rank_factorization, subspace_sum, vstack)
from .rng import SplitRng

__version__ = "0.1.0"
