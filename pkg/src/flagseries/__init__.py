"""Iterated Laurent series over flags of lattices.

Exact symbolic machinery for the field of Laurent series whose support fits
in a shifted simple cone: the lexicographically ordered lattice, simple and
non-normal cones, truncated series with their valuation, logarithmic forms
and residues, rational-function expansion and Puiseux roots.
"""

from .algebraic import (
    PolynomialOverSeries,
    PuiseuxRoot,
    evaluate_poly,
    hensel_lift,
    newton_slopes,
    ramify,
    solve_roots,
)
from .calculus import (
    ChangeOfVariables,
    LogDifferentialForm,
    log_jacobian,
    partial_derivative,
    pullback,
    residue,
    residue_iterated,
    substitute,
)
from .cone import (
    NonNormalCone,
    SimpleCone,
    common_cone,
    cone_contains,
    cone_coordinates,
    extend_cone,
    minimal_element,
    nonnormal_generators,
    transition_matrix,
)
from .errors import InsufficientPrecision, NonSimpleRoot, ZeroDenominator
from .lattice import FlagOfLattices, Ordering, level, lex_compare, semigroup_contains
from .rational import LaurentPolynomial, expand_form, expand_rational
from .series import (
    EXACT,
    TruncatedSeries,
    Valuation,
    add,
    equal_up_to,
    in_O_L,
    invert,
    make_series,
    mul,
    valuation,
)

__version__ = "0.1.0"
