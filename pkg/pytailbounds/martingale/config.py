"""Numerical constants for the bound and characteristic computations."""

import math

# Truncation level denoting y = +inf (indicators saturate)
MAX = math.inf

# Stable kernels: below this argument the Taylor series replaces the direct formula
SERIES_THRESHOLD = 1e-4

# Bennett rate h(u) = (1+u)log(1+u) - u switches to its series below this u
BENNETT_SERIES_THRESHOLD = 1e-2
BENNETT_SERIES_TERMS = 12

# Slack of the assertion on bound values
BOUND_SLACK = 1e-12

# numeric_infimum parameters
GOLDEN_RELATIVE_WIDTH = 1e-12
MAX_DOUBLINGS = 200
MAX_GOLDEN_ITERATIONS = 500
INFIMUM_WORKING_DPS = 40  # decimal digits used for exponent evaluation

# Probability vectors must sum to one within this tolerance
PROBABILITY_TOLERANCE = 1e-15

# Atom-level tolerance for mean and symmetry checks
ATOM_TOLERANCE = 1e-12
