"""Defaults for simulation runs, verification and reports."""

# Monte Carlo
DEFAULT_SEED = 20240611
DEFAULT_TRIALS = 100_000
DEFAULT_DELTA = 1e-3  # one-sided confidence failure probability
CHUNK_SIZE = 4096  # trials per work unit; fixed so chunking never depends on workers
DEFAULT_WORKERS = 1

# Cells with fewer hits are reported but not gated
MIN_GATED_HITS = 10

# Falsification factor applied by `verify --falsify`
FALSIFY_FACTOR = 10.0

# Exhaustive enumeration limits
MAX_ENUMERATION_STEPS = 12
MAX_ENUMERATION_PATHS = 3**12

# Tightness scan
DEFAULT_LAMBDA_GRID_RESOLUTION = 2000
TIGHTNESS_LAMBDA_SPAN = 8.0  # grid covers [0, span * lambda_star(COSH)]

# Randomized lemma suite
LEMMA_MODEL_COUNT = 1000
LEMMA_MAX_SUPPORT = 5
LEMMA_VALUE_RANGE = 5.0
LEMMA_LAMBDAS = (0.1, 0.5, 1.0, 2.0, 5.0)
LEMMA_YS = (0.0, 0.5, 1.0, 2.0)
LEMMA_BETAS = (1.2, 1.5, 1.8)
LEMMA_SLACK = 1e-12  # relative and absolute

# Scalar inequality grids
SCALAR_GRID_POINTS = 20_001

# Reports: 17 significant digits round-trip a float64 exactly
FLOAT_FORMAT = ".17g"
