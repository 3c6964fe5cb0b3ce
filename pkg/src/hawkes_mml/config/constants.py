"""Constants for hawkes-mml."""

import math

# Config file schema
CONFIG_SCHEMA_VERSION = 1
SETTINGS_FILENAME = "hawkes.yaml"
EXPERIMENTS_DIRNAME = "experiments"

# Exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3

# Numerical floors and tolerances
PARAM_FLOOR = 1e-8
DETERMINANT_FLOOR = 1e-300
LOG_DETERMINANT_FLOOR = math.log(DETERMINANT_FLOOR)
EULER_MASCHERONI = 0.5772156649015329
KAPPA_LIMIT = 1.0 / (2.0 * math.pi * math.e)

# Best known normalized second moments of lattice quantizers (dimension -> kappa_k)
KNOWN_KAPPA = {
    1: 1.0 / 12.0,
    2: 0.0801875,
    3: 0.0785433,
    4: 0.0766032,
    5: 0.0756254,
    6: 0.0742437,
    7: 0.0731165,
    8: 0.0716821,
}

# Lattice-term modes
LATTICE_MODES = ("digamma", "lower", "upper")
DEFAULT_LATTICE_MODE = "digamma"

# Prior presets: name -> {prior kind: hyperparameter}
PRIOR_PRESETS = {
    "sparse": {"uniform": 1e5, "exponential": 1e-5},
    "mid-dense": {"uniform": 4.0, "exponential": 0.3},
}
DEFAULT_PRIOR_PRESET = "sparse"

# Selection criteria (CLI names)
CRITERIA = ("mml-u", "mml-e", "bic", "aic", "mle-ms", "mle-thr", "rand")
DEFAULT_CRITERION = "mml-u"
MML_PRIOR_KINDS = {"mml-u": "uniform", "mml-e": "exponential"}
DEFAULT_THRESHOLD = 0.1

# Optimizer defaults
OPTIMIZER_METHODS = ("nelder-mead", "l-bfgs-b")
DEFAULT_OPTIMIZER = "nelder-mead"
DEFAULT_XATOL = 1e-8
DEFAULT_FATOL = 1e-8
DEFAULT_MAX_ITER = 5000
DEFAULT_RESTARTS = 2

# Simulator
DEFAULT_MAX_EVENTS = 10**7
RNG_ALGORITHM = "PCG64"

# Ingest
DEFAULT_WINDOW = 252
DEFAULT_QUANTILE = 0.2
DEFAULT_INGEST_HORIZON = 400.0

# Benchmark settings and their defaults
SETTINGS = ("cascade", "single-input", "bernoulli")
SETTING_DEFAULTS = {
    "cascade": {"alpha": 0.55, "mu": 0.5, "prior_preset": "sparse"},
    "single-input": {"alpha": 0.55, "mu": 0.5, "prior_preset": "sparse"},
    "bernoulli": {
        "alpha": [0.1, 0.2],
        "mu": [0.5, 1.0],
        "edge_probability": 0.3,
        "prior_preset": "mid-dense",
    },
}
DESK_TRIALS = 20
FULL_TRIALS = 100

# Event file columns
EVENT_COLUMNS = ("node_id", "time")
EVENTS_META_SUFFIX = ".meta.json"

# Environment variable names
ENV_CONFIG_DIR = "HAWKES_MML_CONFIG_DIR"
ENV_LOG_LEVEL = "HAWKES_MML_LOG_LEVEL"
ENV_WORKERS = "HAWKES_MML_WORKERS"
