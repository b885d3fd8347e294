__all__ = (
    "BOUNDARY_TOL",
    "ROOT_TOL",
    "ROOT_RESIDUAL",
    "NEWTON_MAX_ITER",
    "RAY_SAMPLES",
    "REAL_TOL",
    "FD_STEP",
    "EXTENSION_FD_STEP",
    "SEELEY_ORDER",
    "SEELEY_MAX_ORDER",
    "MOMENT_TOL",
    "SOLVER_SEELEY_ORDER",
    "COLLAR_WIDTH",
    "C_N",
    "PAIR_CAP",
    "SMOOTHING_NODES",
    "HEFER_TOL",
    "SLACK_TOL",
    "RESIDUAL_FLOOR",
    "REFINEMENT_RATIO",
    "THREADS_ENV",
    "LOG_LEVEL_ENV",
    "OUTPUT_DIR_ENV",
    "CSV_COLUMNS",
)


BOUNDARY_TOL = 1e-9

# ray root refinement
ROOT_TOL = 1e-12
ROOT_RESIDUAL = 1e-10
NEWTON_MAX_ITER = 50
RAY_SAMPLES = 64

REAL_TOL = 1e-12

FD_STEP = 1e-3
EXTENSION_FD_STEP = 1e-5

SEELEY_ORDER = 6
SEELEY_MAX_ORDER = 12
MOMENT_TOL = 1e-9
SOLVER_SEELEY_ORDER = 4
COLLAR_WIDTH = 0.4

C_N = 16.0
PAIR_CAP = 4000
SMOOTHING_NODES = 16

HEFER_TOL = 1e-12
SLACK_TOL = -1e-9

RESIDUAL_FLOOR = 1e-6
REFINEMENT_RATIO = 0.7

THREADS_ENV = "CRLAB_THREADS"
LOG_LEVEL_ENV = "CRLAB_LOG_LEVEL"
OUTPUT_DIR_ENV = "CRLAB_OUTPUT_DIR"

CSV_COLUMNS = ("experiment", "t", "resolution", "metric", "value", "tolerance", "pass")
