from .quadrature import Quadrature, volume_rule, boundary_rule, shell_rule
from .common import check_points, residual, run_solve
from .cauchy import cauchy_pompeiu, cauchy_solve
from .lieb_range import LiebRange, bmk_solve
from .homotopy import Homotopy, homotopy_solve
from .reproduce import Reproduction, leray_reproduce, calibrate_reproduction
from .family import get_solver, solve_family
from .oka_weil import OkaWeilApproximant, oka_weil_step, sublevel_samples
from .cousin import Disk, PartitionOfUnity, CousinSolution, cousin1_solve, two_disk_cover


__all__ = (
    "Quadrature",
    "volume_rule",
    "boundary_rule",
    "shell_rule",
    "check_points",
    "residual",
    "run_solve",
    "cauchy_pompeiu",
    "cauchy_solve",
    "LiebRange",
    "bmk_solve",
    "Homotopy",
    "homotopy_solve",
    "Reproduction",
    "leray_reproduce",
    "calibrate_reproduction",
    "get_solver",
    "solve_family",
    "OkaWeilApproximant",
    "oka_weil_step",
    "sublevel_samples",
    "Disk",
    "PartitionOfUnity",
    "CousinSolution",
    "cousin1_solve",
    "two_disk_cover",
)
