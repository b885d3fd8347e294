from typing import Literal as _Literal

ExperimentId = _Literal["E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10"]

Knob = _Literal[
    "quad_n",
    "polar_nodes",
    "boundary_nodes",
    "sphere_res",
    "t_grid",
    "fd_step",
    "pairs",
    "seeley_order",
    "terms",
    "grid",
    "check_points",
]

FunctionName = _Literal["conj", "re", "im", "abs2", "exp", "log"]
ProfileName = _Literal["chi0", "chi1"]

SolverName = _Literal["cauchy_pompeiu", "lieb_range", "homotopy"]
LerayKind = _Literal["convex", "hefer_levi"]
QuadratureKind = _Literal["volume", "boundary", "shell"]
