"""Sampling-based planners over Poisson point process samples."""

from .base import PlanResult, r_fmt_star, r_prm_star, recompute_cost
from .prm import PrmGraph, prm_build, prm_query
from .fmt import fmt_star
from .btt import btt, minimax_dijkstra
from .rrt import RrtTree, RrgRoadmap, rrt_build, rrg_build
from .simplify import simplify_path

__all__ = [
    "PlanResult", "r_fmt_star", "r_prm_star", "recompute_cost",
    "PrmGraph", "prm_build", "prm_query",
    "fmt_star", "btt", "minimax_dijkstra",
    "RrtTree", "RrgRoadmap", "rrt_build", "rrg_build",
    "simplify_path",
]
