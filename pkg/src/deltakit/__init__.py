"""Exact Zariski-chamber sweeps and flag S-invariants for rank-2 Fano threefolds.

The layers build on each other:

* :mod:`deltakit.exactnum` - rationals, polynomials, piecewise integration
* :mod:`deltakit.intersection` - surface lattices, the rank-2 threefold algebra
* :mod:`deltakit.zariski` - Zariski decompositions
* :mod:`deltakit.sweep` - chambered decompositions along rays and nested sweeps
* :mod:`deltakit.invariants` - S-invariants, flag functionals, verdicts
* :mod:`deltakit.family217` - scenario catalog, reports and the CLI
"""

from .exactnum import PiecewisePoly, Polynomial, Rat, rat_str, to_rat
from .intersection import (
    BlowUp,
    CurveRecord,
    DivisorClass,
    NefWall,
    RestrictionMap,
    SurfaceLattice,
    ThreefoldAlgebra,
    blow_up_point,
    pair,
    triple,
)
from .invariants import (
    FlagScenario,
    IncompleteProfiles,
    PointProfile,
    Verdict,
    certify_center,
    f_o_term,
    s_curve_flag,
    s_divisor,
    s_point_flag_F,
    s_point_flag_O,
)
from .linalg import BACKEND
from .sweep import ChamberedDecomposition, NestedSweep, sweep_surface_at, sweep_threefold
from .zariski import ZariskiResult, check_zariski, decompose_surface, decompose_threefold_rank2

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BlowUp",
    "ChamberedDecomposition",
    "CurveRecord",
    "DivisorClass",
    "FlagScenario",
    "IncompleteProfiles",
    "NefWall",
    "NestedSweep",
    "PiecewisePoly",
    "PointProfile",
    "Polynomial",
    "Rat",
    "RestrictionMap",
    "SurfaceLattice",
    "ThreefoldAlgebra",
    "Verdict",
    "ZariskiResult",
    "blow_up_point",
    "certify_center",
    "check_zariski",
    "decompose_surface",
    "decompose_threefold_rank2",
    "f_o_term",
    "pair",
    "rat_str",
    "s_curve_flag",
    "s_divisor",
    "s_point_flag_F",
    "s_point_flag_O",
    "sweep_surface_at",
    "sweep_threefold",
    "to_rat",
    "triple",
]
