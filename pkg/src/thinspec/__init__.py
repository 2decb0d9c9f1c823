"""Eigenvalue asymptotics of the Dirichlet Laplacian on thin planar domains."""
from .asymptotics import Expansion, closed_c4_c6, closed_expansion, expand, gap_leading
from .exprjet import ParseError, eval_jet, evaluate, parse, to_string
from .geometry import DomainSpec, GeometryError, MaxData, max_data
from .recurrence import expand_to_order

__all__ = [
    "DomainSpec",
    "Expansion",
    "GeometryError",
    "MaxData",
    "ParseError",
    "closed_c4_c6",
    "closed_expansion",
    "eval_jet",
    "evaluate",
    "expand",
    "expand_to_order",
    "gap_leading",
    "max_data",
    "parse",
    "to_string",
]
