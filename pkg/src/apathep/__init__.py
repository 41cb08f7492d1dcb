"""Allowable A-paths in group-labelled graphs: EP conditions, walls, obstructions and exact solvers."""
from .epcond import LambdaSet, check_ep1, check_ep2, check_epc
from .group import GroupElement, GroupSpec
from .lgraph import ApPath, LabelledGraph, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "ApPath",
    "GroupElement",
    "GroupSpec",
    "LabelledGraph",
    "LambdaSet",
    "check_ep1",
    "check_ep2",
    "check_epc",
    "parse",
    "serialize",
]
