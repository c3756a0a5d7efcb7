"""Dimensional homogeneity checking for economic models, plus growth-model numerics."""

from pathlib import Path

from .dimcore import DimensionSystem, Dimension, Quantity, ECON_BASES
from .eqdsl import parse_model, parse_expr, format_expr
from .homcheck import check_model, solve_unknown_dimensions, dimensionless_groups

CORPUS = Path(__file__).with_name("corpus")

__all__ = [
    "CORPUS",
    "Dimension",
    "DimensionSystem",
    "ECON_BASES",
    "Quantity",
    "check_model",
    "dimensionless_groups",
    "format_expr",
    "parse_expr",
    "parse_model",
    "solve_unknown_dimensions",
]
