"""Exact computations for finite reflection groups in rank <= 3.

Submodules:
    exactnum    cyclotomic field arithmetic
    matgroup    matrix group closure, conjugacy classes, fixed spaces, age
    reflection  pseudoreflections, discriminant components, invariant degrees
    toric       lattices, fans and smoothness checks
    sodcalc     SOD shape bookkeeping and verification against class counts
    cli         command-line front end
"""

from .errors import McKayError
from .exactnum import CycNumber
from .matgroup import FiniteMatrixGroup, SquareMatrix, close_group
from .reflection import FamilySpec, builtin_group, parse_family

__all__ = [
    "CycNumber",
    "FamilySpec",
    "FiniteMatrixGroup",
    "McKayError",
    "SquareMatrix",
    "builtin_group",
    "close_group",
    "parse_family",
]

__version__ = "0.1.0"
