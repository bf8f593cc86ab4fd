"""Finite-level theta elements, Iwasawa group rings and Fitting ideals."""

__version__ = "0.1.0"

from .errors import BDThetaError
from .groupring import GroupRingElement, omega, solve_multiplication
from .padic import PadicScalar, PrecisionProfile, QuadScalar, RamifiedScalar
from .torus import AnticyclotomicTorus
from .tree import BruhatTitsTree

__all__ = [
    "AnticyclotomicTorus",
    "BDThetaError",
    "BruhatTitsTree",
    "GroupRingElement",
    "PadicScalar",
    "PrecisionProfile",
    "QuadScalar",
    "RamifiedScalar",
    "omega",
    "solve_multiplication",
]
