"""Integral matrices with pairwise orthogonal columns of equal norm (icubes)
over Z and the Gaussian integers: verification, obstructions and constructive
extension in dimensions 3, 4 and 6."""

from .errors import IcubeError
from .hermitian import HermForm2, OrthoBasis2, build_orthoregular, extend_to_orthoregular, f_inv, f_map
from .icube import (
    IcubeMatrix,
    ObstructionReport,
    extend3,
    extend3_with_snf,
    extend4,
    extend4_with_snf,
    extend6_real,
    generate_random_icube,
    necessary_conditions,
    snf_pairing_check,
    verify,
)
from .lattice import kernel_basis, snf
from .quat import HurwitzQuat, Quat, hurwitz_right_gcd, lipschitz_left_divisor
from .ring import GaussInt, Ring, gauss_gcd, two_squares

__version__ = "0.1.0"

__all__ = [
    "GaussInt",
    "HermForm2",
    "HurwitzQuat",
    "IcubeError",
    "IcubeMatrix",
    "ObstructionReport",
    "OrthoBasis2",
    "Quat",
    "Ring",
    "build_orthoregular",
    "extend3",
    "extend3_with_snf",
    "extend4",
    "extend4_with_snf",
    "extend6_real",
    "extend_to_orthoregular",
    "f_inv",
    "f_map",
    "gauss_gcd",
    "generate_random_icube",
    "hurwitz_right_gcd",
    "kernel_basis",
    "lipschitz_left_divisor",
    "necessary_conditions",
    "snf",
    "snf_pairing_check",
    "two_squares",
    "verify",
]
