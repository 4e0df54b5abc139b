"""Exact computations with bimodules over the dual numbers Q[x]/(x^2)."""

from .bimodule import Bimodule, Morphism, construct, direct_sum, hom_space, tensor
from .decomposition import decompose, identify, is_isomorphic, summand_test
from .labels import Band, M, N, ProjInj, Regular, S, W, parse_label

__version__ = "0.1.0"

__all__ = [
    "Band",
    "Bimodule",
    "M",
    "Morphism",
    "N",
    "ProjInj",
    "Regular",
    "S",
    "W",
    "construct",
    "decompose",
    "direct_sum",
    "hom_space",
    "identify",
    "is_isomorphic",
    "parse_label",
    "summand_test",
    "tensor",
]
