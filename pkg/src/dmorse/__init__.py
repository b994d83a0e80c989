"""Discrete Morse complexes, connectedness maps and birth-death transitions."""

__version__ = "0.1.0"

from .complex import SimplicialComplex, load_complex, parse_complex
from .gradient import GradientVectorField, dmf_to_gvf, gvf_to_dmf, is_acyclic, validate_dmf
from .morse_chain import MorseChainComplex, build_morse_complex, simplicial_betti
from .morse_space import build_morse_function_complex, enumerate_matchings
from .transitions import birth_death_maps, certify_iso, connect, detect_transition

__all__ = [
    "GradientVectorField",
    "MorseChainComplex",
    "SimplicialComplex",
    "birth_death_maps",
    "build_morse_complex",
    "build_morse_function_complex",
    "certify_iso",
    "connect",
    "detect_transition",
    "dmf_to_gvf",
    "enumerate_matchings",
    "gvf_to_dmf",
    "is_acyclic",
    "load_complex",
    "parse_complex",
    "simplicial_betti",
    "validate_dmf",
]
