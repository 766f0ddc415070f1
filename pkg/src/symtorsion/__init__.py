"""Exact Reidemeister torsion of based chain complexes and of symplectic chain complexes."""
from ._kernels import BACKEND
from .chain import (
    ChainComplex,
    HomologyData,
    InvalidComplex,
    Verdict,
    class_reduce,
    compute_homology,
    split_general,
    standard_bases,
    validate_complex,
)
from .generators import GenConfig, gen_chain_complex, gen_ses, gen_symplectic
from .linalg import (
    Matrix,
    Rational,
    change_of_basis_det,
    column_space_basis,
    determinant,
    inverse,
    kernel_basis,
    rref_decompose,
    solve_linear,
)
from .pfaffian import pfaffian
from .symplectic import (
    SymplecticComplex,
    align_orientation,
    induced_pairing,
    make_omega_compatible_bases,
    rhs_pairing_formula,
    split_symplectic,
    structure_sign,
    validate_symplectic,
    verify_main_theorem,
)
from .torsion import (
    ShortExactSequence,
    TorsionReport,
    base_change_factor,
    bracket,
    long_exact_sequence,
    milnor_product_check,
    torsion,
    torsion_acyclic_witten,
    validate_ses,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChainComplex",
    "GenConfig",
    "HomologyData",
    "InvalidComplex",
    "Matrix",
    "Rational",
    "ShortExactSequence",
    "SymplecticComplex",
    "TorsionReport",
    "Verdict",
    "align_orientation",
    "base_change_factor",
    "bracket",
    "change_of_basis_det",
    "class_reduce",
    "column_space_basis",
    "compute_homology",
    "determinant",
    "gen_chain_complex",
    "gen_ses",
    "gen_symplectic",
    "induced_pairing",
    "inverse",
    "kernel_basis",
    "long_exact_sequence",
    "make_omega_compatible_bases",
    "milnor_product_check",
    "pfaffian",
    "rhs_pairing_formula",
    "rref_decompose",
    "solve_linear",
    "split_general",
    "split_symplectic",
    "standard_bases",
    "structure_sign",
    "torsion",
    "torsion_acyclic_witten",
    "validate_complex",
    "validate_ses",
    "validate_symplectic",
    "verify_main_theorem",
]
