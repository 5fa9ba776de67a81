"""Nyman-Beurling / Báez-Duarte computations for Dirichlet L-functions.

Submodules: :mod:`~nblab.arith` (characters, Möbius), :mod:`~nblab.lfun`
(Hurwitz zeta and L-values), :mod:`~nblab.kappa` (the kappa function and its
dilates), :mod:`~nblab.bd` (Báez-Duarte distances), :mod:`~nblab.ortho`
(orthonormal Dirichlet polynomials and kernels), :mod:`~nblab.extremal`
(minimum-norm interpolation) and :mod:`~nblab.cli`.
"""

__version__ = "0.1.0"

from .arith import CharacterTable, character, characters_mod, mobius, totient, weighted_prefix
from .bd import GramSystem, bd_distance, build_gram, freq_objective, gram_entry, plancherel_check
from .errors import ConditioningError, InvalidParameterError, NBLabError, PoleError, PrecisionError
from .extremal import ExtremalSolution, asymptotic_table, compare_mollifier, min_norm_oracle, solve_problem2
from .kappa import KappaSpec, Segment, kappa_build, kappa_eval, lambda_segments
from .lfun import DirichletPoly, hurwitz_zeta, inv_l_partial, l_eval, mollifier_vn
from .ortho import KernelMatrix, kernel_eval, kernel_matrix, monomial_inner, psi_eval

__all__ = [
    "CharacterTable", "ConditioningError", "DirichletPoly", "ExtremalSolution", "GramSystem",
    "InvalidParameterError", "KappaSpec", "KernelMatrix", "NBLabError", "PoleError",
    "PrecisionError", "Segment", "asymptotic_table", "bd_distance", "build_gram", "character",
    "characters_mod", "compare_mollifier", "freq_objective", "gram_entry", "hurwitz_zeta",
    "inv_l_partial", "kappa_build", "kappa_eval", "kernel_eval", "kernel_matrix", "l_eval",
    "lambda_segments", "min_norm_oracle", "mobius", "mollifier_vn", "monomial_inner",
    "plancherel_check", "psi_eval", "solve_problem2", "totient", "weighted_prefix",
]
