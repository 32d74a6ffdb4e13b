"""Exact arithmetic on the Stern-Brocot family of trees.

The package enumerates the rationals through mediant trees and their
binary codings, evaluates the singular homeomorphisms (? and its
two-sided extension) exactly, iterates the six interval maps that
count the trees, applies transfer and Markov operators in closed
rational form, and simulates the associated random walks with a
counter-based deterministic generator.
"""

from .core import (
    CapExceeded,
    DomainError,
    ExtRat,
    INF,
    ONE,
    ZERO,
    canonicalize_cf,
    cf_from_rat,
    complement_cf,
    depth,
    format_cf,
    mediant,
    parse_cf,
    phi,
    phi_inv,
    rank,
    rat_from_cf,
)
from .coding import (
    InfiniteCode,
    children_cf,
    code_compare,
    hat,
    matrix_from_word,
    parents,
    pi_code,
    rat_from_word,
    word_from_cf,
    word_from_rat,
)
from .trees import TreeSpec, descendants, hyperbinary, level, level_arrays
from .minkowski import (
    BinaryWord,
    Dyadic,
    binary_word,
    distribution_estimate,
    fourier_tree_mean,
    qmark,
    qmark_enclosure,
    qmark_inv,
    rho,
    rho_inv,
    stieltjes_mean,
)
from .maps import (
    StackInterval,
    apply,
    apply_inverse,
    binary_digits,
    conjugacy_residual,
    eigenfunction_check,
    ergodic_fourier,
    inverse_branches,
    odometer_value,
    orbit,
    orbit_iter,
    stack_interval,
)
from .operators import (
    averaging_apply,
    commutator_residual,
    h1,
    harmonic_series_partial,
    lewis_zagier_residual,
    markov_apply,
    markov_power,
    transfer_apply,
    transition_probs,
)
from .stochastic import (
    ChainSpec,
    HittingResult,
    MartingaleReport,
    WalkPath,
    cylinder_prob,
    hitting_experiment,
    martingale_check,
    mc0_limit_experiment,
    simulate,
    walk_table,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "CapExceeded", "DomainError", "ExtRat", "INF", "ONE", "ZERO",
    "canonicalize_cf", "cf_from_rat", "complement_cf", "depth",
    "format_cf", "mediant", "parse_cf", "phi", "phi_inv", "rank",
    "rat_from_cf",
    # coding
    "InfiniteCode", "children_cf", "code_compare", "hat",
    "matrix_from_word", "parents", "pi_code", "rat_from_word",
    "word_from_cf", "word_from_rat",
    # trees
    "TreeSpec", "descendants", "hyperbinary", "level", "level_arrays",
    # minkowski
    "BinaryWord", "Dyadic", "binary_word", "distribution_estimate",
    "fourier_tree_mean", "qmark", "qmark_enclosure", "qmark_inv",
    "rho", "rho_inv", "stieltjes_mean",
    # maps
    "StackInterval", "apply", "apply_inverse", "binary_digits",
    "conjugacy_residual", "eigenfunction_check", "ergodic_fourier",
    "inverse_branches", "odometer_value", "orbit", "orbit_iter",
    "stack_interval",
    # operators
    "averaging_apply", "commutator_residual", "h1",
    "harmonic_series_partial", "lewis_zagier_residual", "markov_apply",
    "markov_power", "transfer_apply", "transition_probs",
    # stochastic
    "ChainSpec", "HittingResult", "MartingaleReport", "WalkPath",
    "cylinder_prob", "hitting_experiment", "martingale_check",
    "mc0_limit_experiment", "simulate", "walk_table",
]
