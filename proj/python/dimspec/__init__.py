"""Certified Hausdorff dimension enclosures for shift-generated conformal constructions.

The heavy lifting lives in the C++ extension ``_dimspec``; this package
re-exports its public surface.
"""

from ._dimspec import (  # noqa: F401
    DimensionEnclosure,
    PressureEnclosure,
    ShiftSpec,
    SystemSpec,
    affine_system,
    beta_curve,
    beta_shift,
    bowen_root,
    coded_shift,
    connecting_words,
    continued_fraction_system,
    count_language,
    cylinder_interval,
    delta_bound,
    dimension,
    exhaustion_dimension,
    full_shift,
    greedy_expansion,
    guard_band_hits,
    invert_dimension,
    invert_dimension_markov,
    is_word_admissible,
    language,
    markov_shift,
    pressure_enclosure,
    replace_word,
    reset_guard_band_hits,
    scc_decomposition,
    sparse_zero_replacement,
    word_derivative_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
