"""Embeddability of 4x4 Markov matrices with spectrum {1, lambda, mu, conj(mu)}.

All computation runs in 100-digit binary floating point; matrices may be
passed as nested lists of floats or of decimal strings.
"""

from ._core import (
    SCHEMA_VERSION,
    EmbedlogError,
    branch_log,
    build_example,
    build_perturbed,
    build_q,
    certify_witness,
    classify,
    closed_form_log,
    cone_check,
    eigenvalues,
    expm,
    perturbed_roundtrip,
    q_spectrum,
    sample_interior,
    validated_kappa,
    variety_residual,
)

__version__ = "0.1.0"

__all__ = [
    "SCHEMA_VERSION",
    "EmbedlogError",
    "branch_log",
    "build_example",
    "build_perturbed",
    "build_q",
    "certify_witness",
    "classify",
    "closed_form_log",
    "cone_check",
    "eigenvalues",
    "expm",
    "perturbed_roundtrip",
    "q_spectrum",
    "sample_interior",
    "validated_kappa",
    "variety_residual",
]
