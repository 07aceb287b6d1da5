"""Antagonistic random matrices: sampling, spectra, exact expectations and checks."""

from ._core import (
    Error,
    bendixson_box,
    derive_seed,
    determinant,
    eigenvalues,
    elliptic_fit,
    expect,
    expected_char_poly,
    expected_det,
    figure,
    pfaffian,
    predict_degenerate,
    predict_extremes,
    radius_check,
    rho,
    sample_matrix,
    stability_report,
    validate_spec,
    verify,
)

__all__ = [
    "Error",
    "bendixson_box",
    "derive_seed",
    "determinant",
    "eigenvalues",
    "elliptic_fit",
    "expect",
    "expected_char_poly",
    "expected_det",
    "figure",
    "pfaffian",
    "predict_degenerate",
    "predict_extremes",
    "radius_check",
    "rho",
    "sample_matrix",
    "stability_report",
    "validate_spec",
    "verify",
]
