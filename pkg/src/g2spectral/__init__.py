"""Spectral curves of G2 polynomial Killing fields.

Subpackages mirror the layers of the construction: octonions and g2
(:mod:`octonion`), exterior forms and their invariants (:mod:`exterior`,
:mod:`forms`), twisted loops (:mod:`loop`), spectral curves and branch
counting (:mod:`spectral`), the Lax flow (:mod:`lax`) and fiberwise
eigenline checks (:mod:`eigenline`).
"""
__version__ = "0.1.0"

from .errors import G2SpectralError  # noqa: E402
from .kernels import BACKEND  # noqa: E402
from .loop import KillingField, evaluate_at, gauge_reduce_lambda, random_killing_field, symmetry_residuals  # noqa: E402
from .spectral import (char_coefficients, discriminant_profile, genus_report, smoothness_check,  # noqa: E402
                       spectral_coefficients, to_lambda)

__all__ = [
    "__version__", "BACKEND", "G2SpectralError", "KillingField", "random_killing_field", "evaluate_at",
    "symmetry_residuals", "gauge_reduce_lambda", "char_coefficients", "to_lambda", "spectral_coefficients",
    "discriminant_profile", "genus_report", "smoothness_check",
]
