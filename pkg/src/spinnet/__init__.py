"""spinnet: exact evaluation of knotted spin-network invariants.

Evaluates the regular-isotopy invariant E(diagram, k) of spin networks via
skein relations over an exact Laurent/radical ring, removes the framing factor
to obtain an ambient-isotopy invariant P, and extracts Vassiliev-type
coefficients from the power-series expansion in kappa = 2*pi*i/k.
"""

from spinnet.scalar import (
    ExactValue,
    KappaSeries,
    LaurentQ,
    RadicalCoefficient,
    Rational,
)

__all__ = [
    "ExactValue",
    "KappaSeries",
    "LaurentQ",
    "RadicalCoefficient",
    "Rational",
]
