"""Numerics for weighted Orlicz norms, finite Gabor systems, Bargmann
transforms and Wiener amalgams, plus the verification suites built on them."""

from .orlicz import (DiscreteSeq, NormReport, SampledField, luxemburg,
                     mixed_luxemburg, order_transfer_check, translate)
from .weights import (Weight, check_moderate, classify_weight, make_const,
                      make_exp, make_poly, parse_weight)
from .young import (QuasiYoungFunction, expm1, limit_ratio_at_zero, linf,
                    monomial, parse_young, piecewise, power, verify_quasi_young)

__version__ = "0.1.0"

__all__ = [
    "DiscreteSeq", "SampledField", "NormReport",
    "luxemburg", "mixed_luxemburg", "order_transfer_check", "translate",
    "Weight", "make_poly", "make_exp", "make_const", "parse_weight",
    "check_moderate", "classify_weight",
    "QuasiYoungFunction", "power", "monomial", "linf", "expm1", "piecewise",
    "parse_young", "verify_quasi_young", "limit_ratio_at_zero",
    "__version__",
]
