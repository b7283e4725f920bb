"""Outage, reliability and delay of finite-blocklength links in Poisson interference fields."""

__version__ = "0.1.0"

from .numerics import (ConvergenceError, DomainError, ModelDomainError, NumericError,
                       QuadratureResult, SeedSpec)
from .sinr import SinrParams, derive_params, sinr_cdf, sinr_pdf, sinr_quantile, sinr_survival
from .outage import (CodeParams, Method, OutageEstimate, approximation_error, conditional_error,
                     derive_code_params, dispersion, linearized_kernel, outage,
                     outage_closed_micro_op, outage_closed_ss, outage_closed_ss_alpha4,
                     outage_exact, outage_linearized)
from .harq import ArqConfig, DelayReport, arq_outage, expected_delay, worst_case_delay

__all__ = [
    "__version__",
    "ConvergenceError", "DomainError", "ModelDomainError", "NumericError",
    "QuadratureResult", "SeedSpec",
    "SinrParams", "derive_params", "sinr_cdf", "sinr_pdf", "sinr_quantile", "sinr_survival",
    "CodeParams", "Method", "OutageEstimate", "approximation_error", "conditional_error",
    "derive_code_params", "dispersion", "linearized_kernel", "outage",
    "outage_closed_micro_op", "outage_closed_ss", "outage_closed_ss_alpha4",
    "outage_exact", "outage_linearized",
    "ArqConfig", "DelayReport", "arq_outage", "expected_delay", "worst_case_delay",
]
