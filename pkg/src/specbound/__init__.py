"""Bath correlation functions and certified error bounds for spin-boson baths."""

from __future__ import annotations

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    ConditionStatus,
    GammaEta,
    VariationSpec,
    bound_reports,
    check_integrability,
    gamma_eta,
    general_bound,
    strong_bound,
    sup_estimate,
    weak_bound,
)
from .correlations import (
    BathSpec,
    CorrelationFn,
    MatsubaraSum,
    correlation_function,
    xi_delta_mode,
    xi_lorentzian_closed,
    xi_ohmic_closed,
    xi_quadrature,
    xi_subohmic_limit,
    xi_superohmic_closed,
)
from .densities import (
    Combination,
    DeltaMode,
    LorentzianSum,
    LorentzianTerm,
    Ohmic,
    SpectralDensity,
    Subohmic,
    Superohmic,
    difference,
    eval_density,
)
from .errors import (
    BudgetExceeded,
    ConfigError,
    DeltaNotEvaluable,
    DomainError,
    SpecboundError,
    ToleranceNotMet,
)
from .heom_cert import (
    MatsubaraTail,
    MeierTannorModel,
    TruncationCert,
    certify,
    delta_xi_truncation,
    gamma_analytic,
    gamma_numeric,
    meier_tannor_bath,
    meier_tannor_density,
    min_N_for_error,
)
from .special import coth, polygamma

__all__ = [
    "coth",
    "polygamma",
    "__version__",
    "BoundReport",
    "ConditionStatus",
    "GammaEta",
    "VariationSpec",
    "bound_reports",
    "check_integrability",
    "gamma_eta",
    "general_bound",
    "strong_bound",
    "sup_estimate",
    "weak_bound",
    "BathSpec",
    "CorrelationFn",
    "MatsubaraSum",
    "correlation_function",
    "xi_delta_mode",
    "xi_lorentzian_closed",
    "xi_ohmic_closed",
    "xi_quadrature",
    "xi_subohmic_limit",
    "xi_superohmic_closed",
    "Combination",
    "DeltaMode",
    "LorentzianSum",
    "LorentzianTerm",
    "Ohmic",
    "SpectralDensity",
    "Subohmic",
    "Superohmic",
    "difference",
    "eval_density",
    "BudgetExceeded",
    "ConfigError",
    "DeltaNotEvaluable",
    "DomainError",
    "SpecboundError",
    "ToleranceNotMet",
    "MatsubaraTail",
    "MeierTannorModel",
    "TruncationCert",
    "certify",
    "delta_xi_truncation",
    "gamma_analytic",
    "gamma_numeric",
    "meier_tannor_bath",
    "meier_tannor_density",
    "min_N_for_error",
]
