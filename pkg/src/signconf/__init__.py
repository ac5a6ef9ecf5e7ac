"""Retrospective design analysis and sign-error control for tests of H0: theta = 0."""

from .design import (
    DesignAnalysis,
    DesignPoint,
    McResult,
    analyze_tau,
    exaggeration_analytic,
    one_tailed_wrong_sign,
    power_two_sided,
    retrodesign_mc,
    retrodesign_power,
    solve_tau,
    type_s,
)
from .errors import DomainError, NumericError, UndersampledError
from .signpolicy import (
    Decision,
    SignPolicy,
    SignTestReport,
    decide,
    make_policy,
    sign_declaration_power,
    sign_error_bound,
)

__all__ = [
    "DesignAnalysis",
    "DesignPoint",
    "McResult",
    "analyze_tau",
    "exaggeration_analytic",
    "one_tailed_wrong_sign",
    "power_two_sided",
    "retrodesign_mc",
    "retrodesign_power",
    "solve_tau",
    "type_s",
    "Decision",
    "SignPolicy",
    "SignTestReport",
    "decide",
    "make_policy",
    "sign_declaration_power",
    "sign_error_bound",
    "DomainError",
    "NumericError",
    "UndersampledError",
]

__version__ = "0.1.0"
