"""Darboux polynomials, exponential factors and Darboux first integrals at bounded degree."""

from .certificates import (
    Cofactor,
    DarbouxCertificate,
    MissingDenominatorCertificate,
    UnverifiedCertificate,
    UnverifiedDenominator,
    ZeroDenominatorPolynomial,
    cofactor_of,
    darboux_residual,
    exponential_residual,
    rational_first_integral_residual,
    verified,
    verify_certificate,
    verify_rational_first_integral,
)
from .compose import DarbouxFirstIntegral, compose_first_integral, irreducible_certificates, irreducible_factors
from .exponential import ExponentialSystem, exponential_system, find_exponential_factors
from .lie_matrix import LieMatrix, build_lie_matrix, expected_shape
from .parametric import BranchBudgetExceeded
from .report import report_from_dict, report_to_dict, report_to_json
from .search import (
    DEFAULT_DEGREE,
    DEFAULT_MAX_BRANCHES,
    BranchSummary,
    SearchReport,
    find_darboux_constant_cofactor,
    find_darboux_linear_cofactor,
    find_polynomial_first_integrals,
    search,
)
