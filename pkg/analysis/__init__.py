# Working-precision analysis: normalization, Mertens-type sums, constants, envelopes, Meissel sums
from analysis.normalization import (
    AxiomAEstimate, NormalizedSemigroup, estimate_A, estimate_q, h_eval, lambda_sequence,
    normalize, residuals
)
from analysis.mertens import (
    exact_degree_identity_check, lambda_partial_sum, lemma3_lhs, mertens_product, mertens_sum,
    prime_power_sum
)
from analysis.constants import ConstantsReport, c_1, c_2, c_3, c_m, compute_constants, euler_gamma
from analysis.envelopes import ErrorEnvelope, error_envelope, fit_residual_model, make_envelope
from analysis.meissel import (
    MeisselEvaluation, j_integral, meissel_alpha_scan, meissel_identity_residual, meissel_series,
    s_deviation
)

__all__ = [
    'AxiomAEstimate', 'NormalizedSemigroup', 'estimate_A', 'estimate_q', 'h_eval', 'lambda_sequence',
    'normalize', 'residuals', 'exact_degree_identity_check', 'lambda_partial_sum', 'lemma3_lhs',
    'mertens_product', 'mertens_sum', 'prime_power_sum', 'ConstantsReport', 'c_1', 'c_2', 'c_3',
    'c_m', 'compute_constants', 'euler_gamma', 'ErrorEnvelope', 'error_envelope',
    'fit_residual_model', 'make_envelope', 'MeisselEvaluation', 'j_integral', 'meissel_alpha_scan',
    'meissel_identity_residual', 'meissel_series', 's_deviation',
]
