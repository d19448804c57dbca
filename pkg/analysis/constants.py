"""
Constants of a semigroup: gamma, A, C_M, C_1, C_2, C_3 and the I-integral.

Tail bounds for the infinite series use the empirical majorant
P(k) <= c q^k / k beyond the data, with c = max lambda_k measured on the
available degrees; such bounds are labeled as conditional.
"""

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from mpmath import mp

from analysis.mertens import c_m_term, lambda_integral
from analysis.normalization import estimate_q, is_exact_q, lambda_sequence, resolve_A
from logger import logger
from semigroup.counts import GeneratorCounts
from semigroup.errors import DomainError, InsufficientData, PrecisionError
from semigroup.numeric import Bounded, format_real, precision_scope, rational, to_mpf, working_bits

ORACLE_TERMS = 10 ** 4
ORACLE_BERNOULLI_TERMS = 12
ORACLE_DIGITS = 30
DEFAULT_CONSTANT_TOL = mp.mpf("1e-10")


def _euler_maclaurin_gamma(n: int, terms: int):
    """H_n - ln n - 1/(2n) + sum_k B_2k / (2k n^2k), with H_n summed directly"""
    harmonic = mp.fsum(mp.mpf(1) / k for k in range(1, n + 1))
    correction = mp.fsum(mp.bernoulli(2 * k) / (2 * k * mp.mpf(n) ** (2 * k)) for k in range(1, terms + 1))
    return harmonic - mp.log(n) - mp.mpf(1) / (2 * n) + correction


@lru_cache(maxsize=8)
def _validated_gamma(bits: int):
    check_bits = max(bits, 128) + 32
    with mp.workprec(check_bits):
        reference = +mp.euler
        oracle = _euler_maclaurin_gamma(ORACLE_TERMS, ORACLE_BERNOULLI_TERMS)
        if abs(reference - oracle) > mp.mpf(10) ** (-ORACLE_DIGITS):
            logger.log_error(
                "gamma_oracle_mismatch",
                f"library={mp.nstr(reference, 40)} oracle={mp.nstr(oracle, 40)}",
                f"bits={bits}"
            )
            raise PrecisionError(f"Euler's constant disagrees with its oracle at {bits} bits")
    with mp.workprec(bits):
        return +reference


def euler_gamma(precision_bits: Optional[int] = None):
    """Euler's constant at the requested precision, checked against a harmonic-sum oracle"""
    bits = working_bits(precision_bits)
    if bits < 64:
        raise DomainError(f"precision_bits must be >= 64, got {bits}")
    return _validated_gamma(bits)


def _majorant_constant(P: GeneratorCounts, q):
    lam = lambda_sequence(P, q)
    return max(abs(v) for v in lam)


def _geometric_tail(c, q_real, K: int, tail_order: int):
    """c sum_{k>K} q^(-k) majorant with the series-specific prefactor"""
    x = q_real ** (-(K + 1))
    geometric = x / (1 - 1 / q_real)
    if tail_order == 2:
        # sum_{j>=2} x^j / j <= x^2 / (2 (1 - x)); P(k) x^2 <= c q^-k / k
        return c * geometric / (2 * (K + 1) * (1 - x))
    # k P(k) x^2 / (1 - x) <= c q^-k / (1 - x)
    return c * geometric / (1 - x)


def _bounded_series(P: GeneratorCounts, q, tol, term, tail_order: int, name: str) -> Bounded:
    tol = to_mpf(tol)
    if tol <= 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    q_real = to_mpf(q)
    c = _majorant_constant(P, q)
    total = mp.mpf(0)
    bound = None
    for k in range(1, P.n_max + 1):
        total += term(P[k], q, k)
        bound = _geometric_tail(c, q_real, k, tail_order)
        # the remaining terms no longer register at working precision
        if bound <= mp.eps * abs(total):
            break
    if bound > tol:
        raise InsufficientData(
            f"{name}: tail bound {mp.nstr(bound, 5)} at n_max={P.n_max} exceeds tol {mp.nstr(tol, 5)}"
        )
    return Bounded(total, bound, f"conditional on P(k) <= {mp.nstr(c, 6)} q^k / k beyond the data")


@precision_scope
def c_m(P: GeneratorCounts, q, tol=DEFAULT_CONSTANT_TOL) -> Bounded:
    """C_M = sum_k P(k) (-ln(1 - q^-k) - q^-k)"""
    return _bounded_series(P, q, tol, c_m_term, 2, "C_M")


def _c_3_term(P_k, q, k: int):
    if P_k == 0:
        return mp.mpf(0)
    if is_exact_q(q) and isinstance(P_k, int):
        power = q ** k
        return rational(k * P_k, power * (power - 1))
    power = to_mpf(q) ** k
    return k * to_mpf(P_k) / (power * (power - 1))


@precision_scope
def c_3(P: GeneratorCounts, q, tol=DEFAULT_CONSTANT_TOL) -> Bounded:
    """C_3 = sum_k k P(k) / (q^k (q^k - 1))"""
    return _bounded_series(P, q, tol, _c_3_term, 3, "C_3")


def _value_and_bound(quantity):
    if isinstance(quantity, Bounded):
        return to_mpf(quantity.value), to_mpf(quantity.bound)
    return to_mpf(quantity), mp.mpf(0)


@precision_scope
def c_1(A, C_M, gamma) -> Bounded:
    """C_1 = gamma + ln A - C_M"""
    a, a_bound = _value_and_bound(A)
    cm, cm_bound = _value_and_bound(C_M)
    g, g_bound = _value_and_bound(gamma)
    if a <= 0:
        raise DomainError(f"A must be > 0, got {a}")
    return Bounded(g + mp.log(a) - cm, g_bound + a_bound / a + cm_bound)


@precision_scope
def c_2(A, gamma) -> Bounded:
    """C_2 = 1 / (A exp(gamma))"""
    a, a_bound = _value_and_bound(A)
    g, g_bound = _value_and_bound(gamma)
    if a <= 0:
        raise DomainError(f"A must be > 0, got {a}")
    value = mp.exp(-g) / a
    return Bounded(value, value * (a_bound / a + g_bound))


@dataclass(frozen=True)
class ConstantsReport:
    gamma: object
    q: object
    n_max: int
    A: Optional[Bounded]
    A_method: Optional[str]
    C_M: Bounded
    C_1: Optional[Bounded]
    C_2: Optional[Bounded]
    C_3: Bounded
    I_integral: Optional[Bounded]
    degenerate: bool = False

    def as_dict(self, digits: int) -> dict:
        def pair(quantity):
            return quantity.as_dict(digits) if quantity is not None else None

        return {
            "degenerate": self.degenerate,
            "q": format_real(self.q, digits),
            "n_max": self.n_max,
            "A_method": self.A_method,
            "gamma": {"value": format_real(self.gamma, digits), "bound": format_real(0, digits)},
            "A": pair(self.A),
            "C_M": pair(self.C_M),
            "C_1": pair(self.C_1),
            "C_2": pair(self.C_2),
            "C_3": pair(self.C_3),
            "I_integral": pair(self.I_integral),
        }


def compute_constants(semigroup, tol=DEFAULT_CONSTANT_TOL, precision_bits=None) -> ConstantsReport:
    """All constants of one semigroup; a zero semigroup gives 0 for C_M, C_3 and nulls elsewhere"""
    bits = working_bits(precision_bits)
    start_time = time.time()
    with mp.workprec(bits):
        gamma = euler_gamma(bits)
        if semigroup.is_zero:
            zero = Bounded(mp.mpf(0), mp.mpf(0))
            logger.log_system_event("degenerate_semigroup", "P vanishes identically; ln growth absent")
            return ConstantsReport(gamma, semigroup.q, semigroup.n_max, None, None,
                                   zero, None, None, zero, None, degenerate=True)

        q = semigroup.q if semigroup.q is not None else estimate_q(semigroup.G).value
        estimate = resolve_A(semigroup, q)
        A = Bounded(estimate.A, to_mpf(estimate.error_estimate))
        C_M = c_m(semigroup.P, q, tol)
        C_3 = c_3(semigroup.P, q, tol)
        C_1 = c_1(A, C_M, gamma)
        C_2 = c_2(A, gamma)
        I_integral = lambda_integral(lambda_sequence(semigroup.P, q), semigroup.n_max) \
            if semigroup.n_max >= 2 else None

        for name, quantity in (("A", A), ("C_M", C_M), ("C_1", C_1), ("C_2", C_2), ("C_3", C_3)):
            logger.log_constant(name, mp.nstr(quantity.value, 20), mp.nstr(quantity.bound, 5))
        logger.log_system_event(
            "constants_computed",
            f"n_max={semigroup.n_max} bits={bits} time={time.time() - start_time:.3f}s"
        )
        return ConstantsReport(gamma, q, semigroup.n_max, A, estimate.method,
                               C_M, C_1, C_2, C_3, I_integral)
