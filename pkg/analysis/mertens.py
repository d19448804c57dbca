"""
Mertens-type sums and products of a semigroup.

S(n) = sum_{k<=n} P(k)/q^k is the Mertens sum, prod_{k<=n} (1 - q^-k)^P(k) the
Mertens product and sum_{jd<=n} P(d) q^(-jd) / j the prime-power sum. The
lambda partial sums Lambda(n) = sum_{k<=n} lambda_k drive the I-integral.

Every function has an exact-rational path used when q is an integer and
P is exact; the result is then rounded once.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from mpmath import mp

from analysis.normalization import is_exact_q
from semigroup.counts import ElementCounts, GeneratorCounts, divisor_weighted_counts
from semigroup.errors import DomainError, ZeroDenominator
from semigroup.numeric import Bounded, is_exact, log_series_tail, precision_scope, rational, to_mpf


def _exact_inputs(P: GeneratorCounts, q) -> bool:
    return is_exact_q(q) and all(is_exact(v) for v in P)


def _check_degree(P: GeneratorCounts, n: int):
    if not 0 <= n <= P.n_max:
        raise DomainError(f"n must lie in 0..{P.n_max}, got {n}")


@dataclass(frozen=True)
class MertensProduct:
    product: object
    n_product: object
    reciprocal: object
    log_value: object


@dataclass(frozen=True)
class CorollaryStatistics:
    """Finite-window statistics for the decay hypotheses on lambda and r"""
    max_lambda: object
    max_n_r: object
    sum_abs_r: object
    zhang_sup_sum: object
    window: Tuple[int, int]


@precision_scope
def lambda_partial_sum(lam: Sequence, n: int) -> Tuple:
    """(sum_{k<=n} lambda_k, sum - n)"""
    if not 0 <= n <= len(lam):
        raise DomainError(f"n must lie in 0..{len(lam)}, got {n}")
    total = mp.fsum(lam[:n]) if n else mp.mpf(0)
    return total, total - n


def lambda_partial_sums(lam: Sequence) -> List:
    """Lambda(1..n) as a running sum in ascending degree"""
    sums = []
    total = mp.mpf(0)
    for value in lam:
        total += value
        sums.append(total)
    return sums


def mertens_sum_exact(P: GeneratorCounts, q: int, n: int) -> Fraction:
    _check_degree(P, n)
    numerator = 0
    # Horner over k keeps the numerator an integer over the common denominator q^n
    for k in range(1, n + 1):
        numerator = numerator * q + P[k]
    return Fraction(numerator, q ** n)


@precision_scope
def mertens_sum(P: GeneratorCounts, q, n: int):
    """S(n) = sum_{k<=n} P(k) / q^k"""
    _check_degree(P, n)
    if _exact_inputs(P, q):
        value = mertens_sum_exact(P, q, n)
        return rational(value.numerator, value.denominator)
    q_real = to_mpf(q)
    return mp.fsum(to_mpf(P[k]) / q_real ** k for k in range(1, n + 1)) if n else mp.mpf(0)


@precision_scope
def mertens_sums(P: GeneratorCounts, q, n: int) -> List:
    """S(1..n), each value rounded once from its exact rational when available"""
    _check_degree(P, n)
    sums = []
    if _exact_inputs(P, q):
        numerator = 0
        for k in range(1, n + 1):
            numerator = numerator * q + P[k]
            sums.append(rational(numerator, q ** k))
        return sums
    q_real = to_mpf(q)
    total = mp.mpf(0)
    for k in range(1, n + 1):
        total += to_mpf(P[k]) / q_real ** k
        sums.append(total)
    return sums


def prime_power_sum_exact(P: GeneratorCounts, q: int, n: int) -> Fraction:
    """sum over j d <= n of P(d) q^(-jd) / j = sum_{m<=n} b(m) / (m q^m), exactly"""
    if not _exact_inputs(P, q):
        raise DomainError("exact prime-power sum needs integer q and exact P")
    _check_degree(P, n)
    b = divisor_weighted_counts(P.prefix(n)) if n else [0]
    total = Fraction(0)
    for m in range(1, n + 1):
        if b[m]:
            total += Fraction(b[m], m * q ** m)
    return total


@precision_scope
def prime_power_sum(P: GeneratorCounts, q, n: int):
    if _exact_inputs(P, q):
        value = prime_power_sum_exact(P, q, n)
        return rational(value.numerator, value.denominator)
    return prime_power_sums(P, q, n)[-1] if n else mp.mpf(0)


@precision_scope
def prime_power_sums(P: GeneratorCounts, q, n: int) -> List:
    """Prefix sequence of the prime-power sum for degrees 1..n"""
    _check_degree(P, n)
    if n == 0:
        return []
    b = divisor_weighted_counts(P.prefix(n))
    sums = []
    if _exact_inputs(P, q):
        total = Fraction(0)
        for m in range(1, n + 1):
            total += Fraction(b[m], m * q ** m)
            sums.append(rational(total.numerator, total.denominator))
        return sums
    q_real = to_mpf(q)
    total = mp.mpf(0)
    for m in range(1, n + 1):
        total += to_mpf(b[m]) / (m * q_real ** m)
        sums.append(total)
    return sums


def c_m_term(P_k, q, k: int):
    """P(k) (-ln(1 - q^-k) - q^-k) at working precision"""
    if P_k == 0:
        return mp.mpf(0)
    x = rational(1, q ** k) if is_exact_q(q) else to_mpf(q) ** (-k)
    return to_mpf(P_k) * log_series_tail(x)


@precision_scope
def partial_c_m(P: GeneratorCounts, q, n: int):
    """sum_{k<=n} P(k) (-ln(1 - q^-k) - q^-k)"""
    _check_degree(P, n)
    total = mp.mpf(0)
    for k in range(1, n + 1):
        total += c_m_term(P[k], q, k)
    return total


@precision_scope
def mertens_product(P: GeneratorCounts, q, n: int) -> MertensProduct:
    """prod_{k<=n} (1 - q^-k)^P(k), evaluated as exp(-(S(n) + partial C_M(n)))"""
    _check_degree(P, n)
    if n == 0:
        return MertensProduct(mp.mpf(1), mp.mpf(0), None, mp.mpf(0))
    log_value = -(mertens_sum(P, q, n) + partial_c_m(P, q, n))
    product = mp.exp(log_value)
    n_product = n * product
    return MertensProduct(product, n_product, 1 / n_product, log_value)


@precision_scope
def lemma3_lhs(P: GeneratorCounts, G: ElementCounts, n: int):
    """sum_{1<=k<=n} k P(k) G(n-k) / G(n)"""
    if not 1 <= n <= min(P.n_max, G.n_max):
        raise DomainError(f"n must lie in 1..{min(P.n_max, G.n_max)}, got {n}")
    if G[n] == 0:
        raise ZeroDenominator(f"G({n}) = 0")
    numerator = sum(k * P[k] * G[n - k] for k in range(1, n + 1))
    if is_exact(numerator) and is_exact(G[n]):
        value = Fraction(numerator) / G[n]
        return rational(value.numerator, value.denominator)
    return to_mpf(numerator) / to_mpf(G[n])


def exact_degree_identity_check(P: GeneratorCounts, G: ElementCounts, n: int) -> bool:
    """n G(n) == sum_k k P(k) sum_{j>=1} G(n - jk), evaluated literally"""
    if not 1 <= n <= min(P.n_max, G.n_max):
        raise DomainError(f"n must lie in 1..{min(P.n_max, G.n_max)}, got {n}")
    right = 0
    for k in range(1, n + 1):
        if P[k] == 0:
            continue
        right += k * P[k] * sum(G[n - j * k] for j in range(1, n // k + 1))
    return n * G[n] == right


@precision_scope
def lambda_integral(lam: Sequence, N: int) -> Bounded:
    """
    I(N) = int_1^N (Lambda(t) - t) / t^2 dt, exact on each unit interval:
    sum_{n<N} Lambda(n) / (n (n+1)) - ln N.

    The tail bound uses max |Lambda(n) - n| + 1 over the top half of the range
    as an empirical sup of |Lambda(t) - t| beyond N.
    """
    if not 2 <= N <= len(lam):
        raise DomainError(f"N must lie in 2..{len(lam)}, got {N}")
    levels = lambda_partial_sums(lam[:N])
    total = mp.mpf(0)
    for n in range(1, N):
        total += levels[n - 1] / (n * (n + 1))
    value = total - mp.log(N)
    sup_deviation = max(abs(levels[n - 1] - n) for n in range(max(1, N // 2), N + 1)) + 1
    return Bounded(value, sup_deviation / N, "empirical sup of |Lambda(t) - t| over the top half")


@precision_scope
def lambda_abel_identity_residual(lam: Sequence, n: int):
    """sum lambda_k / k minus (Lambda(n)/n + int_1^n Lambda(t)/t^2 dt); vanishes identically"""
    if not 1 <= n <= len(lam):
        raise DomainError(f"n must lie in 1..{len(lam)}, got {n}")
    left = mp.fsum(lam[k - 1] / k for k in range(1, n + 1))
    levels = lambda_partial_sums(lam[:n])
    integral = mp.fsum(levels[m - 1] / (m * (m + 1)) for m in range(1, n)) if n > 1 else mp.mpf(0)
    return left - (levels[n - 1] / n + integral)


@precision_scope
def corollary_statistics(r: Sequence, lam: Sequence) -> CorollaryStatistics:
    """max lambda_n, max n|r(n)|, sum |r(n)| and sum_n sup_{k>=n} |r(k)| over the window"""
    if not r or not lam:
        raise DomainError("residual statistics need non-empty r and lambda")
    magnitudes = [abs(to_mpf(v)) for v in r]
    running = mp.mpf(0)
    suprema = [mp.mpf(0)] * len(magnitudes)
    for index in range(len(magnitudes) - 1, -1, -1):
        running = max(running, magnitudes[index])
        suprema[index] = running
    return CorollaryStatistics(
        max_lambda=max(to_mpf(v) for v in lam),
        max_n_r=max((n + 1) * m for n, m in enumerate(magnitudes)),
        sum_abs_r=mp.fsum(magnitudes),
        zhang_sup_sum=mp.fsum(suprema),
        window=(1, len(magnitudes)),
    )
