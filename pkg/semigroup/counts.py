"""
Exact counts of an additive arithmetical semigroup.

P(k) counts generators ("primes") of degree k, G(n) counts all elements of
degree n. Both are tied together by the degree identity

    n G(n) = sum_k k P(k) sum_{j>=1} G(n - jk),

which, grouping m = jk, is the convolution n G(n) = sum_m b(m) G(n-m) with
b(m) = sum_{d|m} d P(d). The forward and inverse transforms below solve it
degree by degree in exact integer arithmetic (strict mode) or in rationals /
working-precision reals (analysis mode).
"""

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

from mpmath import mp

from logger import logger
from semigroup.errors import (
    DomainError, InternalConsistencyError, NotASemigroup, ResourceGuard
)
from semigroup.numeric import precision_scope, to_mpf

# Limits for the exhaustive oracle
BRUTE_FORCE_MAX_DEGREE = 16
BRUTE_FORCE_MAX_GENERATORS = 64


def _is_integral(value) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, int):
        return True
    return isinstance(value, Fraction) and value.denominator == 1


@dataclass(frozen=True)
class GeneratorCounts:
    """P(1)..P(n_max); indexing is by degree"""
    values: Tuple
    strict: bool = True

    def __post_init__(self):
        values = tuple(self.values)
        if not values:
            raise DomainError("GeneratorCounts needs n_max >= 1")
        if self.strict:
            for degree, value in enumerate(values, 1):
                if not _is_integral(value):
                    raise NotASemigroup(f"P({degree}) = {value} is not an integer")
                if value < 0:
                    raise NotASemigroup(f"P({degree}) = {value} is negative")
            values = tuple(int(v) for v in values)
        object.__setattr__(self, "values", values)

    @property
    def n_max(self) -> int:
        return len(self.values)

    @property
    def realizable(self) -> bool:
        return all(v >= 0 for v in self.values)

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, degree: int):
        if not 1 <= degree <= len(self.values):
            raise IndexError(f"degree {degree} outside 1..{len(self.values)}")
        return self.values[degree - 1]

    def prefix(self, n_max: int) -> "GeneratorCounts":
        if n_max > self.n_max:
            raise DomainError(f"cannot extend P from {self.n_max} to {n_max} degrees")
        return GeneratorCounts(self.values[:n_max], strict=self.strict)


@dataclass(frozen=True)
class ElementCounts:
    """G(0)..G(n_max); G(0) = 1 and G(m) = 0 for m < 0"""
    values: Tuple
    strict: bool = True

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) < 2:
            raise DomainError("ElementCounts needs n_max >= 1")
        if values[0] != 1:
            raise NotASemigroup(f"G(0) must be 1 (the identity element), got {values[0]}")
        if self.strict:
            for degree, value in enumerate(values):
                if not _is_integral(value):
                    raise NotASemigroup(f"G({degree}) = {value} is not an integer")
                if value < 0:
                    raise NotASemigroup(f"G({degree}) = {value} is negative")
            values = tuple(int(v) for v in values)
        object.__setattr__(self, "values", values)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, degree: int):
        if degree < 0:
            return 0
        if degree > self.n_max:
            raise IndexError(f"degree {degree} beyond n_max {self.n_max}")
        return self.values[degree]

    def prefix(self, n_max: int) -> "ElementCounts":
        if n_max > self.n_max:
            raise DomainError(f"cannot extend G from {self.n_max} to {n_max} degrees")
        return ElementCounts(self.values[:n_max + 1], strict=self.strict)


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    """Möbius function by trial factorization"""
    if n < 1:
        raise DomainError(f"mobius is defined for n >= 1, got {n}")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def divisors(n: int) -> List[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def poly_generator_counts(q: int, n_max: int) -> GeneratorCounts:
    """Number of monic irreducible polynomials of each degree over a field with q elements"""
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    values = []
    for n in range(1, n_max + 1):
        total = sum(mobius(d) * q ** (n // d) for d in divisors(n))
        count, remainder = divmod(total, n)
        if remainder:
            raise InternalConsistencyError(
                f"necklace sum for q={q}, n={n} is not divisible by n (remainder {remainder})"
            )
        values.append(count)
    return GeneratorCounts(tuple(values))


def divisor_weighted_counts(P: GeneratorCounts) -> list:
    """b(m) = sum over d | m of d P(d), for m = 0..n_max (b(0) = 0)"""
    n_max = P.n_max
    b = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        weight = d * P[d]
        if weight == 0:
            continue
        for m in range(d, n_max + 1, d):
            b[m] += weight
    return b


def _divide(total, n: int, strict: bool, what: str):
    if strict:
        quotient, remainder = divmod(total, n)
        if remainder:
            raise NotASemigroup(f"{what} = {Fraction(total, n)} is not an integer")
        return quotient
    if isinstance(total, int):
        return Fraction(total, n)
    return total / n


@precision_scope
def count_elements(P: GeneratorCounts) -> ElementCounts:
    """Forward transform: coefficients of prod_k (1 - y^k)^(-P(k)) up to degree n_max"""
    start_time = time.time()
    n_max = P.n_max
    b = divisor_weighted_counts(P)
    G = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        total = sum(b[m] * G[n - m] for m in range(1, n + 1))
        if P.strict:
            quotient, remainder = divmod(total, n)
            if remainder:
                raise InternalConsistencyError(f"degree identity not divisible at n={n}")
            G[n] = quotient
        else:
            G[n] = _divide(total, n, False, f"G({n})")
    logger.log_transform("count_elements", n_max, time.time() - start_time)
    return ElementCounts(tuple(G), strict=P.strict)


@precision_scope
def recover_generators(G: ElementCounts) -> GeneratorCounts:
    """Inverse transform: solve the degree identity for P(n), degree by degree"""
    start_time = time.time()
    n_max = G.n_max
    b = [0] * (n_max + 1)
    # lower[m] accumulates d P(d) over proper divisors d of m found so far
    lower = [0] * (n_max + 1)
    P = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        b[n] = n * G[n] - sum(b[m] * G[n - m] for m in range(1, n))
        value = _divide(b[n] - lower[n], n, G.strict, f"P({n})")
        if G.strict and value < 0:
            raise NotASemigroup(
                f"recovered P({n}) = {value} < 0; element counts are not realisable "
                f"by a free commutative monoid"
            )
        P[n] = value
        weight = n * value
        for m in range(2 * n, n_max + 1, n):
            lower[m] += weight
    result = GeneratorCounts(tuple(P[1:]), strict=G.strict)
    if not result.realizable:
        negative = [k for k in range(1, n_max + 1) if result[k] < 0]
        logger.log_system_event(
            "unrealizable_counts",
            f"analysis-mode inversion gave negative P at degrees {negative[:10]}"
        )
    logger.log_transform("recover_generators", n_max, time.time() - start_time)
    return result


def brute_force_elements(P: GeneratorCounts, n_max: int) -> ElementCounts:
    """Count multisets of generators by total degree, by exhaustive bounded-partition counting"""
    if not P.strict:
        raise DomainError("brute_force_elements needs strict (integer) generator counts")
    if n_max > P.n_max:
        raise DomainError(f"P is known only up to degree {P.n_max}, requested {n_max}")
    generator_total = sum(P[k] for k in range(1, n_max + 1))
    if n_max > BRUTE_FORCE_MAX_DEGREE or generator_total > BRUTE_FORCE_MAX_GENERATORS:
        raise ResourceGuard(
            f"oracle limited to n_max <= {BRUTE_FORCE_MAX_DEGREE} and "
            f"{BRUTE_FORCE_MAX_GENERATORS} generators; got n_max={n_max}, generators={generator_total}"
        )
    start_time = time.time()
    # one entry per generator, listed by degree
    degrees = tuple(k for k in range(1, n_max + 1) for _ in range(P[k]))

    @lru_cache(maxsize=None)
    def multisets(index: int, remaining: int) -> int:
        if remaining == 0:
            return 1
        if index == len(degrees):
            return 0
        degree = degrees[index]
        return sum(
            multisets(index + 1, remaining - exponent * degree)
            for exponent in range(remaining // degree + 1)
        )

    values = tuple(multisets(0, n) for n in range(n_max + 1))
    logger.log_transform("brute_force_elements", n_max, time.time() - start_time)
    return ElementCounts(values)


@dataclass(frozen=True)
class TruncatedZeta:
    """Partial sum of Z(y) with a geometric remainder bound"""
    value: object
    remainder_bound: Optional[object]
    q_estimate: object
    divergent: bool


@precision_scope
def zeta_truncated(G: ElementCounts, y, N: int, q=None) -> TruncatedZeta:
    """sum_{n <= N} G(n) y^n; the remainder bound assumes G(n) <= C q^n beyond N"""
    if not 1 <= N <= G.n_max:
        raise DomainError(f"N must lie in 1..{G.n_max}, got {N}")
    y = to_mpf(y)
    if abs(y) >= 1:
        raise DomainError(f"|y| must be < 1, got {y}")
    if q is None:
        roots = [mp.root(to_mpf(G[n]), n) for n in range(max(1, N // 2), N + 1) if G[n] > 0]
        q_est = max(roots) if roots else mp.mpf(1)
    else:
        q_est = to_mpf(q)

    value = mp.mpf(0)
    power = mp.mpf(1)
    for n in range(N + 1):
        value += to_mpf(G[n]) * power
        power *= y

    ratio = abs(y) * q_est
    # the root estimate carries rounding error, so the radius itself counts as divergent
    if ratio >= 1 - 256 * mp.eps:
        logger.log_system_event("zeta_divergence", f"y={mp.nstr(y, 10)} at or beyond 1/q_est")
        return TruncatedZeta(value, None, q_est, True)
    constant = max(abs(to_mpf(G[n])) / q_est ** n for n in range(N + 1))
    bound = constant * ratio ** (N + 1) / (1 - ratio)
    return TruncatedZeta(value, bound, q_est, False)
