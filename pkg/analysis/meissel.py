"""
Meissel sums sum_k P(k) / (q^k k^alpha) and the deviation integral

    J(alpha) = int_1^oo s(x) / x^(alpha+1) dx,   s(x) = S(floor x) - ln x - C_1.

s is a step function minus a logarithm, so every integral over [1, N] is
assembled from closed-form pieces on unit intervals; quadrature is kept only
as a cross-check.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from mpmath import mp
from tqdm import tqdm

from config import config
from logger import logger
from semigroup.counts import GeneratorCounts
from semigroup.errors import DomainError, InsufficientData, TailUnbounded
from semigroup.numeric import Bounded, precision_scope, to_mpf

# Share of the range used to estimate sup |s| beyond the truncation point
TOP_DECILE = 10


@dataclass(frozen=True)
class MeisselSeries:
    raw: object
    corrected: object
    tail_bound: object
    correction_applied: bool
    K: int


@dataclass(frozen=True)
class MeisselEvaluation:
    alpha: object
    series_value: object
    series_tail_bound: object
    J_value: object
    J_tail_bound: object
    identity_residual: object
    K: int
    N: int
    abel_residual: Optional[object] = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if self.K < 2 or self.N < 2:
            raise DomainError(f"K and N must be >= 2, got K={self.K}, N={self.N}")


@dataclass(frozen=True)
class AlphaScanRow:
    alpha: object
    evaluation: MeisselEvaluation
    D: object
    D_over_alpha: object


@dataclass(frozen=True)
class AlphaScan:
    rows: List[AlphaScanRow]
    J0: Bounded
    max_gap: object


def s_deviation(x, S: Sequence, C_1):
    """s(x) = S(floor x) - ln x - C_1, with S[n-1] = S(n)"""
    x = to_mpf(x)
    if x < 1:
        raise DomainError(f"s(x) needs x >= 1, got {x}")
    n = int(mp.floor(x))
    if n > len(S):
        raise InsufficientData(f"S known up to {len(S)}, s({mp.nstr(x, 8)}) needs S({n})")
    return to_mpf(S[n - 1]) - mp.log(x) - to_mpf(C_1)


def _unit_weight(n: int, alpha):
    """int_n^(n+1) x^(-alpha-1) dx"""
    if alpha == 0:
        return mp.log1p(mp.mpf(1) / n)
    return -mp.mpf(n) ** (-alpha) * mp.expm1(-alpha * mp.log1p(mp.mpf(1) / n)) / alpha


def _log_moment(alpha, N: int):
    """int_1^N ln x x^(-alpha-1) dx"""
    L = mp.log(N)
    if alpha == 0:
        return L * L / 2
    # 1 - N^-alpha (1 + alpha ln N) is the regularized lower incomplete gamma P(2, alpha ln N)
    return mp.gammainc(2, 0, alpha * L, regularized=True) / (alpha * alpha)


@precision_scope
def step_mellin_integral(levels: Sequence, alpha, N: int, log_weight=1, offset=0):
    """
    int_1^N (levels[floor x - 1] - offset - log_weight ln x) x^(-alpha-1) dx,
    summed exactly over the unit intervals [n, n+1), n < N.
    """
    alpha = to_mpf(alpha)
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if N < 1 or len(levels) < N - 1:
        raise InsufficientData(f"integral to N={N} needs {N - 1} levels, got {len(levels)}")
    offset = to_mpf(offset)
    total = mp.mpf(0)
    for n in range(1, N):
        total += (to_mpf(levels[n - 1]) - offset) * _unit_weight(n, alpha)
    if log_weight:
        total -= to_mpf(log_weight) * _log_moment(alpha, N)
    return total


def _deviation_samples(S: Sequence, C_1, low: int, high: int):
    """|s| at both ends of each unit interval in [low, high]"""
    C_1 = to_mpf(C_1)
    samples = []
    for n in range(low, high + 1):
        level = to_mpf(S[n - 1]) - C_1
        samples.append(max(abs(level - mp.log(n)), abs(level - mp.log(n + 1))))
    return samples


def _empirical_sup(S: Sequence, C_1, N: int):
    low = max(1, N - max(1, N // TOP_DECILE))
    return max(_deviation_samples(S, C_1, low, N))


def _decay_exponent(S: Sequence, C_1, N: int) -> float:
    """Slope delta of log |s(n)| ~ -delta log n over the top half, by least squares"""
    low = max(1, N // 2)
    samples = _deviation_samples(S, C_1, low, N)
    values = np.array([float(v) for v in samples], dtype=np.float64)
    degrees = np.arange(low, N + 1, dtype=np.float64)
    positive = values > 0
    if positive.sum() < 2:
        return 0.0
    slope, _ = np.polyfit(np.log(degrees[positive]), np.log(values[positive]), 1)
    return max(0.0, -float(slope))


@precision_scope
def j_integral(alpha, N: int, C_1, S: Sequence) -> Bounded:
    """
    J(alpha) truncated at N, with tail bound sup_{x>=N} |s| N^-alpha / max(alpha, delta);
    delta is the decay exponent of |s| fitted over the top half of the range.
    """
    alpha = to_mpf(alpha)
    if len(S) < N:
        raise InsufficientData(f"J to N={N} needs S up to {N}, got {len(S)}")
    value = step_mellin_integral(S, alpha, N, log_weight=1, offset=C_1)
    sup_s = _empirical_sup(S, C_1, N)
    if sup_s == 0:
        return Bounded(value, mp.mpf(0), "s vanishes beyond N")
    rate = max(alpha, to_mpf(_decay_exponent(S, C_1, N)))
    if rate <= 0:
        raise TailUnbounded(f"|s| shows no decay before N={N} and alpha = 0")
    bound = sup_s * mp.mpf(N) ** (-alpha) / rate
    return Bounded(value, bound, "empirical sup |s| over the top decile")


@precision_scope
def j_integral_quadrature(alpha, N: int, C_1, S: Sequence):
    """The same truncated integral by adaptive quadrature on each unit interval"""
    alpha = to_mpf(alpha)
    C_1 = to_mpf(C_1)
    if len(S) < N - 1:
        raise InsufficientData(f"quadrature to N={N} needs S up to {N - 1}, got {len(S)}")
    total = mp.mpf(0)
    for n in range(1, N):
        level = to_mpf(S[n - 1]) - C_1
        total += mp.quad(lambda x: (level - mp.log(x)) * x ** (-alpha - 1), [n, n + 1])
    return total


def _raw_series(P: GeneratorCounts, q, alpha, K: int):
    q_real = to_mpf(q)
    total = mp.mpf(0)
    for k in range(1, K + 1):
        if P[k] == 0:
            continue
        total += to_mpf(P[k]) / q_real ** k * mp.mpf(k) ** (-alpha)
    return total


@precision_scope
def meissel_series(alpha, K: int, P: GeneratorCounts, q, C_1=None, S: Optional[Sequence] = None) -> MeisselSeries:
    """
    sum_{k<=K} P(k) / (q^k k^alpha) plus the partial-summation tail
    K^-alpha / alpha - s(K) K^-alpha; the rest is bounded by sup_{x>=K} |s| K^-alpha.
    """
    alpha = to_mpf(alpha)
    if alpha <= 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    if K > P.n_max:
        raise InsufficientData(f"K={K} exceeds the {P.n_max} available degrees")
    raw = _raw_series(P, q, alpha, K)
    if P.is_zero or C_1 is None or S is None:
        if P.is_zero:
            logger.log_system_event("meissel_correction_skipped", "S vanishes; no logarithmic asymptotics")
        return MeisselSeries(raw, raw, None, False, K)
    if len(S) < K:
        raise InsufficientData(f"tail correction needs S up to {K}, got {len(S)}")
    scale = mp.mpf(K) ** (-alpha)
    correction = scale / alpha - s_deviation(K, S, C_1) * scale
    bound = _empirical_sup(S, C_1, K) * scale
    return MeisselSeries(raw, raw + correction, bound, True, K)


@precision_scope
def abel_identity_residual(alpha, n: int, P: GeneratorCounts, q, S: Sequence):
    """sum_{k<=n} P(k)/(q^k k^alpha) - S(n) n^-alpha - alpha int_1^n S(x) x^(-alpha-1) dx"""
    alpha = to_mpf(alpha)
    if alpha <= 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    if not 1 <= n <= min(P.n_max, len(S)):
        raise DomainError(f"n must lie in 1..{min(P.n_max, len(S))}, got {n}")
    left = _raw_series(P, q, alpha, n)
    right = to_mpf(S[n - 1]) * mp.mpf(n) ** (-alpha) + alpha * step_mellin_integral(S, alpha, n, log_weight=0)
    return left - right


@precision_scope
def meissel_identity_residual(alpha, K: int, N: int, P: GeneratorCounts, q, C_1, S: Sequence) -> MeisselEvaluation:
    """Corrected series minus (1/alpha + C_1 + alpha J(alpha)), with the finite-n Abel residual at K"""
    alpha = to_mpf(alpha)
    if alpha <= 0:
        raise DomainError("alpha = 0 has no 1/alpha form; use j_integral(0, ...)")
    series = meissel_series(alpha, K, P, q, C_1, S)
    J = j_integral(alpha, N, C_1, S)
    residual = series.corrected - (1 / alpha + to_mpf(C_1) + alpha * J.value)
    abel = abel_identity_residual(alpha, K, P, q, S)
    return MeisselEvaluation(alpha, series.corrected, series.tail_bound, J.value, J.bound,
                             residual, K, N, abel)


def check_alpha_grid(alpha_grid: Sequence):
    """Non-empty, strictly decreasing, every value in (0, 1]"""
    if not alpha_grid:
        raise DomainError("alpha grid is empty")
    for alpha in alpha_grid:
        if not 0 < alpha <= 1:
            raise DomainError(f"alpha grid values must lie in (0, 1], got {alpha}")
    if any(b >= a for a, b in zip(alpha_grid, alpha_grid[1:])):
        raise DomainError(f"alpha grid must be strictly decreasing, got {list(alpha_grid)}")


@precision_scope
def meissel_alpha_scan(alpha_grid: Sequence, K: int, N: int, P: GeneratorCounts, q, C_1, S: Sequence,
                       progress: Optional[bool] = None) -> AlphaScan:
    """D(alpha) = corrected series - 1/alpha - C_1 and D/alpha against J(0) over a decreasing grid"""
    check_alpha_grid(alpha_grid)
    show = config.output.progress if progress is None else progress
    J0 = j_integral(0, N, C_1, S)
    rows = []
    for alpha in tqdm(alpha_grid, desc="alpha scan", disable=not show):
        evaluation = meissel_identity_residual(alpha, K, N, P, q, C_1, S)
        a = to_mpf(alpha)
        D = evaluation.series_value - 1 / a - to_mpf(C_1)
        rows.append(AlphaScanRow(a, evaluation, D, D / a))
    max_gap = max(abs(row.D_over_alpha - J0.value) for row in rows)
    logger.log_system_event(
        "alpha_scan",
        f"grid={list(alpha_grid)} K={K} N={N} J0={mp.nstr(J0.value, 12)} max_gap={mp.nstr(max_gap, 6)}"
    )
    return AlphaScan(rows, J0, max_gap)
