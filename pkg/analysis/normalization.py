"""
Normalized quantities of a semigroup: q, lambda_n = n P(n) / q^n,
G(n) / q^n = A + r(n) and H(y) = (1 - q y) Z(y).

When q is an exact integer and the counts are exact, every normalized value
is an exact rational rounded once to working precision. Reductions run in
ascending degree order so results are bit-reproducible.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from mpmath import mp

from logger import logger
from semigroup.counts import ElementCounts, GeneratorCounts
from semigroup.errors import DomainError, NoConvergence, NonGeometricGrowth
from semigroup.numeric import is_exact, precision_scope, to_mpf, working_bits

# Relative disagreement between ratio and root estimates that rejects q
Q_DISAGREEMENT = mp.mpf("0.10")
RESIDUAL_DECAY_EXPONENTS = (mp.mpf("0.5"), mp.mpf(1), mp.mpf(2), mp.mpf(3))
A_METHODS = ("tail_average", "h_evaluation", "exact_known")
# Richardson needs at least three samples after dropping two for the error estimate
H_MIN_STEPS = 5
H_MAX_STEPS = 16


@dataclass(frozen=True)
class NormalizedSemigroup:
    """lam[k-1] is lambda_k; g_norm[n] is G(n)/q^n; r[n-1] is r(n)"""
    q: object
    precision_bits: int
    lam: Tuple
    g_norm: Tuple
    r: Optional[Tuple] = None
    A: Optional[object] = None

    @property
    def n_max(self) -> int:
        return len(self.lam)

    def lambda_at(self, n: int):
        return self.lam[n - 1]


@dataclass(frozen=True)
class QEstimate:
    value: object
    ratio_estimate: object
    root_estimate: object
    discrepancy: object


@dataclass(frozen=True)
class AxiomAEstimate:
    A: object
    method: str
    residual_norm: object
    window: Tuple[int, int]
    error_estimate: object = 0


@dataclass(frozen=True)
class HValue:
    value: object
    bound: object


def is_exact_q(q) -> bool:
    return isinstance(q, int) and not isinstance(q, bool)


def exact_lambda(P: GeneratorCounts, q) -> Optional[Tuple[Fraction, ...]]:
    """Exact rationals n P(n) / q^n, or None when q or P is not exact"""
    if not is_exact_q(q) or not all(is_exact(v) for v in P):
        return None
    return tuple(Fraction(n * P[n]) / q ** n for n in range(1, P.n_max + 1))


def exact_g_norm(G: ElementCounts, q) -> Optional[Tuple[Fraction, ...]]:
    if not is_exact_q(q) or not all(is_exact(v) for v in G):
        return None
    return tuple(Fraction(G[n]) / q ** n for n in range(G.n_max + 1))


@precision_scope
def lambda_sequence(P: GeneratorCounts, q) -> Tuple:
    """lambda_1..lambda_n_max in working precision"""
    exact = exact_lambda(P, q)
    if exact is not None:
        return tuple(to_mpf(v) for v in exact)
    q_real = to_mpf(q)
    if q_real <= 1:
        raise DomainError(f"q must be > 1, got {q}")
    return tuple(n * to_mpf(P[n]) / q_real ** n for n in range(1, P.n_max + 1))


@precision_scope
def normalized_counts(G: ElementCounts, q) -> Tuple:
    """G(n)/q^n for n = 0..n_max"""
    exact = exact_g_norm(G, q)
    if exact is not None:
        return tuple(to_mpf(v) for v in exact)
    q_real = to_mpf(q)
    return tuple(to_mpf(G[n]) / q_real ** n for n in range(G.n_max + 1))


def _shanks_limit(seq):
    """Epsilon-algorithm limit of seq; the last term when seq is flat to half the working precision"""
    spread = max(seq) - min(seq)
    if spread <= mp.sqrt(mp.eps) * abs(seq[-1]):
        return seq[-1]
    table = mp.shanks(seq)
    if not table or len(table[-1]) < 2:
        return seq[-1]
    return table[-1][-1]


@precision_scope
def estimate_q(G: ElementCounts) -> QEstimate:
    """Growth base q = 1/rho from coefficient growth, with the n-th root as cross-check"""
    n = G.n_max
    if n < 8:
        raise DomainError(f"estimate_q needs n_max >= 8, got {n}")
    if any(G[m] <= 0 for m in range(n - 4, n + 1)):
        raise NonGeometricGrowth("element counts vanish near the top degree")

    def ratio(m):
        return to_mpf(Fraction(G[m + 1]) / G[m]) if is_exact(G[m]) and is_exact(G[m + 1]) \
            else to_mpf(G[m + 1]) / to_mpf(G[m])

    # (m+1) R(m) - m R(m-1) removes a c/(m+1) term from the ratios R(m) = G(m+1)/G(m)
    corrected = [(m + 1) * ratio(m) - m * ratio(m - 1) for m in range(n - 3, n)]
    ratio_estimate = _shanks_limit(corrected)
    root_estimate = mp.root(to_mpf(G[n]), n)
    discrepancy = abs(ratio_estimate - root_estimate) / abs(ratio_estimate)

    if ratio_estimate <= 1 + mp.mpf("1e-6"):
        raise NonGeometricGrowth(
            f"q estimate {mp.nstr(ratio_estimate, 8)} <= 1; radius of convergence 1 is not supported"
        )
    if discrepancy > Q_DISAGREEMENT:
        raise NonGeometricGrowth(
            f"ratio estimate {mp.nstr(ratio_estimate, 8)} and root estimate "
            f"{mp.nstr(root_estimate, 8)} disagree by {mp.nstr(100 * discrepancy, 4)}%"
        )
    logger.log_system_event(
        "q_estimated",
        f"ratio={mp.nstr(ratio_estimate, 12)} root={mp.nstr(root_estimate, 12)}"
    )
    return QEstimate(ratio_estimate, ratio_estimate, root_estimate, discrepancy)


@precision_scope
def h_eval(G: ElementCounts, q, y, N: int) -> HValue:
    """H(y) = (1 - q y) Z_N(y), with the tail beyond N continued at the level G(N)/q^N"""
    if not 1 <= N <= G.n_max:
        raise DomainError(f"N must lie in 1..{G.n_max}, got {N}")
    y = to_mpf(y)
    u = to_mpf(q) * y
    if y <= 0 or u >= 1:
        raise DomainError(f"h_eval needs 0 < y < 1/q, got y={mp.nstr(y, 12)}")
    g = normalized_counts(G.prefix(N), q)
    partial = mp.mpf(0)
    power = mp.mpf(1)
    for n in range(N + 1):
        partial += g[n] * power
        power *= u
    # power is now u^(N+1)
    value = (1 - u) * partial + g[N] * power
    spread = max(abs(g[m] - g[N]) for m in range(max(0, N // 2), N + 1))
    return HValue(value, spread * power)


def _least_squares(xs, ys):
    """Intercept, slope and squared residual of ys ~ a + b xs at working precision"""
    design = mp.matrix([[1, x] for x in xs])
    coefficients, residual = mp.qr_solve(design, mp.matrix(ys))
    return coefficients[0], coefficients[1], residual ** 2


def _check_convergence(g_window, A, window):
    deviations = [abs(v - A) for v in g_window]
    residual_norm = max(deviations)
    if A <= 0 or residual_norm >= A:
        raise NoConvergence(
            f"normalized counts over degrees {window[0]}..{window[1]} show no positive limit "
            f"(A={mp.nstr(A, 8)}, max |r|={mp.nstr(residual_norm, 8)})"
        )
    half = len(deviations) // 2
    early = mp.fsum(deviations[:half]) / half
    late = mp.fsum(deviations[half:]) / (len(deviations) - half)
    if late > 2 * early + 16 * mp.eps * A:
        raise NoConvergence(f"residuals grow over degrees {window[0]}..{window[1]}")
    return residual_norm


def _tail_average(G: ElementCounts, q) -> AxiomAEstimate:
    n = G.n_max
    start = max(1, (3 * n) // 4)
    degrees = list(range(start, n + 1))
    g = normalized_counts(G, q)
    g_window = [g[m] for m in degrees]
    best = None
    for beta in RESIDUAL_DECAY_EXPONENTS:
        xs = [mp.mpf(m) ** (-beta) for m in degrees]
        A, _, sse = _least_squares(xs, g_window)
        if best is None or sse < best[1]:
            best = (A, sse)
    A = best[0]
    window = (start, n)
    residual_norm = _check_convergence(g_window, A, window)
    error_estimate = abs(A - mp.fsum(g_window) / len(g_window))
    return AxiomAEstimate(A, "tail_average", residual_norm, window, error_estimate)


def _h_evaluation(G: ElementCounts, q) -> AxiomAEstimate:
    N = G.n_max
    # delta = 1/(2k) for k <= steps; N delta >= 8 keeps the continued tail light
    steps = max(H_MIN_STEPS, min(H_MAX_STEPS, N // 16))
    q_real = to_mpf(q)
    values = [h_eval(G, q, (1 - 1 / mp.mpf(2 * k)) / q_real, N).value for k in range(1, steps + 1)]
    # mp.richardson reads seq[m] as A + c_1/m + c_2/m^2 + ...; seq[0] only pads the index
    values = [values[0]] + values
    A, _ = mp.richardson(values)
    previous, _ = mp.richardson(values[:-2])
    error_estimate = abs(A - previous)
    g = normalized_counts(G, q)
    window = (max(1, (3 * N) // 4), N)
    residual_norm = _check_convergence([g[m] for m in range(window[0], N + 1)], A, window)
    return AxiomAEstimate(A, "h_evaluation", residual_norm, window, error_estimate)


@precision_scope
def estimate_A(G: ElementCounts, q, method: str = "tail_average", known=None) -> AxiomAEstimate:
    """Constant A of G(n)/q^n = A + r(n)"""
    if method not in A_METHODS:
        raise DomainError(f"unknown A method '{method}', expected one of {A_METHODS}")
    if to_mpf(q) <= 1:
        raise DomainError(f"q must be > 1, got {q}")
    if method == "exact_known":
        if known is None:
            raise DomainError("exact_known needs the catalog value of A")
        A = to_mpf(known)
        g = normalized_counts(G, q)
        residual_norm = max(abs(g[m] - A) for m in range(1, G.n_max + 1))
        return AxiomAEstimate(A, method, residual_norm, (1, G.n_max))
    if method == "tail_average":
        return _tail_average(G, q)
    return _h_evaluation(G, q)


@precision_scope
def residuals(G: ElementCounts, q, A) -> Tuple:
    """r(n) = G(n)/q^n - A for n = 1..n_max"""
    A = to_mpf(A)
    if A <= 0:
        raise DomainError(f"A must be > 0, got {A}")
    g = normalized_counts(G, q)
    return tuple(g[n] - A for n in range(1, G.n_max + 1))


def normalize(semigroup, q=None, A=None, precision_bits=None) -> NormalizedSemigroup:
    """Bundle lambda, g_norm and (when A is given) r for one semigroup"""
    bits = working_bits(precision_bits)
    with mp.workprec(bits):
        q = semigroup.q if q is None and semigroup.q is not None else q
        if q is None:
            q = estimate_q(semigroup.G).value
        lam = lambda_sequence(semigroup.P, q)
        g_norm = normalized_counts(semigroup.G, q)
        r = residuals(semigroup.G, q, A) if A is not None else None
        return NormalizedSemigroup(q, bits, lam, g_norm, r, to_mpf(A) if A is not None else None)


def resolve_A(semigroup, q) -> AxiomAEstimate:
    """Catalog value when known, otherwise the tail-average estimate"""
    if semigroup.known_A is not None:
        return estimate_A(semigroup.G, q, "exact_known", known=semigroup.known_A)
    return estimate_A(semigroup.G, q, "tail_average")
