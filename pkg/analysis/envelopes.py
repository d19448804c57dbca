"""
Error envelopes f(x) with F(x) = int_1^x f(t) dt and tail(n) = int_n^oo F(x)/x^2 dx.

Three families:
    power        f = c x^-beta                    beta > 0
    log_power    f = c ln(x)^a / x                a > -1
    inverse_log  f = c / (1 + ln x)^(2 + eps)     eps > -1

The inverse_log family is shifted by one inside the logarithm so f is finite at
x = 1. Closed forms are written with expm1 and incomplete gamma functions to
avoid cancellation near the family boundaries.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp

from logger import logger
from semigroup.errors import DivergentEnvelope, DomainError, InsufficientData, NoDecay
from semigroup.numeric import precision_scope, to_mpf

MIN_FIT_ENTRIES = 16
QUAD_REL_TOL = mp.mpf("1e-10")
# Ratio |r|/f may grow by at most this factor across the window for a family to fit
FIT_GROWTH_LIMIT = 2.0

# Candidate families in tie-break order, fastest decay first
FAMILY_CANDIDATES = (
    ("power", 3), ("power", 2), ("power", 1), ("power", 0.5),
    ("log_power", 1), ("log_power", 2), ("inverse_log", 0.5),
)


class ErrorEnvelope(ABC):
    """Base class for an envelope family with scale c"""

    family = ""

    def __init__(self, c=1):
        self.c = to_mpf(c)
        if self.c < 0:
            raise DomainError(f"envelope scale must be >= 0, got {c}")
        self.validate()

    @property
    @abstractmethod
    def params(self) -> dict:
        pass

    @abstractmethod
    def validate(self):
        """Raise DivergentEnvelope when int_1^oo F(x)/x^2 dx diverges"""
        pass

    @abstractmethod
    def f(self, x):
        pass

    @abstractmethod
    def F(self, x):
        pass

    @abstractmethod
    def tail(self, n):
        pass

    @abstractmethod
    def shape(self, degrees: np.ndarray) -> np.ndarray:
        """f / c on an integer grid, in float64"""
        pass

    def with_scale(self, c) -> "ErrorEnvelope":
        return type(self)(self.parameter, c)

    @property
    def name(self) -> str:
        return f"{self.family}:{self.parameter}"

    def __repr__(self):
        return f"{type(self).__name__}({self.parameter}, c={mp.nstr(self.c, 6)})"


def _relative_expm1(a, L):
    """expm1(a L) / a, continuous at a = 0"""
    if a == 0:
        return L
    return mp.expm1(a * L) / a


class PowerEnvelope(ErrorEnvelope):
    family = "power"

    def __init__(self, beta, c=1):
        self.parameter = beta
        self.beta = to_mpf(beta)
        super().__init__(c)

    @property
    def params(self) -> dict:
        return {"beta": self.parameter}

    def validate(self):
        if self.beta <= 0:
            raise DivergentEnvelope(f"power envelope needs beta > 0, got {self.parameter}")

    def f(self, x):
        return self.c * to_mpf(x) ** (-self.beta)

    def F(self, x):
        return self.c * _relative_expm1(1 - self.beta, mp.log(x))

    def tail(self, n):
        # c/(1-beta) (n^-beta / beta - 1/n) rewritten without the cancellation at beta = 1
        n = to_mpf(n)
        return self.c * (1 + _relative_expm1(1 - self.beta, mp.log(n))) / (self.beta * n)

    def shape(self, degrees):
        return degrees ** (-float(self.beta))


class LogPowerEnvelope(ErrorEnvelope):
    family = "log_power"

    def __init__(self, a, c=1):
        self.parameter = a
        self.a = to_mpf(a)
        super().__init__(c)

    @property
    def params(self) -> dict:
        return {"a": self.parameter}

    def validate(self):
        if self.a <= -1:
            raise DivergentEnvelope(f"log_power envelope needs a > -1, got {self.parameter}")

    def f(self, x):
        x = to_mpf(x)
        return self.c * mp.log(x) ** self.a / x

    def F(self, x):
        return self.c * mp.log(x) ** (self.a + 1) / (self.a + 1)

    def tail(self, n):
        # substitute u = ln x: int_L^oo u^(a+1) e^-u du / (a+1)
        return self.c * mp.gammainc(self.a + 2, mp.log(n)) / (self.a + 1)

    def shape(self, degrees):
        return np.log(degrees) ** float(self.a) / degrees


class InverseLogEnvelope(ErrorEnvelope):
    family = "inverse_log"

    def __init__(self, eps, c=1):
        self.parameter = eps
        self.eps = to_mpf(eps)
        super().__init__(c)

    @property
    def params(self) -> dict:
        return {"eps": self.parameter}

    @property
    def exponent(self):
        return 2 + self.eps

    def validate(self):
        if self.eps <= -1:
            raise DivergentEnvelope(
                f"inverse_log envelope with eps={self.parameter}: int_1^oo F(x)/x^2 dx diverges"
            )

    def f(self, x):
        return self.c * (1 + mp.log(x)) ** (-self.exponent)

    def F(self, x):
        L = mp.log(x)
        if L == 0:
            return mp.mpf(0)
        # t = ln x turns the integrand into e^t (1 + t)^-(2 + eps)
        nodes = mp.linspace(0, L, max(2, int(mp.ceil(L)) + 1))
        with mp.workprec(mp.prec + 20):
            value = mp.quad(lambda t: mp.exp(t) * (1 + t) ** (-self.exponent), nodes)
        return self.c * value

    def tail(self, n):
        # integration by parts: F(n)/n + int_n^oo f(x)/x dx
        n = to_mpf(n)
        log_tail = (1 + mp.log(n)) ** (1 - self.exponent) / (self.exponent - 1)
        return self.F(n) / n + self.c * log_tail

    def shape(self, degrees):
        return (1 + np.log(degrees)) ** (-float(self.exponent))


ENVELOPE_FAMILIES = {
    "power": PowerEnvelope,
    "log_power": LogPowerEnvelope,
    "inverse_log": InverseLogEnvelope,
}


def make_envelope(family: str, parameter, c=1) -> ErrorEnvelope:
    if family not in ENVELOPE_FAMILIES:
        raise DomainError(f"unknown envelope family '{family}', expected one of {tuple(ENVELOPE_FAMILIES)}")
    return ENVELOPE_FAMILIES[family](parameter, c)


@precision_scope
def error_envelope(env: ErrorEnvelope, n) -> Tuple:
    """(F(n), int_n^oo F(x)/x^2 dx)"""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return env.F(n), env.tail(n)


@dataclass(frozen=True)
class FamilyFit:
    envelope: ErrorEnvelope
    c: float
    fits: bool
    score: float


@dataclass(frozen=True)
class ResidualFit:
    """Best envelope for a residual sequence, plus the per-family constants"""
    best: ErrorEnvelope
    c: float
    families: Dict[str, FamilyFit] = field(default_factory=dict)
    window: Tuple[int, int] = (1, 1)


def _quarter_means(values: np.ndarray) -> Tuple[float, float]:
    quarter = max(1, len(values) // 4)
    return float(np.mean(values[:quarter])), float(np.mean(values[-quarter:]))


def fit_residual_model(r: Sequence, families: Optional[Sequence] = None, start_degree: int = 1) -> ResidualFit:
    """
    Smallest c per family with |r(n)| <= c f(n) on the window; r[i] belongs to
    degree start_degree + i. A family fits when |r|/f does not grow across the
    window; the best fitting family minimizes c F(n_max), ties going to the
    earlier candidate.
    """
    if len(r) < MIN_FIT_ENTRIES:
        raise InsufficientData(f"residual fit needs >= {MIN_FIT_ENTRIES} entries, got {len(r)}")
    magnitudes = np.abs(np.array([float(v) for v in r], dtype=np.float64))
    degrees = np.arange(start_degree, start_degree + len(r), dtype=np.float64)
    early, late = _quarter_means(magnitudes)
    if late > 0 and late >= early:
        raise NoDecay(f"|r| does not decrease over degrees {int(degrees[0])}..{int(degrees[-1])}")

    n_max = int(degrees[-1])
    fitted = {}
    for family, parameter in families or FAMILY_CANDIDATES:
        envelope = make_envelope(family, parameter)
        shape = envelope.shape(degrees)
        usable = shape > 0
        ratios = magnitudes[usable] / shape[usable]
        c = float(np.max(ratios)) if ratios.size else 0.0
        quarter = max(1, ratios.size // 4)
        head, tail = float(np.max(ratios[:quarter])), float(np.max(ratios[-quarter:]))
        fits = tail <= FIT_GROWTH_LIMIT * head or tail == 0.0
        score = c * float(envelope.F(n_max))
        fitted[envelope.name] = FamilyFit(envelope.with_scale(c), c, fits, score)

    candidates = [fit for fit in fitted.values() if fit.fits] or list(fitted.values())
    best = min(candidates, key=lambda fit: fit.score)
    logger.log_system_event(
        "residual_fit",
        f"best={best.envelope.name} c={best.c:.6g} window={int(degrees[0])}..{n_max}"
    )
    return ResidualFit(best.envelope, best.c, fitted, (int(degrees[0]), n_max))


@dataclass(frozen=True)
class EnvelopeContainment:
    family: str
    constant: float
    c: float
    contained: bool
    window: Tuple[int, int]


def envelope_containment(deviation: Sequence, envelope: ErrorEnvelope, window: Tuple[int, int],
                         limit: float) -> EnvelopeContainment:
    """
    Compare deviation[n-1] against c F(n) over the window after removing an
    additive constant, fitted as the median deviation over the top half.
    """
    low, high = window
    if not 2 <= low < high <= len(deviation):
        raise DomainError(f"window {window} outside 2..{len(deviation)}")
    values = np.array([float(deviation[n - 1]) for n in range(low, high + 1)], dtype=np.float64)
    constant = float(np.median(values[len(values) // 2:]))
    unit = envelope.with_scale(1)
    F = np.array([float(unit.F(n)) for n in range(low, high + 1)], dtype=np.float64)
    excess = np.abs(values - constant)
    positive = F > 0
    c = float(np.max(excess[positive] / F[positive])) if positive.any() else float("inf")
    contained = bool(c <= limit)
    logger.log_system_event(
        "envelope_containment",
        f"family={envelope.name} constant={constant:.6g} c={c:.6g} contained={contained}"
    )
    return EnvelopeContainment(envelope.name, constant, c, contained, window)
