"""
Catalog of concrete semigroup instances.

A SemigroupSpec is a reproducible descriptor (kind, q, n_max, seed, ...);
resolve_spec turns it into a Semigroup holding exact counts.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Tuple

from mpmath import mp

from logger import logger
from semigroup.counts import (
    ElementCounts, GeneratorCounts, count_elements, poly_generator_counts, recover_generators
)
from semigroup.errors import DomainError, InsufficientData
from semigroup.numeric import precision_scope, rational
from semigroup.sequence_io import read_sequence_csv

KINDS = ("poly_over_fq", "explicit_P", "explicit_G", "perturbed", "prescribed")
RESIDUAL_FAMILIES = ("power", "inverse_log")


@dataclass(frozen=True)
class Perturbation:
    """Seeded non-negative bump of P(1..degrees) by at most max_delta each"""
    degrees: int = 8
    max_delta: int = 3

    def deltas(self, seed: int, n_max: int) -> Tuple[int, ...]:
        rng = random.Random(seed)
        return tuple(rng.randint(0, self.max_delta) for _ in range(min(self.degrees, n_max)))


@dataclass(frozen=True)
class SemigroupSpec:
    kind: str
    n_max: int
    q: Optional[int] = None
    seed: int = 0
    perturbation: Optional[Perturbation] = None
    residual: Optional[str] = None
    A: Fraction = Fraction(1)
    pfile: Optional[str] = None
    gfile: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown semigroup kind '{self.kind}', expected one of {KINDS}")
        if self.n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {self.n_max}")
        if self.kind in ("poly_over_fq", "perturbed", "prescribed"):
            if self.q is None or self.q < 2:
                raise DomainError(f"kind '{self.kind}' needs an integer q >= 2, got {self.q}")
        if self.kind == "explicit_P" and not self.pfile:
            raise DomainError("kind 'explicit_P' needs a P file")
        if self.kind == "explicit_G" and not self.gfile:
            raise DomainError("kind 'explicit_G' needs a G file")
        if self.kind == "prescribed":
            parse_residual(self.residual or "power:1")
            if self.A <= 0:
                raise DomainError(f"A must be > 0, got {self.A}")
        if self.seed < 0:
            raise DomainError(f"seed must be non-negative, got {self.seed}")

    def as_dict(self) -> dict:
        data = {"kind": self.kind, "q": self.q, "n_max": self.n_max, "seed": self.seed}
        if self.kind == "perturbed":
            perturbation = self.perturbation or Perturbation()
            data["perturb_degrees"] = perturbation.degrees
            data["max_delta"] = perturbation.max_delta
        if self.kind == "prescribed":
            data["residual"] = self.residual or "power:1"
            data["A"] = str(self.A)
        if self.pfile:
            data["pfile"] = self.pfile
        if self.gfile:
            data["gfile"] = self.gfile
        return data


def parse_residual(text: str) -> Tuple[str, Fraction]:
    """'power:2' -> ('power', 2); 'inverse_log:0.5' -> ('inverse_log', 1/2)"""
    family, _, parameter = text.partition(":")
    if family not in RESIDUAL_FAMILIES or not parameter:
        raise DomainError(f"residual must look like power:<beta> or inverse_log:<eps>, got '{text}'")
    try:
        value = Fraction(parameter)
    except ValueError:
        raise DomainError(f"bad residual parameter '{parameter}'")
    if family == "power" and value <= 0:
        raise DomainError("power residual needs beta > 0")
    if family == "inverse_log" and value <= -1:
        raise DomainError("inverse_log residual needs eps > -1")
    return family, value


@dataclass
class Semigroup:
    """A resolved instance: exact P, lazily computed G, exact q and A where known"""
    spec: SemigroupSpec
    P: GeneratorCounts
    q: Optional[int] = None
    known_A: Optional[Fraction] = None
    element_counts: Optional[ElementCounts] = field(default=None, repr=False)

    @cached_property
    def G(self) -> ElementCounts:
        if self.element_counts is not None:
            return self.element_counts
        return count_elements(self.P)

    @property
    def n_max(self) -> int:
        return self.P.n_max

    @property
    def strict(self) -> bool:
        return self.P.strict

    @property
    def is_zero(self) -> bool:
        return self.P.is_zero


def _perturbed(spec: SemigroupSpec) -> Semigroup:
    perturbation = spec.perturbation or Perturbation()
    base = poly_generator_counts(spec.q, spec.n_max)
    deltas = perturbation.deltas(spec.seed, spec.n_max)
    values = list(base.values)
    A = Fraction(1)
    for k, delta in enumerate(deltas, 1):
        values[k - 1] += delta
        # each extra generator of degree k multiplies Z(y) by 1/(1 - y^k)
        A *= Fraction(spec.q ** k, spec.q ** k - 1) ** delta
    logger.log_system_event("perturbed_instance", f"seed={spec.seed} deltas={deltas}")
    return Semigroup(spec, GeneratorCounts(tuple(values)), spec.q, A)


@precision_scope
def prescribed_element_counts(q: int, n_max: int, residual: str, A=Fraction(1)) -> ElementCounts:
    """Analysis-mode G(n) = q^n (A + r(n)) with G(0) = 1"""
    family, parameter = parse_residual(residual)
    A = rational(A.numerator, A.denominator) if isinstance(A, Fraction) else mp.mpf(A)
    exponent = mp.mpf(parameter.numerator) / parameter.denominator
    values = [1]
    for n in range(1, n_max + 1):
        if family == "power":
            r = mp.mpf(n) ** (-exponent)
        else:
            r = (1 + mp.log(n)) ** (-(2 + exponent))
        values.append(mp.mpf(q) ** n * (A + r))
    return ElementCounts(tuple(values), strict=False)


def resolve_spec(spec: SemigroupSpec) -> Semigroup:
    """Materialize the counts a spec describes"""
    if spec.kind == "poly_over_fq":
        P = poly_generator_counts(spec.q, spec.n_max)
        semigroup = Semigroup(spec, P, spec.q, Fraction(1))
    elif spec.kind == "perturbed":
        semigroup = _perturbed(spec)
    elif spec.kind == "explicit_P":
        P, _ = read_sequence_csv(spec.pfile)
        if P is None:
            raise InsufficientData(f"{spec.pfile} has no P column")
        if P.n_max < spec.n_max:
            raise InsufficientData(f"{spec.pfile} has {P.n_max} degrees, n_max={spec.n_max} requested")
        semigroup = Semigroup(spec, P.prefix(spec.n_max), spec.q)
    elif spec.kind == "explicit_G":
        _, G = read_sequence_csv(spec.gfile)
        if G is None:
            raise InsufficientData(f"{spec.gfile} has no G column")
        if G.n_max < spec.n_max:
            raise InsufficientData(f"{spec.gfile} has {G.n_max} degrees, n_max={spec.n_max} requested")
        G = G.prefix(spec.n_max)
        semigroup = Semigroup(spec, recover_generators(G), spec.q, element_counts=G)
    else:
        G = prescribed_element_counts(spec.q, spec.n_max, spec.residual or "power:1", spec.A)
        semigroup = Semigroup(spec, recover_generators(G), spec.q, spec.A, element_counts=G)
    logger.log_system_event("spec_resolved", f"{spec.as_dict()}")
    return semigroup
