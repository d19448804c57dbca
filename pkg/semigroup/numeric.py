"""
Number handling shared by the exact and the working-precision layers.

Exact values are Python ints and Fractions; reals are mpmath mpf numbers
evaluated under a working precision given in significand bits.
"""

import functools
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp
from mpmath.libmp import from_rational, round_nearest

from config import config


def is_exact(value) -> bool:
    """True for ints and Fractions (bool excluded)"""
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def to_mpf(value):
    """Round a value to the current working precision; rationals are rounded once"""
    if isinstance(value, Fraction):
        return mp.make_mpf(from_rational(value.numerator, value.denominator, mp.prec, round_nearest))
    return mp.mpf(value)


def rational(numerator: int, denominator: int):
    """Exact quotient rounded once to working precision"""
    return mp.make_mpf(from_rational(numerator, denominator, mp.prec, round_nearest))


def working_bits(precision_bits=None) -> int:
    # Nested calls inherit the caller's precision unless it is below the default
    return precision_bits or max(config.precision.bits, mp.prec)


def precision_scope(func):
    """Run the wrapped operation under mp.workprec; adds a precision_bits keyword"""
    @functools.wraps(func)
    def wrapper(*args, precision_bits=None, **kwargs):
        with mp.workprec(working_bits(precision_bits)):
            return func(*args, **kwargs)
    return wrapper


def log_series_tail(x):
    """-ln(1 - x) - x = sum_{j>=2} x^j / j for 0 <= x < 1, with relative error near 2^-prec"""
    if x == 0:
        return mp.zero
    if x > mp.mpf("0.25"):
        return -mp.log1p(-x) - x
    total = mp.mpf(0)
    power = x
    j = 1
    while True:
        j += 1
        power *= x
        term = power / j
        total += term
        if term <= mp.eps * total:
            return total


@dataclass(frozen=True)
class Bounded:
    """A real value paired with a bound on its truncation/propagation error"""
    value: object
    bound: object
    note: str = ""

    def as_dict(self, digits: int) -> dict:
        return {"value": format_real(self.value, digits), "bound": format_real(self.bound, digits)}


def format_real(value, digits: int):
    """Render a real with a fixed number of significant digits; None stays None"""
    if value is None:
        return None
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    if not isinstance(value, mp.mpf):
        with mp.workprec(max(mp.prec, 4 * digits + 16)):
            value = to_mpf(value)
    return mp.nstr(value, digits, strip_zeros=False)
