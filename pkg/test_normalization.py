#!/usr/bin/env python3
"""
Test script for normalization: lambda_n, the growth base q, the constant A,
H(y) and the residuals r(n).
"""

import sys
import os
from fractions import Fraction

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from mpmath import mp

from analysis.normalization import (
    estimate_A, estimate_q, h_eval, lambda_sequence, normalize, normalized_counts, residuals, resolve_A
)
from semigroup.catalog import Perturbation, SemigroupSpec, resolve_spec
from semigroup.counts import ElementCounts, GeneratorCounts, count_elements, poly_generator_counts
from semigroup.errors import DomainError, NoConvergence, NonGeometricGrowth

# reference values below are compared at the library working precision
mp.prec = 128


def _raises(error, func, *args, **kwargs):
    try:
        func(*args, **kwargs)
    except error:
        return True
    return False


def _poly_f2(n_max):
    P = poly_generator_counts(2, n_max)
    return P, count_elements(P)


def test_lambda_sequence():
    P, _ = _poly_f2(10)
    lam = lambda_sequence(P, 2)
    assert lam[0] == 1
    assert lam[1] == mp.mpf("0.5")
    assert abs(lam[9] - mp.mpf(990) / 1024) < mp.mpf("1e-30")
    assert all(v == 0 for v in lambda_sequence(GeneratorCounts((0, 0, 0)), 2))


def test_lambda_precision_scope():
    P, _ = _poly_f2(30)
    low = lambda_sequence(P, 3, precision_bits=64)
    high = lambda_sequence(P, 3, precision_bits=256)
    assert abs(low[29] - high[29]) < mp.mpf(2) ** -60


def test_estimate_q_examples():
    _, G = _poly_f2(64)
    assert estimate_q(G).value == 2
    shifted = ElementCounts(tuple((n + 1) * 2 ** n for n in range(65)))
    assert abs(estimate_q(shifted).value - 2) < mp.mpf("1e-2")
    assert _raises(NonGeometricGrowth, estimate_q, ElementCounts(tuple([1] * 65)))
    assert _raises(DomainError, estimate_q, ElementCounts((1, 2, 4)))


def test_estimate_q_other_bases():
    for q in (3, 5, 7):
        G = count_elements(poly_generator_counts(q, 48))
        assert abs(estimate_q(G).value - q) < mp.mpf("1e-20")


def test_estimate_A_poly():
    _, G = _poly_f2(64)
    exact = estimate_A(G, 2, "exact_known", known=1)
    assert exact.A == 1
    assert exact.residual_norm == 0
    tail = estimate_A(G, 2)
    assert abs(tail.A - 1) < mp.mpf("1e-25")
    assert tail.window == (48, 64)


def test_estimate_A_prescribed_residual():
    """round(2^n (3 + 1/n^2)) gives A = 3 within 1e-3"""
    values = [1] + [round(Fraction(2 ** n) * (3 + Fraction(1, n * n))) for n in range(1, 65)]
    G = ElementCounts(tuple(values), strict=False)
    assert abs(estimate_A(G, 2).A - 3) < mp.mpf("1e-3")
    assert abs(estimate_A(G, 2, "h_evaluation").A - 3) < mp.mpf("0.25")


def test_estimate_A_h_evaluation():
    _, G = _poly_f2(64)
    estimate = estimate_A(G, 2, "h_evaluation")
    assert abs(estimate.A - 1) < mp.mpf("1e-20")
    assert estimate.method == "h_evaluation"


def test_estimate_A_no_convergence():
    G = ElementCounts(tuple([1] * 65))
    assert _raises(NoConvergence, estimate_A, G, 2)
    assert _raises(DomainError, estimate_A, G, 2, "median")
    assert _raises(DomainError, estimate_A, G, 2, "exact_known")


def test_A_estimates_agree():
    """h_evaluation and tail_average agree within their combined error estimates"""
    perturbed = resolve_spec(SemigroupSpec("perturbed", 256, q=2, seed=3, perturbation=Perturbation(4, 2)))
    for G in (_poly_f2(64)[1], perturbed.G):
        tail = estimate_A(G, 2, "tail_average")
        h = estimate_A(G, 2, "h_evaluation")
        # rounding floor for estimates that are exact up to the working precision
        slack = tail.error_estimate + h.error_estimate + mp.mpf(2) ** -100
        assert abs(tail.A - h.A) <= slack, (tail.A, h.A)
    limit = mp.mpf(perturbed.known_A.numerator) / perturbed.known_A.denominator
    h = estimate_A(perturbed.G, 2, "h_evaluation")
    assert abs(h.A - limit) <= h.error_estimate
    assert h.error_estimate < mp.mpf("1e-3")


def test_prefix_stability():
    """lambda and g_norm do not depend on how far the counts were extended"""
    P = poly_generator_counts(3, 60)
    G = count_elements(P)
    for n_max in (1, 17, 40):
        assert lambda_sequence(P.prefix(n_max), 3) == lambda_sequence(P, 3)[:n_max]
        assert normalized_counts(G.prefix(n_max), 3) == normalized_counts(G, 3)[:n_max + 1]
    perturbed = resolve_spec(SemigroupSpec("perturbed", 80, q=2, seed=5))
    shorter = resolve_spec(SemigroupSpec("perturbed", 30, q=2, seed=5))
    assert lambda_sequence(shorter.P, 2) == lambda_sequence(perturbed.P, 2)[:30]
    assert normalized_counts(shorter.G, 2) == normalized_counts(perturbed.G, 2)[:31]


def test_h_eval():
    G = ElementCounts(tuple(2 ** n for n in range(2001)))
    assert abs(h_eval(G, 2, mp.mpf("0.4"), 200).value - 1) < mp.mpf("1e-10")
    assert abs(h_eval(G, 2, mp.mpf("0.499"), 2000).value - 1) < mp.mpf("1e-6")
    assert h_eval(G, 2, mp.mpf("0.4"), 200).bound == 0
    assert _raises(DomainError, h_eval, G, 2, mp.mpf("0.5"), 200)
    assert _raises(DomainError, h_eval, G, 2, mp.mpf("0.4"), 2001)


def test_residuals():
    _, G = _poly_f2(40)
    assert all(v == 0 for v in residuals(G, 2, 1))
    assert all(v == -1 for v in residuals(G, 2, 2))
    assert _raises(DomainError, residuals, G, 2, 0)

    semigroup = resolve_spec(SemigroupSpec("prescribed", 40, q=2, residual="power:2"))
    r = residuals(semigroup.G, 2, 1)
    for n in (1, 5, 40):
        assert abs(r[n - 1] - mp.mpf(1) / n ** 2) < mp.mpf("1e-30")


def test_normalize_bundle():
    semigroup = resolve_spec(SemigroupSpec("poly_over_fq", 30, q=3))
    normalized = normalize(semigroup, A=resolve_A(semigroup, 3).A)
    assert normalized.q == 3
    assert normalized.n_max == 30
    assert normalized.lambda_at(1) == 1
    assert normalized.g_norm == normalized_counts(semigroup.G, 3)
    assert all(v == 0 for v in normalized.r)


def test_normalize_estimates_q():
    G = ElementCounts(tuple(2 ** n for n in range(65)))
    semigroup = resolve_spec(SemigroupSpec("poly_over_fq", 64, q=2))
    semigroup.q = None
    assert normalize(semigroup).q == 2
    assert estimate_q(G).discrepancy < mp.mpf("1e-20")


def main():
    """Run all tests"""
    print("🧪 Testing normalization...")
    print("=" * 50)

    tests = [
        ("Lambda sequence", test_lambda_sequence),
        ("Lambda precision scope", test_lambda_precision_scope),
        ("q estimate examples", test_estimate_q_examples),
        ("q estimate for other bases", test_estimate_q_other_bases),
        ("A for the polynomial semigroup", test_estimate_A_poly),
        ("A with a prescribed residual", test_estimate_A_prescribed_residual),
        ("A by H evaluation", test_estimate_A_h_evaluation),
        ("A without convergence", test_estimate_A_no_convergence),
        ("A estimates agree", test_A_estimates_agree),
        ("Prefix stability", test_prefix_stability),
        ("H evaluation", test_h_eval),
        ("Residuals", test_residuals),
        ("Normalize bundle", test_normalize_bundle),
        ("Normalize with estimated q", test_normalize_estimates_q),
    ]

    passed = 0
    total = len(tests)

    for test_name, test_func in tests:
        print(f"\n🔍 Running {test_name}...")
        try:
            test_func()
            print(f"✅ {test_name} passed!")
            passed += 1
        except Exception as e:
            print(f"❌ {test_name} failed: {type(e).__name__}: {e}")

    print("\n" + "=" * 50)
    print(f"📊 Test Results: {passed}/{total} tests passed")

    if passed == total:
        print("🎉 All normalization tests passed!")
        return 0
    else:
        print("💥 Some tests failed. Please check the implementation.")
        return 1

if __name__ == "__main__":
    sys.exit(main())
