# Exact integer-level semigroup counts, transforms and catalog
from semigroup.counts import (
    ElementCounts, GeneratorCounts, TruncatedZeta, brute_force_elements, count_elements,
    divisor_weighted_counts, mobius, poly_generator_counts, recover_generators, zeta_truncated
)
from semigroup.catalog import Perturbation, Semigroup, SemigroupSpec, resolve_spec

__all__ = [
    'ElementCounts', 'GeneratorCounts', 'TruncatedZeta', 'brute_force_elements',
    'count_elements', 'divisor_weighted_counts', 'mobius', 'poly_generator_counts',
    'recover_generators', 'zeta_truncated', 'Perturbation', 'Semigroup', 'SemigroupSpec',
    'resolve_spec',
]
