"""Deterministic low-discrepancy sample points, exact where needed.

Halton points are rational numbers, so the same generator serves both the
floating-point finite-difference checks and the exact rational identity
checks.  A seed applies a Cranley-Patterson rotation (a rational shift
modulo 1), which keeps points rational and makes distinct seeds give
distinct, reproducible point sets.
"""

import random
from fractions import Fraction

_PRIMES = (2, 3, 5, 7, 11, 13)


def _van_der_corput(index, base):
    result = Fraction(0)
    scale = Fraction(1, base)
    while index > 0:
        index, digit = divmod(index, base)
        result += digit * scale
        scale /= base
    return result


def halton(dim, count, seed=0):
    """`count` points in (0,1)^dim as exact Fractions."""
    if dim > len(_PRIMES):
        raise ValueError("at most %d dimensions" % len(_PRIMES))
    rng = random.Random(seed)
    shifts = [Fraction(rng.randint(0, 2**31 - 1), 2**31) for _ in range(dim)]
    points = []
    for i in range(1, count + 1):
        point = []
        for d in range(dim):
            x = _van_der_corput(i, _PRIMES[d]) + shifts[d]
            x -= int(x)  # wrap into [0,1)
            if x == 0:   # keep points interior
                x = Fraction(1, 2**31)
            point.append(x)
        points.append(tuple(point))
    return points


def scale_to_box(points, bounds):
    """Affinely map unit-cube points into a product of (lo, hi) intervals."""
    scaled = []
    for p in points:
        scaled.append(tuple(lo + (hi - lo) * x
                            for x, (lo, hi) in zip(p, bounds)))
    return scaled
