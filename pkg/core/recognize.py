"""
Recognition of exact values from p-adic approximations.
"""

from fractions import Fraction
from math import gcd, isqrt

from sympy.ntheory import sqrt_mod

from .errors import PrecisionError, RecognitionError
from .padic import PadicNum


def _reconstruct(u, modulus):
    """
    Wang's rational reconstruction: a/b = u mod modulus with |a|, b <= sqrt(modulus/2).

    Returns:
        Fraction, or None if no candidate satisfies the bounds
    """
    bound = isqrt(modulus // 2)
    r0, r1 = modulus, u % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        quotient = r0 // r1
        r0, r1 = r1, r0 - quotient * r1
        s0, s1 = s1, s0 - quotient * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def recognize_rational(x):
    """
    Recognize p^v * w as p^v * a/b with a/b reconstructed from w mod p^k.

    Raises:
        RecognitionError: no candidate within the symmetric bound
    """
    if x.is_zero():
        return Fraction(0)
    v, w = x.to_scaled()
    modulus = x.p ** x.k
    value = _reconstruct(w, modulus)
    if value is None or value.denominator % x.p == 0:
        raise RecognitionError(
            f"No rational of height <= sqrt({x.p}^{x.k}/2) matches {x}", p=x.p, k=x.k)
    return value * Fraction(x.p) ** v


def recognize_poly(coeffs):
    """Coefficient-wise recognition; fails as a whole if any coefficient fails."""
    return [recognize_rational(c) for c in coeffs]


def recognize_quadratic(x1, x2, disc):
    """
    a + b*sqrt(disc) from its two conjugate embeddings x1, x2.

    sqrt(disc) is taken as the smaller square root modulo p^k.

    Returns:
        (a, b) as Fractions
    """
    p = x1.p
    k = min(x1.k, x2.k)
    modulus = p ** k
    root = sqrt_mod(disc % modulus, modulus)
    if root is None:
        raise RecognitionError(f"{disc} is not a square modulo {p}^{k}", p=p, disc=disc)
    root = min(root, modulus - root)
    half_sum = (x1 + x2) / 2
    difference = x1 - x2
    a = recognize_rational(half_sum)
    if difference.is_zero():
        return a, Fraction(0)
    b = recognize_rational(difference / (2 * PadicNum.from_rational(root, p, k)))
    return a, b


def with_retry(compute, k, retries=2, log_callback=None):
    """
    Run compute(k) and retry at k+1, k+2, ... on recognition failure.

    Raises:
        RecognitionError: the last failure once retries are exhausted or the
            precision cap is reached
    """
    last = None
    for attempt in range(retries + 1):
        try:
            return compute(k + attempt)
        except RecognitionError as exc:
            last = exc
            if log_callback:
                log_callback(f"Recognition failed at k={k + attempt}; retrying")
        except PrecisionError:
            if last is None:
                raise
            break
    raise last
