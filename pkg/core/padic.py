"""
Fixed-precision p-adic arithmetic, Morita's p-adic Gamma function and
Gauss sums through the Gross-Koblitz formula.

Values are pi-graded: pi^(p-1) = -p, so a Gauss sum -pi^((p-1)eta) Gamma
is stored exactly even when eta is not an integer.
"""

import bisect
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np
from sympy import factorint

from .errors import (
    DegenerateParameterError, GradingError, InvalidArgumentError, PrecisionError,
)
from .utils import frac_part, rational_mod, unit_part, valuation


PRECISION_CAP = 10 ** 8
INF = 'inf'
ZERO = '0'

_LOOP_THRESHOLD = 256
_CHUNK = 1 << 20


def teichmuller(a, p, k):
    """Teichmuller lift of a mod p to Z/p^k (0 for a divisible by p)."""
    a %= p
    if a == 0:
        return 0
    return pow(a, p ** (k - 1), p ** k)


@lru_cache(maxsize=None)
def prime_power(q):
    """(p, f) with q = p^f."""
    factors = factorint(q)
    if len(factors) != 1:
        raise DegenerateParameterError(f"{q} is not a prime power")
    (p, f), = factors.items()
    return int(p), int(f)


# ---------------------------------------------------------------------------
# PadicNum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PadicNum:
    """
    pi^pi_exp * unit with unit a p-adic unit mod p^k, or zero (unit == 0).

    For zero, k is the absolute precision: the value is O(p^k).
    """
    p: int
    k: int
    pi_exp: int = 0
    unit: int = 1

    @classmethod
    def zero(cls, p, k):
        return cls(p, k, 0, 0)

    @classmethod
    def from_scaled(cls, v, u, p, k):
        """p^v * u for an integer u known mod p^k; strips factors of p from u."""
        if k <= 0:
            return cls.zero(p, v + max(k, 0))
        u %= p ** k
        if u == 0:
            return cls.zero(p, v + k)
        while u % p == 0:
            u //= p
            v += 1
            k -= 1
        modulus = p ** k
        sign = -1 if v % 2 else 1
        return cls(p, k, (p - 1) * v, sign * u % modulus)

    @classmethod
    def from_rational(cls, x, p, k):
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, k)
        v = valuation(x, p)
        return cls.from_scaled(v, rational_mod(unit_part(x, p), p ** k), p, k)

    def is_zero(self):
        return self.unit == 0

    def is_graded_integral(self):
        return self.is_zero() or self.pi_exp % (self.p - 1) == 0

    def valuation(self):
        """Valuation in p-units (a Fraction when pi_exp is not (p-1)-divisible)."""
        if self.is_zero():
            return None
        v = Fraction(self.pi_exp, self.p - 1)
        return int(v) if v.denominator == 1 else v

    def to_scaled(self):
        """(v, w) with value p^v * w, w a unit mod p^k; asserts integral valuation."""
        if self.is_zero():
            return (self.k, 0)
        if self.pi_exp % (self.p - 1):
            raise GradingError(
                f"pi-exponent {self.pi_exp} is not divisible by p-1={self.p - 1}")
        v = self.pi_exp // (self.p - 1)
        sign = -1 if v % 2 else 1
        return (v, sign * self.unit % self.p ** self.k)

    def absolute_precision(self):
        if self.is_zero():
            return self.k
        return Fraction(self.pi_exp, self.p - 1) + self.k

    def _coerce(self, other):
        if isinstance(other, PadicNum):
            if other.p != self.p:
                raise DegenerateParameterError(f"Mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, numbers.Rational):
            other = Fraction(int(other.numerator), int(other.denominator))
            depth = self.k + 2 + abs(self.pi_exp) // (self.p - 1)
            return PadicNum.from_rational(other, self.p, depth)
        return NotImplemented

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicNum(self.p, self.k, self.pi_exp, -self.unit % self.p ** self.k)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        prec = min(self.absolute_precision(), other.absolute_precision())
        if isinstance(prec, Fraction):
            prec = int(prec // 1)
        if self.is_zero() and other.is_zero():
            return PadicNum.zero(p, prec)
        if self.is_zero() or other.is_zero():
            x = other if self.is_zero() else self
            v, w = x.to_scaled()
            return PadicNum.from_scaled(v, w, p, prec - v)
        va, wa = self.to_scaled()
        vb, wb = other.to_scaled()
        vmin = min(va, vb)
        kk = prec - vmin
        if kk <= 0:
            return PadicNum.zero(p, prec)
        total = wa * p ** (va - vmin) + wb * p ** (vb - vmin)
        return PadicNum.from_scaled(vmin, total, p, kk)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if self.is_zero() or other.is_zero():
            x, z = (other, self) if self.is_zero() else (self, other)
            shift = 0 if x.is_zero() else x.pi_exp // (p - 1)
            return PadicNum.zero(p, z.k + shift)
        k = min(self.k, other.k)
        return PadicNum(p, k, self.pi_exp + other.pi_exp,
                        self.unit * other.unit % p ** k)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("Inverse of a p-adic zero")
        modulus = self.p ** self.k
        return PadicNum(self.p, self.k, -self.pi_exp, pow(self.unit, -1, modulus))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = PadicNum(self.p, self.k, 0, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def with_precision(self, k):
        """Truncate to relative precision k."""
        if self.is_zero() or k >= self.k:
            return self
        return PadicNum(self.p, k, self.pi_exp, self.unit % self.p ** k)

    def agrees_with(self, other):
        """Equality at the common precision."""
        coerced = self._coerce(other)
        if coerced is NotImplemented:
            raise InvalidArgumentError(f"Cannot compare a p-adic number with {type(other).__name__}")
        other = coerced
        if not (self.is_graded_integral() and other.is_graded_integral()):
            if self.pi_exp != other.pi_exp:
                return False
            k = min(self.k, other.k)
            return (self.unit - other.unit) % self.p ** k == 0
        return (self - other).is_zero()

    def digits(self):
        """(v, [d_0, ..., d_{k-1}]) with value sum d_i p^(v+i)."""
        v, w = self.to_scaled()
        out = []
        for _ in range(self.k if not self.is_zero() else 0):
            out.append(w % self.p)
            w //= self.p
        return v, out

    def __str__(self):
        p = self.p
        if self.is_zero():
            return f"O({p}^{self.k})"
        if not self.is_graded_integral():
            return f"pi^{self.pi_exp}*({PadicNum(p, self.k, 0, self.unit)})"
        v, digits = self.digits()
        terms = []
        for i, d in enumerate(digits):
            if d == 0:
                continue
            e = v + i
            if e == 0:
                terms.append(str(d))
                continue
            power = f"{p}" if e == 1 else f"{p}^{e}"
            terms.append(power if d == 1 else f"{d}*{power}")
        terms.append(f"O({p}^{v + self.k})")
        return ' + '.join(terms)


# ---------------------------------------------------------------------------
# Brackets and eta functions
# ---------------------------------------------------------------------------

def bracket(x, star):
    """{x}^inf in [0,1) and {x}^0 = 1 - {-x}^inf in (0,1]."""
    x = Fraction(x)
    if star == INF:
        return frac_part(x)
    if star == ZERO:
        return 1 - frac_part(-x)
    raise InvalidArgumentError(f"Unknown bracket direction {star!r}")


def eta_star(x, q, star):
    p, f = prime_power(q)
    x = Fraction(x)
    return sum((bracket(p ** i * x, star) for i in range(f)), Fraction(0))


def eta_qm(x, m, q, star):
    x = Fraction(x)
    return eta_star(x + Fraction(m, 1 - q), q, star) - eta_star(x, q, star)


# ---------------------------------------------------------------------------
# Morita Gamma
# ---------------------------------------------------------------------------

def _range_product(lo, hi, p, modulus):
    """prod of i in [lo, hi) with p not dividing i, mod modulus."""
    if hi - lo <= _LOOP_THRESHOLD:
        acc = 1
        for i in range(lo, hi):
            if i % p:
                acc = acc * i % modulus
        return acc
    acc = 1
    for start in range(lo, hi, _CHUNK):
        block = np.arange(start, min(start + _CHUNK, hi), dtype=np.int64)
        block[block % p == 0] = 1
        while block.size > 1:
            if block.size % 2:
                block = np.append(block, np.int64(1))
            block = (block[0::2] * block[1::2]) % modulus
        acc = acc * int(block[0]) % modulus
    return acc


class GammaCtx:
    """
    Batched evaluation of Gamma_p mod p^k.

    Arguments are requested first and evaluated by one sweep over their
    sorted integer representatives; partial products are kept as
    checkpoints so later batches resume from the nearest one.
    """

    def __init__(self, p, k):
        if p == 2:
            raise DegenerateParameterError("The p-adic Gamma function is not supported at p=2")
        if p ** k > PRECISION_CAP:
            raise PrecisionError(f"p^k = {p}^{k} exceeds the precision cap {PRECISION_CAP}")
        self.p = p
        self.k = k
        self.modulus = p ** k
        self._pending = set()
        self._values = {}
        self._marks = [0]
        self._partial = {0: 1}

    def representative(self, x):
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise DegenerateParameterError(f"{x} is not a {self.p}-adic integer")
        return rational_mod(x, self.modulus)

    def _sweep_target(self, n):
        """Gamma(n) = (-1)^n prod; large n use the reflection formula instead."""
        if n > self.modulus // 2 + 1:
            return self.modulus + 1 - n
        return n

    def request(self, x):
        return self.request_int(self.representative(x))

    def request_int(self, n):
        n %= self.modulus
        if n not in self._values:
            self._pending.add(self._sweep_target(n))
        return n

    def sweep(self):
        for t in sorted(self._pending):
            self._partial_product(t)
        self._pending.clear()

    def _partial_product(self, t):
        if t in self._partial:
            return self._partial[t]
        idx = bisect.bisect_right(self._marks, t) - 1
        start = self._marks[idx]
        value = self._partial[start] * _range_product(start, t, self.p, self.modulus) % self.modulus
        bisect.insort(self._marks, t)
        self._partial[t] = value
        return value

    def _gamma_direct(self, n):
        value = self._partial_product(n)
        return value if n % 2 == 0 else (-value) % self.modulus

    def gamma_int(self, n):
        n %= self.modulus
        if n in self._values:
            return self._values[n]
        target = self._sweep_target(n)
        if target == n:
            value = self._gamma_direct(n)
        else:
            # Gamma(x) Gamma(1-x) = (-1)^{x_0}, x_0 in 1..p congruent to x
            x0 = n % self.p or self.p
            sign = -1 if x0 % 2 else 1
            value = sign * pow(self._gamma_direct(target), -1, self.modulus) % self.modulus
        self._values[n] = value
        return value

    def gamma(self, x):
        return self.gamma_int(self.representative(x))


def gamma_p(ctx, x):
    return ctx.gamma(x)


def gamma_q_star(ctx, x, f, star):
    p = ctx.p
    x = Fraction(x)
    acc = 1
    for i in range(f):
        acc = acc * ctx.gamma(bracket(p ** i * x, star)) % ctx.modulus
    return acc


def pochhammer_padic(ctx, x, m, q, star):
    p, f = prime_power(q)
    x = Fraction(x)
    top = gamma_q_star(ctx, x + Fraction(m, 1 - q), f, star)
    bottom = gamma_q_star(ctx, x, f, star)
    return top * pow(bottom, -1, ctx.modulus) % ctx.modulus


def gauss_sum_gk(ctx, a, q, direction=INF):
    """
    Gross-Koblitz value of a Gauss sum.

    direction INF gives g(a) = -pi^((p-1) eta^inf(a)) Gamma^inf(a);
    direction ZERO gives q / g'(-a) = -pi^((p-1) eta^0(a)) Gamma^0(a).
    """
    p, f = prime_power(q)
    a = Fraction(a)
    if ((q - 1) * a).denominator != 1:
        raise DegenerateParameterError(f"(q-1)*{a} is not an integer for q={q}")
    eta = eta_star(a, q, direction)
    pi_exp = (p - 1) * eta
    if pi_exp.denominator != 1:
        raise GradingError(f"Non-integral pi-exponent {pi_exp}")
    unit = -gamma_q_star(ctx, a, f, direction) % ctx.modulus
    return PadicNum(p, ctx.k, int(pi_exp), unit)


# ---------------------------------------------------------------------------
# Precision policy
# ---------------------------------------------------------------------------

def choose_precision(p, q, weight, shift=1, rank=2, degree=1):
    """
    Smallest k with p^k > 8 B^2, B = ceil(rank * Q^((weight + 2 shift)/2)), Q = q^degree.

    Raises:
        PrecisionError: if p^k would exceed the precision cap
    """
    e = max(weight + 2 * shift, 0)
    Q = q ** degree
    target = rank * rank * Q ** e
    bound = isqrt(target)
    if bound * bound < target:
        bound += 1
    need = 8 * bound * bound
    k, power = 1, p
    while power <= need:
        k += 1
        power *= p
    if power > PRECISION_CAP:
        raise PrecisionError(
            f"Required precision {p}^{k} exceeds the cap {PRECISION_CAP}", p=p, k=k)
    return k
