"""
Tabulated finite fields F_{p^f}, multiplicative characters and exact
character sums.

Elements are encoded as integers 0..q-1 through their coefficient digits
base p (sum c_i p^i for the class of sum c_i x^i). Characters are stored as
discrete-log scale factors; sums are accumulated with numpy bincounts over
exponents of zeta_M and returned as CycInt.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import numpy as np
from sympy import isprime, legendre_symbol, primefactors, primitive_root
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_pow_mod

from .cyclotomic import CycInt, canonical_root
from .errors import (
    ConductorMismatchError, DegenerateParameterError, EmbeddingError,
    FieldSizeError,
)
from .utils import rational_mod


MAX_FIELD_SIZE = 1 << 20


# ---------------------------------------------------------------------------
# Field tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FqTable:
    """
    F_q with exp/log tables base a fixed generator g.

    exp[i] = g^i for 0 <= i < q-1; log[x] = i for x != 0 and log[0] = -1.
    """
    p: int
    f: int
    q: int
    modulus: tuple
    generator: int
    exp: np.ndarray
    log: np.ndarray
    digits: np.ndarray

    @property
    def order(self):
        return self.q - 1

    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    def _encode(self, digits):
        powers = self.p ** np.arange(self.f, dtype=np.int64)
        return (digits % self.p) @ powers

    def add(self, x, y):
        return self._encode(self.digits[x] + self.digits[y])

    def sub(self, x, y):
        return self._encode(self.digits[x] - self.digits[y])

    def neg(self, x):
        return self._encode(-self.digits[x])

    def mul(self, x, y):
        x, y = np.asarray(x), np.asarray(y)
        prod = self.exp[(self.log[x] + self.log[y]) % self.order]
        return np.where((x == 0) | (y == 0), 0, prod)

    def inv(self, x):
        if np.any(np.asarray(x) == 0):
            raise ZeroDivisionError("Inverse of zero in a finite field")
        return self.exp[(-self.log[x]) % self.order]

    def power(self, x, e):
        x = np.asarray(x)
        out = self.exp[(self.log[x] * e) % self.order]
        if e == 0:
            return np.ones_like(out)
        return np.where(x == 0, 0, out)

    def dlog(self, x):
        x = np.asarray(x)
        if np.any(x == 0):
            raise DegenerateParameterError("Discrete log of zero")
        return self.log[x]

    def from_rational(self, value):
        """Image of a rational with p-integral denominator in the prime field."""
        return rational_mod(Fraction(value), self.p)

    def epsilon(self, N):
        """The designated order-N element g^((q-1)/N)."""
        if self.order % N:
            raise DegenerateParameterError(f"N={N} does not divide q-1={self.order}")
        return int(self.exp[self.order // N])

    def root_index(self, N):
        """
        j with epsilon(N) = u^j, u = canonical_root(p, N) in the prime field.

        zeta_N embeds as Teich(epsilon(N)) = Teich(u)^j, so CycInt values of
        characters on this field embed through embed_padic(..., root_index=j).
        """
        if self.f == 1:
            return 1
        if (self.p - 1) % N:
            raise EmbeddingError(
                f"epsilon of order {N} does not lie in F_{self.p}; no Z_p embedding")
        eps = self.epsilon(N)
        u = canonical_root(self.p, N)
        acc = 1
        for j in range(N):
            if acc == eps:
                return j
            acc = acc * u % self.p
        raise EmbeddingError(f"epsilon({N}) is not a power of {u} mod {self.p}")


def _primitive_polynomial(p, f):
    """Lexicographically smallest monic irreducible of degree f with x primitive (high first)."""
    order = p ** f - 1
    cofactors = [order // r for r in primefactors(order)]
    one = [ZZ(1)]
    for tail in itertools.product(range(p), repeat=f):
        if tail[-1] == 0:
            continue
        poly = [ZZ(1)] + [ZZ(c) for c in tail]
        if not gf_irreducible_p(poly, p, ZZ):
            continue
        if all(gf_pow_mod([ZZ(1), ZZ(0)], e, poly, p, ZZ) != one for e in cofactors):
            return tuple(int(c) for c in poly)
    raise DegenerateParameterError(f"No primitive polynomial of degree {f} over F_{p}")


@lru_cache(maxsize=32)
def fq_build(p, f=1):
    """
    Build F_{p^f}.

    For f == 1 the generator is the smallest primitive root mod p; otherwise
    it is the class of x modulo the first primitive polynomial.

    Raises:
        DegenerateParameterError: p is not prime or f < 1
        FieldSizeError: q exceeds 2^20
    """
    if not isprime(p) or f < 1:
        raise DegenerateParameterError(f"Cannot build F_{p}^{f}")
    q = p ** f
    if q > MAX_FIELD_SIZE:
        raise FieldSizeError(f"q={q} exceeds the table cap {MAX_FIELD_SIZE}")

    exp = np.empty(q - 1, dtype=np.int64)
    if f == 1:
        g = int(primitive_root(p))
        modulus = (1, -g % p)
        acc = 1
        for i in range(q - 1):
            exp[i] = acc
            acc = acc * g % p
        generator = g
    else:
        modulus = _primitive_polynomial(p, f)
        low = [c % p for c in reversed(modulus[1:])]
        cur = [1] + [0] * (f - 1)
        powers = [p ** i for i in range(f)]
        for i in range(q - 1):
            exp[i] = sum(c * w for c, w in zip(cur, powers))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c - top * m) % p for c, m in zip(cur, low)]
        generator = p

    log = np.full(q, -1, dtype=np.int64)
    log[exp] = np.arange(q - 1, dtype=np.int64)
    values = np.arange(q, dtype=np.int64)
    digits = np.stack([(values // p ** i) % p for i in range(f)], axis=1)
    return FqTable(p=p, f=f, q=q, modulus=modulus, generator=generator,
                   exp=exp, log=log, digits=digits)


# ---------------------------------------------------------------------------
# Characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CharHandle:
    """x -> zeta_{q-1}^(dlog_scale * dlog(x)), and 0 at 0."""
    field: FqTable
    order: int
    dlog_scale: int

    def is_trivial(self):
        return self.dlog_scale % self.field.order == 0

    def exponents(self, M, x=None):
        """Exponents of zeta_M for x (default: every element); -1 marks x = 0."""
        tbl = self.field
        if tbl.order % M or (self.dlog_scale * M) % tbl.order:
            raise ConductorMismatchError(
                f"Character of order {self.order} has no values in Z[zeta_{M}]")
        step = self.dlog_scale * M // tbl.order
        x = tbl.elements() if x is None else np.asarray(x)
        logs = tbl.log[x]
        return np.where(logs < 0, -1, (logs * step) % M)

    def __mul__(self, other):
        _same_field(self, other)
        n = self.field.order
        s = (self.dlog_scale + other.dlog_scale) % n
        return CharHandle(self.field, n // gcd(s, n), s)

    def __pow__(self, e):
        n = self.field.order
        s = (self.dlog_scale * e) % n
        return CharHandle(self.field, n // gcd(s, n), s)

    def inverse(self):
        return self ** -1

    def value(self, x, M=None):
        """Exact value at a single element as a CycInt of conductor M."""
        M = M or self.order
        e = int(self.exponents(M, [x])[0])
        if e < 0:
            return CycInt.from_int(M, 0)
        return CycInt.zeta(M, e)

    def sign(self):
        """chi(-1) as +-1; dlog(-1) = (q-1)/2 in odd characteristic."""
        if self.field.p == 2:
            return 1
        return -1 if self.dlog_scale % 2 else 1


def _same_field(*chars):
    tbl = chars[0].field
    if any(c.field is not tbl for c in chars[1:]):
        raise ConductorMismatchError("Characters live on different fields")
    return tbl


def chi_p(tbl, N):
    """The order-N character x -> x^((q-1)/N), with zeta_N corresponding to epsilon(N)."""
    if tbl.order % N:
        raise DegenerateParameterError(f"N={N} does not divide q-1={tbl.order}")
    return CharHandle(tbl, N, tbl.order // N)


def varpi(tbl):
    """Generator of the character group with varpi^((q-1)/N) = chi_p(N)^-1."""
    return CharHandle(tbl, tbl.order, tbl.order - 1)


def character_from_parameter(tbl, a):
    """omega_a = varpi^((q-1) a) for a rational a with (q-1)a integral."""
    a = Fraction(a)
    s = a * tbl.order
    if s.denominator != 1:
        raise DegenerateParameterError(f"(q-1)*{a} is not an integer for q={tbl.q}")
    scale = -int(s) % tbl.order
    return CharHandle(tbl, tbl.order // gcd(scale, tbl.order), scale)


def _conductor(chars, conductor=None):
    M = lcm(*(c.order for c in chars))
    if conductor is not None:
        if conductor % M:
            raise ConductorMismatchError(f"Orders {M} do not divide conductor {conductor}")
        M = conductor
    return M


def _sum_exponents(exps, M):
    """CycInt sum of zeta_M^e over valid entries (e >= 0)."""
    valid = exps[exps >= 0]
    counts = np.bincount(valid % M, minlength=M) if valid.size else np.zeros(M, dtype=np.int64)
    return CycInt.from_exponent_counts(M, counts.tolist())


def _combine(M, *arrays):
    """Add exponent arrays, propagating the -1 marker for zero arguments."""
    dead = np.zeros(arrays[0].shape, dtype=bool)
    total = np.zeros(arrays[0].shape, dtype=np.int64)
    for arr in arrays:
        dead |= arr < 0
        total = total + arr
    return np.where(dead, -1, total % M)


# ---------------------------------------------------------------------------
# Exact sums
# ---------------------------------------------------------------------------

def jacobi_sum(phi, eta, conductor=None):
    """J(phi, eta) = sum_x phi(x) eta(1-x) with every character vanishing at 0."""
    tbl = _same_field(phi, eta)
    M = _conductor([phi, eta], conductor)
    xs = tbl.elements()
    one_minus = tbl.sub(np.ones_like(xs), xs)
    exps = _combine(M, phi.exponents(M, xs), eta.exponents(M, one_minus))
    return _sum_exponents(exps, M)


def _curve_values(tbl, exps, xi):
    """f(x) = x^A (1-x)^B (1-xi x)^C xi^D for every x, as field elements."""
    xs = tbl.elements()
    z = tbl.from_rational(xi)
    if z in (0, 1):
        raise DegenerateParameterError(f"xi={xi} is degenerate modulo {tbl.p}")
    ones = np.ones_like(xs)
    one_minus = tbl.sub(ones, xs)
    one_minus_zx = tbl.sub(ones, tbl.mul(np.full_like(xs, z), xs))
    value = tbl.power(xs, exps.A) if exps.A else ones
    if exps.B:
        value = tbl.mul(value, tbl.power(one_minus, exps.B))
    if exps.C:
        value = tbl.mul(value, tbl.power(one_minus_zx, exps.C))
    if exps.D:
        value = tbl.mul(value, np.full_like(xs, int(tbl.power(z, exps.D))))
    return value


def _leading_coefficient(tbl, exps, xi):
    """(-1)^B (-xi)^C xi^D in F_q."""
    z = tbl.from_rational(xi)
    sign = (-1) ** (exps.B + exps.C)
    value = sign % tbl.p * pow(z, exps.C + exps.D, tbl.p) % tbl.p
    return value


def counting_N(omega, exps, xi):
    """
    N(omega) = sum_x omega(f(x)) + omega(lc(f)) if N divides deg f.

    The result is a CycInt of conductor exps.N.
    """
    tbl = omega.field
    M = exps.N
    values = _curve_values(tbl, exps, xi)
    total = _sum_exponents(omega.exponents(M, values), M)
    if (exps.A + exps.B + exps.C) % M == 0:
        total = total + omega.value(_leading_coefficient(tbl, exps, xi), M)
    return total


def count_points_euler(exps, xi, tbl):
    """
    Affine point count of y^N = f(x) and its decomposition by characters.

    Returns a dict with 'affine' (int), 'components' ({c: CycInt} for the
    characters chi^c, c = 0..N-1, from counting_N), 'roots' (number of x
    with f(x) = 0) and 'at_infinity' (the leading-coefficient terms summed).
    """
    N = exps.N
    chi = chi_p(tbl, N)
    values = _curve_values(tbl, exps, xi)
    roots = int(np.count_nonzero(values == 0))
    components = {c: counting_N(chi ** c, exps, xi) for c in range(N)}
    correction = CycInt.from_int(N, 0)
    if (exps.A + exps.B + exps.C) % N == 0:
        lc = _leading_coefficient(tbl, exps, xi)
        for c in range(N):
            correction = correction + (chi ** c).value(lc, N)
    total = CycInt.from_int(N, roots) - correction
    for value in components.values():
        total = total + value
    return {
        'affine': total.rational_value(),
        'components': components,
        'roots': roots,
        'at_infinity': correction.rational_value(),
    }


def brute_force_count(exps, xi, tbl):
    """#{(x, y) in F_q^2 : y^N = f(x)} by direct enumeration."""
    values = _curve_values(tbl, exps, xi)
    nth_powers = tbl.power(tbl.elements(), exps.N)
    histogram = np.bincount(nth_powers, minlength=tbl.q)
    return int(histogram[values].sum())


def legendre_ap(xi, p):
    """a_p of y^2 = x(x-1)(x-xi) by enumeration."""
    if p == 2:
        raise DegenerateParameterError("legendre_ap needs an odd prime")
    z = rational_mod(Fraction(xi), p)
    if z in (0, 1):
        raise DegenerateParameterError(f"xi={xi} is degenerate modulo {p}")
    total = 0
    for x in range(p):
        v = x * (x - 1) * (x - z) % p
        if v:
            total += int(legendre_symbol(v, p))
    return -total


def weierstrass_ap(a4, a6, p):
    """a_p of y^2 = x^3 + a4 x + a6 by enumeration."""
    disc = (4 * a4 ** 3 + 27 * a6 ** 2) % p
    if p in (2, 3) or disc == 0:
        raise DegenerateParameterError(f"Bad reduction of y^2=x^3+{a4}x+{a6} at {p}")
    total = 0
    for x in range(p):
        v = (x ** 3 + a4 * x + a6) % p
        if v:
            total += int(legendre_symbol(v, p))
    return -total


def char_sum_H(eps_list, eta_list, chi, z):
    """
    sum over x_1..x_{n-1} of prod eps_i(x_i) eta_i(1-x_i) * chi^-1(1 - z x_1...x_{n-1}).

    Accumulated as a table indexed by (product, exponent) so general n
    costs (n-1) q^2 M operations.
    """
    chars = list(eps_list) + list(eta_list) + [chi]
    tbl = _same_field(*chars)
    M = _conductor(chars)
    q = tbl.q
    xs = np.arange(1, q, dtype=np.int64)
    ones = np.ones_like(xs)

    state = np.zeros((q, M), dtype=np.int64)
    state[1, 0] = 1
    for eps, eta in zip(eps_list, eta_list):
        step = _combine(M, eps.exponents(M, xs), eta.exponents(M, tbl.sub(ones, xs)))
        live = step >= 0
        xs_live, step_live = xs[live], step[live]
        nxt = np.zeros_like(state)
        for y in np.nonzero(state.any(axis=1))[0]:
            targets = tbl.mul(np.full_like(xs_live, y), xs_live)
            for e in range(M):
                count = state[y, e]
                if count:
                    np.add.at(nxt, (targets, (step_live + e) % M), count)
        state = nxt

    zval = tbl.from_rational(z)
    if zval == 0:
        raise DegenerateParameterError(f"z={z} vanishes modulo {tbl.p}")
    products = tbl.elements()
    args = tbl.sub(np.ones_like(products), tbl.mul(np.full_like(products, zval), products))
    tail = chi.inverse().exponents(M, args)
    counts = np.zeros(M, dtype=np.int64)
    for y in np.nonzero(state.any(axis=1))[0]:
        if tail[y] < 0:
            continue
        counts += np.roll(state[y], int(tail[y]))
    return CycInt.from_exponent_counts(M, counts.tolist())
