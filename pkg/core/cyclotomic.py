"""Exact arithmetic in Z[zeta_N] and its embeddings into Z_p."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import Symbol, cyclotomic_poly, primitive_root, totient
from sympy.polys.densearith import dup_add, dup_mul, dup_rem, dup_sub
from sympy.polys.densebasic import dup_strip
from sympy.polys.domains import ZZ

from .errors import (
    ConductorMismatchError, DegenerateParameterError, EmbeddingError, InvalidArgumentError,
)
from .padic import teichmuller
from .utils import units_mod


MAX_CONDUCTOR = 120

_X = Symbol('x')


@lru_cache(maxsize=None)
def cyclotomic_modulus(N):
    """Coefficients of Phi_N, highest degree first."""
    if N < 1 or N > MAX_CONDUCTOR:
        raise DegenerateParameterError(f"Conductor {N} outside 1..{MAX_CONDUCTOR}")
    return tuple(int(c) for c in cyclotomic_poly(N, _X, polys=True).all_coeffs())


@lru_cache(maxsize=None)
def phi(N):
    return int(totient(N))


def _reduce(N, dense):
    """Reduce a dense (high-first) integer polynomial modulo Phi_N."""
    rem = dup_rem(dup_strip([ZZ(int(c)) for c in dense]), list(map(ZZ, cyclotomic_modulus(N))), ZZ)
    low_first = [int(c) for c in reversed(rem)]
    return tuple(low_first + [0] * (phi(N) - len(low_first)))


def _dense(coeffs):
    return dup_strip([ZZ(c) for c in reversed(coeffs)])


@dataclass(frozen=True)
class CycInt:
    """Element sum c_i zeta_N^i with 0 <= i < phi(N), reduced modulo Phi_N."""
    N: int
    coeffs: tuple

    @classmethod
    def from_int(cls, N, n):
        return cls(N, tuple([int(n)] + [0] * (phi(N) - 1)))

    @classmethod
    def zeta(cls, N, e=1):
        counts = [0] * N
        counts[e % N] = 1
        return cls.from_exponent_counts(N, counts)

    @classmethod
    def from_exponent_counts(cls, N, counts):
        """Build sum counts[i] * zeta_N^i for i in range(N)."""
        counts = [int(c) for c in counts]
        return cls(N, _reduce(N, list(reversed(counts))))

    def _coerce(self, other):
        if isinstance(other, CycInt):
            if other.N != self.N:
                raise ConductorMismatchError(
                    f"Conductor mismatch: {self.N} vs {other.N}")
            return other
        if isinstance(other, int):
            return CycInt.from_int(self.N, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.N, _reduce(self.N, dup_add(_dense(self.coeffs), _dense(other.coeffs), ZZ)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.N, _reduce(self.N, dup_sub(_dense(self.coeffs), _dense(other.coeffs), ZZ)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycInt(self.N, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.N, _reduce(self.N, dup_mul(_dense(self.coeffs), _dense(other.coeffs), ZZ)))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise InvalidArgumentError(f"CycInt powers must be non-negative, got {e}")
        out, base = CycInt.from_int(self.N, 1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise InvalidArgumentError(f"{self} is not rational")
        return self.coeffs[0]

    def lift_to(self, M):
        """The same element in Z[zeta_M] for a multiple M of N."""
        if M % self.N:
            raise ConductorMismatchError(f"{self.N} does not divide {M}")
        step = M // self.N
        counts = [0] * M
        for i, c in enumerate(self.coeffs):
            counts[i * step] += c
        return CycInt.from_exponent_counts(M, counts)

    def galois_apply(self, j):
        return galois_apply(j, self)

    def to_dict(self):
        return {'N': self.N, 'coeffs': list(self.coeffs)}

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = '' if i == 0 else (f"z{self.N}" if i == 1 else f"z{self.N}^{i}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = '-' if c < 0 else '+'
            parts.append((sign, body))
        if not parts:
            return '0'
        head_sign, head = parts[0]
        text = ('-' if head_sign == '-' else '') + head
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------

def cyc_add(x, y):
    return x + y


def cyc_mul(x, y):
    return x * y


def cyc_neg(x):
    return -x


def galois_apply(j, x):
    """Image of x under sigma_j: zeta_N -> zeta_N^j."""
    if gcd(j, x.N) != 1:
        raise DegenerateParameterError(f"{j} is not coprime to {x.N}")
    counts = [0] * x.N
    for i, c in enumerate(x.coeffs):
        counts[(i * j) % x.N] += c
    return CycInt.from_exponent_counts(x.N, counts)


def fixed_by(x, H):
    """True iff x is fixed by every sigma_j, j in H (a SymmetryInfo or residues)."""
    residues = getattr(H, 'H', H)
    if hasattr(H, 'N') and H.N != x.N:
        raise ConductorMismatchError(f"Symmetry group modulo {H.N} vs element of conductor {x.N}")
    return all(galois_apply(j, x) == x for j in residues if gcd(j, x.N) == 1)


def canonical_root(p, N):
    """u = g^((p-1)/N) mod p, g the smallest primitive root of p."""
    if (p - 1) % N:
        raise EmbeddingError(f"p={p} is not 1 mod {N}")
    return pow(int(primitive_root(p)), (p - 1) // N, p)


def embed_padic(x, p, k, root_index=1):
    """
    Image of x mod p^k under zeta_N -> Teich(u^root_index).

    This matches chi_p(g) = zeta_N for the smallest primitive root g, so
    exact character sums and Gross-Koblitz values compare term by term.
    """
    if gcd(root_index, x.N) != 1:
        raise EmbeddingError(f"root index {root_index} is not coprime to {x.N}")
    u = pow(canonical_root(p, x.N), root_index, p)
    modulus = p ** k
    root = teichmuller(u, p, k)
    value, power = 0, 1
    for c in x.coeffs:
        value = (value + c * power) % modulus
        power = power * root % modulus
    return value


def complex_abs_sq_bound(x):
    """Max over complex embeddings of |sigma(x)|^2, exact when the norm is rational."""
    best = Fraction(0)
    bound = Fraction(sum(abs(c) for c in x.coeffs) ** 2)
    for j in units_mod(x.N):
        prod = galois_apply(j, x) * galois_apply((x.N - j) % x.N, x)
        value = Fraction(prod.coeffs[0]) if prod.is_rational() else bound
        best = max(best, value)
    return best
