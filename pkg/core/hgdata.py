"""
Hypergeometric data and their combinatorial invariants.

A datum is a pair of parameter vectors (alpha, beta) of rationals modulo Z.
Everything here is exact and cheap: genericity, the symmetry group H and base
field degree, Euler-curve exponents, the (Irr) criterion, monodromy orders,
zig-zag Hodge polynomials, twists, conjugates and the congruence relation.
"""

import enum
import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from sympy import isprime, totient

from .errors import (
    ParseError, NonGenericError, RankError, DegenerateParameterError,
    WildPrimeError,
)
from .utils import (
    parse_rational_list, frac_part, frac_part_upper, common_denominator,
    valuation, units_mod, format_fraction,
)


class Order(enum.Enum):
    """Tag for monodromy matrices of infinite order."""
    INFINITE = 'infinite'

    def __str__(self):
        return 'inf'


INFINITE = Order.INFINITE


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HGData:
    """Parameter vectors reduced into [0, 1); entry order is kept as given."""
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        alpha = tuple(frac_part(a) for a in self.alpha)
        beta = tuple(frac_part(b) for b in self.beta)
        if len(alpha) != len(beta):
            raise ParseError(
                f"Rank mismatch: {len(alpha)} alpha entries vs {len(beta)} beta entries")
        if not alpha:
            raise ParseError("Empty hypergeometric datum")
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'beta', beta)

    @property
    def n(self):
        return len(self.alpha)

    @property
    def N(self):
        return common_denominator(self.alpha + self.beta)

    @property
    def integral_count(self):
        """Number of integral parameters (the r of the Hodge weight r - 1)."""
        return sum(1 for x in self.alpha + self.beta if x == 0)

    @property
    def weight(self):
        return self.integral_count - 1

    def multiset_key(self):
        return (tuple(sorted(self.alpha)), tuple(sorted(self.beta)))

    def same_motive(self, other):
        """Equality up to reordering within alpha and within beta."""
        return self.multiset_key() == other.multiset_key()

    def __str__(self):
        a = ','.join(format_fraction(x) for x in self.alpha)
        b = ','.join(format_fraction(x) for x in self.beta)
        return f"{a};{b}"


@dataclass(frozen=True)
class SymmetryInfo:
    N: int
    H: tuple
    base_field_degree: int
    contains_minus_one: bool

    def to_dict(self):
        return {
            'N': self.N,
            'H': list(self.H),
            'order': len(self.H),
            'base_field_degree': self.base_field_degree,
            'contains_minus_one': self.contains_minus_one,
            'totally_real': self.contains_minus_one,
        }


@dataclass(frozen=True)
class EulerExponents:
    A: int
    B: int
    C: int
    D: int
    N: int

    def as_tuple(self):
        return (self.A, self.B, self.C, self.D)

    def to_dict(self):
        return {'A': self.A, 'B': self.B, 'C': self.C, 'D': self.D, 'N': self.N}


@dataclass(frozen=True)
class HodgePolynomial:
    """Sum of multiplicity * x^i * y^j, stored as sorted (i, j, mult) triples."""
    terms: tuple = field(default_factory=tuple)

    @classmethod
    def from_counts(cls, counts):
        terms = [(int(i), int(j), int(m)) for (i, j), m in counts.items() if m]
        terms.sort(key=_term_sort_key)
        return cls(tuple(terms))

    def as_counts(self):
        return Counter({(i, j): m for i, j, m in self.terms})

    def total(self):
        return sum(m for _, _, m in self.terms)

    def shifted(self, dx, dy):
        return HodgePolynomial.from_counts(
            Counter({(i + dx, j + dy): m for i, j, m in self.terms}))

    def x_exponents(self):
        """x-exponents repeated by multiplicity, ascending."""
        out = []
        for i, _, m in self.terms:
            out.extend([i] * m)
        return sorted(out)

    def min_exponent(self):
        return min(min(i, j) for i, j, _ in self.terms)

    def __str__(self):
        if not self.terms:
            return '0'
        return ' + '.join(_format_term(i, j, m) for i, j, m in self.terms)


@dataclass(frozen=True)
class MonodromyInfo:
    r0: object
    r1: object
    rinf: object

    def order_at(self, which):
        return {'0': self.r0, '1': self.r1, 'inf': self.rinf}[which]

    def to_dict(self):
        return {k: str(v) if v is INFINITE else v
                for k, v in (('r0', self.r0), ('r1', self.r1), ('rinf', self.rinf))}


@dataclass(frozen=True)
class PrimeClass:
    kind: str
    p: int
    f: int
    at: object = None
    valuation: int = 0
    order: object = None
    unramified: bool = False

    @property
    def label(self):
        if self.kind == 'tame' and self.unramified:
            return 'tame, motive unramified'
        return self.kind

    def to_dict(self):
        out = {'class': self.kind, 'label': self.label, 'p': self.p, 'f': self.f}
        if self.kind == 'tame':
            out['at'] = self.at
            out['valuation'] = self.valuation
            out['order'] = str(self.order) if self.order is INFINITE else self.order
            out['unramified'] = self.unramified
        return out


def _monomial(i, j):
    parts = []
    for var, e in (('x', i), ('y', j)):
        if e == 1:
            parts.append(var)
        elif e != 0:
            parts.append(f"{var}^{e}")
    return '*'.join(parts)


def _format_term(i, j, m):
    mono = _monomial(i, j)
    if not mono:
        return str(m)
    return mono if m == 1 else f"{m}*{mono}"


def _term_sort_key(term):
    i, j = term[0], term[1]
    return (abs(i) + abs(j), 0 if i != 0 else 1, -i, -j)


# ---------------------------------------------------------------------------
# Parsing and basic predicates
# ---------------------------------------------------------------------------

def parse_params(text):
    """
    Parse "a1,a2,...;b1,b2,..." into an HGData.

    Raises:
        ParseError: malformed fraction, zero denominator or rank mismatch
    """
    parts = str(text).split(';')
    if len(parts) != 2:
        raise ParseError(f"Expected 'alphas;betas', got '{text}'")
    alpha = parse_rational_list(parts[0])
    beta = parse_rational_list(parts[1])
    return HGData(tuple(alpha), tuple(beta))


def is_generic(d):
    return all(a != b for a in d.alpha for b in d.beta)


def require_rank_two(d):
    if d.n != 2:
        raise RankError(f"Operation defined for rank 2 only (got rank {d.n})")


def require_generic(d):
    if not is_generic(d):
        raise NonGenericError(f"Datum {d} is not generic")


def scale(d, j):
    """The conjugate datum j*d (entry order kept)."""
    if gcd(j, d.N) != 1:
        raise DegenerateParameterError(f"{j} is not coprime to N={d.N}")
    return HGData(tuple(j * a for a in d.alpha), tuple(j * b for b in d.beta))


def twist(d, rho):
    """Hypergeometric twist: shift every entry by rho mod Z."""
    rho = Fraction(rho)
    return HGData(tuple(a + rho for a in d.alpha), tuple(b + rho for b in d.beta))


# ---------------------------------------------------------------------------
# Symmetry group, base field, residue degree
# ---------------------------------------------------------------------------

def symmetry_group(d):
    N = d.N
    alpha, beta = sorted(d.alpha), sorted(d.beta)
    H = []
    for j in units_mod(N):
        ja = sorted(frac_part(j * a) for a in alpha)
        jb = sorted(frac_part(j * b) for b in beta)
        if ja == alpha and jb == beta:
            H.append(j % N if N > 1 else 0)
    minus_one = (N - 1) % N if N > 1 else 0
    return SymmetryInfo(
        N=N,
        H=tuple(H),
        base_field_degree=int(totient(N)) // len(H) if N > 1 else 1,
        contains_minus_one=minus_one in H,
    )


def residue_degree(d, p):
    """Smallest f >= 1 with p^f mod N in H: the degree of a prime of K over p."""
    N = d.N
    if N > 1 and N % p == 0:
        raise WildPrimeError(f"p={p} divides N={N}")
    if N == 1:
        return 1
    H = set(symmetry_group(d).H)
    f = 1
    while pow(p, f, N) not in H:
        f += 1
    return f


def conjugate_data(d):
    """One conjugate datum per coset of H in (Z/N)^x, as (j, j*d) pairs."""
    N = d.N
    H = symmetry_group(d).H
    seen = set()
    reps = []
    for j in units_mod(N):
        if j in seen:
            continue
        reps.append((j, scale(d, j) if N > 1 else d))
        seen.update((j * h) % N for h in H)
    return reps


# ---------------------------------------------------------------------------
# Rank-2 invariants
# ---------------------------------------------------------------------------

def canonical_ordering(d):
    """(a, b, c, d): each pair ascending with representatives in (0, 1]."""
    require_rank_two(d)
    a, b = sorted(frac_part_upper(x) for x in d.alpha)
    c, dd = sorted(frac_part_upper(x) for x in d.beta)
    return a, b, c, dd


def resolve_ordering(d, ordering=None):
    if ordering is None or ordering == 'canonical':
        return canonical_ordering(d)
    require_rank_two(d)
    if ordering == 'given':
        return (d.alpha[0], d.alpha[1], d.beta[0], d.beta[1])
    return tuple(Fraction(x) for x in ordering)


def euler_exponents(d, ordering=None):
    """Exponents of y^N = x^A (1-x)^B (1-zx)^C z^D reduced into [0, N)."""
    a, b, c, dd = resolve_ordering(d, ordering)
    N = d.N

    def red(x):
        x = x * N
        if x.denominator != 1:
            raise DegenerateParameterError(f"{x} is not integral")
        return int(x) % N

    return EulerExponents(A=red(dd - b), B=red(b + 1 - c), C=red(1 + a - dd),
                          D=red(dd - 1), N=N)


def irr_condition(d):
    require_rank_two(d)
    require_generic(d)
    a, b, c, dd = canonical_ordering(d)
    dens = [Fraction(dd - b).denominator, Fraction(b - c).denominator,
            Fraction(a - dd).denominator]
    return lcm(*dens) == d.N


def monodromy_orders(d):
    require_rank_two(d)
    a, b, c, dd = canonical_ordering(d)
    r0 = lcm(c.denominator, dd.denominator) if frac_part(c - dd) != 0 else INFINITE
    rinf = lcm(a.denominator, b.denominator) if frac_part(a - b) != 0 else INFINITE
    delta = a + b - c - dd
    r1 = delta.denominator if delta.denominator != 1 else INFINITE
    return MonodromyInfo(r0=r0, r1=r1, rinf=rinf)


def classify_prime(d, xi, p, f=None):
    """
    Classify p for the specialization at xi as good, tame or wild.

    A tame prime whose local monodromy order is finite and divides the
    relevant valuation is flagged as unramified for the motive.
    """
    xi = Fraction(xi)
    if xi in (0, 1):
        raise DegenerateParameterError(f"xi={xi} is degenerate")
    if not isprime(p):
        raise DegenerateParameterError(f"{p} is not prime")
    N = d.N
    if N % p == 0:
        return PrimeClass(kind='wild', p=p, f=f or 1)
    if f is None:
        f = residue_degree(d, p)

    v0 = valuation(xi, p)
    v1 = valuation(xi - 1, p)
    if v0 == 0 and v1 == 0:
        return PrimeClass(kind='good', p=p, f=f)

    if v0 > 0:
        at, v = '0', v0
    elif v0 < 0:
        at, v = 'inf', -v0
    else:
        at, v = '1', v1

    order = monodromy_orders(d).order_at(at) if d.n == 2 else INFINITE
    unramified = order is not INFINITE and v % order == 0
    return PrimeClass(kind='tame', p=p, f=f, at=at, valuation=v,
                      order=order, unramified=unramified)


def hodge_case(d, j=1):
    """Case label I-VI of a rank-2 datum from the interleaving of a<=b and c<=d."""
    require_rank_two(d)
    dj = scale(d, j)
    require_generic(dj)
    points = [(frac_part_upper(x), 'R') for x in dj.alpha]
    points += [(frac_part(x), 'B') for x in dj.beta]
    pattern = ''.join(color for _, color in sorted(points))
    return {'RRBB': 'I', 'RBRB': 'II', 'RBBR': 'III',
            'BBRR': 'IV', 'BRBR': 'V', 'BRRB': 'VI'}[pattern]


# ---------------------------------------------------------------------------
# Hodge polynomials
# ---------------------------------------------------------------------------

def zigzag_hodge(d, j=1):
    """
    Hodge polynomial of the j-th embedding by the zig-zag walk.

    Parameters are sorted with alpha in (0,1] (red) and beta in [0,1)
    (blue). Walking upward from height 0, each blue point at height P
    contributes x^(-P) * y^(P+r-1); blue steps down, red steps up.
    """
    dj = scale(d, j)
    if not is_generic(dj):
        raise NonGenericError(f"Datum {dj} is not generic")
    r = dj.integral_count

    points = [(frac_part_upper(x), 1) for x in dj.alpha]
    points += [(frac_part(x), -1) for x in dj.beta]
    points.sort(key=lambda item: item[0])

    height = 0
    counts = Counter()
    for _, step in points:
        if step < 0:
            counts[(-height, height + r - 1)] += 1
        height += step
    return HodgePolynomial.from_counts(counts)


def hodge_polynomials(d, js=None):
    """Map j -> zig-zag Hodge polynomial for every unit j (or the given ones)."""
    if js is None:
        js = units_mod(d.N) if d.N > 1 else [1]
    return {j: zigzag_hodge(d, j) for j in js}


def hodge_shift(d):
    """Effective normalization: the Tate twist making every embedding effective."""
    lowest = min(h.min_exponent() for h in hodge_polynomials(d).values())
    return max(0, -lowest)


def effective_weight(d):
    return d.weight + 2 * hodge_shift(d)


def hodge_vector(d, js=None):
    """x-exponents with multiplicity over the given embeddings, ascending."""
    out = []
    for h in hodge_polynomials(d, js).values():
        out.extend(h.x_exponents())
    return sorted(out)


def hodge_totals(d):
    """Sum of multiplicities by x-exponent over all embeddings."""
    totals = Counter()
    for h in hodge_polynomials(d).values():
        for i, _, m in h.terms:
            totals[i] += m
    return dict(sorted(totals.items()))


# ---------------------------------------------------------------------------
# Jacobi factor and the Euler curve
# ---------------------------------------------------------------------------

def jacobi_theta(d, ordering=None):
    """Theta of the Jacobi factor: +(-a,-b,c,d) - (c-b, d-a)."""
    a, b, c, dd = resolve_ordering(d, ordering)
    plus = [-a, -b, c, dd]
    minus = [c - b, dd - a]
    return tuple([(frac_part(t), 1) for t in plus] + [(frac_part(t), -1) for t in minus])


def jacobi_hodge_exponents(theta, j=1):
    """(p, q) of sigma_j applied to a Jacobi datum."""
    p = sum(n * frac_part(j * t) for t, n in theta)
    q = sum(n * frac_part(-j * t) for t, n in theta)
    return p, q


def euler_curve_hodge(d, j=1):
    """Hodge polynomial h*x + (2-h)*y of the chi^j part of H^1 of the Euler curve."""
    e = euler_exponents(d)
    N = e.N
    h = (frac_part(Fraction(j * e.A, N)) + frac_part(Fraction(j * e.B, N))
         + frac_part(Fraction(j * e.C, N)) - frac_part(Fraction(j * (e.A + e.B + e.C), N)))
    if h.denominator != 1:
        raise DegenerateParameterError(f"Non-integral Hodge number {h}")
    h = int(h)
    return HodgePolynomial.from_counts(Counter({(1, 0): h, (0, 1): 2 - h}))


def hodge_consistency(d, j=1):
    """Whether zig-zag(j) times the Jacobi factor's monomial is the Euler-curve part."""
    p, q = jacobi_hodge_exponents(jacobi_theta(d), j)
    if p.denominator != 1 or q.denominator != 1:
        return False
    product = zigzag_hodge(d, j).shifted(int(p), int(q))
    return product.as_counts() == euler_curve_hodge(d, j).as_counts()


# ---------------------------------------------------------------------------
# Congruences
# ---------------------------------------------------------------------------

def _is_power_of(n, l):
    while n % l == 0:
        n //= l
    return n == 1


def _pairs_up(xs, ys, l):
    for perm in itertools.permutations(ys):
        if all(_is_power_of(Fraction(x - y).denominator, l) for x, y in zip(xs, perm)):
            return True
    return False


def congruent_mod_l(d1, d2, l):
    """d1 ~_l d2: entries pair off with differences of l-power denominator."""
    if d1.n != d2.n:
        raise RankError(f"Ranks differ: {d1.n} vs {d2.n}")
    return _pairs_up(d1.alpha, d2.alpha, l) and _pairs_up(d1.beta, d2.beta, l)
