"""
Motive-level computations: the q-adic hypergeometric sum, Frobenius traces
and L-polynomials, Jacobi motives and the rank-one closed form.
"""

from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

from .cyclotomic import embed_padic
from .errors import (
    DegenerateParameterError, EmbeddingError, GradingError, InvalidArgumentError,
    NonGenericError, NotStableError, ParseError, TamePrimeError, WildPrimeError,
)
from .ffield import chi_p, counting_N, fq_build
from .hgdata import (
    conjugate_data, euler_exponents, hodge_shift, jacobi_theta, residue_degree,
    symmetry_group,
)
from .padic import (
    INF, ZERO, GammaCtx, PadicNum, bracket, choose_precision, eta_qm,
    gauss_sum_gk, pochhammer_padic, teichmuller,
)
from .utils import (
    common_denominator, frac_part, format_fraction, multiplicative_order,
    parse_rational, rational_mod, units_mod, valuation,
)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiDatum:
    """sum n_i <theta_i> with sum n_i theta_i integral; theta_i kept in [0, 1)."""
    theta: tuple

    def __post_init__(self):
        theta = tuple((frac_part(t), int(n)) for t, n in self.theta if n)
        if not theta:
            raise ParseError("Empty Jacobi datum")
        if sum(n * t for t, n in theta).denominator != 1:
            raise DegenerateParameterError(
                f"Jacobi condition fails: sum n_i theta_i = {sum(n * t for t, n in theta)}")
        object.__setattr__(self, 'theta', theta)

    @classmethod
    def from_pair(cls, plus, minus):
        """<a_1> + ... + <a_r> - <b_1> - ... - <b_s>."""
        return cls(tuple((Fraction(a), 1) for a in plus) + tuple((Fraction(b), -1) for b in minus))

    @property
    def N(self):
        return common_denominator(t for t, _ in self.theta)

    @property
    def weight(self):
        return sum(n for t, n in self.theta if t != 0)

    def scaled(self, j):
        return JacobiDatum(tuple((j * t, n) for t, n in self.theta))

    def __str__(self):
        return ','.join(f"{format_fraction(t)}:{n}" for t, n in self.theta)


@dataclass(frozen=True)
class FrobData:
    p: int
    f: int
    q: int
    k: int
    trace1: PadicNum
    trace2: PadicNum
    lpoly: tuple
    provenance: str = 'padic'


def parse_theta(text):
    """Parse "t1:n1,t2:n2,..." (a bare t means multiplicity 1)."""
    items = [item.strip() for item in str(text).split(',') if item.strip()]
    if not items:
        raise ParseError(f"Empty theta list: '{text}'")
    theta = []
    for item in items:
        t, _, n = item.partition(':')
        try:
            mult = int(n) if n.strip() else 1
        except ValueError:
            raise ParseError(f"Malformed multiplicity in '{item}'")
        theta.append((parse_rational(t), mult))
    return JacobiDatum(tuple(theta))


def jacobi_factor(d, ordering=None):
    """The Jacobi datum ((-a,-b,c,d),(c-b,d-a)) of the trace-match relation."""
    return JacobiDatum(jacobi_theta(d, ordering))


# ---------------------------------------------------------------------------
# Prime and precision bookkeeping
# ---------------------------------------------------------------------------

def _require_prime(p, N):
    if not isprime(p):
        raise DegenerateParameterError(f"{p} is not prime")
    if N % p == 0:
        raise WildPrimeError(f"p={p} divides N={N}", p=p, N=N)


def resolve_degree(d, p, f=None):
    """(f, q): residue degree by default, otherwise a q-stability check of the given f."""
    _require_prime(p, d.N)
    if f is None:
        f = residue_degree(d, p)
    elif f < 1 or (d.N > 1 and pow(p, f, d.N) not in symmetry_group(d).H):
        raise NotStableError(f"Datum {d} is not stable under q={p}^{f}", p=p, f=f)
    return f, p ** f


def split_degree(N, p):
    """Smallest f with N | p^f - 1, the residue degree of p in Q(zeta_N)."""
    _require_prime(p, N)
    return multiplicative_order(p % N if N > 1 else 1, N)


def _shift(d):
    try:
        return hodge_shift(d)
    except NonGenericError:
        return d.n


def default_precision(d, p, q, degree=1, rank=None):
    return choose_precision(p, q, d.weight, _shift(d), rank=rank or d.n, degree=degree)


def _require_unit(xi, p):
    xi = Fraction(xi)
    if xi == 0:
        raise DegenerateParameterError("xi=0 is degenerate")
    if valuation(xi, p) != 0:
        raise TamePrimeError(f"xi={xi} is not a {p}-adic unit", p=p)
    return xi


# ---------------------------------------------------------------------------
# The q-adic hypergeometric sum
# ---------------------------------------------------------------------------

def _request_pochhammer(ctx, x, m, q, f, star):
    p = ctx.p
    shifted = Fraction(x) + Fraction(m, 1 - q)
    for i in range(f):
        ctx.request(bracket(p ** i * shifted, star))
        ctx.request(bracket(p ** i * Fraction(x), star))


def hgm_exponent(d, m, q):
    """E_m = sum eta^inf_{q,m}(alpha) - sum eta^0_{q,m}(beta), asserted integral."""
    E = sum((eta_qm(a, m, q, INF) for a in d.alpha), Fraction(0))
    E -= sum((eta_qm(b, m, q, ZERO) for b in d.beta), Fraction(0))
    if E.denominator != 1:
        raise GradingError(f"Non-integral exponent {E} at m={m} for {d}", m=m, q=q)
    return int(E)


def hgm_term(ctx, d, m, q):
    """(-p)^E_m * prod (alpha)^inf_{q,m} / (beta)^0_{q,m}, without the Teichmuller factor."""
    p, k = ctx.p, ctx.k
    modulus = p ** k
    unit = 1
    for a in d.alpha:
        unit = unit * pochhammer_padic(ctx, a, m, q, INF) % modulus
    for b in d.beta:
        unit = unit * pow(pochhammer_padic(ctx, b, m, q, ZERO), -1, modulus) % modulus
    return PadicNum(p, k, (p - 1) * hgm_exponent(d, m, q), unit)


def hgm_padic(d, xi, p, k=None, f=None, log_callback=None):
    """
    H_q(alpha, beta | xi) = 1/(1-q) sum_m prod (alpha)^inf_{q,m}/(beta)^0_{q,m} (-p)^E_m Teich(xi)^m.

    Args:
        d: HGData of any rank
        xi: rational p-adic unit
        p: odd prime not dividing N
        k: p-adic precision (default from the precision policy)
        f: residue degree (default: degree of a prime of the base field)
        log_callback: Optional callback for progress messages

    Returns:
        PadicNum, possibly of negative valuation
    """
    def _log(msg):
        if log_callback:
            log_callback(msg)

    xi = _require_unit(xi, p)
    f, q = resolve_degree(d, p, f)
    if k is None:
        k = default_precision(d, p, q)
    ctx = GammaCtx(p, k)
    modulus = p ** k

    _log(f"H_q sum for {d} at xi={xi}: p={p}, f={f}, k={k}, {q - 1} terms")
    for m in range(q - 1):
        for a in d.alpha:
            _request_pochhammer(ctx, a, m, q, f, INF)
        for b in d.beta:
            _request_pochhammer(ctx, b, m, q, f, ZERO)
    ctx.sweep()

    teich = teichmuller(rational_mod(xi, p), p, k)
    exponents, units = [], []
    power = 1
    for m in range(q - 1):
        term = hgm_term(ctx, d, m, q)
        v, w = term.to_scaled()
        exponents.append(v)
        units.append(w * power % modulus)
        power = power * teich % modulus

    low = min(exponents)
    total = sum(w * p ** (v - low) for v, w in zip(exponents, units)) % modulus
    total = total * pow(1 - q, -1, modulus) % modulus
    return PadicNum.from_scaled(low, total, p, k)


def rank_one_closed_form(alpha, xi, p, f=1, k=4):
    """H_q(alpha, 1 | xi) = eps(1 - xi)^-1 = Teich(1 - xi)^((q-1) alpha)."""
    q = p ** f
    e = Fraction(alpha) * (q - 1)
    if e.denominator != 1:
        raise NotStableError(f"(q-1)*{alpha} is not an integer for q={q}")
    base = Fraction(1) - Fraction(xi)
    _require_unit(base, p)
    value = pow(teichmuller(rational_mod(base, p), p, k), int(e) % (q - 1), p ** k)
    return PadicNum.from_scaled(0, value, p, k)


# ---------------------------------------------------------------------------
# Jacobi motives
# ---------------------------------------------------------------------------

def varkappa(p, f, N):
    """(-1)^((q-1)/N): chi_p(-1) for the order-N character."""
    if p == 2 or N % p == 0:
        raise WildPrimeError(f"p={p} divides 2N={2 * N}")
    q = p ** f
    if (q - 1) % N:
        raise NotStableError(f"N={N} does not divide q-1={q - 1}")
    return -1 if ((q - 1) // N) % 2 else 1


def jacobi_motive_value(jd, p, f=None, k=None):
    """
    J(theta)(p) = prod G(-theta_i)^n_i with G the Gross-Koblitz Gauss sum.

    Raises:
        GradingError: if the pi-exponent of the product is not (p-1)-divisible
    """
    N = jd.N
    if f is None:
        f = split_degree(N, p)
    _require_prime(p, N)
    q = p ** f
    if (q - 1) % N:
        raise NotStableError(f"N={N} does not divide q-1={q - 1}")
    if k is None:
        k = choose_precision(p, q, jd.weight, 0, rank=1)
    ctx = GammaCtx(p, k)
    for t, _ in jd.theta:
        for i in range(f):
            ctx.request(bracket(p ** i * -t, INF))
    ctx.sweep()

    value = PadicNum(p, k, 0, 1)
    for t, n in jd.theta:
        value = value * gauss_sum_gk(ctx, -t, q, INF) ** n
    value.to_scaled()
    return value


def jacobi_motive_hodge(jd):
    """Weight, (p, q) per embedding and the infinity type j -> sum n_i {j theta_i}."""
    N = jd.N
    js = units_mod(N) if N > 1 else [1]
    hodge, infinity = {}, {}
    for j in js:
        p_j = sum((n * frac_part(j * t) for t, n in jd.theta), Fraction(0))
        q_j = sum((n * frac_part(-j * t) for t, n in jd.theta), Fraction(0))
        hodge[j] = (p_j, q_j)
        infinity[j] = p_j
    return {'weight': jd.weight, 'hodge': hodge, 'infinity_type': infinity}


def jacobi_sum_padic(a, b, N, p, f=None, k=None):
    """
    J(chi^a, chi^b) for the order-N character chi = chi_p, by Gross-Koblitz.

    g(chi^e) corresponds to G(-e/N); the degenerate cases are closed forms.
    """
    if f is None:
        f = split_degree(N, p)
    q = p ** f
    if (q - 1) % N:
        raise NotStableError(f"N={N} does not divide q-1={q - 1}")
    if k is None:
        k = choose_precision(p, q, 1, 0, rank=1)
    a, b = a % N, b % N
    if a == 0 and b == 0:
        return PadicNum.from_rational(q - 2, p, k)
    if a == 0 or b == 0:
        return PadicNum.from_rational(-1, p, k)
    if (a + b) % N == 0:
        sign = -1 if (a * (q - 1) // N) % 2 else 1
        return PadicNum.from_rational(-sign, p, k)
    ctx = GammaCtx(p, k)
    g = {e: gauss_sum_gk(ctx, Fraction(-e, N), q, INF) for e in (a, b, a + b)}
    return g[a] * g[b] / g[a + b]


# ---------------------------------------------------------------------------
# Frobenius data
# ---------------------------------------------------------------------------

def oracle_trace(d, xi, p, f, k):
    """
    H_q from exact point counts: H_q = -N(chi; xi) / (kappa^A J(theta)).

    Needs N | q - 1 and the order-N element of F_q inside F_p.
    """
    N = d.N
    q = p ** f
    if (q - 1) % N:
        raise EmbeddingError(f"N={N} does not divide q-1={q - 1}; no order-N character")
    tbl = fq_build(p, f)
    exps = euler_exponents(d)
    count = counting_N(chi_p(tbl, N), exps, xi)
    lhs = PadicNum.from_scaled(0, embed_padic(-count, p, k, tbl.root_index(N)), p, k)
    jacobi = jacobi_motive_value(jacobi_factor(d), p, f, k)
    sign = varkappa(p, f, N) ** exps.A
    return lhs / (jacobi * sign)


def lpoly_from_traces(t1, t2):
    """L(x) = 1 - t1 x + ((t1^2 - t2)/2) x^2, low degree first."""
    one = PadicNum.from_rational(1, t1.p, t1.k)
    return (one, -t1, (t1 * t1 - t2) / 2)


def hgm_frob(d, xi, p, k=None, f=None, method='padic', log_callback=None):
    """
    Degree-2 L-polynomial from the traces over q and q^2.

    method 'padic' evaluates the Gross-Koblitz sum; 'oracle' divides exact
    Euler-curve counts by the kappa and Jacobi factors.
    """
    xi = _require_unit(xi, p)
    f, q = resolve_degree(d, p, f)
    if k is None:
        k = default_precision(d, p, q, degree=2)
    if method == 'padic':
        t1 = hgm_padic(d, xi, p, k, f, log_callback)
        t2 = hgm_padic(d, xi, p, k, 2 * f, log_callback)
    elif method == 'oracle':
        t1 = oracle_trace(d, xi, p, f, k)
        t2 = oracle_trace(d, xi, p, 2 * f, k)
    else:
        raise InvalidArgumentError(f"Unknown method {method!r}; expected 'padic' or 'oracle'")
    return FrobData(p=p, f=f, q=q, k=k, trace1=t1, trace2=t2,
                    lpoly=lpoly_from_traces(t1, t2), provenance=method)


def multiply_lpolys(polys):
    """Product of polynomials given as low-first coefficient sequences."""
    out = list(polys[0])
    for poly in polys[1:]:
        prod = [None] * (len(out) + len(poly) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(poly):
                term = a * b
                prod[i + j] = term if prod[i + j] is None else prod[i + j] + term
        out = prod
    return out


def conjugate_frobs(d, xi, p, k=None, method='padic', log_callback=None):
    """
    Frobenius data of every conjugate datum and the product L-polynomial.

    Returns:
        (list of (j, conjugate HGData, FrobData), product coefficients low-first)
    """
    conjugates = conjugate_data(d)
    f, q = resolve_degree(d, p)
    if k is None:
        k = default_precision(d, p, q, degree=2, rank=d.n * len(conjugates))
    frobs = [(j, dj, hgm_frob(dj, xi, p, k, f, method, log_callback)) for j, dj in conjugates]
    return frobs, multiply_lpolys([fr.lpoly for _, _, fr in frobs])


def newton_slopes(coeffs, p):
    """Slopes of the lower Newton polygon of sum c_i x^i (low first, rationals), ascending."""
    points = [(i, valuation(c, p)) for i, c in enumerate(coeffs) if Fraction(c) != 0]
    if len(points) < 2:
        return []
    hull = [points[0]]
    for pt in points[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.extend([Fraction(y2 - y1, x2 - x1)] * (x2 - x1))
    return slopes
