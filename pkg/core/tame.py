"""
Frobenius traces at tame primes where the motive still has good reduction.

When xi reduces to 0, 1 or infinity and the local monodromy order divides
the valuation, the stable model of the Euler curve has two components and
the trace is a combination of two Jacobi sums. The formulas carry gcd side
conditions; they are checked and reported, never assumed.
"""

from fractions import Fraction
from math import gcd

from .cyclotomic import CycInt, embed_padic
from .engine import (
    default_precision, jacobi_factor, jacobi_motive_value, jacobi_sum_padic,
    split_degree, varkappa,
)
from .errors import FormulaInapplicableError, TamePrimeError
from .ffield import chi_p, fq_build, jacobi_sum
from .hgdata import classify_prime, require_generic, require_rank_two, resolve_ordering
from .padic import PadicNum, teichmuller
from .utils import rational_mod, valuation


def _exponents(d, ordering):
    a, b, c, dd = resolve_ordering(d, ordering)
    N = d.N

    def red(x):
        return int(x * N) % N

    return {
        'N': N,
        'A': red(dd - b), 'B': red(b - c), 'C': red(a - dd), 'D': red(dd),
        'd-c': red(dd - c), 'a+b-c-d': red(a + b - c - dd), 'a-b': red(a - b),
        'a': red(a), 'b': red(b), 'c': red(c),
    }


def _hypotheses(at, e):
    """gcd side conditions as (label, value) pairs for the given degeneration."""
    N = e['N']
    pairs = {
        '0': [('gcd(N,(d-b)N,(b-c)N)', (e['A'], e['B'])),
              ('gcd(N,(d-c)N,(a-d)N)', (e['d-c'], e['C']))],
        '1': [('gcd(N,(d-b)N,(a+b-c-d)N)', (e['A'], e['a+b-c-d'])),
              ('gcd(N,(b-c)N,(a-d)N)', (e['B'], e['C']))],
        'inf': [('gcd(N,(a-b)N,(b-c)N)', (e['a-b'], e['B'])),
                ('gcd(N,(d-b)N,(a-d)N)', (e['A'], e['C']))],
    }[at]
    return [{'name': name, 'value': gcd(N, x, y), 'ok': gcd(N, x, y) == 1}
            for name, (x, y) in pairs]


def _terms(at, e):
    """Each term as (sign exponent of chi(-1), exponent of chi(xi~), Jacobi exponents)."""
    if at == '0':
        return [(0, e['D'], (e['A'], e['B'])),
                (e['B'], e['c'], (e['d-c'], e['C']))]
    if at == '1':
        return [(0, 0, (e['A'], e['a+b-c-d'])),
                (e['C'], e['a-b'], (e['A'], e['C']))]
    return [(0, e['b'], (e['A'], e['C'])),
            (e['C'], e['a'], (e['a-b'], e['B']))]


def tame_trace(d, xi, p, at=None, f=None, k=None, ordering=None, log_callback=None):
    """
    Trace of Frobenius at a tame prime p of good reduction for the motive.

    Args:
        d: rank-2 generic HGData
        xi: specialization; p divides the numerator of xi, xi-1 or the denominator
        p: prime not dividing N
        at: '0', '1' or 'inf' (default: read off the classification)
        f: residue degree of p in Q(zeta_N) (default: the order of p mod N)
        k: p-adic precision
        ordering: ordering of (a, b, c, d); canonical by default
        log_callback: Optional callback for progress messages

    Returns:
        Report dict with the hypotheses, both terms and the p-adic value

    Raises:
        TamePrimeError: p is not tame for xi, or `at` disagrees with the classification
        FormulaInapplicableError: monodromy or gcd condition fails
    """
    def _log(msg):
        if log_callback:
            log_callback(msg)

    require_rank_two(d)
    require_generic(d)
    xi = Fraction(xi)
    cls = classify_prime(d, xi, p)
    if cls.kind != 'tame':
        raise TamePrimeError(f"p={p} is {cls.kind} for xi={xi}, not tame", p=p)
    if at is not None and at != cls.at:
        raise TamePrimeError(f"xi degenerates to {cls.at} at p={p}, not {at}", p=p)
    at = cls.at
    if not cls.unramified:
        raise FormulaInapplicableError(
            f"Monodromy order {cls.order} at {at} does not divide valuation {cls.valuation}",
            order=cls.order, valuation=cls.valuation)

    e = _exponents(d, ordering)
    hypotheses = _hypotheses(at, e)
    failed = [h['name'] for h in hypotheses if not h['ok']]
    if failed:
        raise FormulaInapplicableError(f"Side condition fails: {', '.join(failed)}",
                                       conditions=failed)

    N = e['N']
    if f is None:
        f = split_degree(N, p)
    q = p ** f
    if k is None:
        k = default_precision(d, p, q)
    modulus = p ** k

    if at == '1':
        v = valuation(xi - 1, p)
        reduced = (xi - 1) / Fraction(p) ** v
    else:
        v = valuation(xi, p)
        reduced = xi / Fraction(p) ** v
    reduced_mod_p = rational_mod(reduced, p)
    _log(f"Tame trace at p={p} ({at}, v={v}): q={q}, k={k}")

    kappa = varkappa(p, f, N)
    teich = teichmuller(reduced_mod_p, p, k)
    step = (q - 1) // N

    padic_terms = []
    for sign_exp, chi_exp, (x, y) in _terms(at, e):
        scalar = kappa ** sign_exp * pow(teich, chi_exp * step, modulus)
        padic_terms.append(jacobi_sum_padic(x, y, N, p, f, k) * scalar)

    jacobi = jacobi_motive_value(jacobi_factor(d, ordering), p, f, k)
    value = -(padic_terms[0] + padic_terms[1]) * kappa ** e['A'] / jacobi

    exact_terms = None
    matches = None
    if f == 1:
        tbl = fq_build(p, 1)
        chi = chi_p(tbl, N)
        exact_terms = []
        for sign_exp, chi_exp, (x, y) in _terms(at, e):
            term = jacobi_sum(chi ** x, chi ** y, conductor=N)
            term = term * chi.value(reduced_mod_p, N) ** chi_exp * kappa ** sign_exp
            exact_terms.append(term)
        matches = all(
            PadicNum.from_scaled(0, embed_padic(t, p, k), p, k).agrees_with(pt)
            for t, pt in zip(exact_terms, padic_terms))

    return {
        'p': p, 'f': f, 'q': q, 'k': k,
        'at': at, 'valuation': v, 'order': cls.order,
        'reduced_xi': reduced,
        'hypotheses': hypotheses,
        'conditional': True,
        'terms_padic': padic_terms,
        'terms_exact': exact_terms,
        'exact_matches_padic': matches,
        'value': value,
    }


def exact_term_sum(report):
    """Sum of the exact Jacobi-sum terms (split primes only)."""
    terms = report['terms_exact']
    if terms is None:
        return None
    total = CycInt.from_int(terms[0].N, 0)
    for t in terms:
        total = total + t
    return total
