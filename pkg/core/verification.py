"""
Cross-checks between the exact character-sum side and the p-adic side.

Every check returns a report dict with an 'ok' flag. Sweeps over primes
run concurrently and keep per-prime 'ok'/'error' entries instead of
stopping at the first failure.
"""

import concurrent.futures
import threading
from fractions import Fraction
from math import lcm

from sympy import primerange

from .cyclotomic import embed_padic, galois_apply
from .engine import (
    default_precision, hgm_padic, hgm_term, jacobi_factor,
    jacobi_motive_value, rank_one_closed_form, split_degree, varkappa,
)
from .errors import CongruencePreconditionError, DegenerateParameterError, HGMError
from .ffield import (
    char_sum_H, character_from_parameter, chi_p, counting_N, fq_build,
    jacobi_sum, legendre_ap,
)
from .hgdata import (
    HGData, canonical_ordering, conjugate_data, congruent_mod_l, euler_exponents,
    irr_condition, require_generic, require_rank_two, residue_degree, scale, twist,
)
from .padic import INF, GammaCtx, PadicNum, gauss_sum_gk, teichmuller
from .recognize import recognize_rational, with_retry
from .utils import format_fraction, rational_mod, units_mod, valuation


def _embedded(x, p, k, root_index=1):
    return PadicNum.from_scaled(0, embed_padic(x, p, k, root_index), p, k)


def is_good_prime(d, xi, p):
    """Odd, coprime to N, and xi, xi-1 both p-adic units."""
    xi = Fraction(xi)
    return (p != 2 and d.N % p != 0
            and valuation(xi, p) == 0 and valuation(xi - 1, p) == 0)


# ---------------------------------------------------------------------------
# Trace match
# ---------------------------------------------------------------------------

def _trace_match_core(d, xi, p, f, k, ordering=None):
    N = d.N
    q = p ** f
    tbl = fq_build(p, f)
    exps = euler_exponents(d, ordering)
    exact = counting_N(chi_p(tbl, N), exps, xi)
    lhs = _embedded(-exact, p, k, tbl.root_index(N))
    H = hgm_padic(d, xi, p, k, f)
    jacobi = jacobi_motive_value(jacobi_factor(d, ordering), p, f, k)
    rhs = H * jacobi * varkappa(p, f, N) ** exps.A
    return {
        'datum': str(d), 'p': p, 'f': f, 'q': q, 'k': k,
        'exact_count': exact,
        'lhs': lhs, 'rhs': rhs, 'H': H,
        'ok': lhs.agrees_with(rhs),
    }


def trace_match_verify(d, xi, p, f=None, k=None, log_callback=None):
    """
    -N(chi; xi) = kappa^A J(theta) H_q(alpha, beta | xi), compared mod p^k.

    Data failing (Irr) also get the twisted route: the same relation for
    (a-d, b-d), (c-d, 1) together with the twist identity linking the two
    hypergeometric sums.
    """
    def _log(msg):
        if log_callback:
            log_callback(msg)

    require_rank_two(d)
    require_generic(d)
    if f is None:
        f = split_degree(d.N, p)
    q = p ** f
    if k is None:
        k = default_precision(d, p, q)
    _log(f"Trace match for {d} at xi={xi}, p={p}, f={f}, k={k}")

    report = _trace_match_core(d, xi, p, f, k)
    report['irr'] = irr_condition(d)
    if not report['irr']:
        shift = canonical_ordering(d)[3]
        shifted = twist(d, -shift)
        _log(f"(Irr) fails; checking twisted datum {shifted}")
        twisted = _trace_match_core(shifted, xi, p, f, k)
        relation = twist_relation(shifted, shift, xi, p, f, k)
        report['twisted'] = {
            'datum': str(shifted),
            'trace_match': twisted['ok'],
            'twist_relation': relation['ok'],
        }
        report['ok'] = report['ok'] and twisted['ok'] and relation['ok']
    return report


# ---------------------------------------------------------------------------
# Identities of the finite hypergeometric sum
# ---------------------------------------------------------------------------

def _gauss_product(ctx, d, q):
    """prod_i g(alpha_i) g(-beta_i) as Gross-Koblitz values."""
    value = PadicNum(ctx.p, ctx.k, 0, 1)
    for a, b in zip(d.alpha, d.beta):
        value = value * gauss_sum_gk(ctx, a, q, INF) * gauss_sum_gk(ctx, -b, q, INF)
    return value


def twist_relation(d, rho, xi, p, f=None, k=None):
    """
    H(alpha+rho, beta+rho | z) = Teich((-1)^n z)^r D(alpha, beta) / D(alpha+rho, beta+rho) H(alpha, beta | z)

    with r = (q-1) rho and D the Gauss-sum product over the parameters.
    """
    rho = Fraction(rho)
    shifted = twist(d, rho)
    if f is None:
        f = split_degree(lcm(d.N, shifted.N, rho.denominator), p)
    q = p ** f
    r = rho * (q - 1)
    if r.denominator != 1:
        raise DegenerateParameterError(f"(q-1)*{rho} is not an integer for q={q}")
    if k is None:
        k = default_precision(d, p, q)
    ctx = GammaCtx(p, k)
    z = rational_mod((-1) ** d.n * Fraction(xi), p)
    teich = PadicNum.from_scaled(0, pow(teichmuller(z, p, k), int(r) % (q - 1), p ** k), p, k)
    lhs = hgm_padic(shifted, xi, p, k, f)
    rhs = teich * _gauss_product(ctx, d, q) / _gauss_product(ctx, shifted, q) * hgm_padic(d, xi, p, k, f)
    return {'rho': rho, 'datum': str(d), 'twisted': str(shifted), 'q': q,
            'lhs': lhs, 'rhs': rhs, 'ok': lhs.agrees_with(rhs)}


def nongeneric_reduction(d, xi, p, f=None, k=None):
    """
    Drop a repeated pair alpha_i = beta_j = t:

    H(alpha, beta) = q^delta (T(m0) Teich(z)^m0 + q H(gamma, delta)),
    delta = 0 for integral t and -1 otherwise, m0 = (q-1) t.
    """
    pair = next(((i, j) for i, a in enumerate(d.alpha)
                 for j, b in enumerate(d.beta) if a == b), None)
    if pair is None:
        raise DegenerateParameterError(f"Datum {d} is generic; nothing to reduce")
    i, j = pair
    t = d.alpha[i]
    rest = HGData(d.alpha[:i] + d.alpha[i + 1:], d.beta[:j] + d.beta[j + 1:])
    if f is None:
        f = split_degree(d.N, p)
    q = p ** f
    if k is None:
        k = default_precision(d, p, q)
    m0 = int(t * (q - 1)) % (q - 1)
    delta = 0 if t == 0 else -1

    lhs = hgm_padic(d, xi, p, k, f)
    ctx = GammaCtx(p, k)
    teich = pow(teichmuller(rational_mod(Fraction(xi), p), p, k), m0, p ** k)
    isolated = hgm_term(ctx, rest, m0, q) * teich
    rhs = (isolated + hgm_padic(rest, xi, p, k, f) * q) * PadicNum.from_rational(Fraction(q) ** delta, p, k)
    return {'datum': str(d), 'reduced': str(rest), 'm0': m0, 'delta': delta,
            'lhs': lhs, 'rhs': rhs, 'ok': lhs.agrees_with(rhs)}


def galois_check(d, xi, p, k=None):
    """
    sigma_j(N(chi; xi)) is the count for j*d with the ordering j*(a, b, c, d),
    and every conjugate datum satisfies the trace match on its own.
    """
    N = d.N
    if (p - 1) % N:
        raise DegenerateParameterError(f"Galois check needs p = 1 mod {N}, got p={p}")
    tbl = fq_build(p, 1)
    chi = chi_p(tbl, N)
    order = canonical_ordering(d)
    base = counting_N(chi, euler_exponents(d), xi)
    counts = {}
    for j in units_mod(N):
        exps = euler_exponents(scale(d, j), tuple(j * x for x in order))
        counts[j] = counting_N(chi, exps, xi) == galois_apply(j, base)
    conjugates = {j: trace_match_verify(dj, xi, p, 1, k)['ok']
                  for j, dj in conjugate_data(d)}
    return {'counts': counts, 'conjugates': conjugates,
            'ok': all(counts.values()) and all(conjugates.values())}


def _check(name, compute):
    try:
        report = compute()
        return {'name': name, 'ok': report['ok'], 'report': report}
    except HGMError as exc:
        return {'name': name, 'ok': False, 'error': exc.to_dict()}


def hypergeometric_properties_suite(d, xi, p, f=None, k=None, rho=Fraction(1, 2), log_callback=None):
    """
    Ordering, inversion, Galois action, twist and non-generic reduction.

    Ordering and inversion run at the default residue degree; the other
    identities need characters of every order involved and run where q = 1
    modulo all denominators.
    """
    def _log(msg):
        if log_callback:
            log_callback(msg)

    xi = Fraction(xi)
    if f is None:
        f = residue_degree(d, p)
    q = p ** f
    if k is None:
        k = default_precision(d, p, q)
    _log(f"Properties suite for {d} at xi={xi}, p={p}, f={f}, k={k}")

    def ordering():
        base = hgm_padic(d, xi, p, k, f)
        swapped = HGData(tuple(reversed(d.alpha)), tuple(reversed(d.beta)))
        other = hgm_padic(swapped, xi, p, k, f)
        return {'lhs': base, 'rhs': other, 'ok': base.agrees_with(other)}

    def inversion():
        inverse = HGData(tuple(-b for b in d.beta), tuple(-a for a in d.alpha))
        lhs = hgm_padic(d, xi, p, k, f)
        rhs = hgm_padic(inverse, 1 / xi, p, k, f)
        return {'inverse': str(inverse), 'lhs': lhs, 'rhs': rhs, 'ok': lhs.agrees_with(rhs)}

    def galois():
        return galois_check(d, xi, p, k)

    def twisted():
        return twist_relation(d, rho, xi, p, k=k)

    def nongeneric():
        t = d.alpha[0]
        padded = HGData((t,) + d.alpha, (t,) + d.beta)
        return nongeneric_reduction(padded, xi, p, k=k)

    checks = [_check('ordering', ordering), _check('inversion', inversion)]
    if d.n == 2 and (p - 1) % d.N == 0:
        checks.append(_check('galois', galois))
    else:
        checks.append({'name': 'galois', 'ok': None, 'skipped': f"p={p} does not split in Q(zeta_{d.N})"})
    checks.append(_check('twist', twisted))
    checks.append(_check('nongeneric', nongeneric))
    return {
        'datum': str(d), 'xi': xi, 'p': p, 'f': f, 'k': k,
        'checks': checks,
        'ok': all(c['ok'] is not False for c in checks),
    }


def rank_one_check(alpha, xi, p, k=4):
    """Closed form eps(1-xi)^-1 vs the p-adic sum and the exact character value."""
    d = HGData((Fraction(alpha),), (Fraction(0),))
    closed = rank_one_closed_form(alpha, xi, p, 1, k)
    summed = hgm_padic(d, xi, p, k, 1)
    tbl = fq_build(p, 1)
    eps = character_from_parameter(tbl, alpha)
    exact = eps.inverse().value(tbl.from_rational(1 - Fraction(xi)))
    embedded = _embedded(exact, p, k)
    return {'closed_form': closed, 'sum': summed, 'exact': exact,
            'ok': closed.agrees_with(summed) and closed.agrees_with(embedded)}


# ---------------------------------------------------------------------------
# Character sums and Jacobi-motive decompositions
# ---------------------------------------------------------------------------

def char_sum_identity_check(d, z, p, k=None):
    """
    H(z) = prod_{i<n} J(eps_i, eta_i) * H_q(alpha, beta | z) at a split prime,
    where eps_i = omega_{alpha_i}, eps_i eta_i = omega_{beta_i} and the last
    pair carries the integral beta (chi = eps_n).
    """
    require_generic(d)
    if 0 not in d.beta:
        raise DegenerateParameterError(f"Datum {d} has no integral beta")
    if (p - 1) % d.N:
        raise DegenerateParameterError(f"p={p} is not 1 mod {d.N}")
    if k is None:
        k = default_precision(d, p, p)
    j = d.beta.index(0)
    beta = d.beta[:j] + d.beta[j + 1:] + (d.beta[j],)
    alpha = d.alpha
    tbl = fq_build(p, 1)

    eps = [character_from_parameter(tbl, a) for a in alpha[:-1]]
    eta = [character_from_parameter(tbl, b) * e.inverse() for b, e in zip(beta[:-1], eps)]
    chi = character_from_parameter(tbl, alpha[-1])
    exact = char_sum_H(eps, eta, chi, z)

    lhs = _embedded(exact, p, k)
    prefactor = PadicNum(p, k, 0, 1)
    for e, h in zip(eps, eta):
        prefactor = prefactor * _embedded(jacobi_sum(e, h), p, k)
    rhs = prefactor * hgm_padic(HGData(alpha, beta), z, p, k, 1)
    return {'datum': str(d), 'z': Fraction(z), 'p': p, 'k': k,
            'exact': exact, 'lhs': lhs, 'rhs': rhs, 'ok': lhs.agrees_with(rhs)}


def jacobi_decomposition_check(d, xi, thetas, primes, k=None):
    """
    H_q = sum of the Jacobi-motive values over q and q^2 at split primes.

    thetas are JacobiDatum instances; primes where some conductor does not
    split are reported as skipped.
    """
    N = lcm(d.N, *(jd.N for jd in thetas))
    results = []
    for p in primes:
        if (p - 1) % N or not is_good_prime(d, xi, p):
            results.append({'p': p, 'ok': None, 'skipped': 'not a split good prime'})
            continue
        try:
            # compared as a congruence, never recognized
            kp = k or default_precision(d, p, p)
            entry = {'p': p, 'k': kp, 'ok': True}
            for f in (1, 2):
                H = hgm_padic(d, xi, p, kp, f)
                total = PadicNum.zero(p, kp)
                for jd in thetas:
                    total = total + jacobi_motive_value(jd, p, f, kp)
                entry[f"q^{f}"] = {'H': H, 'jacobi_sum': total}
                entry['ok'] = entry['ok'] and H.agrees_with(total)
            results.append(entry)
        except HGMError as exc:
            results.append({'p': p, 'ok': False, 'error': exc.to_dict()})
    return {'datum': str(d), 'thetas': [str(jd) for jd in thetas], 'results': results,
            'ok': all(r['ok'] is not False for r in results)}


def legendre_check(p, k=None, xis=None):
    """H_p((1/2,1/2),(1,1) | xi) = (-1)^((p-1)/2) a_p(E_xi) for every xi mod p."""
    d = HGData((Fraction(1, 2), Fraction(1, 2)), (Fraction(0), Fraction(0)))
    if k is None:
        k = default_precision(d, p, p)
    sign = -1 if (p - 1) // 2 % 2 else 1
    mismatches = []
    xis = range(2, p - 1) if xis is None else xis
    for xi in xis:
        H = hgm_padic(d, xi, p, k, 1)
        expected = sign * legendre_ap(xi, p)
        if not H.agrees_with(expected):
            mismatches.append(xi)
    return {'p': p, 'k': k, 'checked': len(xis), 'mismatches': mismatches, 'ok': not mismatches}


# ---------------------------------------------------------------------------
# Sweeps over primes
# ---------------------------------------------------------------------------

def _run_per_prime(primes, work, jobs=4, log_callback=None, progress_callback=None):
    """
    Run work(p) for every prime concurrently.

    Returns:
        List of per-prime dicts ordered by prime; failures carry an 'error'
    """
    results = {}
    total = len(primes)
    print_lock = threading.Lock()

    def _safe(p):
        try:
            return p, work(p)
        except HGMError as exc:
            return p, {'p': p, 'ok': False, 'error': exc.to_dict()}

    completed = 0
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
        future_to_prime = {executor.submit(_safe, p): p for p in primes}

        for future in concurrent.futures.as_completed(future_to_prime):
            p, entry = future.result()
            completed += 1
            ok = bool(entry.get('ok'))

            with print_lock:
                results[p] = entry
                if log_callback:
                    status = 'OK' if ok else f"FAIL {entry.get('error', {}).get('reason', 'mismatch')}"
                    log_callback(f"[{completed}/{total}] p={p}... {status}")

            # Call progress callback OUTSIDE the lock
            if progress_callback:
                progress_callback(completed, total, p, ok)

    return [results[p] for p in sorted(results)]


def verify_sweep(d, xi, pmax, k=None, jobs=4, log_callback=None, progress_callback=None):
    """Trace match at every split good prime up to pmax."""
    require_rank_two(d)
    primes = [p for p in primerange(3, pmax + 1)
              if (p - 1) % d.N == 0 and is_good_prime(d, xi, p)]
    if log_callback:
        log_callback(f"Verifying {d} at xi={format_fraction(Fraction(xi))} over {len(primes)} primes")

    def work(p):
        report = trace_match_verify(d, xi, p, 1, k)
        return {key: report[key] for key in ('p', 'f', 'k', 'lhs', 'rhs', 'ok', 'irr', 'twisted')
                if key in report}

    results = _run_per_prime(primes, work, jobs, log_callback, progress_callback)
    return {
        'datum': str(d), 'xi': Fraction(xi), 'pmax': pmax,
        'results': results,
        'passed': sum(1 for r in results if r['ok']),
        'failed': sum(1 for r in results if not r['ok']),
        'ok': all(r['ok'] for r in results),
    }


def _congruent_fractions(x, y, l):
    diff = Fraction(x) - Fraction(y)
    return diff == 0 or valuation(diff, l) > 0


def congruence_check(d1, d2, l, xi, primes, k=None, jobs=4, log_callback=None, progress_callback=None):
    """
    Recognized traces of two data congruent modulo l agree modulo l.

    Raises:
        CongruencePreconditionError: d1 and d2 are not congruent modulo l
    """
    if not congruent_mod_l(d1, d2, l):
        raise CongruencePreconditionError(f"{d1} and {d2} are not congruent modulo {l}", l=l)
    primes = [p for p in primes
              if p % l and is_good_prime(d1, xi, p) and is_good_prime(d2, xi, p)]

    def work(p):
        f = lcm(residue_degree(d1, p), residue_degree(d2, p))
        q = p ** f
        kp = k or max(default_precision(d1, p, q), default_precision(d2, p, q))
        t1 = with_retry(lambda kk: recognize_rational(hgm_padic(d1, xi, p, kk, f)), kp)
        t2 = with_retry(lambda kk: recognize_rational(hgm_padic(d2, xi, p, kk, f)), kp)
        return {'p': p, 'f': f, 'trace1': t1, 'trace2': t2,
                'ok': _congruent_fractions(t1, t2, l)}

    results = _run_per_prime(primes, work, jobs, log_callback, progress_callback)
    return {
        'data': [str(d1), str(d2)], 'l': l, 'xi': Fraction(xi),
        'results': results,
        'ok': all(r['ok'] for r in results),
    }
