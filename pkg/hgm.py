"""
Hypergeometric motive toolkit - CLI entry point.

Thin wrapper that wires together the core library modules: every
subcommand builds a result dict, which is rendered as text or JSON.
"""

import argparse
import json
import sys

from sympy import primerange

from core.engine import (
    conjugate_frobs, default_precision, hgm_frob, hgm_padic, jacobi_motive_hodge,
    jacobi_motive_value, newton_slopes, parse_theta, resolve_degree, split_degree,
)
from core.errors import HGMError, UnsupportedOptionError
from core.ffield import brute_force_count, count_points_euler, fq_build
from core.formatters import (
    FORMATTERS, integral_lpoly, render_json, save_results_to_file,
)
from core.hgdata import (
    classify_prime, conjugate_data, effective_weight, euler_exponents, hodge_case,
    hodge_polynomials, hodge_shift, hodge_vector, monodromy_orders, parse_params,
    symmetry_group,
)
from core.recognize import recognize_poly, recognize_rational, with_retry
from core.tame import tame_trace
from core.utils import parse_rational, units_mod
from core.verification import (
    congruence_check, hypergeometric_properties_suite, verify_sweep,
)


def _info(msg):
    print(f"[info] {msg}", file=sys.stderr)


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------

def _handle_trace(args):
    """Handle the trace command."""
    d = parse_params(args.params)
    xi = parse_rational(args.z)
    f, q = resolve_degree(d, args.p, args.f)
    k = args.prec or default_precision(d, args.p, q)
    result = {'datum': str(d), 'xi': xi, 'p': args.p, 'f': f, 'q': q}

    if args.recognize:
        def compute(kk):
            value = hgm_padic(d, xi, args.p, kk, f, _info)
            return kk, value, recognize_rational(value)

        k, padic, value = with_retry(compute, k, log_callback=_info)
        result.update(k=k, value=value, padic=padic)
    else:
        value = hgm_padic(d, xi, args.p, k, f, _info)
        result.update(k=k, value=value)
    return result


def _handle_frob(args):
    """Handle the frob command (optionally over all conjugate data)."""
    d = parse_params(args.params)
    xi = parse_rational(args.z)
    result = {'datum': str(d), 'xi': xi, 'p': args.p, 'method': args.method}
    recognize = args.recognize or args.integral or args.conjugates

    def compute(kk):
        if args.conjugates:
            frobs, product = conjugate_frobs(d, xi, args.p, kk, args.method, _info)
            fr = frobs[0][2]
            conjugates = [str(dj) for _, dj, _ in frobs]
        else:
            fr = hgm_frob(d, xi, args.p, kk, args.f, args.method, _info)
            product, conjugates = fr.lpoly, None
        recognized = recognize_poly(product) if recognize else None
        return fr, product, conjugates, recognized

    if recognize:
        fr, product, conjugates, recognized = with_retry(compute, args.prec or _frob_precision(d, args), log_callback=_info)
    else:
        fr, product, conjugates, recognized = compute(args.prec)

    result.update(f=fr.f, q=fr.q, k=fr.k, lpoly=list(product))
    if conjugates is not None:
        result['conjugates'] = conjugates
    if recognized is not None:
        result['recognized'] = recognized
        if args.integral:
            result['integral'] = integral_lpoly(recognized, fr.q)
        if args.conjugates:
            js = [j for j, _ in conjugate_data(d)]
            result['newton_slopes'] = [s / fr.f for s in newton_slopes(recognized, args.p)]
            result['hodge_vector'] = hodge_vector(d, js)
    return result


def _frob_precision(d, args):
    _, q = resolve_degree(d, args.p, args.f)
    if args.conjugates:
        return default_precision(d, args.p, q, degree=2, rank=d.n * len(conjugate_data(d)))
    return default_precision(d, args.p, q, degree=2)


def _handle_hodge(args):
    """Handle the hodge command."""
    d = parse_params(args.params)
    js = (units_mod(d.N) if d.N > 1 else [1]) if args.all_embeddings else [1]
    polys = hodge_polynomials(d, js)
    result = {
        'datum': str(d),
        'embeddings': list(polys),
        'polynomials': [str(h) for h in polys.values()],
        'weight': d.weight,
        'shift': hodge_shift(d),
        'effective_weight': effective_weight(d),
    }
    if d.n == 2:
        result['cases'] = [hodge_case(d, j) for j in polys]
    return result


def _handle_basefield(args):
    """Handle the basefield command."""
    d = parse_params(args.params)
    return {'datum': str(d), **symmetry_group(d).to_dict()}


def _handle_classify(args):
    """Handle the classify command."""
    d = parse_params(args.params)
    xi = parse_rational(args.z)
    result = {'datum': str(d), 'xi': xi, **classify_prime(d, xi, args.p).to_dict()}
    result['monodromy'] = monodromy_orders(d).to_dict()
    return result


def _progress(completed, total, p, ok):
    _info(f"[{completed}/{total}] p={p} {'OK' if ok else 'FAIL'}")


def _handle_verify(args):
    """Handle the verify command."""
    d = parse_params(args.params)
    xi = parse_rational(args.z)
    return verify_sweep(d, xi, args.pmax, args.prec, args.jobs,
                        progress_callback=_progress)


def _handle_tame(args):
    """Handle the tame command."""
    d = parse_params(args.params)
    xi = parse_rational(args.z)
    report = tame_trace(d, xi, args.p, args.at, args.f, args.prec, log_callback=_info)
    result = {'datum': str(d), 'xi': xi, **report}
    result['padic'] = report['value']
    if args.recognize:
        result['value'] = recognize_rational(report['value'])
    return result


def _handle_jacobi(args):
    """Handle the jacobi command."""
    jd = parse_theta(args.theta)
    f = args.f or split_degree(jd.N, args.p)
    value = jacobi_motive_value(jd, args.p, f, args.prec)
    hodge = jacobi_motive_hodge(jd)
    result = {
        'theta': str(jd), 'p': args.p, 'f': f, 'q': args.p ** f, 'k': value.k,
        'value': value, 'padic': value,
        'weight': hodge['weight'], 'hodge': hodge['hodge'],
        'infinity_type': hodge['infinity_type'],
    }
    if args.recognize:
        result['value'] = recognize_rational(value)
    return result


def _handle_congr(args):
    """Handle the congr command."""
    d1 = parse_params(args.params1)
    d2 = parse_params(args.params2)
    xi = parse_rational(args.z)
    primes = list(primerange(3, args.pmax + 1))
    return congruence_check(d1, d2, args.l, xi, primes, args.prec, args.jobs,
                            progress_callback=_progress)


def _handle_props(args):
    """Handle the props command."""
    d = parse_params(args.params)
    xi = parse_rational(args.z)
    return hypergeometric_properties_suite(d, xi, args.p, args.f, args.prec, log_callback=_info)


def _handle_count(args):
    """Handle the count command."""
    d = parse_params(args.params)
    xi = parse_rational(args.z)
    f = args.f or split_degree(d.N, args.p)
    tbl = fq_build(args.p, f)
    exps = euler_exponents(d)
    counts = count_points_euler(exps, xi, tbl)
    return {
        'datum': str(d), 'xi': xi, 'p': args.p, 'f': f, 'q': tbl.q,
        'exponents': exps.to_dict(),
        **counts,
        'brute_force': brute_force_count(exps, xi, tbl),
    }


HANDLERS = {
    'trace': _handle_trace,
    'frob': _handle_frob,
    'hodge': _handle_hodge,
    'basefield': _handle_basefield,
    'classify': _handle_classify,
    'verify': _handle_verify,
    'tame': _handle_tame,
    'jacobi': _handle_jacobi,
    'congr': _handle_congr,
    'props': _handle_props,
    'count': _handle_count,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='Print the result as JSON')
    common.add_argument('--out', type=str, help="Save the rendered result to a file ('auto' for a timestamped file)")
    common.add_argument('--prec', type=int, help='p-adic precision k (default: precision policy)')
    common.add_argument('--seed', type=int, help=argparse.SUPPRESS)

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument('--params', required=True, help='Hypergeometric datum "a1,a2;b1,b2"')

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument('--z', required=True, help='Specialization xi (integer or fraction)')
    point.add_argument('--p', type=int, required=True, help='Prime')
    point.add_argument('--f', type=int, help='Residue degree (default: degree of a prime of the base field)')

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument('--z', required=True, help='Specialization xi')
    sweep.add_argument('--pmax', type=int, required=True, help='Largest prime of the sweep')
    sweep.add_argument('--jobs', type=int, default=4, help='Worker threads (default: 4)')

    parser = argparse.ArgumentParser(description='Compute and verify rank-2 hypergeometric motives')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('trace', parents=[common, params, point], help='Finite hypergeometric sum H_q')
    p.add_argument('--recognize', action='store_true', help='Recognize the value as a rational')

    p = sub.add_parser('frob', parents=[common, params, point], help='Euler factor from H_q and H_q^2')
    p.add_argument('--recognize', action='store_true', help='Recognize the coefficients')
    p.add_argument('--integral', action='store_true', help='Integral Weil normalization in T')
    p.add_argument('--conjugates', action='store_true', help='Product over the conjugate data')
    p.add_argument('--method', choices=['padic', 'oracle'], default='padic',
                   help='Gross-Koblitz sum or exact Euler-curve counts')

    p = sub.add_parser('hodge', parents=[common, params], help='Zig-zag Hodge polynomials')
    p.add_argument('--all-embeddings', action='store_true', help='Every embedding, not only j=1')

    sub.add_parser('basefield', parents=[common, params], help='Symmetry group and base field')
    sub.add_parser('classify', parents=[common, params, point], help='Good, tame or wild prime')
    sub.add_parser('verify', parents=[common, params, sweep], help='Trace match over split good primes')

    p = sub.add_parser('tame', parents=[common, params, point], help='Trace at a tame prime')
    p.add_argument('--at', choices=['0', '1', 'inf'], help='Degeneration point (default: from xi)')
    p.add_argument('--recognize', action='store_true', help='Recognize the value as a rational')

    p = sub.add_parser('jacobi', parents=[common], help='Jacobi motive value and Hodge data')
    p.add_argument('--theta', required=True, help='"t1:n1,t2:n2,..."')
    p.add_argument('--p', type=int, required=True, help='Prime')
    p.add_argument('--f', type=int, help='Residue degree (default: order of p mod N)')
    p.add_argument('--recognize', action='store_true', help='Recognize the value as a rational')

    p = sub.add_parser('congr', parents=[common, sweep], help='Congruence of traces modulo l')
    p.add_argument('--params1', required=True, help='First datum')
    p.add_argument('--params2', required=True, help='Second datum')
    p.add_argument('--l', type=int, required=True, help='Prime modulus of the congruence')

    sub.add_parser('props', parents=[common, params, point], help='Identities of the finite sum')
    sub.add_parser('count', parents=[common, params, point], help='Euler-curve point counts')
    return parser


def run(argv=None):
    """Parse, dispatch and render. Returns (exit code, rendered text)."""
    args = build_parser().parse_args(argv)
    try:
        if args.seed is not None:
            raise UnsupportedOptionError("--seed is not supported: every computation is deterministic")
        result = HANDLERS[args.command](args)
    except HGMError as e:
        return 2, json.dumps({'error': e.to_dict()}, indent=2)

    if args.json:
        text = render_json(result)
    else:
        text = FORMATTERS[args.command](result)

    if args.out:
        query = ' '.join(argv if argv is not None else sys.argv[1:])
        save_results_to_file(query, text, None if args.out == 'auto' else args.out)
    code = 1 if result.get('ok') is False else 0
    return code, text


def main():
    code, text = run()
    print(text)
    sys.exit(code)


if __name__ == "__main__":
    main()
