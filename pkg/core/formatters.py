"""Plain-text and JSON output formatting for all commands."""

import dataclasses
import json
import sys
from datetime import datetime
from fractions import Fraction

from .cyclotomic import CycInt
from .hgdata import HodgePolynomial, Order
from .padic import PadicNum
from .utils import create_timestamped_filepath, format_fraction


def save_results_to_file(query, results_text, filepath=None):
    """Save results to the given path, or a timestamped file in the results directory."""
    if filepath is None:
        filepath = create_timestamped_filepath(query, '.txt')

    try:
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(f"Query: {query}\n")
            f.write(f"Timestamp: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
            f.write("="*60 + "\n\n")
            f.write(results_text)
        print(f"\n[Results saved to: {filepath}]", file=sys.stderr)
        return True
    except OSError as e:
        print(f"\n[Error saving results: {e}]", file=sys.stderr)
        return False


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def padic_to_dict(x):
    if not x.is_graded_integral():
        return {'p': x.p, 'pi_exponent': x.pi_exp, 'precision': x.k, 'text': str(x)}
    v, digits = x.digits()
    return {'p': x.p, 'valuation': v, 'precision': x.k, 'digits': digits, 'text': str(x)}


def to_jsonable(obj):
    """Recursively convert results into JSON-compatible values."""
    if isinstance(obj, PadicNum):
        return padic_to_dict(obj)
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, (CycInt, HodgePolynomial, Order)):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, range)):
        return [to_jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, 'to_dict'):
            return to_jsonable(obj.to_dict())
        return to_jsonable(dataclasses.asdict(obj))
    if hasattr(obj, 'item'):
        return obj.item()
    return obj


def render_json(result):
    return json.dumps(to_jsonable(result), indent=2)


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------

def format_value(x):
    if isinstance(x, Fraction):
        return format_fraction(x)
    return str(x)


def _coefficient_term(c, power, var):
    c = Fraction(c)
    if power == 0:
        return format_fraction(abs(c))
    mono = var if power == 1 else f"{var}^{power}"
    if abs(c) == 1:
        return mono
    return f"{format_fraction(abs(c))}*{mono}"


def format_lpoly(coeffs, var='x'):
    """
    Render low-first rational coefficients highest degree first.

    Example: (1, 4/7, 1/7) -> "1/7*x^2 + 4/7*x + 1".
    """
    terms = [(i, Fraction(c)) for i, c in enumerate(coeffs) if Fraction(c) != 0]
    if not terms:
        return '0'
    text = ''
    for n, (i, c) in enumerate(reversed(terms)):
        body = _coefficient_term(c, i, var)
        if n == 0:
            text = ('-' if c < 0 else '') + body
        else:
            text += f" {'-' if c < 0 else '+'} {body}"
    return text


def integral_lpoly(coeffs, q):
    """
    Substitute x = q^s T with the least s making every coefficient integral.

    Example: 1 + 4/7 x + 1/7 x^2 at q=7 -> 1 + 4T + 7T^2.
    """
    coeffs = [Fraction(c) for c in coeffs]
    s = 0
    while any((c * Fraction(q) ** (s * i)).denominator != 1 for i, c in enumerate(coeffs)):
        s += 1
    return [c * Fraction(q) ** (s * i) for i, c in enumerate(coeffs)]


def format_padic_poly(coeffs):
    return '\n'.join(f"  x^{i}: {c}" for i, c in enumerate(coeffs))


# ---------------------------------------------------------------------------
# Command reports
# ---------------------------------------------------------------------------

def _value_lines(result):
    lines = [f"  value: {format_value(result['value'])}"]
    padic = result.get('padic')
    if padic is not None and padic is not result['value']:
        lines.append(f"  p-adic: {padic}")
    return lines


def format_trace(result):
    lines = [f"H_q({result['datum']} | {format_fraction(result['xi'])})"
             f" at p={result['p']}, f={result['f']}, q={result['q']}, k={result['k']}"]
    lines.extend(_value_lines(result))
    return '\n'.join(lines)


def format_frob(result):
    lines = [f"Euler factor of {result['datum']} at xi={format_fraction(result['xi'])}"
             f", p={result['p']}, f={result['f']}, q={result['q']}, k={result['k']}"
             f" ({result['method']})"]
    if 'integral' in result:
        lines.append(f"  L(T) = {format_lpoly(result['integral'], 'T')}")
    elif 'recognized' in result:
        lines.append(f"  L(x) = {format_lpoly(result['recognized'])}")
    else:
        lines.append("  L(x) coefficients:")
        lines.append(format_padic_poly(result['lpoly']))
    if 'conjugates' in result:
        lines.append(f"  conjugate data: {', '.join(result['conjugates'])}")
    if 'newton_slopes' in result:
        slopes = ', '.join(format_fraction(s) for s in result['newton_slopes'])
        lines.append(f"  Newton slopes: [{slopes}]")
        lines.append(f"  Hodge vector: {result['hodge_vector']}")
    return '\n'.join(lines)


def format_hodge(result):
    lines = [f"Hodge data of {result['datum']}"]
    cases = result.get('cases') or [None] * len(result['embeddings'])
    for j, poly, case in zip(result['embeddings'], result['polynomials'], cases):
        suffix = f"  (case {case})" if case else ''
        lines.append(f"  j={j}: {poly}{suffix}")
    lines.append(f"  weight: {result['weight']}")
    lines.append(f"  effective shift: {result['shift']} (weight {result['effective_weight']})")
    return '\n'.join(lines)


def format_basefield(result):
    H = ', '.join(str(h) for h in result['H'])
    return '\n'.join([
        f"Base field of {result['datum']}",
        f"  N: {result['N']}",
        f"  H: {{{H}}} (order {result['order']})",
        f"  [K:Q] = phi(N)/|H| = {result['base_field_degree']}",
        f"  -1 in H: {'yes (totally real)' if result['contains_minus_one'] else 'no'}",
    ])


def format_classify(result):
    lines = [f"p={result['p']} for {result['datum']} at xi={format_fraction(result['xi'])}: "
             f"{result['label']}"]
    if 'at' in result:
        lines.append(f"  degenerates to {result['at']} with valuation {result['valuation']}")
    m = result['monodromy']
    lines.append(f"  monodromy orders: r0={m['r0']}, r1={m['r1']}, rinf={m['rinf']}")
    return '\n'.join(lines)


def _status(entry):
    if entry.get('ok') is None:
        return f"SKIP {entry.get('skipped', '')}".rstrip()
    if entry.get('error'):
        return f"FAIL {entry['error']['reason']}: {entry['error']['message']}"
    return 'OK' if entry['ok'] else 'MISMATCH'


def format_verify(result):
    lines = [f"Trace match for {result['datum']} at xi={format_fraction(result['xi'])}"
             f", primes up to {result['pmax']}"]
    for entry in result['results']:
        lines.append(f"  p={entry['p']:<5} {_status(entry)}")
    lines.append(f"Passed {result['passed']}/{len(result['results'])}")
    return '\n'.join(lines)


def format_tame(result):
    lines = [f"Tame trace at p={result['p']} (xi -> {result['at']}, valuation {result['valuation']},"
             f" monodromy order {result['order']})"]
    lines.append("  hypotheses:")
    for h in result['hypotheses']:
        lines.append(f"    {h['name']} = {h['value']}  {'OK' if h['ok'] else 'FAILS'}")
    lines.extend(_value_lines(result))
    if result.get('terms_exact'):
        for i, t in enumerate(result['terms_exact'], 1):
            lines.append(f"  term {i}: {t}")
        lines.append(f"  exact terms match p-adic: {result['exact_matches_padic']}")
    lines.append("  (conditional on the side conditions above)")
    return '\n'.join(lines)


def format_jacobi(result):
    lines = [f"Jacobi motive {result['theta']} at p={result['p']}, f={result['f']}, k={result['k']}"]
    lines.extend(_value_lines(result))
    lines.append(f"  weight: {result['weight']}")
    for j, (hp, hq) in result['hodge'].items():
        lines.append(f"  j={j}: (p, q) = ({format_fraction(hp)}, {format_fraction(hq)})")
    return '\n'.join(lines)


def format_congruence(result):
    d1, d2 = result['data']
    lines = [f"Congruence of {d1} and {d2} modulo {result['l']} at xi={format_fraction(result['xi'])}"]
    for entry in result['results']:
        if 'trace1' in entry:
            lines.append(f"  p={entry['p']:<5} {format_fraction(entry['trace1'])} vs "
                         f"{format_fraction(entry['trace2'])}  {_status(entry)}")
        else:
            lines.append(f"  p={entry['p']:<5} {_status(entry)}")
    lines.append('All congruent' if result['ok'] else 'Congruence FAILS')
    return '\n'.join(lines)


def format_props(result):
    lines = [f"Properties of H_q({result['datum']} | {format_fraction(result['xi'])})"
             f" at p={result['p']}, f={result['f']}, k={result['k']}"]
    for check in result['checks']:
        lines.append(f"  {check['name']:<11} {_status(check)}")
    return '\n'.join(lines)


def format_count(result):
    e = result['exponents']
    lines = [f"Euler curve y^{e['N']} = x^{e['A']} (1-x)^{e['B']} (1-zx)^{e['C']} z^{e['D']}"
             f" over F_{result['q']}, z={format_fraction(result['xi'])}",
             f"  affine points: {result['affine']}",
             f"  roots of f: {result['roots']}, leading-coefficient terms: {result['at_infinity']}"]
    if 'brute_force' in result:
        lines.append(f"  brute force: {result['brute_force']}")
    lines.append("  eigencomponents N(chi^c):")
    for c, value in result['components'].items():
        lines.append(f"    c={c}: {value}")
    return '\n'.join(lines)


FORMATTERS = {
    'trace': format_trace,
    'frob': format_frob,
    'hodge': format_hodge,
    'basefield': format_basefield,
    'classify': format_classify,
    'verify': format_verify,
    'tame': format_tame,
    'jacobi': format_jacobi,
    'congr': format_congruence,
    'props': format_props,
    'count': format_count,
}
