"""
Shared utility functions: rational parsing, valuations, filename helpers.
"""

import re
from datetime import datetime
from fractions import Fraction
from math import gcd, lcm
from pathlib import Path

from .errors import ParseError, DegenerateParameterError


_FRACTION_RE = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+))?\s*$')


def make_filename_safe(query):
    """Convert a query string to a filename-safe version."""
    query = query.replace('/', 'over')
    safe_name = re.sub(r'[^\w\-_]', '_', query)
    safe_name = re.sub(r'_+', '_', safe_name)
    return safe_name.strip('_')


def create_timestamped_filepath(query_desc, extension, directory='results'):
    """
    Create a timestamped filepath for saving results.

    Args:
        query_desc: Query description to use in filename
        extension: File extension (e.g., '.txt', '.json')
        directory: Directory to save in (default: 'results')

    Returns:
        Path object for the timestamped file
    """
    results_dir = Path(directory)
    results_dir.mkdir(exist_ok=True)

    timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
    safe_query = make_filename_safe(query_desc)

    if not extension.startswith('.'):
        extension = '.' + extension

    return results_dir / f"{timestamp}_{safe_query}{extension}"


def parse_rational(text):
    """
    Parse an integer fraction such as ``-3/8`` or ``5``.

    Raises:
        ParseError: on malformed input or a zero denominator
    """
    match = _FRACTION_RE.match(str(text))
    if not match:
        raise ParseError(f"Malformed fraction: '{text}'")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ParseError(f"Zero denominator in '{text}'")
    return Fraction(int(num), int(den) if den is not None else 1)


def parse_rational_list(text):
    """Parse a comma-separated list of fractions."""
    items = [item for item in str(text).split(',') if item.strip()]
    if not items:
        raise ParseError(f"Empty parameter list: '{text}'")
    return [parse_rational(item) for item in items]


def frac_part(x):
    """{x}^inf: the representative of x mod Z in [0, 1)."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def frac_part_upper(x):
    """Representative of x mod Z in (0, 1]."""
    r = frac_part(x)
    return r if r != 0 else Fraction(1)


def common_denominator(values):
    """Least common denominator of a collection of rationals (1 if empty)."""
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out


def valuation(x, p):
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise DegenerateParameterError("Valuation of zero is undefined")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(x, p):
    """x / p^v(x) for nonzero rational x."""
    x = Fraction(x)
    v = valuation(x, p)
    return x / Fraction(p) ** v


def rational_mod(x, modulus):
    """Residue of a rational with denominator prime to the modulus."""
    x = Fraction(x)
    if gcd(x.denominator, modulus) != 1:
        raise DegenerateParameterError(
            f"Denominator of {x} is not invertible modulo {modulus}")
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def units_mod(n):
    """Sorted list of residues in (Z/n)^x."""
    if n == 1:
        return [0]
    return [j for j in range(1, n) if gcd(j, n) == 1]


def multiplicative_order(a, n):
    """Order of a in (Z/n)^x (1 for n == 1)."""
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise DegenerateParameterError(f"{a} is not a unit modulo {n}")
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def format_fraction(x):
    """Render a Fraction as 'a/b' or 'a'."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
