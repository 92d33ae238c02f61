import random
import unittest
from fractions import Fraction
from math import lcm

from sympy import primerange

from core.engine import JacobiDatum
from core.errors import CongruencePreconditionError, DegenerateParameterError
from core.hgdata import HGData, is_generic, parse_params
from core.verification import (
    char_sum_identity_check, congruence_check, galois_check,
    hypergeometric_properties_suite, is_good_prime, jacobi_decomposition_check,
    legendre_check, nongeneric_reduction, rank_one_check, trace_match_verify,
    twist_relation, verify_sweep,
)

F = Fraction
EXAMPLE_1 = parse_params('1/8,7/8;3/8,5/8')
LEGENDRE = parse_params('1/2,1/2;0,0')

RANDOM_CONDUCTORS = (2, 3, 4, 5, 6, 8, 12)
SUITE_CHECKS = ('ordering', 'inversion', 'galois', 'twist', 'nongeneric')


def _random_generic(rng, N):
    """A rank-2 generic datum whose entries have common denominator exactly N."""
    while True:
        entries = [F(rng.randrange(N), N) for _ in range(4)]
        d = HGData(tuple(entries[:2]), tuple(entries[2:]))
        if d.N == N and is_generic(d):
            return d


def _random_xi(rng):
    while True:
        xi = F(rng.randint(2, 40), rng.choice((1, 1, 2, 3)))
        if xi != 1:
            return xi


def _split_good_primes(d, xi, modulus, bound):
    return [p for p in primerange(3, bound + 1)
            if (p - 1) % modulus == 0 and is_good_prime(d, xi, p)]


class TraceMatchTest(unittest.TestCase):
    def test_irreducible_datum(self):
        report = trace_match_verify(LEGENDRE, 2, 13)
        self.assertTrue(report['irr'])
        self.assertTrue(report['ok'])
        self.assertNotIn('twisted', report)

    def test_twisted_route(self):
        report = trace_match_verify(EXAMPLE_1, 9, 17)
        self.assertFalse(report['irr'])
        self.assertTrue(report['twisted']['trace_match'])
        self.assertTrue(report['twisted']['twist_relation'])
        self.assertTrue(report['ok'])

    def test_good_prime(self):
        self.assertTrue(is_good_prime(EXAMPLE_1, 9, 17))
        self.assertFalse(is_good_prime(EXAMPLE_1, 9, 3))
        self.assertFalse(is_good_prime(EXAMPLE_1, 9, 2))

    def test_random_generic_data(self):
        rng = random.Random(17)
        for i in range(40):
            N = RANDOM_CONDUCTORS[i % len(RANDOM_CONDUCTORS)]
            d = _random_generic(rng, N)
            xi = _random_xi(rng)
            primes = _split_good_primes(d, xi, N, 97)
            while len(primes) < 3:
                xi = _random_xi(rng)
                primes = _split_good_primes(d, xi, N, 97)
            for p in primes[:3]:
                with self.subTest(datum=str(d), xi=xi, p=p):
                    self.assertTrue(trace_match_verify(d, xi, p, 1)['ok'])


class IdentityTest(unittest.TestCase):
    def test_twist(self):
        self.assertTrue(twist_relation(LEGENDRE, F(1, 2), 2, 13)['ok'])

    def test_nongeneric_reduction(self):
        report = nongeneric_reduction(parse_params('1/3,1/2;1/3,0'), 3, 7)
        self.assertEqual(report['reduced'], '1/2;0')
        self.assertTrue(report['ok'])
        with self.assertRaises(DegenerateParameterError):
            nongeneric_reduction(LEGENDRE, 2, 7)

    def test_galois(self):
        report = galois_check(EXAMPLE_1, 9, 17)
        self.assertEqual(sorted(report['counts']), [1, 3, 5, 7])
        self.assertTrue(report['ok'])

    def test_properties_suite_split(self):
        report = hypergeometric_properties_suite(EXAMPLE_1, 9, 17)
        self.assertEqual([c['name'] for c in report['checks']], list(SUITE_CHECKS))
        self.assertTrue(all(c['ok'] for c in report['checks']))

    def test_properties_suite_inert(self):
        report = hypergeometric_properties_suite(EXAMPLE_1, 9, 7)
        galois = next(c for c in report['checks'] if c['name'] == 'galois')
        self.assertIsNone(galois['ok'])
        self.assertTrue(report['ok'])

    def test_properties_suite_random(self):
        rng = random.Random(29)
        for i in range(100):
            N = RANDOM_CONDUCTORS[i % len(RANDOM_CONDUCTORS)]
            d = _random_generic(rng, N)
            xi = _random_xi(rng)
            primes = _split_good_primes(d, xi, lcm(N, 2), 43)
            while not primes:
                xi = _random_xi(rng)
                primes = _split_good_primes(d, xi, lcm(N, 2), 43)
            p = rng.choice(primes[:2])
            with self.subTest(datum=str(d), xi=xi, p=p):
                report = hypergeometric_properties_suite(d, xi, p)
                self.assertEqual({c['name']: c['ok'] for c in report['checks']},
                                 dict.fromkeys(SUITE_CHECKS, True))

    def test_rank_one(self):
        self.assertTrue(rank_one_check(F(1, 4), 3, 13)['ok'])
        self.assertTrue(rank_one_check(F(1, 2), 3, 7)['ok'])


class CharacterSumTest(unittest.TestCase):
    def test_legendre(self):
        self.assertTrue(char_sum_identity_check(LEGENDRE, 2, 13)['ok'])

    def test_quintic(self):
        self.assertTrue(char_sum_identity_check(parse_params('1/5,4/5;3/5,0'), 2, 11)['ok'])

    def test_requires_integral_beta(self):
        with self.assertRaises(DegenerateParameterError):
            char_sum_identity_check(EXAMPLE_1, 9, 17)

    def test_legendre_family(self):
        for p in primerange(3, 50):
            with self.subTest(p=p):
                report = legendre_check(p)
                self.assertEqual(report['checked'], p - 3)
                self.assertEqual(report['mismatches'], [])
                self.assertTrue(report['ok'])

    def test_split_into_jacobi_motives(self):
        d = parse_params('1/5,4/5;3/5,1')
        j1 = JacobiDatum.from_pair([F(1, 5), F(7, 10)], [F(4, 5), F(1, 10)])
        j2 = JacobiDatum.from_pair([F(1, 5), F(7, 10)], [F(3, 10), F(3, 5)])
        report = jacobi_decomposition_check(d, F(1, 2), [j1, j2], list(primerange(3, 101)))
        checked = [r['p'] for r in report['results'] if 'skipped' not in r]
        self.assertEqual(checked, [11, 31, 41, 61, 71])
        for r in report['results']:
            with self.subTest(p=r['p']):
                self.assertIs(r['ok'], None if 'skipped' in r else True)
        self.assertTrue(report['ok'])


class SweepTest(unittest.TestCase):
    def test_verify_sweep(self):
        progress = []
        report = verify_sweep(LEGENDRE, 2, 30, jobs=2,
                              progress_callback=lambda done, total, p, ok: progress.append(p))
        primes = [r['p'] for r in report['results']]
        self.assertEqual(primes, [3, 5, 7, 11, 13, 17, 19, 23, 29])
        self.assertEqual(sorted(progress), primes)
        self.assertEqual(report['passed'], len(primes))
        self.assertTrue(report['ok'])

    def test_congruence(self):
        d1, d2 = LEGENDRE, parse_params('1/6,5/6;0,0')
        report = congruence_check(d1, d2, 3, 2, list(primerange(3, 101)), jobs=2)
        self.assertEqual([r['p'] for r in report['results']], list(primerange(5, 101)))
        for r in report['results']:
            with self.subTest(p=r['p']):
                self.assertTrue(r['ok'])
        self.assertTrue(report['ok'])

    def test_congruence_precondition(self):
        with self.assertRaises(CongruencePreconditionError):
            congruence_check(LEGENDRE, parse_params('1/6,5/6;0,0'), 2, 2, [5, 7])


if __name__ == '__main__':
    unittest.main()
