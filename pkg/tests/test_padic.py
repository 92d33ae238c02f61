import random
import unittest
from fractions import Fraction

import numpy as np
import sympy

from core.errors import (
    DegenerateParameterError, GradingError, InvalidArgumentError, PrecisionError,
)
from core.padic import (
    INF, ZERO, GammaCtx, PadicNum, bracket, choose_precision, eta_star, gauss_sum_gk,
    pochhammer_padic, prime_power, teichmuller,
)

F = Fraction


class PadicNumTest(unittest.TestCase):
    def test_from_rational(self):
        x = PadicNum.from_rational(F(-4, 7), 7, 3)
        self.assertEqual(x.valuation(), -1)
        self.assertEqual(x.to_scaled(), (-1, 339))
        self.assertEqual(str(x), '3*7^-1 + 6 + 6*7 + O(7^2)')

    def test_arithmetic(self):
        a = PadicNum.from_rational(F(1, 3), 5, 4)
        b = PadicNum.from_rational(F(2, 5), 5, 4)
        self.assertTrue((a * b).agrees_with(F(2, 15)))
        self.assertTrue((a + b).agrees_with(F(11, 15)))
        self.assertTrue((a - a).is_zero())
        self.assertTrue((b / b).agrees_with(1))
        self.assertTrue((b ** -2).agrees_with(F(25, 4)))

    def test_non_integral_grading(self):
        with self.assertRaises(GradingError):
            PadicNum(5, 3, 1, 1).to_scaled()

    def test_teichmuller(self):
        t = teichmuller(2, 5, 3)
        self.assertEqual(t % 5, 2)
        self.assertEqual(pow(t, 4, 125), 1)
        self.assertEqual(teichmuller(10, 5, 3), 0)

    def test_foreign_integers(self):
        x = PadicNum.from_rational(3, 7, 3)
        self.assertTrue(x.agrees_with(sympy.Integer(3)))
        self.assertTrue(x.agrees_with(np.int64(3)))
        self.assertTrue((x * sympy.Integer(2)).agrees_with(6))
        with self.assertRaises(InvalidArgumentError):
            x.agrees_with('3')


class BracketTest(unittest.TestCase):
    def test_directions(self):
        self.assertEqual(bracket(0, INF), 0)
        self.assertEqual(bracket(0, ZERO), 1)
        self.assertEqual(bracket(F(-1, 4), INF), F(3, 4))
        self.assertEqual(bracket(F(5, 4), ZERO), F(1, 4))
        with self.assertRaises(InvalidArgumentError):
            bracket(F(1, 3), 'bogus')

    def test_eta(self):
        self.assertEqual(eta_star(F(1, 2), 25, INF), 1)
        self.assertEqual(eta_star(F(1, 4), 5, INF), F(1, 4))

    def test_prime_power(self):
        self.assertEqual(prime_power(49), (7, 2))
        with self.assertRaises(DegenerateParameterError):
            prime_power(12)


class GammaTest(unittest.TestCase):
    def test_small_integers(self):
        ctx = GammaCtx(7, 3)
        m = ctx.modulus
        self.assertEqual([ctx.gamma_int(n) for n in range(4)], [1, m - 1, 1, m - 2])

    def test_half(self):
        for p, expected in ((5, -1), (7, 1)):
            with self.subTest(p=p):
                ctx = GammaCtx(p, 4)
                g = ctx.gamma(F(1, 2))
                self.assertEqual(g * g % ctx.modulus, expected % ctx.modulus)

    def test_reflection(self):
        ctx = GammaCtx(7, 3)
        ctx.request(F(1, 3))
        ctx.request(F(2, 3))
        ctx.sweep()
        self.assertEqual(ctx.gamma(F(1, 3)) * ctx.gamma(F(2, 3)) % ctx.modulus, ctx.modulus - 1)

    def test_continuity(self):
        rng = random.Random(7)
        ctx = GammaCtx(7, 3)
        for _ in range(200):
            n = rng.randrange(ctx.modulus)
            r = rng.randint(1, 3)
            m = rng.randrange(1, 50)
            with self.subTest(n=n, r=r, m=m):
                diff = ctx.gamma_int(n) - ctx.gamma_int(n + 7 ** r * m)
                self.assertEqual(diff % 7 ** r, 0)

    def test_functional_equation(self):
        ctx = GammaCtx(5, 4)
        for n in range(1, 300):
            with self.subTest(n=n):
                factor = -n if n % 5 else -1
                self.assertEqual(ctx.gamma_int(n + 1), factor * ctx.gamma_int(n) % ctx.modulus)

    def test_limits(self):
        with self.assertRaises(DegenerateParameterError):
            GammaCtx(2, 3)
        with self.assertRaises(PrecisionError):
            GammaCtx(7, 10)


class GaussSumTest(unittest.TestCase):
    def test_trivial_character(self):
        self.assertTrue(gauss_sum_gk(GammaCtx(7, 3), 0, 7).agrees_with(-1))

    def test_quadratic(self):
        for p, expected in ((5, 5), (7, -7)):
            with self.subTest(p=p):
                g = gauss_sum_gk(GammaCtx(p, 4), F(1, 2), p)
                self.assertTrue((g * g).agrees_with(expected))


class PochhammerTest(unittest.TestCase):
    def test_telescoping(self):
        rng = random.Random(11)
        for q in (7, 49):
            ctx = GammaCtx(7, 3)
            for _ in range(60):
                x = F(rng.randrange(1, 24), rng.choice((1, 2, 3, 4, 6, 8)))
                m1, m2 = rng.randrange(q), rng.randrange(q)
                star = rng.choice((INF, ZERO))
                with self.subTest(q=q, x=x, m1=m1, m2=m2, star=star):
                    whole = pochhammer_padic(ctx, x, m1 + m2, q, star)
                    first = pochhammer_padic(ctx, x, m1, q, star)
                    rest = pochhammer_padic(ctx, x + F(m1, 1 - q), m2, q, star)
                    self.assertEqual(whole, first * rest % ctx.modulus)

    def test_empty_product(self):
        ctx = GammaCtx(7, 3)
        self.assertEqual(pochhammer_padic(ctx, F(1, 3), 0, 7, INF), 1)


class PrecisionTest(unittest.TestCase):
    def test_policy(self):
        self.assertEqual(choose_precision(7, 7, -1, 1), 3)
        self.assertEqual(choose_precision(7, 7, -1, 1, degree=2), 4)

    def test_cap(self):
        with self.assertRaises(PrecisionError):
            choose_precision(10007, 10007, 1, 1)


if __name__ == '__main__':
    unittest.main()
