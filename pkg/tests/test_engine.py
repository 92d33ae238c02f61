import unittest
from fractions import Fraction

from core.cyclotomic import embed_padic
from core.engine import (
    JacobiDatum, conjugate_frobs, default_precision, hgm_frob, hgm_padic,
    jacobi_motive_hodge, jacobi_motive_value, jacobi_sum_padic, multiply_lpolys,
    newton_slopes, parse_theta, rank_one_closed_form, resolve_degree, split_degree,
    varkappa,
)
from core.errors import (
    DegenerateParameterError, InvalidArgumentError, NotStableError, ParseError, TamePrimeError,
    WildPrimeError,
)
from core.ffield import chi_p, fq_build, jacobi_sum, legendre_ap, weierstrass_ap
from core.hgdata import hodge_vector, parse_params
from core.padic import PadicNum
from core.recognize import recognize_poly, recognize_quadratic, recognize_rational

F = Fraction
EXAMPLE_1 = parse_params('1/8,7/8;3/8,5/8')
LEGENDRE = parse_params('1/2,1/2;0,0')


class BookkeepingTest(unittest.TestCase):
    def test_default_precision(self):
        self.assertEqual(default_precision(EXAMPLE_1, 7, 7), 3)
        self.assertEqual(default_precision(EXAMPLE_1, 7, 7, degree=2), 4)

    def test_resolve_degree(self):
        self.assertEqual(resolve_degree(EXAMPLE_1, 7), (1, 7))
        self.assertEqual(resolve_degree(EXAMPLE_1, 3), (2, 9))
        with self.assertRaises(NotStableError):
            resolve_degree(EXAMPLE_1, 3, f=1)
        with self.assertRaises(WildPrimeError):
            resolve_degree(EXAMPLE_1, 2)
        self.assertEqual(split_degree(8, 3), 2)

    def test_varkappa(self):
        self.assertEqual(varkappa(17, 1, 8), 1)
        self.assertEqual(varkappa(7, 2, 8), 1)
        self.assertEqual(varkappa(7, 1, 2), -1)
        self.assertEqual(varkappa(5, 1, 4), -1)
        with self.assertRaises(WildPrimeError):
            varkappa(2, 1, 4)
        with self.assertRaises(NotStableError):
            varkappa(7, 1, 8)


class HypergeometricSumTest(unittest.TestCase):
    def test_example_one_trace(self):
        self.assertEqual(recognize_rational(hgm_padic(EXAMPLE_1, 9, 7)), F(-4, 7))

    def test_cm_specialization(self):
        # at xi=9 the motive comes from y^2 = x^3 - 60x + 176
        expected = {7: -4, 17: 0, 23: 0, 31: -4, 41: 0, 47: 0, 71: 0, 73: -10,
                    79: -4, 89: 0, 97: 14}
        for p, ap in expected.items():
            with self.subTest(p=p):
                self.assertEqual(weierstrass_ap(-60, 176, p), ap)
                self.assertEqual(p * recognize_rational(hgm_padic(EXAMPLE_1, 9, p)), ap)

    def test_legendre_family(self):
        for p in (5, 7, 11, 13):
            with self.subTest(p=p):
                sign = -1 if (p - 1) // 2 % 2 else 1
                self.assertEqual(recognize_rational(hgm_padic(LEGENDRE, 2, p)),
                                 sign * legendre_ap(2, p))

    def test_rank_one(self):
        d = parse_params('1/4;1')
        closed = rank_one_closed_form(F(1, 4), 3, 13, k=4)
        self.assertTrue(hgm_padic(d, 3, 13, k=4).agrees_with(closed))
        with self.assertRaises(NotStableError):
            rank_one_closed_form(F(1, 3), 3, 5)

    def test_preconditions(self):
        with self.assertRaises(TamePrimeError):
            hgm_padic(EXAMPLE_1, 7, 7)
        with self.assertRaises(WildPrimeError):
            hgm_padic(EXAMPLE_1, 9, 2)
        with self.assertRaises(DegenerateParameterError):
            hgm_padic(EXAMPLE_1, 0, 7)


class FrobeniusTest(unittest.TestCase):
    def test_example_one_euler_factor(self):
        fr = hgm_frob(EXAMPLE_1, 9, 7)
        self.assertEqual((fr.f, fr.q, fr.k), (1, 7, 4))
        self.assertEqual(recognize_poly(fr.lpoly), [1, F(4, 7), F(1, 7)])

    def test_oracle_matches_padic(self):
        padic = hgm_frob(EXAMPLE_1, 9, 17)
        oracle = hgm_frob(EXAMPLE_1, 9, 17, method='oracle')
        self.assertEqual(oracle.provenance, 'oracle')
        self.assertTrue(oracle.trace1.agrees_with(padic.trace1))
        self.assertTrue(oracle.trace2.agrees_with(padic.trace2))

    def test_unknown_method(self):
        with self.assertRaises(InvalidArgumentError):
            hgm_frob(EXAMPLE_1, 9, 7, method='bogus')

    def test_recognized_factors_are_pure(self):
        for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
            with self.subTest(datum='legendre', p=p):
                c = recognize_poly(hgm_frob(LEGENDRE, 2, p).lpoly)
                self.assertEqual(c[2], p)
                self.assertLessEqual(c[1] ** 2, 4 * c[2])
        for p in (7, 17, 23, 31, 41):
            with self.subTest(datum='example 1', p=p):
                fr = hgm_frob(EXAMPLE_1, 9, p)
                c = recognize_poly(fr.lpoly)
                self.assertEqual(abs(c[2]), F(1, fr.q))
                self.assertLessEqual(c[1] ** 2, 4 * abs(c[2]))

    def test_conjugate_product_over_real_quadratic_field(self):
        frobs, product = conjugate_frobs(EXAMPLE_1, 3, 7)
        self.assertEqual([j for j, _, _ in frobs], [1, 3])
        self.assertEqual(recognize_poly(product), [1, 0, F(6, 49), 0, F(1, 49)])
        a, b = recognize_quadratic(frobs[0][2].trace1, frobs[1][2].trace1, 2)
        self.assertEqual(a, 0)
        self.assertEqual(abs(b), F(2, 7))

    def test_non_rational_quartic(self):
        d = parse_params('1/2,1/2;3/4,1')
        frobs, product = conjugate_frobs(d, 3, 17)
        coeffs = recognize_poly(product)
        self.assertEqual(coeffs, [1, F(-10, 17), F(18, 17), F(-10, 17), 1])
        self.assertEqual(newton_slopes(coeffs, 17), hodge_vector(d, [j for j, _, _ in frobs]))


class PolynomialTest(unittest.TestCase):
    def test_multiply(self):
        self.assertEqual(multiply_lpolys([[1, 2], [1, 3]]), [1, 5, 6])

    def test_newton_slopes(self):
        coeffs = [1, F(-10, 17), F(18, 17), F(-10, 17), 1]
        self.assertEqual(newton_slopes(coeffs, 17), [-1, 0, 0, 1])
        self.assertEqual(newton_slopes([1, F(4, 7), F(1, 7)], 7), [-1, 0])


class JacobiMotiveTest(unittest.TestCase):
    def test_parse_theta(self):
        jd = parse_theta('1/3:1, 2/3')
        self.assertEqual(jd.theta, ((F(1, 3), 1), (F(2, 3), 1)))
        self.assertEqual(jd.weight, 2)
        with self.assertRaises(ParseError):
            parse_theta('1/3:x')
        with self.assertRaises(DegenerateParameterError):
            JacobiDatum.from_pair([F(1, 3)], [])

    def test_power_of_norm(self):
        jd = JacobiDatum.from_pair([F(1, 3), F(2, 3), F(1, 5), F(4, 5), F(7, 15), F(8, 15)], [])
        value = jacobi_motive_value(jd, 31, k=4)
        self.assertEqual(value.valuation(), 3)
        self.assertTrue(value.agrees_with(31 ** 3))
        hodge = jacobi_motive_hodge(jd)
        self.assertEqual(hodge['weight'], 6)
        self.assertEqual(hodge['hodge'][1], (3, 3))

    def test_tate_twist(self):
        a, c = F(1, 5), F(2, 5)
        jd = JacobiDatum.from_pair([-a, a, c, -c], [a + c, -a - c])
        self.assertTrue(jacobi_motive_value(jd, 11, k=3).agrees_with(11))

    def test_artin_motive(self):
        plus = [F(1, 10), F(1, 10), F(1, 10), F(3, 10), F(13, 30), F(7, 10), F(23, 30), F(9, 10)]
        minus = [F(1, 5), F(1, 3), F(2, 5), F(2, 3), F(4, 5), F(1, 5), F(3, 10), F(1, 2)]
        jd = JacobiDatum.from_pair(plus, minus)
        hodge = jacobi_motive_hodge(jd)
        self.assertEqual(hodge['weight'], 0)
        self.assertTrue(all(v == 0 for v in hodge['infinity_type'].values()))
        value = jacobi_motive_value(jd, 31, k=3)
        self.assertEqual(value.valuation(), 0)
        self.assertTrue((value ** 30).agrees_with(1))

    def test_jacobi_sum_against_exact(self):
        k = 3
        for p in (5, 13, 17, 29):
            tbl = fq_build(p)
            for N in range(2, 9):
                if (p - 1) % N:
                    continue
                chi = chi_p(tbl, N)
                for a in range(N):
                    for b in range(N):
                        with self.subTest(p=p, N=N, a=a, b=b):
                            exact = jacobi_sum(chi ** a, chi ** b, conductor=N)
                            embedded = PadicNum.from_scaled(0, embed_padic(exact, p, k), p, k)
                            self.assertTrue(
                                jacobi_sum_padic(a, b, N, p, k=k).agrees_with(embedded))


if __name__ == '__main__':
    unittest.main()
