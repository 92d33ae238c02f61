import random
import unittest
from fractions import Fraction
from math import isqrt

from sympy.ntheory import sqrt_mod

from core.errors import PrecisionError, RecognitionError
from core.padic import PadicNum
from core.recognize import recognize_poly, recognize_quadratic, recognize_rational, with_retry

F = Fraction


class RationalTest(unittest.TestCase):
    def test_integers_and_fractions(self):
        self.assertEqual(recognize_rational(PadicNum.from_rational(-4, 7, 3)), -4)
        self.assertEqual(recognize_rational(PadicNum.from_rational(F(-4, 7), 7, 3)), F(-4, 7))
        self.assertEqual(recognize_rational(PadicNum.from_rational(F(3, 5), 11, 3)), F(3, 5))
        self.assertEqual(recognize_rational(PadicNum.zero(7, 3)), 0)

    def test_negative_residue(self):
        self.assertEqual(recognize_rational(PadicNum.from_scaled(0, 171, 7, 3)), F(-1, 2))

    def test_round_trip_within_bound(self):
        rng = random.Random(2024)
        p, k = 101, 3
        bound = isqrt(p ** k // 2)
        for _ in range(1000):
            x = F(rng.randint(-bound, bound), rng.randint(1, bound))
            with self.subTest(x=x):
                self.assertEqual(recognize_rational(PadicNum.from_rational(x, p, k)), x)

    def test_poly(self):
        coeffs = [PadicNum.from_rational(c, 7, 4) for c in (1, F(4, 7), F(1, 7))]
        self.assertEqual(recognize_poly(coeffs), [1, F(4, 7), F(1, 7)])


class QuadraticTest(unittest.TestCase):
    def test_conjugate_pair(self):
        p, k = 7, 4
        modulus = p ** k
        root = sqrt_mod(2, modulus)
        root = min(root, modulus - root)
        r = PadicNum.from_rational(root, p, k)
        a = PadicNum.from_rational(F(1, 3), p, k)
        b = PadicNum.from_rational(F(2, 7), p, k)
        self.assertEqual(recognize_quadratic(a + b * r, a - b * r, 2), (F(1, 3), F(2, 7)))

    def test_non_square(self):
        x = PadicNum.from_rational(1, 7, 3)
        with self.assertRaises(RecognitionError):
            recognize_quadratic(x, x, 3)


class RetryTest(unittest.TestCase):
    def test_retries_until_success(self):
        seen = []

        def compute(k):
            seen.append(k)
            if k < 5:
                raise RecognitionError("too coarse")
            return k

        self.assertEqual(with_retry(compute, 3), 5)
        self.assertEqual(seen, [3, 4, 5])

    def test_gives_up(self):
        def compute(k):
            raise RecognitionError(f"fails at {k}")

        with self.assertRaises(RecognitionError):
            with_retry(compute, 3, retries=1)

    def test_precision_cap_reports_last_failure(self):
        def compute(k):
            if k > 3:
                raise PrecisionError("cap")
            raise RecognitionError("fails")

        with self.assertRaises(RecognitionError):
            with_retry(compute, 3)

        def capped(k):
            raise PrecisionError("cap")

        with self.assertRaises(PrecisionError):
            with_retry(capped, 3)


if __name__ == '__main__':
    unittest.main()
