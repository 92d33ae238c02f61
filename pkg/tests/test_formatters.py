import contextlib
import io
import json
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

from core.cyclotomic import CycInt
from core.formatters import (
    format_lpoly, format_verify, integral_lpoly, padic_to_dict, render_json,
    save_results_to_file, to_jsonable,
)
from core.hgdata import INFINITE, parse_params, zigzag_hodge
from core.padic import PadicNum

F = Fraction


class PolynomialFormatTest(unittest.TestCase):
    def test_highest_degree_first(self):
        self.assertEqual(format_lpoly([1, F(4, 7), F(1, 7)]), '1/7*x^2 + 4/7*x + 1')
        self.assertEqual(format_lpoly([1, F(-10, 17), F(18, 17), F(-10, 17), 1]),
                         'x^4 - 10/17*x^3 + 18/17*x^2 - 10/17*x + 1')
        self.assertEqual(format_lpoly([0, 0]), '0')

    def test_integral_normalization(self):
        self.assertEqual(integral_lpoly([1, F(4, 7), F(1, 7)], 7), [1, 4, 7])
        self.assertEqual(format_lpoly(integral_lpoly([1, F(4, 7), F(1, 7)], 7), 'T'),
                         '7*T^2 + 4*T + 1')
        self.assertEqual(integral_lpoly([1, 2, 3], 5), [1, 2, 3])


class JsonTest(unittest.TestCase):
    def test_padic_digits(self):
        payload = padic_to_dict(PadicNum.from_rational(F(-4, 7), 7, 3))
        self.assertEqual(payload['valuation'], -1)
        self.assertEqual(payload['digits'], [3, 6, 6])

    def test_nested_values(self):
        result = {
            'value': F(-4, 7),
            'sum': CycInt.zeta(4) + 1,
            'hodge': zigzag_hodge(parse_params('1/8,7/8;3/8,5/8')),
            'order': INFINITE,
            'pairs': {1: (F(1, 2), F(3, 2))},
        }
        self.assertEqual(to_jsonable(result), {
            'value': '-4/7',
            'sum': '1 + z4',
            'hodge': 'x^-1 + y^-1',
            'order': 'inf',
            'pairs': {'1': ['1/2', '3/2']},
        })
        self.assertEqual(json.loads(render_json(result))['value'], '-4/7')


class ReportTest(unittest.TestCase):
    def test_verify_report(self):
        result = {
            'datum': '1/2,1/2;0,0', 'xi': F(2), 'pmax': 7, 'passed': 1,
            'results': [
                {'p': 5, 'ok': True},
                {'p': 7, 'ok': False, 'error': {'reason': 'precision_cap', 'message': 'cap'}},
            ],
        }
        text = format_verify(result)
        self.assertIn('p=5     OK', text)
        self.assertIn('FAIL precision_cap: cap', text)
        self.assertTrue(text.endswith('Passed 1/2'))

    def test_save_results(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'out.txt'
            with contextlib.redirect_stderr(io.StringIO()) as err:
                self.assertTrue(save_results_to_file('trace --p 7', 'value: -4/7', path))
            content = path.read_text(encoding='utf-8')
            self.assertTrue(content.startswith('Query: trace --p 7\nTimestamp: '))
            self.assertTrue(content.endswith('value: -4/7'))
            self.assertIn('[Results saved to:', err.getvalue())


if __name__ == '__main__':
    unittest.main()
