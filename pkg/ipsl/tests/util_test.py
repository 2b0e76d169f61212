# -*- coding: utf-8 -*-
import io
import unittest

import numpy as np

from ipsl.util import format_real, format_cell, write_csv


class FormatTester(unittest.TestCase):

    def test_nine_significant_digits(self):
        self.assertEqual('0.333333333', format_real(1.0 / 3))
        self.assertEqual('1.04761905', format_real(2.2 / 2.1))
        self.assertEqual('1e-06', format_real(1e-6))
        self.assertEqual('', format_real(None))

    def test_cells(self):
        self.assertEqual('true', format_cell(True))
        self.assertEqual('0.5', format_cell(np.float64(0.5)))
        self.assertEqual('12', format_cell(12))
        self.assertEqual('', format_cell(None))
        self.assertEqual('ccdf', format_cell('ccdf'))

    def test_write_csv(self):
        stream = io.StringIO()
        write_csv(stream, ['seed', 'gamma'], [[1, 2.0], [2, None]])

        self.assertEqual('seed,gamma\n1,2\n2,\n', stream.getvalue())


if __name__ == '__main__':
    unittest.main()
