import unittest

import numpy as np

from premod.errors import NumericalBreakdownError
from premod.poly import ComplexPoly


class ComplexPolyTest(unittest.TestCase):

  def test_trims_exact_zeros(self):
    p = ComplexPoly([1, 2, 0, 0])
    self.assertEqual(p.degree, 1)
    self.assertEqual(ComplexPoly([0]).degree, 0)

  def test_immutable(self):
    with self.assertRaises(AttributeError):
      ComplexPoly([1, 2]).coeffs = None

  def test_arithmetic_and_evaluation(self):
    p = ComplexPoly([-1, 1])  # X - 1
    q = ComplexPoly([-2, 1])  # X - 2
    pq = p * q
    self.assertEqual(pq.degree, 2)
    self.assertAlmostEqual(complex(pq(3)), 2)
    self.assertAlmostEqual(complex((p + q)(0)), -3)
    self.assertAlmostEqual(complex((p - q)(5)), 1)
    self.assertAlmostEqual(complex((p ** 3)(2)), 1)
    self.assertAlmostEqual(complex(pq.derivative()(0)), -3)

  def test_divide_exact(self):
    p = ComplexPoly([2, -3, 1])
    quot = p.divide_exact(ComplexPoly([-1, 1]))
    np.testing.assert_allclose(quot.to_complex(), [-2, 1], atol=1e-12)

  def test_inexact_division_raises(self):
    with self.assertRaises(NumericalBreakdownError) as cm:
      ComplexPoly([1, 0, 1]).divide_exact(ComplexPoly([-1, 1]), level=4)
    self.assertEqual(cm.exception.level, 4)

  def test_fit_degree(self):
    p = ComplexPoly([1, 2, 1e-14])
    self.assertEqual(p.fit_degree(1).degree, 1)
    with self.assertRaises(NumericalBreakdownError):
      ComplexPoly([1, 2, 1]).fit_degree(1)

  def test_magnitude(self):
    x = ComplexPoly([0, 1])
    self.assertEqual(x.magnitude(0.5), 1.0)
    self.assertEqual(x.magnitude(3.0), 3.0)
    self.assertEqual(ComplexPoly([1, -1]).magnitude(2.0), 3.0)

  def test_roots(self):
    roots = sorted(ComplexPoly([6, -5, 1]).roots(), key=lambda z: z.real)
    np.testing.assert_allclose(roots, [2, 3], atol=1e-12)
    self.assertEqual(len(ComplexPoly([4]).roots()), 0)

  def test_balanced_scaling(self):
    p = ComplexPoly([1e6, 0, 1])
    self.assertAlmostEqual(p.root_radius(), 1e3)
    self.assertEqual(p.balance_scale(), 1024.0)


if __name__ == '__main__':
  unittest.main()
