import math
import unittest
from fractions import Fraction

from premod import premodular
from premod.elliptic import TorsionPoint, make_point
from premod.errors import DomainError


def gap(a, b):
  return abs(complex(a) - complex(b)) / max(abs(complex(a)), abs(complex(b)))


class PremodularTest(unittest.TestCase):

  def setUp(self):
    self.pt = make_point(Fraction(1, 5), Fraction(2, 5), 5)
    self.tau = 0.1 + 1.3j

  def test_weight(self):
    self.assertEqual([premodular.weight(n) for n in range(5)], [0, 1, 3, 6, 10])

  def test_trivial_indices(self):
    self.assertEqual(premodular.z_n(0, self.pt, self.tau).value, 1)
    self.assertEqual(premodular.z_n(-1, self.pt, self.tau).weight, 0)
    with self.assertRaises(DomainError):
      premodular.z_n(-2, self.pt, self.tau)

  def test_closed_forms(self):
    for n in range(1, 5):
      ladder = premodular.z_n(n, self.pt, self.tau)
      closed = premodular.z_n_closed(n, self.pt, self.tau)
      self.assertEqual(ladder.weight, premodular.weight(n))
      self.assertLess(gap(ladder.value, closed.value), 1e-7)

  def test_weight_law(self):
    for n in (1, 2, 3):
      for matrix in (((1, 1), (0, 1)), ((0, -1), (1, 0))):
        self.assertLess(premodular.modular_check(n, self.pt, self.tau, matrix), 1e-8)

  def test_not_in_sl2(self):
    with self.assertRaises(DomainError):
      premodular.modular_check(1, self.pt, self.tau, ((2, 0), (0, 1)))

  def test_sign_reduce(self):
    pt = TorsionPoint(Fraction(1, 3), Fraction(3, 4), None)
    reduced, sign = premodular.sign_reduce(pt, 2)
    self.assertEqual((reduced.r, reduced.s), (Fraction(2, 3), Fraction(1, 4)))
    self.assertEqual(sign, -1)
    reduced, sign = premodular.sign_reduce(TorsionPoint(Fraction(1, 3), Fraction(5, 4), None), 3)
    self.assertEqual((reduced.s, sign), (Fraction(1, 4), 1))

  def test_reflection(self):
    for n in (1, 2, 3):
      pt = make_point(Fraction(1, 3), Fraction(3, 4))
      reduced, sign = premodular.sign_reduce(pt, n)
      a = premodular.z_n(n, pt, self.tau).value
      b = premodular.z_n(n, reduced, self.tau).value
      self.assertLess(gap(a, sign * b), 1e-9)

  def test_product(self):
    prod = premodular.m_product(1, 3, self.tau)
    self.assertEqual(prod.factor_count, 8)
    shifted = premodular.m_product(1, 3, self.tau + 1)
    self.assertLess(abs(prod.log_abs - shifted.log_abs), 1e-8)
    self.assertLess(abs(math.remainder(prod.arg - shifted.arg, 2 * math.pi)), 1e-8)
    self.assertLess(gap(prod.value, math.exp(prod.log_abs) * complex(math.cos(prod.arg),
                                                                     math.sin(prod.arg))), 1e-12)

  def test_product_conjugation(self):
    a = premodular.m_product(2, 5, self.tau)
    b = premodular.m_product(2, 5, -self.tau.conjugate())
    self.assertLess(abs(a.log_abs - b.log_abs), 1e-8)
    self.assertLess(abs(math.remainder(a.arg + b.arg, 2 * math.pi)), 1e-8)

  def test_product_threads(self):
    serial = premodular.m_product(2, 4, self.tau, threads=1)
    pooled = premodular.m_product(2, 4, self.tau, threads=4)
    self.assertEqual(serial.log_abs, pooled.log_abs)


if __name__ == '__main__':
  unittest.main()
