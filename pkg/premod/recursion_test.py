import unittest
from fractions import Fraction

from premod import recursion
from premod.backend import backend_for_order
from premod.elliptic import HeckeValue, lattice_data, make_point
from premod.errors import (InvalidPointError, NumericalBreakdownError,
                           SingularConfigurationError)


class RecursionTest(unittest.TestCase):

  def setUp(self):
    self.ld = lattice_data(0.15 + 1.1j)
    self.pt = make_point(Fraction(1, 5), Fraction(2, 7))

  def test_degrees(self):
    for n in range(4):
      level = recursion.build_to(n, self.pt, self.ld)
      self.assertEqual(level.Q.degree, recursion.degree_q(n))
      self.assertEqual(level.G.degree, recursion.degree_g(n))
      self.assertEqual(level.R.degree, recursion.degree_r(n))
    self.assertEqual(recursion.degree_q(3), 10)
    self.assertEqual(recursion.degree_g(3), 18)
    self.assertEqual(recursion.degree_r(3), 13)

  def test_lead_exponents_integral(self):
    self.assertEqual(recursion.lead_exponents(0), ((0, 0), (0, 1), (0, 1)))
    self.assertEqual(recursion.lead_exponents(1), ((2, 1), (2, 2), (2, 2)))
    self.assertEqual(recursion.lead_exponents(2), ((4, 2), (6, 4), (4, 3)))

  def test_invariants(self):
    for n in range(1, 4):
      level = recursion.build_to(n, self.pt, self.ld)
      report = recursion.check_level(level)
      self.assertTrue(report['degree'])
      self.assertLess(report['lead_q'], 1e-8)
      self.assertLess(report['lead_r'], 1e-8)
      self.assertLess(report['step_identity'], 1e-8)

  def test_interpolation_agrees(self):
    level = recursion.build_to(2, self.pt, self.ld)
    self.assertLess(recursion.cross_check(level), 1e-6)

  def test_pole_residues(self):
    level = recursion.build_to(2, self.pt, self.ld)
    at_q, at_q2 = recursion.pole_residue_identity(level)
    self.assertLess(at_q, 1e-6)
    self.assertLess(at_q2, 1e-6)

  def test_keeps_three_previous(self):
    level = recursion.build_to(3, self.pt, self.ld)
    self.assertIs(level.Q_at(3), level.Q)
    self.assertIs(level.Q_at(0), level.Q_prev3)
    with self.assertRaises(IndexError):
      level.Q_at(-1)
    with self.assertRaises(AttributeError):
      level.n = 4

  def test_half_period_rejected(self):
    with self.assertRaises(InvalidPointError):
      recursion.build_to(1, make_point(Fraction(1, 2), Fraction(1, 2)), self.ld)

  def test_two_torsion_seed(self):
    hv = HeckeValue(point=make_point(Fraction(1, 2), 0), tau=self.ld.tau, a=0.5, x=-1,
                    Z=0, wp=self.ld.e1, wp_prime=0)
    with self.assertRaises(SingularConfigurationError):
      recursion.seed_level0(hv, self.ld)

  def test_half_order_point_near_cusp(self):
    # wp'(r + tau/2) is of size |q|^(1/2) here
    ld = lattice_data(10j, backend_for_order(2, 10.0))
    level = recursion.build_to(2, make_point(Fraction(1, 4), Fraction(1, 2)), ld)
    self.assertEqual(level.n, 2)
    self.assertEqual(level.Q.degree, recursion.degree_q(2))

  def test_double_level_cap(self):
    with self.assertRaises(NumericalBreakdownError) as cm:
      recursion.build_to(9, self.pt, self.ld)
    self.assertEqual(cm.exception.level, 9)


if __name__ == '__main__':
  unittest.main()
