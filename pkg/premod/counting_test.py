import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from premod import counting
from premod.errors import DomainError


class TotientTest(unittest.TestCase):

  def test_phi(self):
    self.assertEqual([counting.euler_phi(N) for N in range(1, 11)],
                     [1, 1, 2, 2, 4, 2, 6, 4, 6, 4])
    self.assertEqual(counting.euler_phi(Fraction(5, 2)), 0)
    self.assertEqual(counting.euler_phi(Fraction(6, 2)), 2)
    self.assertEqual(counting.euler_phi(0), 0)

  def test_psi(self):
    self.assertEqual([counting.psi(N) for N in (1, 2, 3, 4, 5, 6, 8, 10)],
                     [1, 3, 8, 12, 24, 24, 48, 72])

  def test_ab(self):
    self.assertEqual([counting.ab_coeffs(n) for n in range(7)],
                     [(0, 0), (0, 1), (1, 1), (1, 4), (3, 4), (3, 9), (6, 9)])
    with self.assertRaises(DomainError):
      counting.ab_coeffs(-1)

  def test_eps(self):
    self.assertEqual(counting.eps(1, 3), 1)
    self.assertEqual(counting.eps(4, 3), 1)
    self.assertEqual(counting.eps(2, 3), 0)
    self.assertEqual(counting.eps(1, 6), 0)


class CountTest(unittest.TestCase):

  def test_known_values(self):
    self.assertEqual(counting.count_L(1, 3).L, 1)
    self.assertEqual(counting.count_L(1, 4).L, 0)
    self.assertEqual(counting.count_L(1, 5).L, 1)
    self.assertEqual(counting.count_L(2, 4).L, 0)
    self.assertEqual(counting.count_L(2, 5).L, 1)

  def test_report_fields(self):
    report = counting.count_L(1, 5)
    self.assertEqual(report.PL, 2)
    self.assertEqual(report.psi_N, 24)
    self.assertEqual(report.phi_halfN, 0)
    self.assertEqual(report.v_inf_pred, 0)
    self.assertEqual(report.k_nN, 2)
    self.assertIsNone(report.shortcut_ok)
    self.assertTrue(report.parity_ok)

  def test_small_orders(self):
    self.assertEqual(counting.count_PL(3, 1), 0)
    self.assertEqual(counting.count_PL(3, 2), 0)
    with self.assertRaises(DomainError):
      counting.count_L(1, 2)
    with self.assertRaises(DomainError):
      counting.count_L(0, 5)

  def test_table(self):
    rows = counting.count_table([1, 2], [3, 4, 5])
    self.assertEqual([(r.n, r.N) for r in rows],
                     [(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])

  @settings(max_examples=200, deadline=None)
  @given(st.integers(1, 12), st.integers(3, 80))
  def test_relations(self, n, N):
    report = counting.count_L(n, N)
    self.assertGreaterEqual(report.L, 0)
    self.assertTrue(report.parity_ok)
    self.assertEqual(report.L, counting.count_U(n, N, counting.vinf_pred(n, N)))
    if N % 4 == 0:
      self.assertTrue(report.shortcut_ok)


if __name__ == '__main__':
  unittest.main()
