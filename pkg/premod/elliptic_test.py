import cmath
import math
import unittest
from unittest import mock
from fractions import Fraction

from premod import elliptic
from premod.backend import get_backend
from premod.counting import psi
from premod.elliptic import lattice_data, make_point
from premod.errors import DomainError, InvalidPointError, PoleError, SeriesNonConvergenceError


def gap(a, b):
  return abs(complex(a) - complex(b)) / max(abs(complex(a)), abs(complex(b)))


class LatticeDataTest(unittest.TestCase):

  def test_square_lattice(self):
    ld = lattice_data(1j)
    self.assertLess(gap(ld.j, 1728), 1e-10)
    self.assertLess(abs(complex(ld.g3)), 1e-8)
    self.assertLess(abs(complex(elliptic.modular_lambda(ld)) - 0.5), 1e-12)

  def test_roots_sum_to_zero(self):
    ld = lattice_data(0.3 + 0.9j)
    scale = max(abs(ld.e1), abs(ld.e2), abs(ld.e3))
    self.assertLess(abs(ld.e1 + ld.e2 + ld.e3) / scale, 1e-12)
    self.assertLess(gap(4 * ld.e1 * ld.e2 * ld.e3, ld.g3), 1e-10)

  def test_legendre_relation(self):
    ld = lattice_data(-0.2 + 1.4j)
    self.assertLess(abs(ld.tau * ld.eta1 - ld.eta2 - 2j * math.pi), 1e-12)

  def test_delta_two_ways(self):
    ld = lattice_data(0.1 + 1.1j)
    self.assertLess(gap(ld.delta, elliptic.delta_product(ld)), 1e-9)

  def test_j_and_roots_near_cusp(self):
    ld = lattice_data(3j)
    self.assertLess(gap(ld.j, elliptic.j_expansion(ld.q)), 1e-9)
    expected = elliptic.cusp_expansions(complex(ld.q), cmath.exp(-3 * math.pi))
    for (x, y) in zip((ld.e1, ld.e2, ld.e3), expected):
      self.assertLess(gap(x, y), 1e-6)

  def test_extended_agrees_with_double(self):
    tau = 0.25 + 0.8j
    dbl = lattice_data(tau)
    ext = lattice_data(tau, get_backend('extended', 40))
    self.assertLess(gap(ext.g2, dbl.g2), 1e-12)
    self.assertLess(gap(ext.e1, dbl.e1), 1e-12)
    self.assertGreater(ext.terms, dbl.terms)

  def test_cached(self):
    self.assertIs(lattice_data(0.5 + 2j), lattice_data(0.5 + 2j))

  def test_cache_is_bounded(self):
    with mock.patch.object(elliptic, 'CACHE_SIZE', 2):
      first = lattice_data(0.11 + 1.7j)
      lattice_data(0.12 + 1.7j)
      lattice_data(0.13 + 1.7j)
      self.assertLessEqual(len(elliptic._cache), 2)
      self.assertIsNot(lattice_data(0.11 + 1.7j), first)

  def test_g2_near_cusp(self):
    self.assertLess(gap(lattice_data(10j).g2, 4 * math.pi ** 4 / 3), 1e-10)

  def test_tolerance_reaches_z_series(self):
    tau, z = 0.3 + 1.1j, 0.37 + 0.29j
    coarse = lattice_data(tau, tol=1e-6)
    fine = lattice_data(tau)
    self.assertEqual(coarse.tol, 1e-6)
    self.assertLess(coarse.terms, fine.terms)
    drift = gap(elliptic.wp(z, coarse), elliptic.wp(z, fine))
    self.assertGreater(drift, 1e-14)
    self.assertLess(drift, 1e-4)

  def test_bad_tau(self):
    with self.assertRaises(DomainError):
      lattice_data(0.3 - 1j)
    with self.assertRaises(SeriesNonConvergenceError):
      lattice_data(0.3 + 0.01j)


class WeierstrassTest(unittest.TestCase):

  def setUp(self):
    self.ld = lattice_data(0.2 + 1.2j)
    self.z = 0.37 + 0.29j

  def test_differential_equation(self):
    ld = self.ld
    p, dp = elliptic.wp(self.z, ld), elliptic.wp_prime(self.z, ld)
    self.assertLess(gap(dp ** 2, 4 * p ** 3 - ld.g2 * p - ld.g3), 1e-9)

  def test_periodicity(self):
    ld = self.ld
    p = elliptic.wp(self.z, ld)
    self.assertLess(gap(elliptic.wp(self.z + 1, ld), p), 1e-12)
    self.assertLess(gap(elliptic.wp(self.z + ld.tau, ld), p), 1e-10)
    self.assertLess(gap(elliptic.wp(-self.z, ld), p), 1e-12)

  def test_zeta_quasi_periods(self):
    ld = self.ld
    zt = elliptic.zeta(self.z, ld)
    self.assertLess(abs(elliptic.zeta(self.z + 1, ld) - zt - ld.eta1), 1e-10)
    self.assertLess(abs(elliptic.zeta(self.z + ld.tau, ld) - zt - ld.eta2), 1e-10)

  def test_pole(self):
    with self.assertRaises(PoleError):
      elliptic.wp(0, self.ld)
    with self.assertRaises(PoleError):
      elliptic.zeta(1, self.ld)


class VanishingTermsTest(unittest.TestCase):
  """Real torsion arguments make single series terms vanish."""

  def setUp(self):
    self.ld = lattice_data(0.5j)

  def test_half_periods_solve_the_cubic(self):
    ld = self.ld
    for e in (ld.e1, ld.e2, ld.e3):
      cubic = 4 * e ** 3 - ld.g2 * e - ld.g3
      self.assertLess(abs(cubic) / (abs(ld.g2 * e) + abs(ld.g3)), 1e-10)
    scale = max(abs(ld.e1), abs(ld.e2), abs(ld.e3))
    self.assertLess(abs(ld.e1 + ld.e2 + ld.e3) / scale, 1e-12)

  def test_quarter_point_by_duplication(self):
    # zeta(1/2) = eta1/2 turns the duplication formula into Z_{1/4,0} = -wp''/(4 wp')
    ld = self.ld
    p, dp = elliptic.wp(0.25, ld), elliptic.wp_prime(0.25, ld)
    expected = -(6 * p ** 2 - ld.g2 / 2) / (4 * dp)
    hv = elliptic.hecke_Z(make_point(Fraction(1, 4), 0), ld)
    self.assertLess(gap(hv.Z, expected), 1e-10)
    self.assertLess(gap(dp ** 2, 4 * p ** 3 - ld.g2 * p - ld.g3), 1e-10)


class HeckeTest(unittest.TestCase):

  def setUp(self):
    self.ld = lattice_data(0.1 + 1.3j)
    self.pt = make_point(Fraction(1, 5), Fraction(2, 5))

  def test_matches_zeta(self):
    hv = elliptic.hecke_Z(self.pt, self.ld)
    r, s = 0.2, 0.4
    direct = elliptic.zeta(r + s * self.ld.tau, self.ld) - r * self.ld.eta1 - s * self.ld.eta2
    self.assertLess(gap(hv.Z, direct), 1e-10)

  def test_integer_shifts(self):
    Z = elliptic.hecke_Z(self.pt, self.ld).Z
    shifted = make_point(self.pt.r + 1, self.pt.s - 2)
    self.assertLess(gap(elliptic.hecke_Z(shifted, self.ld).Z, Z), 1e-10)

  def test_odd(self):
    Z = elliptic.hecke_Z(self.pt, self.ld).Z
    neg = make_point(-self.pt.r, -self.pt.s)
    self.assertLess(gap(elliptic.hecke_Z(neg, self.ld).Z, -Z), 1e-10)

  def test_half_lattice_rejected(self):
    for (r, s) in ((Fraction(1, 2), 0), (0, Fraction(1, 2)), (1, Fraction(3, 2))):
      with self.assertRaises(InvalidPointError):
        elliptic.hecke_Z(make_point(r, s), self.ld)

  def test_exact_order(self):
    elliptic.check_point(make_point(Fraction(1, 3), Fraction(2, 3), 3))
    with self.assertRaises(InvalidPointError):
      elliptic.check_point(make_point(Fraction(1, 3), 0, 6))

  def test_hexagonal_zero(self):
    rho = cmath.exp(1j * math.pi / 3)
    hv = elliptic.hecke_Z(make_point(Fraction(1, 3), Fraction(1, 3)), lattice_data(rho))
    self.assertLess(abs(hv.Z), 1e-10)


class TorsionTest(unittest.TestCase):

  def test_sizes(self):
    for N in range(3, 13):
      points = elliptic.torsion_points(N)
      self.assertEqual(len(points), psi(N))
      self.assertEqual(len(set(points)), len(points))

  def test_order_three(self):
    points = elliptic.torsion_points(3)
    self.assertEqual(points[0], elliptic.TorsionPoint(0, Fraction(1, 3), 3))
    self.assertNotIn(elliptic.TorsionPoint(0, 0, 3), points)

  def test_small_order_rejected(self):
    with self.assertRaises(DomainError):
      elliptic.torsion_points(2)


class NormalizeTest(unittest.TestCase):

  def test_fixed_point(self):
    self.assertEqual(elliptic.normalize_f2(1j), 1j)

  def test_moves_into_domain(self):
    for tau in (0.1 + 0.1j, 3.7 + 0.05j, -5.2 + 2j):
      out = elliptic.normalize_f2(tau)
      self.assertGreaterEqual(out.imag, tau.imag - 1e-12)
      self.assertTrue(0 <= out.real < 2)
      self.assertGreaterEqual(abs(out - 0.5), 0.5 - 1e-12)
      self.assertGreaterEqual(abs(out - 1.5), 0.5 - 1e-12)


if __name__ == '__main__':
  unittest.main()
