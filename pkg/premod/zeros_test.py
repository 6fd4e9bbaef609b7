import cmath
import math
import unittest
from fractions import Fraction

from premod import premodular, zeros
from premod.counting import count_L
from premod.elliptic import make_point
from premod.errors import BoundaryTooCloseError, DomainError
from premod.painleve import QUARTER_POINT
from premod.zeros import Rect

RHO = cmath.exp(1j * math.pi / 3)


class WindingTest(unittest.TestCase):

  def setUp(self):
    self.rect = Rect(0.0, 1.0, 0.5, 1.5)

  def test_polynomials(self):
    a, b = 0.4 + 0.9j, 0.7 + 1.2j
    self.assertEqual(zeros.winding_count(lambda z: z - a, self.rect), 1)
    self.assertEqual(zeros.winding_count(lambda z: (z - a) * (z - b), self.rect), 2)
    self.assertEqual(zeros.winding_count(lambda z: (z - a) ** 3, self.rect), 3)
    self.assertEqual(zeros.winding_count(lambda z: z - 3j, self.rect), 0)

  def test_fast_phase(self):
    a = 0.5 + 1.0j
    self.assertEqual(zeros.winding_count(lambda z: (z - a) ** 12, self.rect,
                                         samples_per_edge=4), 12)

  def test_zero_on_boundary(self):
    with self.assertRaises(BoundaryTooCloseError):
      zeros.winding_count(lambda z: z - 0.5j - 0.5, self.rect, nudges=0)

  def test_bad_rectangles(self):
    with self.assertRaises(DomainError):
      zeros.check_rect(Rect(0.0, 1.0, 0.01, 1.0))
    with self.assertRaises(DomainError):
      zeros.check_rect(Rect(1.0, 0.0, 0.5, 1.0))

  def test_split(self):
    low, high = zeros.split_horizontal(self.rect, 1.0)
    self.assertEqual(low.im_max, 1.0)
    self.assertEqual(high.im_min, 1.0)
    self.assertEqual(zeros.box(1j, 0.5), Rect(-0.5, 0.5, 0.5, 1.5))


class RefineTest(unittest.TestCase):

  def test_simple_zero(self):
    target = 0.3 + 1.1j
    record = zeros.refine_zero(lambda z: z * z - target * target, 0.35 + 1.05j)
    self.assertLess(abs(record.tau0 - target), 1e-8)
    self.assertEqual(record.multiplicity_claim, 1)

  def test_locate(self):
    a, b = 0.25 + 0.8j, 0.7 + 1.3j
    found = zeros.locate_zeros(lambda z: (z - a) * (z - b), Rect(0.0, 1.0, 0.5, 1.5))
    self.assertEqual(len(found), 2)
    got = sorted((r.tau0 for r in found), key=lambda z: z.real)
    self.assertLess(abs(got[0] - a), 1e-8)
    self.assertLess(abs(got[1] - b), 1e-8)


class PremodularZerosTest(unittest.TestCase):

  def test_hexagonal_zero(self):
    pt = make_point(Fraction(1, 3), Fraction(1, 3))
    record = zeros.refine_zero(lambda tau: premodular.z_n(1, pt, tau).value, 0.52 + 0.85j)
    self.assertLess(abs(record.tau0 - RHO), 1e-7)

  def test_no_zeros_near_cusp(self):
    rect = Rect(0.1, 0.9, 5.0, 9.0)
    count = zeros.winding_count(lambda tau: premodular.z_n(1, QUARTER_POINT, tau).value, rect)
    self.assertEqual(count, 0)


class EllFitTest(unittest.TestCase):

  def test_needs_eps_zero(self):
    with self.assertRaises(DomainError):
      zeros.ell_degree_fit(1, 3)

  def test_default_grid(self):
    self.assertEqual(len(zeros.default_ell_samples()), 30)

  def test_degree_matches_count(self):
    fit = zeros.ell_degree_fit(2, 4)
    self.assertEqual(fit.degree, 0)
    self.assertEqual(fit.samples, 30)

  def test_first_index_degrees(self):
    for N in (4, 5):
      fit = zeros.ell_degree_fit(1, N)
      self.assertEqual(fit.degree, count_L(1, N).L)
      self.assertLess(fit.fit_residual, 1e-5)


if __name__ == '__main__':
  unittest.main()
