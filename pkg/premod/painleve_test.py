import cmath
import math
import random
import unittest
from fractions import Fraction

from premod import painleve
from premod.elliptic import lattice_data, make_point
from premod.errors import DomainError, SingularTransformationError
from premod.painleve import PviState, ThetaParams


def gap(a, b):
  return abs(complex(a) - complex(b)) / max(abs(complex(a)), abs(complex(b)))


def random_state(rng):
  def c():
    return complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
  return PviState(c(), c(), c(), ThetaParams(*[c() for _ in range(5)]))


class ParameterTest(unittest.TestCase):

  def test_theta_family(self):
    self.assertEqual(painleve.theta_n(0), ThetaParams(Fraction(-1, 2), Fraction(1, 2),
                                                      Fraction(1, 2), Fraction(1, 2),
                                                      Fraction(1, 2)))
    for n in range(8):
      self.assertEqual(painleve.theta_sum(painleve.theta_n(n)), 1)

  def test_pvi_params(self):
    alpha, beta, gamma, delta = painleve.pvi_params(painleve.theta_n(2))
    self.assertEqual((alpha, beta, gamma, delta),
                     (Fraction(25, 8), Fraction(-1, 8), Fraction(1, 8), Fraction(3, 8)))

  def test_t_near_cusp(self):
    ld = lattice_data(8j)
    self.assertLess(abs(complex(painleve.t_of_tau(ld))
                        - painleve.t_expansion(cmath.exp(-8 * math.pi))), 1e-8)
    self.assertLess(abs(complex(painleve.t_of_tau(lattice_data(1j))) - 0.5), 1e-12)

  def test_t_invariant_under_shift_by_two(self):
    tau = 0.3 + 1.1j
    t = complex(painleve.t_of_tau(lattice_data(tau)))
    self.assertLess(abs(complex(painleve.t_of_tau(lattice_data(tau + 2))) - t), 1e-10)


class HamiltonianTest(unittest.TestCase):

  def test_gradient_matches_differences(self):
    st = PviState(0.3 + 0.2j, 0.7 - 0.4j, 1.1 + 0.5j, painleve.theta_n(1))
    h = 1e-6
    k_lam, k_mu = painleve.hamiltonian_gradient(st)
    up = painleve.hamiltonian(st._replace(lam=st.lam + h))
    down = painleve.hamiltonian(st._replace(lam=st.lam - h))
    self.assertLess(gap((up - down) / (2 * h), k_lam), 1e-6)
    up = painleve.hamiltonian(st._replace(mu=st.mu + h))
    down = painleve.hamiltonian(st._replace(mu=st.mu - h))
    self.assertLess(gap((up - down) / (2 * h), k_mu), 1e-6)


class OkamotoTest(unittest.TestCase):

  def test_involutions(self):
    rng = random.Random(123)
    for k in range(5):
      st = random_state(rng)
      back = painleve.okamoto_apply(k, painleve.okamoto_apply(k, st))
      self.assertLess(abs(back.lam - st.lam), 1e-12)
      self.assertLess(abs(back.mu - st.mu), 1e-12)
      for (x, y) in zip(back.theta, st.theta):
        self.assertLess(abs(x - y), 1e-12)

  def test_kappa5_parameters(self):
    st = PviState(0.3 + 0.2j, 0.7 - 0.4j, 1.1 + 0.5j, painleve.theta_n(2))
    self.assertEqual(painleve.okamoto_apply(5, st).theta, painleve.theta_n(4))

  def test_chain_reaches_level(self):
    st = PviState(0.3 + 0.2j, 0.7 - 0.4j, 1.1 + 0.5j, painleve.theta_n(0))
    for n in range(7):
      self.assertEqual(painleve.okamoto_chain(n, st).theta, painleve.theta_n(n))

  def test_singular(self):
    st = PviState(0.3, 0, 1.0, painleve.theta_n(0))
    with self.assertRaises(SingularTransformationError):
      painleve.okamoto_apply(1, st)
    with self.assertRaises(SingularTransformationError):
      painleve.lift_step(st._replace(lam=0.2, mu=0))

  def test_unknown(self):
    st = PviState(0.3, 0.2, 1.0, painleve.theta_n(0))
    with self.assertRaises(DomainError):
      painleve.okamoto_apply(6, st)
    with self.assertRaises(DomainError):
      painleve.okamoto_chain(-1, st)


class SolutionTest(unittest.TestCase):

  def setUp(self):
    self.pt = make_point(Fraction(1, 5), Fraction(2, 5))
    self.tau = 0.1 + 1.3j

  def test_lift_matches_ladder(self):
    st = painleve.sample_state(painleve.pvi_sample(0, self.pt, self.tau))
    for n in range(1, 4):
      st = painleve.lift_step(st)
      sample = painleve.pvi_sample(n, self.pt, self.tau)
      self.assertFalse(sample.flagged)
      self.assertEqual(st.theta, painleve.theta_n(n))
      self.assertLess(gap(st.lam, sample.lam), 1e-6)
      self.assertLess(gap(st.mu, sample.mu), 1e-6)

  def test_closed_wp(self):
    for n in range(3):
      sample = painleve.pvi_sample(n, self.pt, self.tau)
      self.assertLess(gap(sample.wp_p, painleve.wp_p_closed(n, self.pt, self.tau)), 1e-7)

  def test_hamiltonian_system(self):
    for n in (0, 1):
      self.assertLess(max(painleve.hamiltonian_residual(n, self.pt, self.tau)), 1e-4)

  def test_residual_shrinks_with_step(self):
    coarse = max(painleve.hamiltonian_residual(1, self.pt, self.tau, h=2e-2, richardson=False))
    fine = max(painleve.hamiltonian_residual(1, self.pt, self.tau, h=1e-2, richardson=False))
    self.assertLess(fine, coarse / 2)

  def test_pvi_equation(self):
    for n in (0, 1):
      self.assertLess(painleve.pvi_residual(n, self.pt, self.tau), 1e-3)

  def test_negative_level(self):
    with self.assertRaises(DomainError):
      painleve.pvi_sample(-1, self.pt, self.tau)

  def test_pole_limit(self):
    rho = cmath.exp(1j * math.pi / 3)
    limit = painleve.pole_limit_check(2, make_point(Fraction(1, 3), Fraction(1, 3)), rho)
    self.assertEqual(len(limit.samples), 3)
    self.assertLess(abs(limit.limit - float(limit.expected)), 1e-3)


class QuarterPointTest(unittest.TestCase):

  def test_algebraic_family(self):
    for n in (0, 1, 2):
      check = painleve.quarter_family(n, 1.2j)
      self.assertLess(check.lam_gap, 1e-7)
      self.assertLess(check.product_gap, 1e-8)

  def test_lambda0_follows_cusp_expansion(self):
    check = painleve.quarter_family(0, 3j)
    x = math.exp(-3 * math.pi)
    self.assertLess(gap(check.lam, painleve.quarter_lambda0_expansion(x)), 1e-6)

  def test_mu_follows_cusp_expansion(self):
    x = math.exp(-3 * math.pi)
    for n in (0, 1, 2):
      check = painleve.quarter_family(n, 3j)
      self.assertLess(gap(check.mu, painleve.quarter_mu_expansion(n, x)), 1e-10)

  def test_expansions(self):
    x = 1e-3
    self.assertAlmostEqual(painleve.quarter_lambda0_expansion(x), 0.992)
    self.assertAlmostEqual(painleve.quarter_mu_expansion(1, 0.0), -0.75)


if __name__ == '__main__':
  unittest.main()
