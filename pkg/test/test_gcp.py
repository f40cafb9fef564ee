import args_parse

FLAGS = args_parse.parse_test_options()

import itertools
import sys
import unittest

import numpy
import torch
import golay_cpm.core.gcp as gcp
import golay_cpm.core.sequences as seqs


def _np_aacf(x):
  x = numpy.asarray(x, dtype=numpy.complex128)
  n = len(x)
  return numpy.array([numpy.sum(x[:n - k] * numpy.conj(x[k:]))
                      for k in range(n)])


def _np_pacf(x):
  x = numpy.asarray(x, dtype=numpy.complex128)
  return numpy.array([numpy.sum(x * numpy.conj(numpy.roll(x, -k)))
                      for k in range(len(x))])


class BooleanSequenceTest(unittest.TestCase):

  def test_single_variable(self):
    seq = gcp.boolean_sequence([(1, (1,))], 3, 2)
    self.assertEqual(seq.tolist(), [0, 1, 0, 1, 0, 1, 0, 1])

  def test_quadratic_plus_constant(self):
    seq = gcp.boolean_sequence([(1, (1, 3)), (1, ())], 3, 2)
    self.assertEqual(seq.tolist(), [1, 1, 1, 1, 1, 0, 1, 0])

  def test_zero_function(self):
    seq = gcp.boolean_sequence([], 3, 2)
    self.assertEqual(seq.tolist(), [0] * 8)

  def test_odd_modulus(self):
    self.assertRaises(ValueError, gcp.boolean_sequence, [], 3, 3)

  def test_variable_out_of_range(self):
    self.assertRaises(ValueError, gcp.boolean_sequence, [(1, (4,))], 3, 2)

  def test_quaternary_values(self):
    seq = gcp.boolean_sequence([(3, (1,)), (2, (2,))], 2, 4)
    self.assertEqual(seq.tolist(), [0, 3, 2, 1])


class DavisJedwabTest(unittest.TestCase):

  def test_gcp1_printed(self):
    pair = gcp.davis_jedwab_pair(seqs.GCP1_SPEC)
    self.assertEqual(gcp.format_sequence(pair.a), seqs.GCP1_TEXT[0])
    self.assertEqual(gcp.format_sequence(pair.b), seqs.GCP1_TEXT[1])

  def test_gcp2_printed(self):
    pair = gcp.davis_jedwab_pair(seqs.GCP2_SPEC)
    self.assertEqual(gcp.format_sequence(pair.a), seqs.GCP2_TEXT[0])
    self.assertEqual(gcp.format_sequence(pair.b), seqs.GCP2_TEXT[1])

  def test_gcp2_permuted_coefficients(self):
    # Coefficients [1, 1, 0, 1] on x_{pi(k)} are [1, 1, 1, 0] on x_k.
    perm = seqs.GCP2_SPEC.perm
    coeffs = [0] * 4
    for c, var in zip([1, 1, 0, 1], perm):
      coeffs[var - 1] = c
    self.assertEqual(tuple(coeffs), seqs.GCP2_SPEC.linear_coeffs)

  def test_small_pair(self):
    spec = gcp.GbfSpec(2, 2, [1, 2], [0, 0])
    pair = gcp.davis_jedwab_pair(spec)
    self.assertEqual(pair.a.tolist(), [0, 0, 0, 1])
    self.assertEqual(pair.b.tolist(), [0, 1, 0, 0])
    total = _np_aacf(pair.a.to_bipolar().numpy()) + _np_aacf(
        pair.b.to_bipolar().numpy())
    self.assertTrue(numpy.allclose(total[1:], 0))

  def test_pair_difference(self):
    spec = gcp.GbfSpec(4, 3, [2, 1, 3], [1, 3, 2], 1, 3)
    pair = gcp.davis_jedwab_pair(spec)
    x = gcp.variable_sequence(spec.perm[0], spec.nu, 4).values
    diff = torch.remainder(pair.b.values - pair.a.values, 4)
    self.assertTrue(torch.equal(diff, torch.remainder(2 * x + 3, 4)))

  def test_invalid_spec(self):
    self.assertRaises(ValueError, gcp.GbfSpec, 2, 3, [1, 2, 2], [0, 0, 0])
    self.assertRaises(ValueError, gcp.GbfSpec, 2, 3, [1, 2, 3], [0, 0])
    self.assertRaises(ValueError, gcp.GbfSpec, 3, 3, [1, 2, 3], [0, 0, 0])
    self.assertRaises(ValueError, gcp.GbfSpec, 2, 0, [], [])

  def test_enumeration_size(self):
    specs = list(gcp.enumerate_gbf_specs(3, q=2))
    # 3!/2 permutations, 2**3 linear parts, 2 constants, 2 offsets.
    self.assertEqual(len(specs), 3 * 8 * 2 * 2)
    self.assertEqual(len(set(specs)), len(specs))

  def _check_all(self, nu, q):
    for spec in gcp.enumerate_gbf_specs(nu, q=q):
      pair = gcp.davis_jedwab_pair(spec)
      self.assertEqual(gcp.gcp_defect(pair), 0, msg=repr(spec))

  def test_exhaustive_binary(self):
    for nu in (2, 3, 4):
      self._check_all(nu, 2)

  def test_exhaustive_quaternary(self):
    for nu in (2, 3):
      self._check_all(nu, 4)

  @unittest.skipIf(not FLAGS.long_test, 'Needs --long_test')
  def test_exhaustive_long(self):
    self._check_all(5, 2)
    self._check_all(4, 4)


class CorrelationTest(unittest.TestCase):

  def test_aacf_examples(self):
    rho = gcp.aacf(torch.tensor([1.0, 1.0]))
    self.assertEqual(rho.at(0), 2)
    self.assertEqual(rho.at(1), 1)
    self.assertEqual(rho.at(2), 0)
    rho = gcp.aacf(torch.tensor([1.0, 1j]))
    self.assertAlmostEqual(rho.at(1), -1j, places=12)

  def test_aacf_conjugate_symmetry(self):
    x = torch.polar(torch.ones(9, dtype=torch.float64),
                    torch.linspace(0.0, 5.0, 9, dtype=torch.float64))
    rho = gcp.aacf(x)
    self.assertEqual(rho.lags.tolist(), list(range(-8, 9)))
    for k in range(1, 9):
      self.assertAlmostEqual(rho.at(-k), rho.at(k).conjugate(), places=12)

  def test_aacf_matches_numpy(self):
    c = gcp.parse_sequence(seqs.GCP1_TEXT[0])
    rho = gcp.aacf(c)
    ref = _np_aacf(c.to_bipolar().numpy())
    self.assertEqual(rho.at(0), 16)
    for k in range(16):
      self.assertEqual(rho.at(k), ref[k])

  def test_aacf_quaternary_exact(self):
    z4 = gcp.ZqSequence([0, 1, 3, 2, 2, 1], 4)
    rho = gcp.aacf(z4)
    ref = _np_aacf(1j**numpy.array(z4.tolist()))
    for k in range(6):
      self.assertAlmostEqual(rho.at(k), ref[k], places=12)
      self.assertEqual(rho.at(k).real, round(rho.at(k).real))

  def test_aacf_empty(self):
    self.assertRaises(ValueError, gcp.aacf, torch.zeros(0))
    self.assertRaises(ValueError, gcp.aacf, gcp.ZqSequence([], 2))

  def test_pacf_examples(self):
    phi = gcp.pacf(torch.ones(4))
    self.assertEqual([phi.at(k) for k in range(4)], [4] * 4)
    phi = gcp.pacf(torch.tensor([1.0, -1.0]))
    self.assertEqual(phi.at(1), -2)

  def test_pacf_matches_numpy(self):
    z4 = gcp.ZqSequence([3, 1, 0, 0, 2, 1, 3, 2], 4)
    phi = gcp.pacf(z4)
    ref = _np_pacf(1j**numpy.array(z4.tolist()))
    self.assertEqual(phi.at(0), 8)
    for k in range(8):
      self.assertAlmostEqual(phi.at(k), ref[k], places=12)

  def test_defect(self):
    pair = gcp.davis_jedwab_pair(seqs.GCP1_SPEC)
    self.assertEqual(gcp.gcp_defect(pair), 0)
    total = gcp.aacf(pair.a).at(0) + gcp.aacf(pair.b).at(0)
    self.assertEqual(total, 32)
    zeros = gcp.ZqSequence([0, 0, 0, 0], 2)
    self.assertEqual(gcp.gcp_defect(gcp.GcpPair(zeros, zeros)), 6)

  def test_pair_mismatch(self):
    self.assertRaises(ValueError, gcp.GcpPair, gcp.ZqSequence([0, 1], 2),
                      gcp.ZqSequence([0, 1, 1], 2))


class PseudoSymbolTest(unittest.TestCase):

  def test_diff_encode_examples(self):
    enc = gcp.diff_encode(gcp.ZqSequence([0, 0, 0, 0], 2))
    self.assertEqual(enc.tolist(), [-1, 1, 1, 1, 1, 1, 1, 1])
    enc = gcp.diff_encode(gcp.ZqSequence([0, 1, 0, 1], 2))
    self.assertEqual(enc.tolist(), [-1] * 8)
    enc = gcp.diff_encode(gcp.ZqSequence([1, 1], 2))
    self.assertEqual(enc.tolist(), [1, 1, 1, 1])

  def test_diff_encode_binary_only(self):
    self.assertRaises(ValueError, gcp.diff_encode, gcp.ZqSequence([0, 3], 4))

  def test_pseudo_symbol_examples(self):
    self.assertAlmostEqual(gcp.pseudo_symbols([1])[0], 1j, places=15)
    gammas = gcp.pseudo_symbols([-1, -1])
    self.assertAlmostEqual(gammas[0], -1j, places=15)
    self.assertAlmostEqual(gammas[1], -1, places=15)

  def test_pseudo_symbols_general_index(self):
    gammas = gcp.pseudo_symbols([1, 1, -1], h=0.25)
    expected = numpy.exp(1j * numpy.pi * 0.25 * numpy.array([1, 2, 1]))
    self.assertTrue(numpy.allclose(gammas.values.numpy(), expected))
    self.assertRaises(ValueError, gammas.quarter_turns)

  def test_closed_form(self):
    for text in seqs.GCP1_TEXT + seqs.GCP2_TEXT + (seqs.GSM_TEXT,):
      c = gcp.parse_sequence(text)
      direct = gcp.pseudo_symbols(gcp.diff_encode(c))
      closed = gcp.pseudo_symbols_closed(c)
      self.assertEqual(len(direct), 32)
      self.assertTrue(
          torch.allclose(direct.values, closed.values, atol=1e-12), msg=text)

  def test_closed_form_first_value(self):
    c = gcp.parse_sequence(seqs.GCP1_TEXT[0])
    self.assertEqual(c.tolist()[0], 0)
    self.assertAlmostEqual(gcp.pseudo_symbols_closed(c)[0], -1j, places=15)

  def test_periodicity(self):
    c = gcp.parse_sequence(seqs.GCP1_TEXT[0])
    gammas = gcp.pseudo_symbols(gcp.diff_encode(c))
    self.assertTrue(gcp.is_periodic(gammas))
    self.assertAlmostEqual(gammas[16], gammas[0], places=15)
    short = gcp.pseudo_symbols(gcp.diff_encode(gcp.ZqSequence([0, 1], 2)))
    self.assertFalse(gcp.is_periodic(short))
    self.assertAlmostEqual(short[2], -short[0], places=15)

  def test_symbols_from_pseudo(self):
    i = [1, -1, -1, 1, 1, 1, -1]
    gammas = gcp.pseudo_symbols(i)
    self.assertEqual(gcp.symbols_from_pseudo(gammas).tolist(), i)
    bad = gcp.PseudoSymbols([1.0, -1.0])
    self.assertRaises(ValueError, gcp.symbols_from_pseudo, bad)

  def test_pseudo_symbol_magnitude(self):
    self.assertRaises(ValueError, gcp.PseudoSymbols, [1.0, 0.5])


class QuaternaryLiftTest(unittest.TestCase):

  def test_lift_is_gcp(self):
    for spec in (seqs.GCP1_SPEC, seqs.GCP2_SPEC):
      lifted = gcp.quaternary_lift(spec)
      self.assertEqual(lifted.modulus, 4)
      self.assertEqual(gcp.gcp_defect(lifted), 0)

  def test_lift_matches_closed_form(self):
    for spec in (seqs.GCP1_SPEC, seqs.GCP2_SPEC):
      pair = gcp.davis_jedwab_pair(spec)
      lifted = gcp.quaternary_lift(spec)
      n = len(pair)
      self.assertEqual(lifted.a.tolist(),
                       gcp.closed_form_turns(pair.a)[:n].tolist())
      self.assertEqual(lifted.b.tolist(),
                       gcp.closed_form_turns(pair.b)[:n].tolist())

  def test_lift_pair_difference(self):
    lifted = gcp.quaternary_lift(seqs.GCP2_SPEC)
    x = gcp.variable_sequence(seqs.GCP2_SPEC.perm[0], 4, 4).values
    diff = torch.remainder(lifted.b.values - lifted.a.values, 4)
    self.assertTrue(
        torch.equal(diff, torch.remainder(2 * x + 2, 4)))

  def test_lift_all_small_specs(self):
    for spec in itertools.islice(gcp.enumerate_gbf_specs(3, q=2), 0, None, 5):
      lifted = gcp.quaternary_lift(spec)
      self.assertEqual(gcp.gcp_defect(lifted), 0, msg=repr(spec))
      pair = gcp.davis_jedwab_pair(spec)
      self.assertTrue(gcp.is_periodic(gcp.pseudo_symbols(gcp.diff_encode(
          pair.a))))

  def test_lift_errors(self):
    self.assertRaises(ValueError, gcp.quaternary_lift,
                      gcp.GbfSpec(4, 2, [1, 2], [0, 0]))
    self.assertRaises(ValueError, gcp.quaternary_lift,
                      gcp.GbfSpec(2, 1, [1], [0]))


class TextFormatTest(unittest.TestCase):

  def test_parse_signs(self):
    seq = gcp.parse_sequence(u'+-− +')
    self.assertEqual(seq.tolist(), [0, 1, 1, 0])
    self.assertEqual(gcp.format_sequence(seq), '+--+')

  def test_parse_digits(self):
    seq = gcp.parse_sequence('0132', q=4)
    self.assertEqual(seq.tolist(), [0, 1, 3, 2])
    self.assertEqual(gcp.format_sequence(seq), '0132')
    seq = gcp.parse_sequence('11 0 3', q=12)
    self.assertEqual(seq.tolist(), [11, 0, 3])

  def test_parse_errors(self):
    self.assertRaises(ValueError, gcp.parse_sequence, '0132')
    self.assertRaises(ValueError, gcp.parse_sequence, '0152', q=4)
    self.assertRaises(ValueError, gcp.parse_sequence, '+-x', q=2)
    self.assertRaises(ValueError, gcp.parse_sequence, '+-', q=4)


if __name__ == '__main__':
  torch.set_default_dtype(torch.float64)
  test = unittest.main(verbosity=FLAGS.verbosity, exit=False)
  sys.exit(0 if test.result.wasSuccessful() else 1)
