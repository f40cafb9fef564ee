import args_parse

FLAGS = args_parse.parse_test_options()

import collections
import io
import math
import os
import shutil
import sys
import tempfile
import unittest

import torch
import golay_cpm.cli as cli
import golay_cpm.core.burst as burst
import golay_cpm.core.cpm as cpm
import golay_cpm.core.gcp as gcp
import golay_cpm.core.sequences as seqs
import golay_cpm.utils.serialization as ser


class _TempDirTest(unittest.TestCase):

  def setUp(self):
    self.tmpdir = tempfile.mkdtemp()

  def tearDown(self):
    shutil.rmtree(self.tmpdir)

  def _path(self, name):
    return os.path.join(self.tmpdir, name)

  def _write(self, name, text):
    path = self._path(name)
    with io.open(path, 'w', encoding='utf-8') as fd:
      fd.write(text)
    return path


class SnrGridTest(unittest.TestCase):

  def test_range_is_inclusive(self):
    self.assertEqual(cli.parse_snr_grid('0:25:5'), [0.0, 5.0, 10.0, 15.0, 20.0,
                                                    25.0])
    self.assertEqual(cli.parse_snr_grid('10:10:1'), [10.0])
    self.assertEqual(len(cli.parse_snr_grid('0:1:0.1')), 11)

  def test_list(self):
    self.assertEqual(cli.parse_snr_grid(' 3, 7.5,12 '), [3.0, 7.5, 12.0])
    self.assertEqual(cli.parse_snr_grid('-5'), [-5.0])

  def test_invalid(self):
    for text in ('0:10', '0:10:0', '10:0:1', '', ' , '):
      self.assertRaises(ValueError, cli.parse_snr_grid, text)


class ConfigTest(_TempDirTest):

  def test_defaults(self):
    config = cli.ExperimentConfig(experiment='mse')
    self.assertEqual(config.out, 'mse.csv')
    self.assertEqual(config.taps, 16)
    self.assertEqual(config.snr_grid, [0.0, 5.0, 10.0, 15.0, 20.0, 25.0])
    self.assertIn('Diff-GCP 1', config.scheme_list)
    self.assertEqual(config.cpm_config(), cpm.CpmConfig())

  def test_invalid_values(self):
    self.assertRaises(ValueError, cli.ExperimentConfig, experiment='plot')
    self.assertRaises(ValueError, cli.ExperimentConfig, experiment='mse',
                      taps=0)
    self.assertRaises(ValueError, cli.ExperimentConfig, experiment='mse',
                      bt=-1.0)
    self.assertRaises(ValueError, cli.ExperimentConfig, experiment='mse',
                      schemes='Diff-GCP 3')
    self.assertRaises(ValueError, cli.ExperimentConfig, experiment='ber',
                      csi='genie')
    self.assertRaises(ValueError, cli.ExperimentConfig, experiment='mse',
                      encoding='manchester')
    self.assertRaises(ValueError, cli.ExperimentConfig, experiment='mse',
                      colour='red')

  def test_config_file(self):
    path = self._write(
        'run.cfg', u'# MSE sweep\ntaps = 8\n\nsnr = 0:10:5  # dB\n'
        u'schemes = Diff-GCP 1, HP\n')
    values = cli.parse_config_file(path)
    self.assertEqual(values, {
        'taps': '8',
        'snr': '0:10:5',
        'schemes': 'Diff-GCP 1, HP'
    })

  def test_config_file_errors(self):
    path = self._write('bad.cfg', u'taps = 8\ncolour = red\n')
    self.assertRaises(ValueError, cli.parse_config_file, path)
    path = self._write('bad2.cfg', u'taps 8\n')
    self.assertRaises(ValueError, cli.parse_config_file, path)

  def test_flags_override_file(self):
    path = self._write('run.cfg', u'taps = 8\ntrials = 50\n')
    args = cli.build_parser().parse_args(
        ['mse', '--config', path, '--taps', '4', '--schemes', 'HP'])
    config = cli.config_from_args(args)
    self.assertEqual(config.experiment, 'mse')
    self.assertEqual(config.taps, 4)
    self.assertEqual(config.trials, 50)
    self.assertEqual(config.scheme_list, ['HP'])


class SerializationTest(_TempDirTest):

  def test_columns(self):
    path = self._path(os.path.join('out', 'cols.csv'))
    columns = collections.OrderedDict([('snr_db', [0.0, 5.0]),
                                       ('a_ber', [0.1, float('nan')]),
                                       ('b_ber', [1.0 / 3.0, 0.0])])
    ser.write_columns(path, columns)
    back = ser.read_columns(path)
    self.assertEqual(list(back.keys()), ['snr_db', 'a_ber', 'b_ber'])
    self.assertEqual(back['b_ber'], [1.0 / 3.0, 0.0])
    self.assertTrue(math.isnan(back['a_ber'][1]))
    with io.open(path, 'r', encoding='utf-8') as fd:
      self.assertEqual(fd.readline().strip(), 'snr_db,a_ber,b_ber')

  def test_unequal_columns(self):
    columns = collections.OrderedDict([('a', [1.0]), ('b', [1.0, 2.0])])
    self.assertRaises(ValueError, ser.write_columns, self._path('x.csv'),
                      columns)

  def test_profile_columns(self):
    b = seqs.scheme_burst('Diff-GCP 1', cpm.CpmConfig(), 3)
    profile = burst.sum_correlation(b, waveform=burst.APPROX_WAVEFORM)
    columns = ser.profile_columns(
        collections.OrderedDict([('Diff-GCP 1', profile)]))
    self.assertEqual(list(columns.keys()), list(ser.PROFILE_HEADER))
    self.assertEqual(len(columns['magnitude']), len(profile))
    self.assertAlmostEqual(max(columns['magnitude']), 1.0, places=9)

  def test_sequences(self):
    path = self._path('pair.txt')
    pair = gcp.davis_jedwab_pair(seqs.GCP1_SPEC)
    ser.save_sequences([pair.a, pair.b], path)
    back = ser.load_sequences(path)
    self.assertEqual(back, [pair.a, pair.b])
    with io.open(path, 'r', encoding='utf-8') as fd:
      self.assertEqual(fd.read().split(), list(seqs.GCP1_TEXT))

  def test_sequence_file_errors(self):
    path = self._write('seq.txt', u'# comment\n+-+-\n\n++x+\n')
    self.assertRaises(ValueError, ser.load_sequences, path)
    path = self._write('digits.txt', u'0123\n')
    self.assertEqual(ser.load_sequences(path, q=4)[0].tolist(), [0, 1, 2, 3])


class MainTest(_TempDirTest):

  def test_usage_errors(self):
    with self.assertRaises(SystemExit) as ctx:
      cli.main(['plot'])
    self.assertEqual(ctx.exception.code, 2)
    with self.assertRaises(SystemExit) as ctx:
      cli.main(['mse', '--taps', 'many'])
    self.assertEqual(ctx.exception.code, 2)

  def test_value_errors(self):
    self.assertEqual(cli.main(['mse', '--schemes', 'Diff-GCP 9']), 1)
    self.assertEqual(
        cli.main(['mse', '--config', self._path('missing.cfg')]), 1)
    self.assertEqual(cli.main(['mse', '--snr', '10:0:1']), 1)

  def test_gcp(self):
    out = self._path('gcp1.txt')
    self.assertEqual(cli.main(['gcp', '--builtin', 'gcp1', '--out', out]), 0)
    pair = ser.load_sequences(out)
    self.assertEqual([gcp.format_sequence(s) for s in pair],
                     list(seqs.GCP1_TEXT))
    out = self._path('small.txt')
    self.assertEqual(
        cli.main(['gcp', '--q', '2', '--nu', '3', '--perm', '3,1,2', '--out',
                  out]), 0)
    a, b = ser.load_sequences(out)
    self.assertEqual(len(a), 8)
    self.assertEqual(gcp.gcp_defect(gcp.GcpPair(a, b)), 0.0)

  def test_invalid_gcp(self):
    self.assertEqual(
        cli.main(['gcp', '--q', '2', '--nu', '3', '--perm', '1,1,2', '--out',
                  self._path('x.txt')]), 1)

  def test_verify(self):
    self.assertEqual(cli.main(['verify', 'gcp2']), 0)
    self.assertEqual(cli.main(['verify', 'gsm']), 0)

  def test_autocorr(self):
    out = self._path('autocorr.csv')
    self.assertEqual(
        cli.main([
            'autocorr', '--schemes', 'Diff-GCP 1,Diff-GCP 2', '--waveform',
            'approx', '--out', out
        ]), 0)
    columns = ser.read_columns(out)
    self.assertEqual(
        list(columns.keys()),
        ['lag_over_T', 'Diff-GCP 1_magnitude', 'Diff-GCP 2_magnitude'])
    for key in ('Diff-GCP 1_magnitude', 'Diff-GCP 2_magnitude'):
      self.assertAlmostEqual(max(columns[key]), 1.0, places=9)

  def test_sequence_file(self):
    seq_path = self._write('train.txt', u'{}\n'.format(seqs.GSM_TEXT))
    out = self._path('file.csv')
    self.assertEqual(
        cli.main([
            'autocorr', '--schemes', '', '--sequence_file', seq_path, '--out',
            out
        ]), 0)
    self.assertEqual(list(ser.read_columns(out).keys()),
                     list(ser.PROFILE_HEADER))

  def test_mse(self):
    out = self._path('mse.csv')
    self.assertEqual(
        cli.main([
            'mse', '--schemes', 'Diff-GCP 1,Rand', '--snr', '0,10',
            '--trials', '6', '--taps', '4', '--workers', '2', '--out', out
        ]), 0)
    columns = ser.read_columns(out)
    self.assertEqual(
        list(columns.keys()),
        ['snr_db', 'Diff-GCP 1_mse_db', 'Rand_mse_db', 'crlb_db'])
    self.assertEqual(columns['snr_db'], [0.0, 10.0])
    for value in columns['Diff-GCP 1_mse_db']:
      self.assertTrue(math.isfinite(value))

  def test_ber(self):
    out = self._path('ber.csv')
    self.assertEqual(
        cli.main([
            'ber', '--schemes', 'Diff-GCP 1', '--snr', '30', '--trials', '2',
            '--taps', '2', '--payload', '16', '--csi', 'perfect,estimated',
            '--out', out
        ]), 0)
    columns = ser.read_columns(out)
    self.assertEqual(
        list(columns.keys()),
        ['snr_db', 'perfect_ber', 'Diff-GCP 1 estimated_ber'])
    for key in ('perfect_ber', 'Diff-GCP 1 estimated_ber'):
      self.assertGreaterEqual(columns[key][0], 0.0)
      self.assertLessEqual(columns[key][0], 1.0)


if __name__ == '__main__':
  torch.set_default_dtype(torch.float64)
  test = unittest.main(verbosity=FLAGS.verbosity, exit=False)
  sys.exit(0 if test.result.wasSuccessful() else 1)
