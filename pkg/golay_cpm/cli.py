"""Command line front end running the training-waveform experiments.

Usage example: golay-cpm autocorr --schemes "Diff-GCP 1,Diff-GSM" --out fig.csv
"""
from __future__ import division
from __future__ import print_function

import argparse
import collections
import io
import math
import os
import sys
import traceback

import torch
import golay_cpm.core.burst as burst
import golay_cpm.core.cpm as cpm
import golay_cpm.core.env_vars as genv
import golay_cpm.core.gcp as gcp
import golay_cpm.core.sequences as sequences
import golay_cpm.sim.chansim as chansim
import golay_cpm.test.test_utils as test_utils
import golay_cpm.utils.serialization as ser
import golay_cpm.utils.utils as gu

EXPERIMENTS = ('gcp', 'autocorr', 'mse', 'ber')
FILE_LABEL = 'file'

_DEFAULT_SCHEMES = {
    'autocorr': 'Diff-GCP 1,Diff-GCP 2,Diff-GSM,GCP 1,GCP 2,GSM',
    'mse': 'Diff-GCP 1,Diff-GCP 2,Diff-GSM,Diff-HP,HP,Rand,Diff-Rand',
    'ber': 'Diff-GCP 1,Diff-GCP 2,Diff-GSM',
}

# Config keys, with their parser and default value.
_KEYS = collections.OrderedDict([
    ('experiment', (str, None)),
    ('schemes', (str, None)),
    ('sequence_file', (str, None)),
    ('encoding', (str, burst.DIFF)),
    ('bt', (float, 0.3)),
    ('pulse_len', (int, 3)),
    ('z', (int, 3)),
    ('oversampling', (int, 8)),
    ('snr', (str, '0:25:5')),
    ('trials', (int, 1000)),
    ('seed', (int, 1)),
    ('out', (str, None)),
    ('taps', (int, 16)),
    ('payload', (int, 64)),
    ('waveform', (str, burst.TRUE_WAVEFORM)),
    ('cyclic', (int, 1)),
    ('csi', (str, 'perfect,estimated')),
    ('workers', (int, None)),
    ('logdir', (str, None)),
    ('q', (int, 2)),
    ('nu', (int, 4)),
    ('perm', (str, None)),
    ('coeffs', (str, None)),
    ('const', (int, 0)),
    ('offset', (int, 0)),
    ('builtin', (str, None)),
    ('lift', (int, 0)),
])


def _int_list(text):
  return [int(v) for v in text.replace(',', ' ').split()]


def parse_snr_grid(text):
  """Parses `start:stop:step` (inclusive) or a comma separated SNR list."""
  text = text.strip()
  if ':' in text:
    parts = [float(v) for v in text.split(':')]
    if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
      raise ValueError('Invalid SNR range "{}", expected start:stop:step'
                       .format(text))
    count = int(math.floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1
    return [parts[0] + k * parts[2] for k in range(count)]
  grid = [float(v) for v in text.split(',') if v.strip()]
  if not grid:
    raise ValueError('Empty SNR grid')
  return grid


def parse_config_file(path):
  """Reads a UTF-8 `key = value` file; `#` starts a comment."""
  values = dict()
  with io.open(path, 'r', encoding='utf-8') as fd:
    for lineno, line in enumerate(fd, 1):
      line = line.split('#', 1)[0].strip()
      if not line:
        continue
      if '=' not in line:
        raise ValueError('{}:{}: expected "key = value"'.format(path, lineno))
      key, value = [s.strip() for s in line.split('=', 1)]
      if key not in _KEYS:
        raise ValueError('{}:{}: unknown key "{}"'.format(path, lineno, key))
      values[key] = value
  return values


class ExperimentConfig(object):
  """A validated experiment description.

  Values come, in increasing priority, from the built-in defaults, the config
  file and the command line flags.
  """

  def __init__(self, **kwargs):
    for key, value in kwargs.items():
      if key not in _KEYS:
        raise ValueError('Unknown config key "{}"'.format(key))
    for key, (parse, defval) in _KEYS.items():
      value = kwargs.get(key, None)
      setattr(self, key, defval if value is None else parse(value))
    if self.experiment not in EXPERIMENTS:
      raise ValueError('Unknown experiment "{}", expected one of {}'.format(
          self.experiment, EXPERIMENTS))
    for key in ('z', 'oversampling', 'trials', 'taps', 'payload', 'nu', 'q',
                'pulse_len'):
      if getattr(self, key) < 1:
        raise ValueError('{} must be positive: {}'.format(
            key, getattr(self, key)))
    if self.bt <= 0:
      raise ValueError('bt must be positive: {}'.format(self.bt))
    if self.encoding not in burst.ENCODINGS:
      raise ValueError('Unknown encoding "{}", expected one of {}'.format(
          self.encoding, burst.ENCODINGS))
    self.snr_grid = parse_snr_grid(self.snr)
    self.csi_modes = [s.strip() for s in self.csi.split(',') if s.strip()]
    for mode in self.csi_modes:
      if mode not in chansim.CSI_MODES:
        raise ValueError('Unknown CSI mode "{}", expected one of {}'.format(
            mode, chansim.CSI_MODES))
    if self.schemes is None:
      self.schemes = _DEFAULT_SCHEMES.get(self.experiment, '')
    self.scheme_list = [s.strip() for s in self.schemes.split(',') if s.strip()]
    for scheme in self.scheme_list:
      if scheme not in sequences.SCHEMES:
        raise ValueError('Unknown scheme "{}", expected one of {}'.format(
            scheme, list(sequences.SCHEMES.keys())))
    if self.out is None:
      self.out = '{}.csv'.format(self.experiment)

  def cpm_config(self):
    return cpm.CpmConfig(
        pulse_len=self.pulse_len, bt=self.bt, oversampling=self.oversampling)

  def __repr__(self):
    return 'ExperimentConfig({})'.format(', '.join(
        '{}={}'.format(k, getattr(self, k)) for k in _KEYS.keys()))


def _file_sources(config):
  seqs = ser.load_sequences(config.sequence_file)
  if len(seqs) not in (1, 2):
    raise ValueError('{}: expected one or two sequences, found {}'.format(
        config.sequence_file, len(seqs)))
  return seqs[0], seqs[1] if len(seqs) == 2 else None


def _bursts(config):
  cfg = config.cpm_config()
  bursts = collections.OrderedDict()
  for scheme in config.scheme_list:
    if sequences.is_random_scheme(scheme):
      bursts[scheme] = (
          lambda g, s=scheme: sequences.scheme_burst(s, cfg, config.z, g))
    else:
      bursts[scheme] = sequences.scheme_burst(scheme, cfg, config.z)
  if config.sequence_file:
    c, d = _file_sources(config)
    bursts[FILE_LABEL] = burst.build_burst(
        c, d, cfg, config.z, encoding=config.encoding)
  return bursts


def _materialize(bursts, generator):
  return collections.OrderedDict(
      (k, v(generator) if callable(v) else v) for k, v in bursts.items())


def _gcp_spec(config):
  if config.builtin:
    if config.builtin not in sequences.GCP_BUILTINS:
      raise ValueError('Unknown GCP builtin "{}", expected one of {}'.format(
          config.builtin, list(sequences.GCP_BUILTINS.keys())))
    return sequences.GCP_BUILTINS[config.builtin][0]
  perm = _int_list(config.perm) if config.perm else list(
      range(1, config.nu + 1))
  coeffs = _int_list(config.coeffs) if config.coeffs else [0] * config.nu
  return gcp.GbfSpec(config.q, config.nu, perm, coeffs, config.const,
                     config.offset)


def run_gcp(config):
  spec = _gcp_spec(config)
  pair = gcp.quaternary_lift(spec) if config.lift else gcp.davis_jedwab_pair(
      spec)
  print(pair)
  test_utils.print_summary_update(
      'gcp', repr(spec), length=len(pair), defect=gcp.gcp_defect(pair))
  ser.save_sequences([pair.a, pair.b], config.out)


def run_autocorr(config):
  g = torch.Generator().manual_seed(config.seed)
  bursts = _materialize(_bursts(config), g)
  cfg = config.cpm_config()
  profiles = collections.OrderedDict()
  for label, b in bursts.items():
    profile = burst.sum_correlation(
        b, waveform=config.waveform, cyclic=bool(config.cyclic))
    profiles[label] = profile
    test_utils.print_summary_update(
        'autocorr',
        label,
        peak_sidelobe=burst.sidelobe_peak(profile, cfg.pulse_len, b.n_len),
        rms_sidelobe=burst.sidelobe_rms(profile, cfg.pulse_len, b.n_len),
        single_sequence=profile.single_sequence)
  ser.save_profiles(profiles, config.out, symbol_period=cfg.symbol_period)


def run_mse(config, writer=None):
  report = chansim.mse_sweep(
      _bursts(config),
      config.snr_grid,
      config.trials,
      config.seed,
      p=config.taps,
      num_workers=config.workers)
  for label in report.labels:
    for step, (snr, value) in enumerate(
        zip(report.snr_grid.tolist(), report.mse_db(label))):
      test_utils.print_sweep_update(
          'mse',
          label,
          snr,
          value,
          metric='MSEdB',
          step=step,
          summary_writer=writer)
    test_utils.print_summary_update(
        'mse',
        label,
        crlb_gap_db=report.gap_db(label, min_snr=config.snr_grid[-1] - 10.0),
        rank_deficient=report.rank_deficient[report.labels.index(label)])
  ser.save_mse_report(report, config.out)
  return report


def run_ber(config, writer=None):
  g = torch.Generator().manual_seed(config.seed)
  bursts = _materialize(_bursts(config), g)
  bursts = collections.OrderedDict(
      zip(bursts.keys(), chansim.energy_normalize(list(bursts.values()))))
  report = None
  for mode in config.csi_modes:
    schemes = list(bursts.keys()) if mode == chansim.ESTIMATED else [None]
    for scheme in schemes:
      b = bursts[scheme or list(bursts.keys())[0]]
      label = mode if scheme is None else '{} {}'.format(scheme, mode)
      part = chansim.scfde_ber(
          b,
          config.payload,
          config.snr_grid,
          config.trials,
          config.seed,
          csi_mode=mode,
          p=config.taps,
          label=label,
          num_workers=config.workers)
      report = part if report is None else report.merged(part)
  for label in report.labels:
    for step, (snr, value) in enumerate(
        zip(report.snr_grid.tolist(), report.ber[label].tolist())):
      test_utils.print_sweep_update(
          'ber', label, snr, value, metric='BER', step=step,
          summary_writer=writer)
    test_utils.print_summary_update(
        'ber', label, snr_at_1e3=report.snr_at(label, 1e-3))
  ser.save_ber_report(report, config.out)
  return report


def run(config):
  """Runs one experiment and writes its CSV to `config.out`."""
  writer = test_utils.get_summary_writer(config.logdir)
  try:
    with gu.TimedScope(msg='{}: '.format(config.experiment)):
      if config.experiment == 'gcp':
        run_gcp(config)
      elif config.experiment == 'autocorr':
        run_autocorr(config)
      elif config.experiment == 'mse':
        run_mse(config, writer=writer)
      else:
        run_ber(config, writer=writer)
  finally:
    test_utils.close_summary_writer(writer)
  return 0


def verify(name):
  """Checks a builtin sequence and prints its summary."""
  if name in sequences.GCP_BUILTINS:
    spec, _ = sequences.GCP_BUILTINS[name]
    pair = gcp.davis_jedwab_pair(spec)
    print(pair)
    test_utils.print_summary_update(
        'verify', name, length=len(pair), defect=gcp.gcp_defect(pair))
    return 0
  if name in sequences.SINGLE_BUILTINS:
    c, _ = sequences.load_builtin(name)
    rho = gcp.aacf(c)
    sidelobes = torch.cat([rho.values[:len(c) - 1], rho.values[len(c):]])
    print(gcp.format_sequence(c))
    test_utils.print_summary_update(
        'verify',
        name,
        length=len(c),
        peak_aacf_sidelobe=torch.max(sidelobes.abs()).item())
    return 0
  raise ValueError('Unknown builtin "{}", expected one of {}'.format(
      name, list(sequences.GCP_BUILTINS.keys()) +
      list(sequences.SINGLE_BUILTINS.keys())))


def _add_shared_flags(parser):
  parser.add_argument('--config', type=str, help='A key = value config file.')
  parser.add_argument('--seed', type=int, help='The run seed.')
  parser.add_argument('--out', type=str, help='The output file.')
  parser.add_argument('--trials', type=int, help='Monte Carlo trials.')
  parser.add_argument('--schemes', type=str, help='Comma separated schemes.')
  parser.add_argument(
      '--sequence_file', type=str, help='One or two sequences, one per line.')
  parser.add_argument('--encoding', type=str, choices=burst.ENCODINGS)
  parser.add_argument('--bt', type=float, help='The GMSK BT product.')
  parser.add_argument('--pulse_len', type=int, help='The pulse length L.')
  parser.add_argument('--z', type=int, help='The tail length Z.')
  parser.add_argument('--oversampling', type=int, help='Samples per symbol.')
  parser.add_argument(
      '--snr', type=str, help='SNR grid, start:stop:step or a list (dB).')
  parser.add_argument('--taps', type=int, help='Channel taps P.')
  parser.add_argument('--payload', type=int, help='SC-FDE block size.')
  parser.add_argument(
      '--waveform',
      type=str,
      choices=(burst.TRUE_WAVEFORM, burst.APPROX_WAVEFORM))
  parser.add_argument('--cyclic', type=int, choices=(0, 1))
  parser.add_argument('--csi', type=str, help='Comma separated CSI modes.')
  parser.add_argument('--workers', type=int, help='Monte Carlo threads.')
  parser.add_argument('--logdir', type=str, help='Tensorboard log folder.')


def build_parser():
  parser = argparse.ArgumentParser(
      prog='golay-cpm',
      description='CPM training waveforms from Golay complementary pairs.')
  subparsers = parser.add_subparsers(dest='command')
  subparsers.required = True
  for name in EXPERIMENTS:
    sub = subparsers.add_parser(name)
    _add_shared_flags(sub)
    if name == 'gcp':
      group = sub.add_argument_group('Davis-Jedwab Setup')
      group.add_argument('--q', type=int, help='The alphabet modulus.')
      group.add_argument('--nu', type=int, help='The number of variables.')
      group.add_argument('--perm', type=str, help='The permutation, 1-based.')
      group.add_argument('--coeffs', type=str, help='The linear coefficients.')
      group.add_argument('--const', type=int, help='The constant term.')
      group.add_argument('--offset', type=int, help='The pair offset.')
      group.add_argument(
          '--builtin',
          type=str,
          choices=list(sequences.GCP_BUILTINS.keys()),
          help='Use a builtin spec.')
      group.add_argument(
          '--lift', type=int, choices=(0, 1), help='Print the Z4 lift.')
  verify_parser = subparsers.add_parser('verify')
  verify_parser.add_argument(
      'builtin',
      type=str,
      choices=list(sequences.GCP_BUILTINS.keys()) +
      list(sequences.SINGLE_BUILTINS.keys()))
  return parser


def config_from_args(args):
  values = dict()
  if getattr(args, 'config', None):
    values.update(parse_config_file(args.config))
  for key in _KEYS.keys():
    value = getattr(args, key, None)
    if value is not None:
      values[key] = value
  values['experiment'] = args.command
  return ExperimentConfig(**values)


def _module_of(error):
  frames = traceback.extract_tb(error.__traceback__)
  if not frames:
    return 'golay_cpm'
  return os.path.splitext(os.path.basename(frames[-1][0]))[0]


def main(argv=None):
  args = build_parser().parse_args(argv)
  try:
    if gu.getenv_as(genv.SELF_CHECK, bool, defval=True):
      sequences.self_check()
    if args.command == 'verify':
      return verify(args.builtin)
    return run(config_from_args(args))
  except (ValueError, RuntimeError, IOError, OSError) as e:
    gu.eprint('{}: {}'.format(_module_of(e), e))
    return 1


if __name__ == '__main__':
  sys.exit(main())
