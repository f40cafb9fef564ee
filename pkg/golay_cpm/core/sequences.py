from __future__ import division
from __future__ import print_function

import collections

import torch
import golay_cpm.core.burst as burst
import golay_cpm.core.gcp as gcp

GCP1_SPEC = gcp.GbfSpec(
    q=2, nu=4, perm=[1, 2, 3, 4], linear_coeffs=[1, 0, 1, 1], const_term=0,
    pair_offset=1)
# The published coefficients [1, 1, 0, 1] weight x_{pi(k)}; on x_k they read
# [1, 1, 1, 0], which reproduces the published sequences.
GCP2_SPEC = gcp.GbfSpec(
    q=2, nu=4, perm=[2, 3, 4, 1], linear_coeffs=[1, 1, 1, 0], const_term=0,
    pair_offset=1)

GCP1_TEXT = ('+-++-+++-+---+++', '---+++-++++-++-+')
GCP2_TEXT = ('+--+-+-+++--++++', '-+-++--+------++')
GSM_TEXT = '+-+++----+---+--'
HP_TEXT = '----++++++++----'

GCP_BUILTINS = collections.OrderedDict([
    ('gcp1', (GCP1_SPEC, GCP1_TEXT)),
    ('gcp2', (GCP2_SPEC, GCP2_TEXT)),
])
SINGLE_BUILTINS = collections.OrderedDict([
    ('gsm', GSM_TEXT),
    ('hp', HP_TEXT),
])
RANDOM = 'random'
BUILTINS = tuple(GCP_BUILTINS.keys()) + tuple(SINGLE_BUILTINS.keys()) + (
    RANDOM,)

Scheme = collections.namedtuple('Scheme', 'source encoding')

# Training waveforms compared in the autocorrelation, MSE and BER experiments.
SCHEMES = collections.OrderedDict([
    ('Diff-GCP 1', Scheme('gcp1', burst.DIFF)),
    ('Diff-GCP 2', Scheme('gcp2', burst.DIFF)),
    ('Diff-GSM', Scheme('gsm', burst.DIFF)),
    ('Diff-HP', Scheme('hp', burst.DIFF)),
    ('Diff-Rand', Scheme(RANDOM, burst.DIFF)),
    ('GCP 1', Scheme('gcp1', burst.UNCODED)),
    ('GCP 2', Scheme('gcp2', burst.UNCODED)),
    ('GSM', Scheme('gsm', burst.UNCODED)),
    ('HP', Scheme('hp', burst.UNCODED)),
    ('Rand', Scheme(RANDOM, burst.UNCODED)),
])


def random_sequence(length, generator):
  return gcp.ZqSequence(
      torch.randint(0, 2, (length,), generator=generator, dtype=torch.int64),
      2)


def load_builtin(name, generator=None, length=16):
  """Returns the `(C, D)` sequences of a builtin source.

  Single-sequence sources return `D = None`.

  Args:
    name (str): One of `BUILTINS`.
    generator (torch.Generator, optional): The random stream for `random`.
    length (int): The length of `random` sequences.
      Default: 16
  Returns:
    A `(ZqSequence, ZqSequence or None)` tuple.
  """
  if name in GCP_BUILTINS:
    pair = gcp.davis_jedwab_pair(GCP_BUILTINS[name][0])
    return pair.a, pair.b
  if name in SINGLE_BUILTINS:
    return gcp.parse_sequence(SINGLE_BUILTINS[name]), None
  if name == RANDOM:
    if generator is None:
      raise ValueError('Random sequences need a generator')
    return random_sequence(length, generator), None
  raise ValueError('Unknown builtin "{}", expected one of {}'.format(
      name, list(BUILTINS)))


def scheme_burst(scheme, config, z, generator=None, strict=False):
  if scheme not in SCHEMES:
    raise ValueError('Unknown scheme "{}", expected one of {}'.format(
        scheme, list(SCHEMES.keys())))
  source, encoding = SCHEMES[scheme]
  c, d = load_builtin(source, generator=generator)
  return burst.build_burst(c, d, config, z, encoding=encoding, strict=strict)


def is_random_scheme(scheme):
  return SCHEMES[scheme].source == RANDOM


def self_check():
  """Checks the builtin pairs against their construction and printed text.

  Raises:
    RuntimeError: If a builtin disagrees with its Davis-Jedwab spec or is not
      a complementary pair.
  """
  for name, (spec, text) in GCP_BUILTINS.items():
    pair = gcp.davis_jedwab_pair(spec)
    printed = (gcp.format_sequence(pair.a), gcp.format_sequence(pair.b))
    if printed != text:
      raise RuntimeError('Builtin {} mismatch: {} vs {}'.format(
          name, printed, text))
    defect = gcp.gcp_defect(pair)
    if defect != 0:
      raise RuntimeError('Builtin {} is not a GCP: defect={}'.format(
          name, defect))
  for name, text in SINGLE_BUILTINS.items():
    if gcp.format_sequence(gcp.parse_sequence(text)) != text:
      raise RuntimeError('Builtin {} does not round-trip: {}'.format(
          name, text))
