from __future__ import division
from __future__ import print_function

import collections

import torch
import golay_cpm.core.cpm as cpm
import golay_cpm.core.gcp as gcp
import golay_cpm.core.laurent as laurent
import golay_cpm.utils.utils as gu

# Imported here as well, since profiles are mostly produced by this module.
CorrelationProfile = cpm.CorrelationProfile

DIFF = 'diff'
UNCODED = 'uncoded'
ENCODINGS = (DIFF, UNCODED)

TRUE_WAVEFORM = 'true'
APPROX_WAVEFORM = 'approx'

Segments = collections.namedtuple('Segments', 's1_c s2_c s1_d s2_d')


def _logger():
  return gu.get_logger(__name__)


class TrainingBurst(object):
  """A modulated training burst `[tailC | I_C | tailD | I_D]`.

  Boundaries are kept in symbol units, as `(start, stop)` pairs keyed by block
  name (`tail_c`, `train_c`, `tail_d`, `train_d`). Single-sequence bursts only
  have the first two blocks.
  """

  def __init__(self,
               waveform,
               symbols,
               config,
               n_len,
               z_len,
               boundaries,
               source,
               encoding,
               tail_offsets,
               amplitude=1.0):
    self.waveform = waveform
    self.symbols = symbols
    self.config = config
    self.n_len = n_len
    self.z_len = z_len
    self.boundaries = collections.OrderedDict(boundaries)
    self.source = source
    self.encoding = encoding
    self.tail_offsets = tuple(tail_offsets)
    self.amplitude = float(amplitude)

  @property
  def single_sequence(self):
    return 'train_d' not in self.boundaries

  @property
  def num_symbols(self):
    return len(self.symbols)

  def sample_range(self, block):
    if block not in self.boundaries:
      raise ValueError('Burst has no "{}" block: {}'.format(
          block, list(self.boundaries.keys())))
    start, stop = self.boundaries[block]
    Q = self.config.oversampling
    return start * Q, stop * Q

  def energy(self):
    return self.waveform.energy()

  def scaled(self, factor):
    return TrainingBurst(
        self.waveform.scaled(factor),
        self.symbols,
        self.config,
        self.n_len,
        self.z_len,
        self.boundaries,
        self.source,
        self.encoding,
        self.tail_offsets,
        amplitude=self.amplitude * factor)

  def approx_waveform(self):
    """The dominant-pulse approximation of the burst, at the burst amplitude."""
    return laurent.laurent_approx(self.symbols, self.config).scaled(
        self.amplitude)

  def __repr__(self):
    return 'TrainingBurst(N={}, Z={}, encoding={}, blocks={})'.format(
        self.n_len, self.z_len, self.encoding, list(self.boundaries.keys()))


class SumCorrelationProfile(CorrelationProfile):
  """A normalized sum correlation; `single_sequence` flags a lone term."""

  def __init__(self, lags, values, normalization=1.0, single_sequence=False):
    super(SumCorrelationProfile, self).__init__(
        lags, values, normalization=normalization)
    self.single_sequence = single_sequence


def _check_length(n, config):
  if n < 4 or n & (n - 1) != 0:
    raise ValueError('Sequence length must be 2**nu with nu >= 2: N={}'.format(n))
  if n <= config.pulse_len + 1:
    raise ValueError('Sequence length must exceed L+1={}: N={}'.format(
        config.pulse_len + 1, n))


def encode(c, encoding=DIFF):
  """Maps a binary sequence to the `2N` training symbols of one block."""
  if encoding == DIFF:
    return gcp.diff_encode(c)
  if encoding == UNCODED:
    bipolar = c.to_bipolar()
    return cpm.CpmSymbols(torch.cat([bipolar, bipolar]))
  raise ValueError('Unknown encoding "{}", expected one of {}'.format(
      encoding, ENCODINGS))


def _tail(state, z, config, strict):
  try:
    return cpm.tail_bits(state, z, config, target=0), 0
  except cpm.UnreachableStateError:
    if strict:
      raise
  # Odd parity: settle on the closest reachable phase, a quarter turn.
  _logger().warning(
      'Tail of %d symbols cannot zero the phase; using a +pi/2 offset', z)
  return cpm.tail_bits(state, z, config, target=1), 1


def build_burst(c, d, config, z, encoding=DIFF, strict=False):
  """Builds the modulated training burst of a binary sequence pair.

  Each training block is preceded by `z` tail symbols driving the accumulated
  phase to zero. With `h = 1/2` a tail can only cancel a residue of its own
  parity; when it cannot, the tail drives the phase to `+pi/2` instead and the
  quarter-turn offset is recorded in `tail_offsets`.

  Args:
    c (ZqSequence): The first binary sequence `C`.
    d (ZqSequence): The second binary sequence `D`, or `None` for the
      single-sequence layout `[tail | I_C]`.
    config (CpmConfig): The modulator configuration.
    z (int): The tail length `Z`.
    encoding (str): `diff` for differential encoding, `uncoded` to modulate
      the bipolar sequence (repeated twice) directly.
      Default: diff
    strict (bool): Whether a phase that cannot be zeroed raises instead.
      Default: False
  Returns:
    The `TrainingBurst`.
  Raises:
    UnreachableStateError: If `strict` and a tail cannot zero the phase.
  """
  config.check_training()
  n = len(c)
  _check_length(n, config)
  if d is not None and len(d) != n:
    raise ValueError('Pair length mismatch: {} vs {}'.format(n, len(d)))
  sequences = [c] if d is None else [c, d]
  names = ['c', 'd'][:len(sequences)]
  state = cpm.ModulatorState.zero(config)
  symbols = cpm.CpmSymbols([])
  boundaries, offsets = [], []
  for name, seq in zip(names, sequences):
    tail, offset = _tail(state, z, config, strict)
    train = encode(seq, encoding=encoding)
    start = len(symbols)
    boundaries.append(('tail_' + name, (start, start + z)))
    boundaries.append(('train_' + name, (start + z, start + z + 2 * n)))
    offsets.append(offset)
    block = tail + train
    state = cpm.phase_state_after(block, config, initial=state)
    symbols = symbols + block
  waveform = cpm.modulate(symbols, config)
  return TrainingBurst(
      waveform,
      symbols,
      config,
      n,
      z,
      boundaries,
      source=tuple(sequences),
      encoding=encoding,
      tail_offsets=offsets)


def segments(burst, waveform=None):
  """Extracts the reference windows `S1_C, S2_C, S1_D, S2_D`.

  Args:
    burst (TrainingBurst): The burst.
    waveform (ComplexWaveform, optional): An alternative signal laid out like
      the burst, e.g. its approximation. Default: the burst waveform.
  Returns:
    A `Segments` tuple; the D windows are `None` for single-sequence bursts.
  """
  if waveform is None:
    waveform = burst.waveform
  Q, n = burst.config.oversampling, burst.n_len
  windows = []
  for block in ('train_c', 'train_d'):
    if block not in burst.boundaries:
      windows.extend([None, None])
      continue
    start, stop = burst.sample_range(block)
    if stop - start != 2 * n * Q or stop > len(waveform):
      raise ValueError('Malformed "{}" block: samples [{}, {})'.format(
          block, start, stop))
    windows.append(waveform.window(start, start + n * Q))
    windows.append(waveform.window(start + n * Q, stop))
  return Segments(*windows)


def periodic_xcorr(s1, s2):
  """Periodic cross-correlation of two windows of one period each.

  `phi(tau) = sum_t s2(t) conj(s1((t + tau) mod NT)) dt`, for every `tau` on
  the sample grid, reported over signed lags `-M/2 < m <= M/2`.
  """
  if len(s1) != len(s2):
    raise ValueError('Window length mismatch: {} vs {}'.format(
        len(s1), len(s2)))
  m = len(s1)
  if m == 0:
    raise ValueError('Empty correlation windows')
  dt = s1.sample_period
  r = torch.conj(
      torch.fft.ifft(torch.fft.fft(s1.samples) * torch.conj(
          torch.fft.fft(s2.samples)))) * dt
  k = torch.arange(m)
  signed = torch.where(k <= m // 2, k, k - m)
  order = torch.argsort(signed)
  return CorrelationProfile(signed[order].to(torch.float64) * dt, r[order])


def _pair_terms(segs, cyclic):
  terms = []
  for s1, s2 in ((segs.s1_c, segs.s2_c), (segs.s1_d, segs.s2_d)):
    if s2 is None:
      continue
    terms.append(periodic_xcorr(s2 if cyclic else s1, s2))
  return terms


def sum_correlation(burst, waveform=TRUE_WAVEFORM, cyclic=True):
  """Normalized sum of the C and D periodic segment correlations.

  Args:
    burst (TrainingBurst): The burst.
    waveform (str): `true` to correlate the modulated burst, `approx` for its
      dominant-pulse approximation.
      Default: true
    cyclic (bool): Whether each S2 window is correlated with itself cyclically
      (one clean period). Otherwise the literal S1 by S2 correlation is used.
      Default: True
  Returns:
    The `SumCorrelationProfile`, flagged `single_sequence` when the burst has
    no D block and the single correlation is returned.
  """
  if waveform == TRUE_WAVEFORM:
    signal = burst.waveform
  elif waveform == APPROX_WAVEFORM:
    signal = burst.approx_waveform()
  else:
    raise ValueError('Unknown waveform "{}", expected {} or {}'.format(
        waveform, TRUE_WAVEFORM, APPROX_WAVEFORM))
  terms = _pair_terms(segments(burst, waveform=signal), cyclic)
  total = terms[0].values
  for term in terms[1:]:
    total = total + term.values
  profile = CorrelationProfile(terms[0].lags, total).normalized()
  return SumCorrelationProfile(
      profile.lags,
      profile.values,
      normalization=profile.normalization,
      single_sequence=len(terms) == 1)


def sidelobe_peak(profile, l, n, symbol_period=1.0, tolerance=1e-9):
  """Returns the peak magnitude over `(L+1)T < |tau| <= (N-L-1)T`.

  Args:
    profile (CorrelationProfile): A normalized profile.
    l (int): The pulse length `L`.
    n (int): The sequence length `N`.
    symbol_period (float): The symbol duration `T`.
      Default: 1.0
    tolerance (float): The slack applied to the region bounds.
      Default: 1e-9
  Returns:
    The peak sidelobe magnitude.
  Raises:
    ValueError: If the region is empty, i.e. `N <= 2L + 2`.
  """
  return torch.max(
      _sidelobes(profile, l, n, symbol_period, tolerance)).item()


def sidelobe_rms(profile, l, n, symbol_period=1.0, tolerance=1e-9):
  """Returns the RMS magnitude over the `sidelobe_peak` region.

  A sequence whose own periodic autocorrelation peaks at one lag, like the GSM
  midamble at `N/2`, pins the peak of coded and uncoded waveforms alike; the
  RMS level still ranks them.
  """
  mag = _sidelobes(profile, l, n, symbol_period, tolerance)
  return torch.sqrt(torch.mean(mag * mag)).item()


def _sidelobes(profile, l, n, symbol_period, tolerance):
  if n <= 2 * l + 2:
    raise ValueError('Empty sidelobe region for N={} and L={}'.format(n, l))
  lo = (l + 1) * symbol_period + tolerance
  hi = (n - l - 1) * symbol_period + tolerance
  mag = profile.lags.abs()
  mask = (mag > lo) & (mag <= hi)
  if not bool(mask.any()):
    raise ValueError('No profile lags in the sidelobe region ({}, {}]'.format(
        lo, hi))
  return profile.values.abs()[mask]


def main_lobe_reference(config, n):
  """The ideal normalized main lobe `2NT rho_c0(tau)` on the profile grid.

  Returns a profile on the signed lag grid of one period `NT`, built from the
  periodic extension of `rho_c0`.
  """
  rho = laurent.c0_aacf(config)
  Q = config.oversampling
  m = n * Q
  k = torch.arange(m)
  signed = torch.where(k <= m // 2, k, k - m)
  order = torch.argsort(signed)
  signed = signed[order]
  half = (len(rho) - 1) // 2
  values = torch.zeros(m, dtype=torch.complex128)
  for wrap in (-m, 0, m):
    index = signed + wrap + half
    valid = (index >= 0) & (index < len(rho))
    values[valid] += rho.values[index[valid]]
  values = values * 2 * n * config.symbol_period
  return CorrelationProfile(signed.to(torch.float64) * config.sample_period,
                            values).normalized()
