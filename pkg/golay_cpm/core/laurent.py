from __future__ import division
from __future__ import print_function

import math
import threading

import torch
import golay_cpm.core.cpm as cpm
import golay_cpm.core.gcp as gcp

_PULSE_SET_LOCK = threading.Lock()
_PULSE_SET_CACHE = dict()


class LaurentPulseSet(object):
  """The `2**(L-1)` PAM pulses of a binary CPM scheme.

  All pulses share the grid `[0, (L+1)T]`; pulses with `p != 0` are zero beyond
  their shorter support.
  """

  def __init__(self, pulses, binary_digits, config):
    self.pulses = list(pulses)
    self.binary_digits = [tuple(d) for d in binary_digits]
    self.config = config

  def __len__(self):
    return len(self.pulses)

  def __getitem__(self, p):
    return self.pulses[p]

  def index_of(self, digits):
    return sum(a << m for m, a in enumerate(digits))

  def as_matrix(self):
    return torch.stack([c.samples for c in self.pulses])


def _check_index(config):
  if config.h.denominator == 1:
    raise ValueError('Laurent decomposition needs a non-integer h: h={}'.format(
        config.h))


def s0_pulse(config):
  """Samples the Laurent generating pulse `s0(t)` on `[0, 2LT]`.

  Args:
    config (CpmConfig): The modulator configuration.
  Returns:
    The `SampledPulse` with `2 L Q + 1` samples.
  Raises:
    ValueError: If `h` is an integer.
  """
  _check_index(config)
  h = float(config.h)
  qtab = cpm.phase_pulse(config).samples
  norm = math.sin(math.pi * h)
  rise = torch.sin(2.0 * math.pi * h * qtab) / norm
  fall = torch.sin(math.pi * h - 2.0 * math.pi * h * qtab[1:]) / norm
  return cpm.SampledPulse(
      torch.cat([rise, fall]), config.sample_period, start_time=0.0)


def _shifted(samples, shift, length):
  out = torch.zeros(length, dtype=samples.dtype)
  if shift < samples.numel():
    avail = min(length, samples.numel() - shift)
    out[:avail] = samples[shift:shift + avail]
  return out


def _build_pulses(config):
  L, Q = config.pulse_len, config.oversampling
  s0 = s0_pulse(config).samples
  length = (L + 1) * Q + 1
  base = _shifted(s0, 0, length)
  pulses, digits = [], []
  for p in range(1 << (L - 1)):
    a = tuple((p >> (m - 1)) & 1 for m in range(1, L))
    c = base.clone()
    for i in range(1, L):
      c = c * _shifted(s0, (i + L * a[i - 1]) * Q, length)
    pulses.append(cpm.SampledPulse(c, config.sample_period, start_time=0.0))
    digits.append(a)
  return LaurentPulseSet(pulses, digits, config)


def laurent_pulses(config):
  key = config.key()
  with _PULSE_SET_LOCK:
    pulse_set = _PULSE_SET_CACHE.get(key, None)
    if pulse_set is None:
      pulse_set = _build_pulses(config)
      _PULSE_SET_CACHE[key] = pulse_set
  return pulse_set


def c0_pulse(config):
  return laurent_pulses(config)[0]


def _overlap_add(weights, pulses, oversampling, num_samples):
  # weights: (n, P) complex, pulses: (P, K) real.
  n, K = weights.shape[0], pulses.shape[1]
  contrib = torch.einsum('np,pk->nk', weights,
                         pulses.to(torch.complex128)).reshape(-1)
  index = (torch.arange(n).unsqueeze(1) * oversampling +
           torch.arange(K).unsqueeze(0)).reshape(-1)
  out = torch.zeros(n * oversampling + K, dtype=torch.complex128)
  out.index_add_(0, index, contrib)
  return out[:num_samples]


def laurent_amplitudes(i, config):
  """Computes the PAM amplitudes `exp(j pi h A_{p,n})`.

  `A_{p,n} = sum_{m<=n} I_m - sum_{m=1}^{L-1} I_{n-m} a_{p,m}`, symbols before
  the start of the sequence counting as absent.

  Returns:
    A complex tensor of shape `(len(i), 2**(L-1))`.
  """
  pulse_set = laurent_pulses(config)
  L = config.pulse_len
  values = i.values
  n = values.numel()
  csum = torch.cumsum(values, 0)
  digits = torch.tensor(pulse_set.binary_digits, dtype=torch.int64).reshape(
      len(pulse_set), L - 1)
  padded = torch.cat([torch.zeros(L - 1, dtype=torch.int64), values])
  # delayed[n, m-1] = I_{n-m}
  delayed = torch.stack([padded[L - 1 - m:L - 1 - m + n] for m in range(1, L)],
                        dim=1) if L > 1 else torch.zeros(n, 0, dtype=torch.int64)
  a = csum.unsqueeze(1) - delayed @ digits.t()
  angle = math.pi * float(config.h) * a.to(torch.float64)
  return torch.polar(torch.ones_like(angle), angle)


def laurent_exact(i, config):
  """Rebuilds the CPM signal as the sum of all its PAM components.

  From the zero modulator state the reconstruction equals `modulate` once the
  phase pulse holds only transmitted symbols, i.e. for `t >= LT`. The start-up
  region `t < LT` is not reconstructed: there the modulator still holds absent
  symbols, which have no binary PAM expansion.

  Args:
    i (CpmSymbols): The modulated symbols.
    config (CpmConfig): The modulator configuration.
  Returns:
    The `ComplexWaveform` with `len(i) * Q` samples.
  """
  Q = config.oversampling
  n = len(i)
  if n == 0:
    return cpm.ComplexWaveform(
        torch.zeros(0, dtype=torch.complex128), config.sample_period)
  pulse_set = laurent_pulses(config)
  weights = laurent_amplitudes(i, config)
  samples = _overlap_add(weights, pulse_set.as_matrix(), Q, n * Q)
  return cpm.ComplexWaveform(samples, config.sample_period)


def laurent_approx(i, config):
  """Returns the dominant-pulse approximation `sum(gamma_n c0(t - nT))`."""
  Q = config.oversampling
  n = len(i)
  if n == 0:
    return cpm.ComplexWaveform(
        torch.zeros(0, dtype=torch.complex128), config.sample_period)
  gammas = gcp.pseudo_symbols(i, config.h)
  return pam_waveform(gammas.values, config, num_samples=n * Q)


def pam_waveform(amplitudes, config, num_samples=None):
  """Overlap-adds `c0` pulses weighted by the given amplitudes.

  Args:
    amplitudes (torch.Tensor): The complex weights, one per symbol period.
    config (CpmConfig): The modulator configuration.
    num_samples (int, optional): The output length. If `None` the full pulse
      tails are kept.
  Returns:
    The `ComplexWaveform`.
  """
  Q = config.oversampling
  amplitudes = torch.as_tensor(amplitudes, dtype=torch.complex128).flatten()
  c0 = c0_pulse(config).samples.unsqueeze(0)
  if num_samples is None:
    num_samples = amplitudes.numel() * Q + c0.shape[1]
  samples = _overlap_add(amplitudes.unsqueeze(1), c0, Q, num_samples)
  return cpm.ComplexWaveform(samples, config.sample_period)


def c0_aacf(config):
  """Autocorrelation `rho_c0(tau)` of the dominant pulse on the sample grid."""
  c0 = c0_pulse(config)
  x = c0.samples
  K = x.numel()
  rho = torch.nn.functional.conv1d(
      x.view(1, 1, -1), x.view(1, 1, -1), padding=K - 1).flatten()
  lags = torch.arange(-(K - 1), K, dtype=torch.float64) * c0.sample_period
  return cpm.CorrelationProfile(lags, rho * c0.sample_period)


def energy_fraction(config, symbols=None):
  """Returns the share of energy carried by the `c0` component.

  Args:
    config (CpmConfig): The modulator configuration.
    symbols (CpmSymbols, optional): If given, the ratio of the approximation
      energy to the true signal energy for these symbols. Otherwise the ratio
      of the `c0` pulse energy to the energy of the whole pulse set.
  Returns:
    The energy fraction, a float.
  """
  if symbols is None:
    pulse_set = laurent_pulses(config)
    total = sum(c.energy() for c in pulse_set.pulses)
    return pulse_set[0].energy() / total
  L, Q = config.pulse_len, config.oversampling
  start = L * Q
  if len(symbols) * Q <= start:
    raise ValueError('Need more than L={} symbols, got {}'.format(
        L, len(symbols)))
  alpha = laurent_approx(symbols, config).window(start, None)
  s = cpm.modulate(symbols, config).window(start, None)
  return alpha.energy() / s.energy()
