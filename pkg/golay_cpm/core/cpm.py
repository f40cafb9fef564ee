from __future__ import division
from __future__ import print_function

from fractions import Fraction
import itertools
import math
import threading

import torch
import golay_cpm.utils.utils as gu

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi
PHASE_TOLERANCE = 1e-12

_PULSE_LOCK = threading.Lock()
_PULSE_CACHE = dict()


class UnreachableStateError(RuntimeError):
  """Raised when no tail pattern of the requested length can cancel a phase."""
  pass


class CpmConfig(object):
  """Parameters of a binary GMSK-type CPM modulator.

  Args:
    h (Fraction): The modulation index.
      Default: 1/2
    m_ary (int): The modulation order. Only binary CPM is supported.
      Default: 2
    pulse_len (int): The frequency pulse length `L`, in symbols.
      Default: 3
    bt (float): The Gaussian filter bandwidth-time product.
      Default: 0.3
    oversampling (int): The number of samples per symbol `Q`.
      Default: 8
    symbol_period (float): The symbol duration `T`.
      Default: 1.0
  """

  def __init__(self,
               h=Fraction(1, 2),
               m_ary=2,
               pulse_len=3,
               bt=0.3,
               oversampling=8,
               symbol_period=1.0):
    self.h = Fraction(h).limit_denominator(1 << 16)
    self.m_ary = int(m_ary)
    self.pulse_len = int(pulse_len)
    self.bt = float(bt)
    self.oversampling = int(oversampling)
    self.symbol_period = float(symbol_period)
    if self.m_ary != 2:
      raise ValueError('Only binary CPM is supported: m_ary={}'.format(m_ary))
    if self.h <= 0:
      raise ValueError('Invalid modulation index: h={}'.format(h))
    if self.pulse_len < 1:
      raise ValueError('Invalid pulse length: L={}'.format(pulse_len))
    if self.bt <= 0:
      raise ValueError('Invalid BT product: {}'.format(bt))
    if self.oversampling < 4:
      raise ValueError('Oversampling must be >= 4: Q={}'.format(oversampling))
    if self.symbol_period <= 0:
      raise ValueError('Invalid symbol period: T={}'.format(symbol_period))

  @property
  def sample_period(self):
    return self.symbol_period / self.oversampling

  def key(self):
    return (self.h, self.m_ary, self.pulse_len, self.bt, self.oversampling,
            self.symbol_period)

  def replace(self, **kwargs):
    args = dict(
        h=self.h,
        m_ary=self.m_ary,
        pulse_len=self.pulse_len,
        bt=self.bt,
        oversampling=self.oversampling,
        symbol_period=self.symbol_period)
    args.update(kwargs)
    return CpmConfig(**args)

  def check_training(self):
    if self.h != Fraction(1, 2):
      raise ValueError(
          'Training construction requires h=1/2, got h={}'.format(self.h))

  def __eq__(self, other):
    return isinstance(other, CpmConfig) and self.key() == other.key()

  def __hash__(self):
    return hash(self.key())

  def __repr__(self):
    return ('CpmConfig(h={}, L={}, BT={}, Q={}, T={})'.format(
        self.h, self.pulse_len, self.bt, self.oversampling,
        self.symbol_period))


class SampledPulse(object):
  """A real pulse sampled on a uniform grid starting at `start_time`."""

  def __init__(self, samples, sample_period, start_time=0.0):
    self.samples = torch.as_tensor(samples, dtype=torch.float64).flatten()
    self.sample_period = float(sample_period)
    self.start_time = float(start_time)

  def __len__(self):
    return self.samples.numel()

  def times(self):
    return self.start_time + self.sample_period * torch.arange(
        len(self), dtype=torch.float64)

  def integral(self):
    if len(self) < 2:
      return 0.0
    return torch.trapezoid(self.samples, dx=self.sample_period).item()

  def energy(self):
    if len(self) < 2:
      return 0.0
    return torch.trapezoid(
        self.samples * self.samples, dx=self.sample_period).item()

  def at(self, t):
    index = int(round((t - self.start_time) / self.sample_period))
    if index < 0 or index >= len(self):
      return 0.0
    return self.samples[index].item()


class ComplexWaveform(object):
  """A complex baseband signal sampled every `sample_period`."""

  def __init__(self, samples, sample_period, start_time=0.0):
    self.samples = torch.as_tensor(samples, dtype=torch.complex128).flatten()
    self.sample_period = float(sample_period)
    self.start_time = float(start_time)

  def __len__(self):
    return self.samples.numel()

  def energy(self):
    """Returns the discrete energy `sum(|x|^2)` of the samples."""
    return torch.sum(self.samples.real**2 + self.samples.imag**2).item()

  def window(self, start, stop):
    return ComplexWaveform(
        self.samples[start:stop],
        self.sample_period,
        start_time=self.start_time + start * self.sample_period)

  def scaled(self, factor):
    return ComplexWaveform(self.samples * factor, self.sample_period,
                           self.start_time)

  @classmethod
  def concat(cls, waveforms):
    waveforms = gu.as_list(waveforms)
    assert waveforms, 'No waveforms to concatenate'
    return cls(
        torch.cat([w.samples for w in waveforms]),
        waveforms[0].sample_period,
        start_time=waveforms[0].start_time)


class CorrelationProfile(object):
  """A correlation function sampled on a grid of real lags.

  Args:
    lags (torch.Tensor): The lag values, multiples of the sample period.
    values (torch.Tensor): The complex correlation values.
    normalization (float): The magnitude the values were divided by.
      Default: 1.0
  """

  def __init__(self, lags, values, normalization=1.0):
    self.lags = torch.as_tensor(lags, dtype=torch.float64).flatten()
    self.values = torch.as_tensor(values, dtype=torch.complex128).flatten()
    self.normalization = float(normalization)
    if self.lags.numel() != self.values.numel():
      raise ValueError('Lag/value count mismatch: {} vs {}'.format(
          self.lags.numel(), self.values.numel()))

  def __len__(self):
    return self.values.numel()

  def magnitude(self):
    return self.values.abs()

  def zero_lag_index(self):
    return int(torch.argmin(self.lags.abs()))

  def at(self, tau):
    index = int(torch.argmin(torch.abs(self.lags - tau)))
    return complex(self.values[index].item())

  def normalized(self, reference=None):
    """Scales the profile by `reference`, by default its zero-lag magnitude."""
    if reference is None:
      reference = abs(self.values[self.zero_lag_index()].item())
    if reference <= 0.0:
      raise ValueError('Cannot normalize by a non-positive reference: {}'.format(
          reference))
    return CorrelationProfile(self.lags, self.values / reference,
                              normalization=self.normalization * reference)


class CpmSymbols(object):
  """Bipolar CPM modulator inputs."""

  def __init__(self, values):
    values = torch.as_tensor(values, dtype=torch.int64).flatten()
    if values.numel() and not torch.all((values == 1) | (values == -1)):
      raise ValueError('CPM symbols must be in {{-1, +1}}: {}'.format(
          values.tolist()))
    self.values = values

  def __len__(self):
    return self.values.numel()

  def __getitem__(self, index):
    if isinstance(index, slice):
      return CpmSymbols(self.values[index])
    return int(self.values[index])

  def __eq__(self, other):
    return isinstance(other, CpmSymbols) and torch.equal(
        self.values, other.values)

  def __add__(self, other):
    return CpmSymbols(torch.cat([self.values, other.values]))

  def tolist(self):
    return self.values.tolist()

  def __repr__(self):
    return 'CpmSymbols({})'.format(''.join(
        '+' if v > 0 else '-' for v in self.values.tolist()))


def wrap_phase(phase):
  phase = math.fmod(float(phase), TWO_PI)
  if phase < 0.0:
    phase += TWO_PI
  if TWO_PI - phase < PHASE_TOLERANCE:
    phase = 0.0
  return phase


class ModulatorState(object):
  """The modulator memory: phase state and correlative state.

  The correlative state lists the last `L - 1` symbols, most recent first. A
  zero entry stands for a symbol slot before the start of transmission, which
  contributes no phase.

  Args:
    phase_state (float): The accumulated phase of the fully entered symbols.
    correlative_state (list): The `L - 1` most recent symbols.
  """

  def __init__(self, phase_state=0.0, correlative_state=()):
    self.phase_state = wrap_phase(phase_state)
    self.correlative_state = torch.as_tensor(
        correlative_state, dtype=torch.int64).flatten()
    if not torch.all((self.correlative_state >= -1) &
                     (self.correlative_state <= 1)):
      raise ValueError('Invalid correlative state: {}'.format(
          self.correlative_state.tolist()))

  @classmethod
  def zero(cls, config):
    return cls(0.0, torch.zeros(config.pulse_len - 1, dtype=torch.int64))

  def quarter_turns(self):
    turns = self.phase_state / HALF_PI
    k = int(round(turns))
    if abs(turns - k) * HALF_PI > 1e-9:
      raise ValueError('Phase state {} is not a multiple of pi/2'.format(
          self.phase_state))
    return k % 4

  def residue_quarter_turns(self):
    """Phase, in quarter turns, once the correlative symbols fully enter."""
    return (self.quarter_turns() + int(self.correlative_state.sum())) % 4

  def __repr__(self):
    return 'ModulatorState(theta={:.6f}, sigma={})'.format(
        self.phase_state, self.correlative_state.tolist())


def q_function(x):
  x = torch.as_tensor(x, dtype=torch.float64)
  return 0.5 * torch.special.erfc(x / math.sqrt(2.0))


def gmsk_frequency_pulse(config):
  """Samples the GMSK frequency pulse truncated to `[0, LT]`.

  The pulse is centered at `LT/2`, clipped to the window and rescaled so that
  its trapezoidal integral is exactly 1/2.

  Args:
    config (CpmConfig): The modulator configuration.
  Returns:
    The `SampledPulse` with `L * Q + 1` samples.
  """
  if config.bt <= 0:
    raise ValueError('Invalid BT product: {}'.format(config.bt))
  T = config.symbol_period
  L, Q = config.pulse_len, config.oversampling
  dt = config.sample_period
  sigma = math.sqrt(math.log(2.0)) / (2.0 * math.pi * config.bt)
  k = torch.arange(L * Q + 1, dtype=torch.float64)
  # Centered normalized time, antisymmetric on the grid.
  u = (2.0 * k - L * Q) / (2.0 * Q)
  g = (q_function((u + 0.5) / sigma) - q_function((u - 0.5) / sigma)) / (2.0 * T)
  g = g * (0.5 / torch.trapezoid(g, dx=dt))
  return SampledPulse(g, dt, start_time=0.0)


def phase_shaping(g):
  integral = g.integral()
  if abs(integral - 0.5) > 1e-9:
    raise ValueError(
        'Frequency pulse is not normalized: integral={}'.format(integral))
  q = torch.cat([
      torch.zeros(1, dtype=torch.float64),
      torch.cumulative_trapezoid(g.samples, dx=g.sample_period)
  ])
  return SampledPulse(q, g.sample_period, start_time=g.start_time)


def phase_pulse(config):
  """Returns the cached phase pulse `q(t)` on `[0, LT]` for the config."""
  key = config.key()
  with _PULSE_LOCK:
    pulse = _PULSE_CACHE.get(key, None)
    if pulse is None:
      pulse = phase_shaping(gmsk_frequency_pulse(config))
      _PULSE_CACHE[key] = pulse
  return pulse


def _extended_symbols(i, config, initial):
  sigma = initial.correlative_state
  if sigma.numel() != config.pulse_len - 1:
    raise ValueError('Correlative state has {} entries, expected L-1={}'.format(
        sigma.numel(), config.pulse_len - 1))
  return torch.cat([sigma.flip(0), i.values])


def phase_trajectory(i, config, initial):
  """Computes the sampled phase `phi(t; I)` of the modulator output.

  Args:
    i (CpmSymbols): The symbols to modulate.
    config (CpmConfig): The modulator configuration.
    initial (ModulatorState): The state at the start of the first symbol.
  Returns:
    A float64 tensor with `len(i) * Q` phase samples.
  """
  ext = _extended_symbols(i, config, initial).to(torch.float64)
  n = len(i)
  L, Q = config.pulse_len, config.oversampling
  if n == 0:
    return torch.zeros(0, dtype=torch.float64)
  h = float(config.h)
  qtab = phase_pulse(config).samples
  csum = torch.cumsum(ext[:n], 0)
  theta = initial.phase_state + math.pi * h * torch.cat(
      [torch.zeros(1, dtype=torch.float64), csum[:n - 1]])
  # Row n holds the symbols n..n+L-1 of the extended sequence, i.e. the
  # symbols I_{n-L+1}..I_n still inside the phase pulse.
  windows = ext.unfold(0, L, 1)[:n]
  offsets = (L - 1 - torch.arange(L)).unsqueeze(1) * Q + torch.arange(
      Q).unsqueeze(0)
  partial = 2.0 * math.pi * h * (windows @ qtab[offsets])
  return (theta.unsqueeze(1) + partial).reshape(-1)


def modulate(i, config, initial=None):
  """Synthesizes the constant-envelope CPM waveform for the symbols.

  Args:
    i (CpmSymbols): The symbols to modulate.
    config (CpmConfig): The modulator configuration.
    initial (ModulatorState, optional): The modulator state before the first
      symbol. If `None` the zero state (no prior symbols) is used.
  Returns:
    The `ComplexWaveform` with `len(i) * Q` samples.
  """
  if initial is None:
    initial = ModulatorState.zero(config)
  phi = phase_trajectory(i, config, initial)
  return ComplexWaveform(
      torch.polar(torch.ones_like(phi), phi), config.sample_period)


def phase_state_after(i, config, initial=None):
  if initial is None:
    initial = ModulatorState.zero(config)
  ext = _extended_symbols(i, config, initial)
  n, L = len(i), config.pulse_len
  total = int(ext[:n].sum())
  theta = initial.phase_state + math.pi * float(config.h) * total
  sigma = ext[ext.numel() - (L - 1):].flip(0) if L > 1 else ext[:0]
  return ModulatorState(theta, sigma)


def tail_bits(state, z, config, target=0):
  """Finds `z` tail symbols driving the accumulated phase to `target`.

  The accumulated phase counts the phase state, the symbols still in the
  correlative state and the tail itself. Among the valid patterns the one with
  the smallest net phase excursion is returned, ties going to the
  lexicographically smallest pattern (-1 < +1).

  Args:
    state (ModulatorState): The modulator state before the tail.
    z (int): The number of tail symbols.
    config (CpmConfig): The modulator configuration (h must be 1/2).
    target (int): The wanted accumulated phase, in quarter turns.
      Default: 0
  Returns:
    The tail `CpmSymbols`.
  Raises:
    UnreachableStateError: If the parity of `z` cannot cancel the residue.
  """
  config.check_training()
  if z < 1:
    raise ValueError('Tail length must be >= 1: z={}'.format(z))
  residue = state.residue_quarter_turns()
  if (residue + z - target) % 2 != 0:
    raise UnreachableStateError(
        'Cannot cancel a residue of {} quarter turns with {} tail symbols '
        'toward {} quarter turns'.format(residue, z, target))
  best, best_cost = None, None
  for pattern in itertools.product((-1, 1), repeat=z):
    net = residue + sum(pattern) - target
    if net % 4 != 0:
      continue
    if best_cost is None or abs(net) < best_cost:
      best, best_cost = pattern, abs(net)
  return CpmSymbols(best)
