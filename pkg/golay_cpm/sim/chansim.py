from __future__ import division
from __future__ import print_function

import collections
import math

import torch
import golay_cpm.core.burst as burst
import golay_cpm.core.cpm as cpm
import golay_cpm.core.env_vars as genv
import golay_cpm.core.gcp as gcp
import golay_cpm.core.laurent as laurent
import golay_cpm.utils.utils as gu

PERFECT = 'perfect'
ESTIMATED = 'estimated'
CSI_MODES = (PERFECT, ESTIMATED)

RANK_TOLERANCE = 1e-10

LsDiagnostics = collections.namedtuple(
    'LsDiagnostics', 'condition_number rank_deficient singular_values')


def _logger():
  return gu.get_logger(__name__)


def _stream_seed(seed, index):
  return (int(seed) * 1000003 + int(index) * 7919 + 1) % (1 << 62)


def _generator(seed):
  return torch.Generator().manual_seed(int(seed))


def _complex_normal(shape, generator):
  re = torch.randn(shape, generator=generator, dtype=torch.float64)
  im = torch.randn(shape, generator=generator, dtype=torch.float64)
  return torch.complex(re, im) * math.sqrt(0.5)


def to_db(x):
  return 10.0 * math.log10(x) if x > 0 else float('-inf')


def noise_variance(snr_db, oversampling):
  """Per-sample noise variance for an `Es/N0` of `snr_db`.

  A unit-envelope waveform carries `Es = Q` per symbol, hence
  `sigma^2 = Q 10**(-snr_db/10)`.
  """
  if math.isinf(snr_db) and snr_db > 0:
    return 0.0
  return oversampling * 10.0**(-snr_db / 10.0)


class ChannelTaps(object):
  """A symbol-spaced multipath channel `h(t) = sum(h_i delta(t - i T))`."""

  def __init__(self, taps, spacing=1.0):
    self.taps = torch.as_tensor(taps, dtype=torch.complex128).flatten()
    if self.taps.numel() < 1:
      raise ValueError('A channel needs at least one tap')
    self.spacing = float(spacing)

  def __len__(self):
    return self.taps.numel()

  def power(self):
    return torch.sum(self.taps.abs()**2).item()

  def __repr__(self):
    return 'ChannelTaps(P={}, power={:.4f})'.format(len(self), self.power())


def draw_channel(p, rng_seed=None, generator=None, spacing=1.0):
  """Draws a uniform power delay profile channel.

  Args:
    p (int): The number of taps `P`.
    rng_seed (int, optional): The seed of a fresh random stream.
    generator (torch.Generator, optional): A random stream to draw from,
      used instead of `rng_seed`.
    spacing (float): The tap spacing `T`.
      Default: 1.0
  Returns:
    The `ChannelTaps`, zero-mean complex Gaussian with variance `1/P` each.
  """
  if p < 1:
    raise ValueError('Number of taps must be >= 1: p={}'.format(p))
  if generator is None:
    generator = _generator(0 if rng_seed is None else rng_seed)
  taps = _complex_normal((p,), generator) * math.sqrt(1.0 / p)
  return ChannelTaps(taps, spacing=spacing)


def _taps_oversampling(x, taps):
  q = int(round(taps.spacing / x.sample_period))
  if q < 1 or abs(q * x.sample_period - taps.spacing) > 1e-9 * taps.spacing:
    raise ValueError(
        'Tap spacing {} is not a multiple of the sample period {}'.format(
            taps.spacing, x.sample_period))
  return q


def convolve(x, taps):
  """Noise-free channel output, `len(x) + (P - 1) Q` samples long."""
  Q = _taps_oversampling(x, taps)
  P = len(taps)
  y = torch.zeros(len(x) + (P - 1) * Q, dtype=torch.complex128)
  for i in range(P):
    y[i * Q:i * Q + len(x)] += taps.taps[i] * x.samples
  return cpm.ComplexWaveform(y, x.sample_period, start_time=x.start_time)


def propagate(x, taps, snr_db, rng_seed=None, generator=None):
  """Passes a waveform through the channel and adds white Gaussian noise.

  Args:
    x (ComplexWaveform): The transmitted waveform.
    taps (ChannelTaps): The channel.
    snr_db (float): The `Es/N0` in dB; `inf` switches the noise off.
    rng_seed (int, optional): The seed of a fresh noise stream.
    generator (torch.Generator, optional): A noise stream to draw from.
  Returns:
    The received `ComplexWaveform`.
  """
  y = convolve(x, taps)
  var = noise_variance(snr_db, _taps_oversampling(x, taps))
  if var == 0.0:
    return y
  if generator is None:
    generator = _generator(0 if rng_seed is None else rng_seed)
  noise = _complex_normal((len(y),), generator) * math.sqrt(var)
  return cpm.ComplexWaveform(y.samples + noise, y.sample_period,
                             start_time=y.start_time)


class LsEstimator(object):
  """Least-squares solver for `y = A h + w` with a precomputed inverse.

  Args:
    matrix (torch.Tensor): The complex `(M, P)` model matrix `A`.
  """

  def __init__(self, matrix):
    self.matrix = torch.as_tensor(matrix, dtype=torch.complex128)
    if self.matrix.dim() != 2 or self.matrix.shape[0] < self.matrix.shape[1]:
      raise ValueError('Underdetermined LS model: shape={}'.format(
          list(self.matrix.shape)))
    sv = torch.linalg.svdvals(self.matrix)
    smax, smin = sv[0].item(), sv[-1].item()
    rank_deficient = smin < RANK_TOLERANCE * smax
    cond = float('inf') if smin == 0.0 else smax / smin
    self.diagnostics = LsDiagnostics(cond, rank_deficient, sv)
    ah = self.matrix.conj().t()
    if rank_deficient:
      self.inverse = torch.linalg.pinv(self.matrix, rtol=RANK_TOLERANCE)
    else:
      self.inverse = torch.linalg.solve(ah @ self.matrix, ah)

  @property
  def rank_deficient(self):
    return self.diagnostics.rank_deficient

  def estimate(self, y):
    return self.inverse @ torch.as_tensor(y, dtype=torch.complex128)

  def expected_mse(self, sigma2):
    """Returns `sigma^2 tr(W W^H)`, the noise part of the total MSE."""
    return sigma2 * torch.sum(self.inverse.abs()**2).item()


def observation_windows(burst_, p):
  """Sample ranges of the training the estimator observes.

  A sample is used when it lies in a training block and its whole channel
  memory, `P - 1` symbols back, lies inside the burst. The first block loses
  its head to the channel memory, the second one is observed in full.

  Args:
    burst_ (TrainingBurst): The transmitted burst.
    p (int): The number of channel taps.
  Returns:
    A list of `(start, stop)` sample ranges.
  """
  if p < 1:
    raise ValueError('Number of taps must be >= 1: p={}'.format(p))
  memory = (p - 1) * burst_.config.oversampling
  windows = []
  for block in ('train_c', 'train_d'):
    if block in burst_.boundaries:
      start, stop = burst_.sample_range(block)
      if max(start, memory) < stop:
        windows.append((max(start, memory), stop))
  if not windows:
    raise ValueError('Burst too short for {} taps: {} symbols'.format(
        p, burst_.num_symbols))
  return windows


def observation_matrix(burst_, p):
  """Stacks the burst, delayed by `0..P-1` symbols, over the observed windows."""
  Q = burst_.config.oversampling
  x = burst_.waveform.samples.to(torch.complex128)
  rows = []
  for start, stop in observation_windows(burst_, p):
    cols = [x[start - i * Q:stop - i * Q] for i in range(p)]
    rows.append(torch.stack(cols, dim=1))
  return torch.cat(rows, dim=0)


def observation(received, burst_, p):
  windows = observation_windows(burst_, p)
  if len(received) < windows[-1][1]:
    raise ValueError('Received waveform too short: {} < {} samples'.format(
        len(received), windows[-1][1]))
  return torch.cat([received.samples[s:e] for s, e in windows])


def reference_energy(burst_, p):
  """Energy of the training waveform inside the observation windows."""
  return sum(
      torch.sum(burst_.waveform.samples[s:e].abs()**2).item()
      for s, e in observation_windows(burst_, p))


def ls_estimate(received, burst_, p, estimator=None):
  """Least-squares channel estimate from the observed training windows.

  Args:
    received (ComplexWaveform): The received burst.
    burst_ (TrainingBurst): The transmitted burst.
    p (int): The number of taps to estimate.
    estimator (LsEstimator, optional): A prebuilt estimator for this burst.
  Returns:
    A `(ChannelTaps, LsDiagnostics)` tuple. Rank-deficient systems are solved
    with the pseudo-inverse and flagged in the diagnostics.
  """
  if p < 1:
    raise ValueError('Number of taps must be >= 1: p={}'.format(p))
  if estimator is None:
    estimator = LsEstimator(observation_matrix(burst_, p))
  if estimator.rank_deficient:
    _logger().warning('Rank-deficient LS system (condition number %g)',
                      estimator.diagnostics.condition_number)
  taps = estimator.estimate(observation(received, burst_, p))
  return (ChannelTaps(taps, spacing=burst_.config.symbol_period),
          estimator.diagnostics)


def crlb(p, snr_db, ref_energy, oversampling=1):
  """Total-MSE lower bound `P sigma^2 / E` for ideal training.

  Args:
    p (int): The number of taps.
    snr_db (float): The `Es/N0` in dB.
    ref_energy (float): The discrete energy of the reference training.
    oversampling (int): The samples per symbol setting the noise variance.
      Default: 1
  Returns:
    The bound.
  """
  if ref_energy <= 0:
    raise ValueError('Reference energy must be positive: {}'.format(
        ref_energy))
  return p * noise_variance(snr_db, oversampling) / ref_energy


def zadoff_chu(n, root=1):
  """A unit-magnitude sequence with ideal periodic autocorrelation."""
  if n < 1 or math.gcd(root, n) != 1:
    raise ValueError('Invalid Zadoff-Chu parameters: n={} root={}'.format(
        n, root))
  k = torch.arange(n, dtype=torch.float64)
  if n % 2 == 0:
    angle = -math.pi * root * k * k / n
  else:
    angle = -math.pi * root * k * (k + 1) / n
  return torch.polar(torch.ones_like(angle), angle)


def ideal_training_mse(n, p, snr_db, trials, seed):
  """Monte Carlo LS MSE of symbol-rate Zadoff-Chu training with a cyclic prefix.

  Returns:
    A `(mse, bound)` tuple, `bound` being the matching `crlb`.
  """
  x = zadoff_chu(n)
  index = (torch.arange(n).unsqueeze(1) - torch.arange(p).unsqueeze(0)) % n
  estimator = LsEstimator(x[index])
  sigma = math.sqrt(noise_variance(snr_db, 1))
  g = _generator(seed)
  h = _complex_normal((trials, p), g) * math.sqrt(1.0 / p)
  w = _complex_normal((trials, n), g) * sigma
  y = h @ estimator.matrix.t() + w
  err = y @ estimator.inverse.t() - h
  mse = torch.mean(torch.sum(err.abs()**2, dim=1)).item()
  return mse, crlb(p, snr_db, n, oversampling=1)


def energy_normalize(bursts, energy=None):
  """Rescales bursts to a common transmit energy.

  Args:
    bursts (list): The `TrainingBurst` objects.
    energy (float, optional): The target energy. Default: the energy of the
      first burst.
  Returns:
    The list of rescaled bursts.
  """
  bursts = gu.as_list(bursts)
  if energy is None:
    energy = bursts[0].energy()
  return [b.scaled(math.sqrt(energy / b.energy())) for b in bursts]


class MseReport(object):
  """Monte Carlo channel-estimation MSE per burst and SNR."""

  def __init__(self, snr_grid, labels, mse, per_tap, stderr, crlb, analytic,
               rank_deficient, trials, seed):
    self.snr_grid = torch.as_tensor(snr_grid, dtype=torch.float64)
    self.labels = list(labels)
    self.mse = mse
    self.per_tap = per_tap
    self.stderr = stderr
    self.crlb = crlb
    self.analytic = analytic
    self.rank_deficient = list(rank_deficient)
    self.trials = trials
    self.seed = seed

  def _row(self, label):
    if label not in self.labels:
      raise ValueError('Unknown label "{}": {}'.format(label, self.labels))
    return self.labels.index(label)

  def mse_db(self, label):
    return [to_db(v) for v in self.mse[self._row(label)].tolist()]

  def crlb_db(self):
    return [to_db(v) for v in self.crlb.tolist()]

  def gap_db(self, label, min_snr=None):
    """Mean distance from the CRLB, in dB, over SNRs `>= min_snr`."""
    mse, bound = self.mse_db(label), self.crlb_db()
    gaps = [
        m - b for s, m, b in zip(self.snr_grid.tolist(), mse, bound)
        if min_snr is None or s >= min_snr
    ]
    if not gaps:
      raise ValueError('No SNR points >= {}'.format(min_snr))
    return sum(gaps) / len(gaps)


def _is_factory(entry):
  return callable(entry) and not isinstance(entry, burst.TrainingBurst)


def _resolve_energy(entries, energy, seed):
  if energy is not None:
    return energy
  for entry in entries:
    if not _is_factory(entry):
      return entry.energy()
  return entries[0](_generator(_stream_seed(seed, -1))).energy()


def _mse_chunk(ctx, chunk, size):
  entries, estimators, energy, p, sigmas, seed = ctx
  g = _generator(_stream_seed(seed, chunk))
  num_snr, num_bursts = sigmas.numel(), len(entries)
  sums = torch.zeros(num_bursts, num_snr, p, dtype=torch.float64)
  sq = torch.zeros(num_bursts, num_snr, dtype=torch.float64)
  deficient = [0] * num_bursts
  with gu.TimedScope(msg='MSE chunk {} ({} trials): '.format(chunk, size)):
    for _ in range(size):
      h = draw_channel(p, generator=g).taps
      for b, entry in enumerate(entries):
        estimator = estimators[b]
        if estimator is None:
          fresh = energy_normalize([entry(g)], energy=energy)[0]
          estimator = LsEstimator(observation_matrix(fresh, p))
        if estimator.rank_deficient:
          deficient[b] += 1
        bias = estimator.inverse @ (estimator.matrix @ h) - h
        wu = estimator.inverse @ _complex_normal(
            (estimator.matrix.shape[0],), g)
        err = bias.unsqueeze(0) + sigmas.unsqueeze(1) * wu.unsqueeze(0)
        tap_sq = err.abs()**2
        sums[b] += tap_sq
        sq[b] += torch.sum(tap_sq, dim=1)**2
  return sums, sq, deficient


def _chunks(trials, chunk_trials):
  sizes = []
  while trials > 0:
    sizes.append(min(trials, chunk_trials))
    trials -= sizes[-1]
  return sizes


def mse_sweep(bursts,
              snr_grid,
              trials,
              seed,
              p=16,
              energy=None,
              num_workers=None):
  """Monte Carlo LS channel-estimation MSE of a set of training bursts.

  Every trial draws one channel shared by all bursts, plus one noise
  realization per burst scaled to each SNR. Trials are grouped in chunks of
  `GOLAY_CPM_CHUNK_TRIALS`, each with its own random stream derived from
  `(seed, chunk index)`, and accumulated in chunk order so results do not
  depend on the number of workers.

  Args:
    bursts (OrderedDict): Label to `TrainingBurst`, or to a callable taking a
      `torch.Generator` and returning a fresh burst for every trial.
    snr_grid (list): The `Es/N0` values in dB.
    trials (int): The number of trials per SNR.
    seed (int): The run seed.
    p (int): The number of channel taps.
      Default: 16
    energy (float, optional): The common transmit energy. Default: the energy
      of the first fixed burst.
    num_workers (int, optional): The thread count. Default: from
      `GOLAY_CPM_NUM_WORKERS`.
  Returns:
    The `MseReport`.
  """
  snr_grid = [float(s) for s in snr_grid]
  if not snr_grid or not bursts:
    raise ValueError('Empty SNR grid or burst set')
  if trials < 1:
    raise ValueError('Number of trials must be >= 1: {}'.format(trials))
  labels = list(bursts.keys())
  entries = [bursts[k] for k in labels]
  energy = _resolve_energy(entries, energy, seed)
  config = None
  estimators, normalized = [], []
  for entry in entries:
    if _is_factory(entry):
      estimators.append(None)
      normalized.append(None)
    else:
      fixed = energy_normalize([entry], energy=energy)[0]
      config = fixed.config
      estimators.append(LsEstimator(observation_matrix(fixed, p)))
      normalized.append(fixed)
  if config is None:
    config = entries[0](_generator(_stream_seed(seed, -1))).config
  Q = config.oversampling
  variances = torch.tensor([noise_variance(s, Q) for s in snr_grid],
                           dtype=torch.float64)
  ctx = (entries, estimators, energy, p, torch.sqrt(variances), seed)
  sizes = _chunks(trials, gu.getenv_as(genv.CHUNK_TRIALS, int, defval=250))
  if num_workers is None:
    num_workers = gu.num_workers()
  results = gu.parallel_work(num_workers, lambda k, n: _mse_chunk(ctx, k, n),
                             range(len(sizes)), sizes)
  num_bursts = len(entries)
  sums = torch.zeros(num_bursts, len(snr_grid), p, dtype=torch.float64)
  sq = torch.zeros(num_bursts, len(snr_grid), dtype=torch.float64)
  deficient = [0] * num_bursts
  for chunk_sums, chunk_sq, chunk_deficient in results:
    sums += chunk_sums
    sq += chunk_sq
    deficient = [a + b for a, b in zip(deficient, chunk_deficient)]
  per_tap = sums / trials
  mse = torch.sum(per_tap, dim=2)
  var = torch.clamp(sq / trials - mse**2, min=0.0)
  stderr = torch.sqrt(var / trials)
  reference = next((b for b in normalized if b is not None), None)
  if reference is None:
    reference = energy_normalize(
        [entries[0](_generator(_stream_seed(seed, -1)))], energy=energy)[0]
  ref_energy = reference_energy(reference, p)
  bound = torch.tensor([crlb(p, s, ref_energy, oversampling=Q)
                        for s in snr_grid], dtype=torch.float64)
  analytic = torch.full((num_bursts, len(snr_grid)), float('nan'),
                        dtype=torch.float64)
  for b, estimator in enumerate(estimators):
    if estimator is not None and not estimator.rank_deficient:
      analytic[b] = torch.tensor(
          [estimator.expected_mse(v) for v in variances.tolist()],
          dtype=torch.float64)
  for label, count in zip(labels, deficient):
    if count:
      _logger().warning('%s: %d of %d trials had a rank-deficient LS system',
                        label, count, trials)
  return MseReport(snr_grid, labels, mse, per_tap, stderr, bound, analytic,
                   deficient, trials, seed)


class BerReport(object):
  """Monte Carlo bit error rates per scheme and SNR."""

  def __init__(self, snr_grid, ber, errors, bits_simulated, trials, seed):
    self.snr_grid = torch.as_tensor(snr_grid, dtype=torch.float64)
    self.ber = collections.OrderedDict(ber)
    self.errors = collections.OrderedDict(errors)
    self.bits_simulated = bits_simulated
    self.trials = trials
    self.seed = seed

  @property
  def labels(self):
    return list(self.ber.keys())

  def merged(self, other):
    if not torch.equal(self.snr_grid, other.snr_grid):
      raise ValueError('Cannot merge reports over different SNR grids')
    ber = collections.OrderedDict(self.ber)
    ber.update(other.ber)
    errors = collections.OrderedDict(self.errors)
    errors.update(other.errors)
    return BerReport(self.snr_grid, ber, errors, self.bits_simulated,
                     self.trials, self.seed)

  def ber_floor(self):
    """Half an error over the simulated bits, standing in for a zero count."""
    return 0.5 / max(self.bits_simulated, 1)

  def snr_at(self, label, target=1e-3):
    """Interpolates, in log-BER, the SNR where `label` crosses `target`.

    Points without errors are clamped to `ber_floor()`, so a crossing into a
    zero-error point still lands between the two grid points.
    """
    floor = self.ber_floor()
    ber = [v if v > 0.0 else floor for v in self.ber[label].tolist()]
    snr = self.snr_grid.tolist()
    for k in range(1, len(ber)):
      if ber[k - 1] >= target > ber[k]:
        lo, hi = math.log10(ber[k - 1]), math.log10(ber[k])
        frac = (lo - math.log10(target)) / (lo - hi)
        return snr[k - 1] + frac * (snr[k] - snr[k - 1])
    return float('nan')


class ScFdeFrame(object):
  """Cyclic pseudo-symbol block layout and matched-filter statistics.

  A block of `K` payload pseudo-symbols `j**(m+3) (-1)**u_m` is preceded by
  its last `G` entries and followed by its first `L+1`, so that the
  symbol-rate matched-filter output is a circular convolution over the block.
  `G` is even so that the first prefix pseudo-symbol is reachable from the
  zero modulator state.
  """

  def __init__(self, config, payload_len, p):
    config.check_training()
    L = config.pulse_len
    self.prefix = p - 1 + L + (p - 1 + L) % 2
    self.postfix = L + 1
    if payload_len < self.prefix or payload_len % 4 != 0:
      raise ValueError(
          'Payload must be a multiple of 4 no shorter than the cyclic prefix '
          '({} symbols): {}'.format(self.prefix, payload_len))
    self.config = config
    self.payload_len = payload_len
    self.p = p
    self.c0 = laurent.c0_pulse(config).samples
    Q = config.oversampling
    # R(d) for d = -L..L, symbol-spaced autocorrelation of c0.
    r = []
    for d in range(-L, L + 1):
      s = abs(d) * Q
      r.append(torch.sum(self.c0[:self.c0.numel() - s] * self.c0[s:]).item())
    self.r = torch.tensor(r, dtype=torch.float64)
    self.r_freq = torch.fft.fft(self._wrap(self.r, -L)).real

  @property
  def num_symbols(self):
    return self.prefix + self.payload_len + self.postfix

  def _wrap(self, values, first_lag):
    out = torch.zeros(self.payload_len, dtype=torch.complex128)
    index = (torch.arange(values.numel()) + first_lag) % self.payload_len
    out.index_add_(0, index, values.to(torch.complex128))
    return out

  def payload_turns(self, bits):
    m = torch.arange(self.payload_len, dtype=torch.int64)
    return torch.remainder(m + 3 + 2 * bits, 4)

  def symbols(self, bits):
    turns = self.payload_turns(bits)
    K = self.payload_len
    frame = torch.cat([turns[K - self.prefix:], turns, turns[:self.postfix]])
    gammas = gcp.PseudoSymbols(torch.polar(
        torch.ones(frame.numel(), dtype=torch.float64),
        0.5 * math.pi * frame.to(torch.float64)))
    return gcp.symbols_from_pseudo(gammas, prior=1.0)

  def matched_filter(self, received):
    Q = self.config.oversampling
    n = torch.arange(self.prefix, self.prefix + self.payload_len)
    index = n.unsqueeze(1) * Q + torch.arange(self.c0.numel()).unsqueeze(0)
    return received.samples[index] @ self.c0.to(torch.complex128)

  def response(self, taps):
    """Symbol-rate response `g = h * R`, lags `-L..P-1+L`, on the block."""
    L = self.config.pulse_len
    h = taps.taps
    g = torch.zeros(h.numel() + 2 * L, dtype=torch.complex128)
    for i in range(h.numel()):
      g[i:i + 2 * L + 1] += h[i] * self.r
    return torch.fft.fft(self._wrap(g, -L))

  def equalize(self, z, taps, sigma2):
    gf = self.response(taps)
    w = gf.conj() / (gf.abs()**2 + sigma2 * self.r_freq)
    return torch.fft.ifft(w * torch.fft.fft(z))

  def detect(self, gammas):
    m = torch.arange(self.payload_len, dtype=torch.int64)
    derotate = torch.polar(
        torch.ones(self.payload_len, dtype=torch.float64),
        -0.5 * math.pi * (m + 3).to(torch.float64))
    return ((gammas * derotate).real < 0).to(torch.int64)


def _ber_chunk(ctx, chunk, size):
  frame, burst_, estimator, csi_mode, snr_grid, p, seed = ctx
  g = _generator(_stream_seed(seed, chunk))
  Q = frame.config.oversampling
  errors = [0] * len(snr_grid)
  with gu.TimedScope(msg='BER chunk {} ({} trials): '.format(chunk, size)):
    for _ in range(size):
      bits = torch.randint(
          0, 2, (frame.payload_len,), generator=g, dtype=torch.int64)
      waveform = cpm.modulate(frame.symbols(bits), frame.config)
      taps = draw_channel(
          p, generator=g, spacing=frame.config.symbol_period)
      for k, snr in enumerate(snr_grid):
        sigma2 = noise_variance(snr, Q)
        if csi_mode == ESTIMATED:
          rx_train = propagate(burst_.waveform, taps, snr, generator=g)
          csi, _ = ls_estimate(rx_train, burst_, p, estimator=estimator)
        else:
          csi = taps
        received = propagate(waveform, taps, snr, generator=g)
        gammas = frame.equalize(frame.matched_filter(received), csi, sigma2)
        errors[k] += int(torch.sum(frame.detect(gammas) != bits))
  return errors


def scfde_ber(burst_,
              payload_len,
              snr_grid,
              trials,
              seed,
              csi_mode=PERFECT,
              p=16,
              label=None,
              num_workers=None):
  """Bit error rate of an SC-FDE MMSE receiver behind a training burst.

  Payload bits ride on pseudo-symbols `j**(m+3) (-1)**u_m`, i.e. the
  differential encoding of the bits. The receiver matched-filters to `c0`,
  samples at the symbol rate, equalizes one cyclic block in the frequency
  domain with an MMSE filter and decides each bit on the derotated sign.

  Args:
    burst_ (TrainingBurst): The training burst, used for `estimated` CSI.
    payload_len (int): The FDE block size `K`, a multiple of 4.
    snr_grid (list): The `Es/N0` values in dB.
    trials (int): The number of blocks per SNR.
    seed (int): The run seed.
    csi_mode (str): `perfect` or `estimated` channel knowledge.
      Default: perfect
    p (int): The number of channel taps.
      Default: 16
    label (str, optional): The report label. Default: `csi_mode`.
    num_workers (int, optional): The thread count.
  Returns:
    The `BerReport`.
  """
  if csi_mode not in CSI_MODES:
    raise ValueError('Unknown CSI mode "{}", expected one of {}'.format(
        csi_mode, CSI_MODES))
  snr_grid = [float(s) for s in snr_grid]
  if not snr_grid:
    raise ValueError('Empty SNR grid')
  if trials < 1:
    raise ValueError('Number of trials must be >= 1: {}'.format(trials))
  frame = ScFdeFrame(burst_.config, payload_len, p)
  estimator = None
  if csi_mode == ESTIMATED:
    estimator = LsEstimator(observation_matrix(burst_, p))
  ctx = (frame, burst_, estimator, csi_mode, snr_grid, p, seed)
  sizes = _chunks(trials, gu.getenv_as(genv.CHUNK_TRIALS, int, defval=250))
  if num_workers is None:
    num_workers = gu.num_workers()
  results = gu.parallel_work(num_workers, lambda k, n: _ber_chunk(ctx, k, n),
                             range(len(sizes)), sizes)
  errors = [0] * len(snr_grid)
  for chunk_errors in results:
    errors = [a + b for a, b in zip(errors, chunk_errors)]
  bits = trials * payload_len
  label = csi_mode if label is None else label
  ber = torch.tensor([e / bits for e in errors], dtype=torch.float64)
  return BerReport(snr_grid, {label: ber}, {label: errors}, bits, trials, seed)
