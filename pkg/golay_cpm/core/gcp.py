from __future__ import division
from __future__ import print_function

from fractions import Fraction
import itertools
import math

import torch
from golay_cpm.core.cpm import CpmSymbols

AACF = 'aperiodic'
PACF = 'periodic'

# Quarter-turn powers of j as exact (real, imag) pairs.
_J_POWERS = torch.tensor([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=torch.int64)


class ZqSequence(object):
  """A sequence over the integers modulo an even `modulus`."""

  def __init__(self, values, modulus):
    self.modulus = int(modulus)
    if self.modulus < 2 or self.modulus % 2 != 0:
      raise ValueError('Modulus must be a positive even integer: {}'.format(
          modulus))
    values = torch.as_tensor(values, dtype=torch.int64).flatten()
    if values.numel() and (values.min() < 0 or values.max() >= self.modulus):
      raise ValueError('Values out of range for Z_{}: {}'.format(
          self.modulus, values.tolist()))
    self.values = values

  def __len__(self):
    return self.values.numel()

  def __eq__(self, other):
    return (isinstance(other, ZqSequence) and
            self.modulus == other.modulus and
            torch.equal(self.values, other.values))

  def __repr__(self):
    return 'ZqSequence(q={}, {})'.format(self.modulus, format_sequence(self))

  def tolist(self):
    return self.values.tolist()

  def is_exact(self):
    return self.modulus in (2, 4)

  def gaussian_units(self):
    """Returns `exp(j 2 pi v / q)` as exact integer (real, imag) tensors.

    Only available for q in {2, 4}, where the values are powers of j.
    """
    assert self.is_exact(), 'Exact units need q in {{2, 4}}: q={}'.format(
        self.modulus)
    units = _J_POWERS[self.values * (4 // self.modulus)]
    return units[:, 0], units[:, 1]

  def to_unit_circle(self):
    if self.is_exact():
      re, im = self.gaussian_units()
      return torch.complex(re.to(torch.float64), im.to(torch.float64))
    angle = (2.0 * math.pi / self.modulus) * self.values.to(torch.float64)
    return torch.polar(torch.ones_like(angle), angle)

  def to_bipolar(self):
    if self.modulus != 2:
      raise ValueError('Bipolar mapping needs a binary sequence: q={}'.format(
          self.modulus))
    return 1 - 2 * self.values


class GbfSpec(object):
  """Parameters of a Davis-Jedwab generalized Boolean function.

  Args:
    q (int): The even alphabet modulus.
    nu (int): The number of variables, the sequence length being `2**nu`.
    perm (list): A permutation of `1..nu`.
    linear_coeffs (list): The `nu` linear coefficients `c_k` in Z_q.
    const_term (int): The constant `c` in Z_q.
    pair_offset (int): The offset `c'` added to the second sequence.
  """

  def __init__(self, q, nu, perm, linear_coeffs, const_term=0, pair_offset=0):
    self.q = int(q)
    self.nu = int(nu)
    if self.q < 2 or self.q % 2 != 0:
      raise ValueError('q must be a positive even integer: {}'.format(q))
    if self.nu < 1:
      raise ValueError('nu must be positive: {}'.format(nu))
    self.perm = tuple(int(p) for p in perm)
    if sorted(self.perm) != list(range(1, self.nu + 1)):
      raise ValueError('Not a permutation of 1..{}: {}'.format(
          self.nu, list(perm)))
    self.linear_coeffs = tuple(int(c) % self.q for c in linear_coeffs)
    if len(self.linear_coeffs) != self.nu:
      raise ValueError('Expected {} linear coefficients, got {}'.format(
          self.nu, len(self.linear_coeffs)))
    self.const_term = int(const_term) % self.q
    self.pair_offset = int(pair_offset) % self.q

  @property
  def length(self):
    return 1 << self.nu

  def terms(self):
    """Returns the monomials of `f` as a list of `(coeff, variables)`."""
    half = self.q // 2
    terms = [(half, (self.perm[k], self.perm[k + 1]))
             for k in range(self.nu - 1)]
    terms += [(c, (k + 1,)) for k, c in enumerate(self.linear_coeffs) if c]
    if self.const_term:
      terms.append((self.const_term, ()))
    return terms

  def __eq__(self, other):
    return isinstance(other, GbfSpec) and self.key() == other.key()

  def __hash__(self):
    return hash(self.key())

  def key(self):
    return (self.q, self.nu, self.perm, self.linear_coeffs, self.const_term,
            self.pair_offset)

  def __repr__(self):
    return ('GbfSpec(q={}, nu={}, perm={}, c={}, const={}, offset={})'.format(
        self.q, self.nu, list(self.perm), list(self.linear_coeffs),
        self.const_term, self.pair_offset))


class GcpPair(object):

  def __init__(self, a, b, origin=None):
    if len(a) != len(b) or a.modulus != b.modulus:
      raise ValueError(
          'Pair sequences must share length and modulus: {}/{} vs {}/{}'.format(
              len(a), a.modulus, len(b), b.modulus))
    self.a = a
    self.b = b
    self.origin = origin

  def __len__(self):
    return len(self.a)

  @property
  def modulus(self):
    return self.a.modulus

  def energy(self):
    """The in-phase correlation sum `rho_a(0) + rho_b(0)`."""
    return 2 * len(self)

  def __repr__(self):
    return '{} / {}'.format(format_sequence(self.a), format_sequence(self.b))


class CorrelationSeq(object):
  """Correlation values indexed by integer time-shifts."""

  def __init__(self, lags, values, kind):
    self.lags = torch.as_tensor(lags, dtype=torch.int64)
    self.values = torch.as_tensor(values, dtype=torch.complex128)
    self.kind = kind

  def __len__(self):
    return self.values.numel()

  def at(self, k):
    index = int(k) - int(self.lags[0])
    if index < 0 or index >= len(self):
      return complex(0.0)
    return complex(self.values[index].item())


class PseudoSymbols(object):
  """Unit-magnitude complex amplitudes weighting the dominant Laurent pulse."""

  def __init__(self, values):
    self.values = torch.as_tensor(values, dtype=torch.complex128).flatten()
    if self.values.numel() and torch.max(
        torch.abs(self.values.abs() - 1.0)) > 1e-9:
      raise ValueError('Pseudo-symbols must have unit magnitude')

  def __len__(self):
    return self.values.numel()

  def __getitem__(self, index):
    if isinstance(index, slice):
      return PseudoSymbols(self.values[index])
    return complex(self.values[index].item())

  def quarter_turns(self):
    """Returns the Z_4 exponents `e` with `gamma = j**e`, if all exist."""
    turns = torch.angle(self.values) / (0.5 * math.pi)
    k = torch.round(turns)
    if self.values.numel() and torch.max(torch.abs(turns - k)) > 1e-9:
      raise ValueError('Pseudo-symbols are not powers of j')
    return torch.remainder(k.to(torch.int64), 4)

  def to_zq(self):
    return ZqSequence(self.quarter_turns(), 4)


def boolean_sequence(terms, nu, q):
  """Evaluates a generalized Boolean function over all of `{0,1}**nu`.

  Index `i` decomposes as `i = sum(i_k 2**(k-1))`, `x_1` being the least
  significant bit.

  Args:
    terms (list): The monomials as `(coeff, variables)` tuples, `variables`
      listing 1-based variable indices (empty for the constant).
    nu (int): The number of variables.
    q (int): The even alphabet modulus.
  Returns:
    The `ZqSequence` of length `2**nu`.
  """
  if q < 2 or q % 2 != 0:
    raise ValueError('q must be a positive even integer: {}'.format(q))
  index = torch.arange(1 << nu, dtype=torch.int64)
  f = torch.zeros(1 << nu, dtype=torch.int64)
  for coeff, variables in terms:
    mono = torch.ones(1 << nu, dtype=torch.int64)
    for var in variables:
      if var < 1 or var > nu:
        raise ValueError('Variable x{} out of range 1..{}'.format(var, nu))
      mono = mono * ((index >> (var - 1)) & 1)
    f = f + int(coeff) * mono
  return ZqSequence(torch.remainder(f, q), q)


def variable_sequence(var, nu, q):
  return boolean_sequence([(1, (var,))], nu, q)


def davis_jedwab_pair(spec):
  f = boolean_sequence(spec.terms(), spec.nu, spec.q)
  x = variable_sequence(spec.perm[0], spec.nu, spec.q).values
  g = torch.remainder(f.values + (spec.q // 2) * x + spec.pair_offset, spec.q)
  return GcpPair(f, ZqSequence(g, spec.q), origin=spec)


def enumerate_gbf_specs(nu, q=2):
  """Yields every Davis-Jedwab spec for the given `nu` and `q`.

  Permutations `pi` and their reversal describe the same quadratic form, so
  only one of each is generated.
  """
  for perm in itertools.permutations(range(1, nu + 1)):
    if nu > 1 and perm[0] > perm[-1]:
      continue
    for coeffs in itertools.product(range(q), repeat=nu):
      for const_term in range(q):
        for pair_offset in range(q):
          yield GbfSpec(q, nu, perm, coeffs, const_term, pair_offset)


def _exact_aacf(seq):
  re, im = seq.gaussian_units()
  n = len(seq)
  rr = torch.zeros(n, dtype=torch.int64)
  ri = torch.zeros(n, dtype=torch.int64)
  for k in range(n):
    ar, ai = re[:n - k], im[:n - k]
    br, bi = re[k:], im[k:]
    # x_n * conj(x_{n+k}) on Gaussian integers.
    rr[k] = torch.sum(ar * br + ai * bi)
    ri[k] = torch.sum(ai * br - ar * bi)
  return rr, ri


def _as_complex(x):
  if isinstance(x, ZqSequence):
    return x.to_unit_circle()
  if isinstance(x, PseudoSymbols):
    return x.values
  return torch.as_tensor(x, dtype=torch.complex128).flatten()


def _mirror(lag_values):
  # Builds lags -(N-1)..N-1 from the non-negative half.
  n = lag_values.numel()
  values = torch.cat([lag_values[1:].flip(0).conj(), lag_values])
  return CorrelationSeq(torch.arange(-(n - 1), n), values, AACF)


def aacf(x):
  """Computes the aperiodic autocorrelation of a sequence.

  Sequences over Z_2 or Z_4 are correlated with exact Gaussian-integer
  arithmetic; everything else in complex floating point.

  Args:
    x: A `ZqSequence`, `PseudoSymbols` or array of complex numbers.
  Returns:
    The `CorrelationSeq` over lags `-(N-1)..N-1`.
  """
  if isinstance(x, PseudoSymbols):
    try:
      x = x.to_zq()
    except ValueError:
      pass
  if isinstance(x, ZqSequence) and x.is_exact():
    if len(x) == 0:
      raise ValueError('AACF of an empty sequence')
    rr, ri = _exact_aacf(x)
    return _mirror(torch.complex(rr.to(torch.float64), ri.to(torch.float64)))
  x = _as_complex(x)
  n = x.numel()
  if n == 0:
    raise ValueError('AACF of an empty sequence')
  rho = torch.stack([torch.sum(x[:n - k] * x[k:].conj()) for k in range(n)])
  return _mirror(rho)


def pacf(x):
  if isinstance(x, PseudoSymbols):
    try:
      x = x.to_zq()
    except ValueError:
      pass
  if isinstance(x, ZqSequence) and x.is_exact() and len(x):
    re, im = x.gaussian_units()
    values = []
    for k in range(len(x)):
      br, bi = torch.roll(re, -k), torch.roll(im, -k)
      values.append(
          complex(
              float(torch.sum(re * br + im * bi)),
              float(torch.sum(im * br - re * bi))))
    return CorrelationSeq(
        torch.arange(len(x)), torch.tensor(values, dtype=torch.complex128),
        PACF)
  x = _as_complex(x)
  n = x.numel()
  if n == 0:
    raise ValueError('PACF of an empty sequence')
  phi = torch.stack([torch.sum(x * torch.roll(x, -k).conj()) for k in range(n)])
  return CorrelationSeq(torch.arange(n), phi, PACF)


def gcp_defect(pair):
  """Returns `max |rho_a(k) + rho_b(k)|` over the shifts `k != 0`.

  A zero defect certifies a Golay complementary pair. For single-element
  sequences there is no out-of-phase shift and the defect is zero.
  """
  if len(pair.a) != len(pair.b):
    raise ValueError('Length mismatch: {} vs {}'.format(
        len(pair.a), len(pair.b)))
  ra, rb = aacf(pair.a), aacf(pair.b)
  total = ra.values + rb.values
  total = torch.cat([total[:len(pair.a) - 1], total[len(pair.a):]])
  if total.numel() == 0:
    return 0.0
  return torch.max(total.abs()).item()


def diff_encode(c):
  """Differentially encodes `[C, C]` into `2N` bipolar CPM symbols.

  `I_m = (2 C_m - 1)(2 C_{m-1} - 1)`, with the boundary bit `C_{-1} = 1`.
  """
  if c.modulus != 2:
    raise ValueError('Differential encoding needs a binary sequence: q={}'
                     .format(c.modulus))
  ct = torch.cat([c.values, c.values])
  prev = torch.cat([torch.ones(1, dtype=torch.int64), ct[:-1]])
  return CpmSymbols((2 * ct - 1) * (2 * prev - 1))


def pseudo_symbols(i, h=Fraction(1, 2)):
  if not isinstance(i, CpmSymbols):
    i = CpmSymbols(i)
  h = Fraction(h).limit_denominator(1 << 16)
  csum = torch.cumsum(i.values, 0)
  if h == Fraction(1, 2):
    units = _J_POWERS[torch.remainder(csum, 4)].to(torch.float64)
    return PseudoSymbols(torch.complex(units[:, 0], units[:, 1]))
  angle = math.pi * float(h) * csum.to(torch.float64)
  return PseudoSymbols(torch.polar(torch.ones_like(angle), angle))


def closed_form_turns(c):
  """Z_4 exponents of the closed-form pseudo-symbols of `diff([C, C])`."""
  if c.modulus != 2:
    raise ValueError('Closed form needs a binary sequence: q={}'.format(
        c.modulus))
  n = len(c)
  idx = torch.arange(n, dtype=torch.int64)
  first = idx + 3 + 2 * c.values
  second = idx + 3 + 2 * c.values + n
  return torch.remainder(torch.cat([first, second]), 4)


def pseudo_symbols_closed(c):
  units = _J_POWERS[closed_form_turns(c)].to(torch.float64)
  return PseudoSymbols(torch.complex(units[:, 0], units[:, 1]))


def is_periodic(gammas):
  n = len(gammas) // 2
  return torch.allclose(gammas.values[:n], gammas.values[n:2 * n])


def symbols_from_pseudo(gammas, prior=1.0):
  """Inverts the h=1/2 pseudo-symbol map.

  Consecutive pseudo-symbols must differ by a factor of +j or -j, since
  `gamma_n = gamma_{n-1} * j * I_n`.

  Args:
    gammas (PseudoSymbols): The wanted pseudo-symbols.
    prior (complex): The pseudo-symbol preceding the first one, i.e. the
      accumulated phase factor before the sequence.
      Default: 1
  Returns:
    The `CpmSymbols` realizing the pseudo-symbols.
  """
  values = gammas.values
  prev = torch.cat(
      [torch.tensor([complex(prior)], dtype=torch.complex128), values[:-1]])
  ratio = values / (1j * prev)
  sym = torch.round(ratio.real)
  if values.numel() and (torch.max(torch.abs(ratio.imag)) > 1e-9 or
                         torch.max(torch.abs(ratio.real - sym)) > 1e-9):
    raise ValueError('Pseudo-symbols are not reachable with h=1/2 steps')
  return CpmSymbols(sym.to(torch.int64))


def quaternary_lift(spec):
  """Lifts a binary Davis-Jedwab spec to the Z_4 pair of its pseudo-symbols.

  The lifted function is `2 f + x_1 + 2 x_2 + 3` (mod 4), which is again of the
  Davis-Jedwab form with `c_1 -> 1 + 2 c_1`, `c_2 -> 2 + 2 c_2`,
  `c_k -> 2 c_k`, `c -> 2 c + 3` and `c' -> 2 c'`.
  """
  if spec.q != 2:
    raise ValueError('Quaternary lift needs a binary spec: q={}'.format(
        spec.q))
  if spec.nu < 2:
    raise ValueError('Quaternary lift needs nu >= 2: nu={}'.format(spec.nu))
  coeffs = [2 * c for c in spec.linear_coeffs]
  coeffs[0] += 1
  coeffs[1] += 2
  lifted = GbfSpec(4, spec.nu, spec.perm, coeffs, 2 * spec.const_term + 3,
                   2 * spec.pair_offset)
  return davis_jedwab_pair(lifted)


_MINUS_CHARS = ('-', u'−')


def format_sequence(seq):
  if seq.modulus == 2:
    return ''.join('+' if v == 0 else '-' for v in seq.values.tolist())
  if seq.modulus > 10:
    return ' '.join(str(v) for v in seq.values.tolist())
  return ''.join(str(v) for v in seq.values.tolist())


def parse_sequence(text, q=None):
  """Parses a sequence written as `+`/`-` (binary) or digits `0..q-1`.

  Args:
    text (str): The sequence text. Whitespace is ignored unless `q > 10`, in
      which case values are whitespace separated.
    q (int, optional): The modulus. Inferred as 2 for `+`/`-` text.
  Returns:
    The parsed `ZqSequence`.
  """
  text = text.strip()
  if q is not None and q > 10:
    return ZqSequence([int(v) for v in text.split()], q)
  chars = [ch for ch in text if not ch.isspace()]
  if chars and all(ch == '+' or ch in _MINUS_CHARS for ch in chars):
    if q not in (None, 2):
      raise ValueError('Signed text describes a binary sequence, not q={}'
                       .format(q))
    return ZqSequence([0 if ch == '+' else 1 for ch in chars], 2)
  if q is None:
    raise ValueError('Modulus required for digit sequence: {}'.format(text))
  try:
    return ZqSequence([int(ch) for ch in chars], q)
  except ValueError as e:
    raise ValueError('Invalid sequence text "{}": {}'.format(text, e))
