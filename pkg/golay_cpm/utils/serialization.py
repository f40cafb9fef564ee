from __future__ import division
from __future__ import print_function

import collections
import csv
import io
import os

import golay_cpm.core.gcp as gcp

PROFILE_HEADER = ('lag_over_T', 'magnitude')


def _format_value(v):
  # repr() round-trips floats exactly, including inf and nan.
  return repr(float(v))


def _ensure_parent(path):
  folder = os.path.dirname(path)
  if folder and not os.path.isdir(folder):
    os.makedirs(folder)


def write_columns(path, columns):
  """Writes an ordered mapping of equal-length float columns as CSV.

  Args:
    path (str): The destination file.
    columns (OrderedDict): Column name to list of values.
  """
  names = list(columns.keys())
  lengths = set(len(columns[k]) for k in names)
  if len(lengths) > 1:
    raise ValueError('Columns have different lengths: {}'.format(
        dict((k, len(columns[k])) for k in names)))
  _ensure_parent(path)
  with io.open(path, 'w', encoding='utf-8', newline='') as fd:
    writer = csv.writer(fd, lineterminator='\n')
    writer.writerow(names)
    for row in zip(*[columns[k] for k in names]):
      writer.writerow([_format_value(v) for v in row])


def read_columns(path):
  """Reads a CSV written by `write_columns` back into float columns."""
  with io.open(path, 'r', encoding='utf-8', newline='') as fd:
    reader = csv.reader(fd)
    try:
      names = next(reader)
    except StopIteration:
      raise ValueError('Empty CSV file: {}'.format(path))
    columns = collections.OrderedDict((k, []) for k in names)
    for lineno, row in enumerate(reader, 2):
      if len(row) != len(names):
        raise ValueError('{}:{}: expected {} fields, got {}'.format(
            path, lineno, len(names), len(row)))
      for k, v in zip(names, row):
        columns[k].append(float(v))
  return columns


def profile_columns(profiles, symbol_period=1.0):
  """Builds CSV columns for one or more normalized profiles.

  A single profile uses the `lag_over_T,magnitude` layout; several profiles
  sharing a lag grid get one `<label>_magnitude` column each.

  Args:
    profiles (OrderedDict): Label to `CorrelationProfile`.
    symbol_period (float): The symbol duration `T`.
      Default: 1.0
  Returns:
    The column mapping.
  """
  labels = list(profiles.keys())
  first = profiles[labels[0]]
  columns = collections.OrderedDict()
  columns[PROFILE_HEADER[0]] = (first.lags / symbol_period).tolist()
  if len(labels) == 1:
    columns[PROFILE_HEADER[1]] = first.magnitude().tolist()
    return columns
  for label in labels:
    profile = profiles[label]
    if len(profile) != len(first):
      raise ValueError('Profile "{}" has a different lag grid'.format(label))
    columns['{}_magnitude'.format(label)] = profile.magnitude().tolist()
  return columns


def mse_columns(report):
  columns = collections.OrderedDict()
  columns['snr_db'] = report.snr_grid.tolist()
  for label in report.labels:
    columns['{}_mse_db'.format(label)] = report.mse_db(label)
  columns['crlb_db'] = report.crlb_db()
  return columns


def ber_columns(report):
  columns = collections.OrderedDict()
  columns['snr_db'] = report.snr_grid.tolist()
  for label in report.labels:
    columns['{}_ber'.format(label)] = report.ber[label].tolist()
  return columns


def save_profiles(profiles, path, symbol_period=1.0):
  write_columns(path, profile_columns(profiles, symbol_period=symbol_period))


def save_mse_report(report, path):
  write_columns(path, mse_columns(report))


def save_ber_report(report, path):
  write_columns(path, ber_columns(report))


def save_sequences(sequences, path):
  """Writes sequences one per line in the `+`/`-` or digit text format."""
  _ensure_parent(path)
  with io.open(path, 'w', encoding='utf-8') as fd:
    for seq in sequences:
      fd.write(u'{}\n'.format(gcp.format_sequence(seq)))


def load_sequences(path, q=None):
  """Reads sequences written one per line; `#` starts a comment.

  Args:
    path (str): The sequence file.
    q (int, optional): The modulus of digit sequences.
  Returns:
    The list of `ZqSequence`.
  """
  sequences = []
  with io.open(path, 'r', encoding='utf-8') as fd:
    for lineno, line in enumerate(fd, 1):
      line = line.split('#', 1)[0].strip()
      if not line:
        continue
      try:
        sequences.append(gcp.parse_sequence(line, q=q))
      except ValueError as e:
        raise ValueError('{}:{}: {}'.format(path, lineno, e))
  return sequences
