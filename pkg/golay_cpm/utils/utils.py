from __future__ import division
from __future__ import print_function

from concurrent import futures
import logging
import os
import sys
import time

import golay_cpm.core.env_vars as genv

_LOGGERS = dict()


def as_list(t):
  return t if isinstance(t, (tuple, list)) else [t]


def getenv_as(name, type, defval=None):
  env = os.environ.get(name, None)
  if type == bool:
    return defval if env is None else type(int(env))
  return defval if env is None else type(env)


def get_logger(name):
  """Returns a module logger writing timestamped lines to stderr.

  The level is read from the `GOLAY_CPM_LOG_LEVEL` environment variable the
  first time a given logger is requested.

  Args:
    name (str): The logger name, usually the module `__name__`.
  Returns:
    The configured `logging.Logger`.
  """
  logger = _LOGGERS.get(name, None)
  if logger is not None:
    return logger
  level = getenv_as(genv.LOG_LEVEL, str, defval='WARNING').upper()
  logger = logging.getLogger(name)
  logger.setLevel(level)
  logger.propagate = False
  formatter = logging.Formatter(
      fmt='%(asctime)-12s %(name)s %(levelname)s %(message)s',
      datefmt='%Y-%m-%d %H:%M:%S')
  sh = logging.StreamHandler()
  sh.setLevel(level)
  sh.setFormatter(formatter)
  logger.addHandler(sh)
  _LOGGERS[name] = logger
  return logger


def null_print(*args, **kwargs):
  return


def eprint(*args, **kwargs):
  print(*args, file=sys.stderr, **kwargs)


def get_print_fn(debug=None):
  if debug is None:
    debug = getenv_as(genv.DEBUG, bool, defval=False)
  return eprint if debug else null_print


def parallel_work(num_workers, fn, *args):
  """Executes fn in parallel threads with args and returns result list.

  Results come back in the order of the input arguments, whatever the number of
  workers, so callers can accumulate them deterministically.

  Args:
    num_workers: number of workers in thread pool to execute work.
    fn: python function for each thread to execute.
    *args: arguments used to call executor.map with.

  Raises:
    Exception: re-raises any exceptions that may have been raised by workers.
  """
  if num_workers is None or num_workers <= 1:
    return [fn(*a) for a in zip(*args)]
  with futures.ThreadPoolExecutor(max_workers=num_workers) as executor:
    results = executor.map(fn, *args)
    return [res for res in results]  # Iterating to re-raise any exceptions


def num_workers(defval=1):
  return max(1, getenv_as(genv.NUM_WORKERS, int, defval=defval))


class TimedScope(object):

  def __init__(self, msg='', printfn=None):
    if printfn is None:
      printfn = get_print_fn()
    self._msg = msg
    self._printfn = printfn

  def __enter__(self):
    self._start = time.time()
    return self

  def __exit__(self, type, value, traceback):
    self._printfn('{}{:.3f}ms'.format(self._msg,
                                      1000.0 * (time.time() - self._start)))
