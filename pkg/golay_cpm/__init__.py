import os

import golay_cpm.core.env_vars as genv


def _set_missing_env(name, value):
  if name not in os.environ:
    os.environ[name] = value


def _setup_default_env():
  _set_missing_env(genv.CHUNK_TRIALS, '250')


_setup_default_env()

try:
  from .version import __version__
except ImportError:
  # Source tree without a setup.py build.
  __version__ = '0.0+unknown'
