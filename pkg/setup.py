#!/usr/bin/env python

from __future__ import print_function

from setuptools import setup, find_packages
import distutils.command.clean
import glob
import os
import shutil
import subprocess

base_dir = os.path.dirname(os.path.abspath(__file__))


def _check_env_flag(name, default=''):
  return os.getenv(name, default).upper() in ['ON', '1', 'YES', 'TRUE', 'Y']


def get_git_head_sha(base_dir):
  try:
    return subprocess.check_output(['git', 'rev-parse', 'HEAD'],
                                   cwd=base_dir,
                                   stderr=subprocess.DEVNULL).decode(
                                       'ascii').strip()
  except (OSError, subprocess.CalledProcessError):
    return ''


def get_build_version(git_sha):
  version = os.getenv('GOLAY_CPM_VERSION', '0.1')
  if _check_env_flag('VERSIONED_GOLAY_CPM_BUILD', default='0') and git_sha:
    version += '+' + git_sha[:7]
  return version


def create_version_files(base_dir, version, git_sha):
  print('Building golay_cpm version: {}'.format(version))
  print('Commit ID: {}'.format(git_sha))
  py_version_path = os.path.join(base_dir, 'golay_cpm', 'version.py')
  with open(py_version_path, 'w') as f:
    f.write('# Autogenerated file, do not edit!\n')
    f.write("__version__ = '{}'\n".format(version))
    f.write("__gitrev__ = '{}'\n".format(git_sha))


class Clean(distutils.command.clean.clean):

  def run(self):
    for wildcard in ('build', 'dist', '*.egg-info', 'golay_cpm/version.py'):
      for filename in glob.glob(os.path.join(base_dir, wildcard)):
        try:
          os.remove(filename)
        except OSError:
          shutil.rmtree(filename, ignore_errors=True)
    distutils.command.clean.clean.run(self)


git_sha = get_git_head_sha(base_dir)
version = get_build_version(git_sha)
create_version_files(base_dir, version, git_sha)

setup(
    name='golay_cpm',
    version=version,
    description=('CPM training waveforms from differentially encoded Golay '
                 'complementary pairs'),
    packages=find_packages(exclude=['build', 'test', 'docs']),
    python_requires='>=3.6',
    install_requires=[
        'torch>=1.11',
    ],
    extras_require={
        'tensorboard': ['tensorboardX'],
        'test': ['numpy'],
    },
    entry_points={
        'console_scripts': ['golay-cpm=golay_cpm.cli:main'],
    },
    cmdclass={
        'clean': Clean,
    })
