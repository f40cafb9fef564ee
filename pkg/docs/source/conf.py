#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# golay_cpm documentation build configuration file.
# This script is run by Sphinx when building the documentation.

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join('..', '..')))

import golay_cpm

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'm2r'
]

napoleon_use_ivar = True

templates_path = ['_templates']

source_suffix = ['.rst', '.md']

master_doc = 'index'

project = 'golay_cpm'
author = 'golay_cpm developers'

version = golay_cpm.__version__
release = golay_cpm.__version__

language = None

exclude_patterns = []

pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'

html_static_path = []

htmlhelp_basename = 'golay_cpmdoc'
