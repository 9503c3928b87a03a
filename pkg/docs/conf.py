# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys

# import from local files rather than an installed version:
sys.path.insert(0, os.path.abspath('../source'))

import telegraph

# -- Project information -----------------------------------------------------

project = 'telegraph'
copyright = '2026, the telegraph developers'
author = 'the telegraph developers'

# The full version, including alpha/beta/rc tags
release = telegraph.__version__


# -- General configuration ---------------------------------------------------

extensions = [
	'sphinx.ext.autodoc',
	'sphinx.ext.intersphinx',
	'sphinx.ext.mathjax',
	'sphinx.ext.viewcode',
	'sphinx.ext.todo',
	'sphinx.ext.napoleon', # must appear before 'sphinx-autodoc-typehints'
	'sphinx_autodoc_typehints'
]

#
# Extensions settings
#

# number of days to cache remotely downloaded 'inv' files (default = 5)
intersphinx_cache_limit = 5

intersphinx_mapping = {
	'numpy' : ('https://numpy.org/doc/stable', None),
	'scipy' : ('https://docs.scipy.org/doc/scipy', None)
}

todo_include_todos = True

templates_path = ['_templates']

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']


# -- Options for HTML output -------------------------------------------------

html_theme = 'alabaster'

html_static_path = ['_static']
