# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# This file does only contain a selection of the most common options. For a
# full list see the documentation:
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import os
import sys

integra_root_dir = os.path.abspath(os.path.join(os.path.dirname(__file__), '../..'))
sys.path.insert(0, integra_root_dir)

# -- General configuration ---------------------------------------------------

extensions = ['sphinx.ext.autodoc',]

# netCDF writing is only needed at runtime
autodoc_mock_imports = ['netCDF4']

templates_path = ['_templates']


def skip(app, what, name, obj, would_skip, options):
    if name == "__init__":
        return False
    return would_skip


def setup(app):
    app.connect("autodoc-skip-member", skip)


source_suffix = ['.rst']

master_doc = 'index'

# -- Project information -----------------------------------------------------

project = 'integra'
copyright = '2020, the integra developers'
author = 'the integra developers'

version = '0.1.0'
release = '0.1.0'

language = None

exclude_patterns = []

pygments_style = 'sphinx'

todo_include_todos = True

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'

htmlhelp_basename = 'integradoc'

# -- Options for LaTeX output ------------------------------------------------

latex_documents = [
    (master_doc, 'integra.tex', 'integra: matching markets that merge',
     author, 'manual'),
]

# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'integra', 'integra: matching markets that merge',
     [author], 1)
]
