# -*- coding: utf-8 -*-
#
# MarketSE documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import sys, os

# autodoc imports the package from the source tree
sys.path.insert(0, os.path.abspath('../src'))

codeName = u'MarketSE'
authorName = u'MarketSE Team'
copyright = u'2024, MarketSE Team'
version = '0.1'
release = '0.1.0'

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.mathjax', 'sphinx.ext.viewcode',
              'numpydoc', 'sphinx.ext.autosummary']

autosummary_generate = True  # generate the autosummary pages automatically
numpydoc_show_class_members = False  # don't let numpydoc generate autosummary b/c it messes up toctree
numfig = True
autoclass_content = 'both'  # include the class and the init docstrings

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = codeName
exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'default'
html_static_path = []
htmlhelp_basename = codeName + '-doc'

# -- Options for LaTeX output --------------------------------------------------

latex_documents = [
    ('index', codeName + '.tex', codeName + ' Documentation', authorName, 'manual'),
]
latex_domain_indices = False
