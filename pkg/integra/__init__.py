"""
Integra
=======

Stable matching in societies made of several communities: what happens to every agent when matching markets merge.

The package computes man-optimal stable matchings, verifies stability, Pareto optimality and (weak) integration
monotonicity of matching schemes, and runs Monte Carlo campaigns estimating who gains and who loses from
integration.

To try it from the command line:
  >>> integra solve --market-file integra/core/defaults/fixtures/prop1_2x2.mkt
  >>> integra table1 --runs 100
Or from an interactive python console:
  >>> from integra.controller.paper_instances import load_fixture
  >>> from integra.model.deferred_acceptance import man_optimal_stable_matching
  >>> print(man_optimal_stable_matching(load_fixture('prop1_2x2').market).matching)

"""

# Get the version from the package setup.py file
from importlib.metadata import PackageNotFoundError, version
try:
    __version__ = version("integra")
except PackageNotFoundError:
    __version__ = "unknown"

import os
package_path = os.path.dirname(os.path.abspath(__file__))
repository_path = os.path.abspath(os.path.join(package_path, os.pardir))
defaults_path = os.path.join(package_path, 'core', 'defaults')
fixtures_path = os.path.join(defaults_path, 'fixtures')

import logging
# Set standard logging format and level.
# (To use this, do 'import integra' in your module)
logging.basicConfig(
    level=logging.INFO,
    format="[%(asctime)s] %(levelname)-8s: %(message)-50s  [%(lineno)d %(name)s]",
    datefmt='%H:%M:%S')

# Keep third party debug chatter out of campaign logs
for _noisy in ('matplotlib', 'numexpr', 'h5py'):
    logging.getLogger(_noisy).setLevel(logging.WARNING)
