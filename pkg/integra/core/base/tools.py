"""
Tools for base classes
======================

Configuration loading, seeding and worker-count helpers shared by the operators and the brute force routines, and
the method check of the base classes.

"""
import logging
import os
from functools import lru_cache

import numpy as np
import yaml

import integra

logger = logging.getLogger(__name__)

WORKERS_ENVIRONMENT_VARIABLE = 'INTEGRA_WORKERS'


def default_config_file(name):
    """Full path of a default config file in integra.core.defaults."""
    return os.path.join(integra.defaults_path, name)


def read_config(filename=None, default_name='integra_config.yml'):
    """
    Read a yaml config file. A missing file is reported and the default file is used instead.

    :param filename: path to the config file (default: the file default_name in integra.core.defaults)
    :type filename: str
    :param default_name: name of the fallback file in integra.core.defaults
    :type default_name: str
    :return: the properties and the file they were read from
    :rtype: (dict, str)
    """
    if filename and not os.path.isfile(filename):
        logger.error('Config file not found: {}, falling back to default'.format(filename))
        filename = None
    if filename is None:
        filename = default_config_file(default_name)
    with open(filename, 'r') as f:
        properties = yaml.safe_load(f) or {}
    return properties, filename


@lru_cache(maxsize=None)
def _general_properties():
    return read_config()[0]


def oracle_bound(key, override=None):
    """
    Bound of a brute force routine: the override when given, otherwise the 'oracle' section of integra_config.yml.

    :param key: 'max_agents' or 'max_im_communities'
    :type key: str
    :rtype: int
    """
    if override is not None:
        return int(override)
    return int(_general_properties()['oracle'][key])


def default_workers(configured=None):
    """
    Worker count: the INTEGRA_WORKERS environment variable, else the configured value, else integra_config.yml.
    """
    env = os.environ.get(WORKERS_ENVIRONMENT_VARIABLE)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning(f'ignoring {WORKERS_ENVIRONMENT_VARIABLE}={env!r}, it is not an integer')
    if configured is not None:
        return max(1, int(configured))
    return max(1, int(_general_properties()['execution']['workers']))


def substream(master_seed, cell_index, run_index):
    """
    Random generator of one Monte Carlo run.

    The stream is keyed on (master seed, cell index, run index) through numpy's SeedSequence, so every run of a
    campaign draws from its own stream whichever worker executes it.

    :rtype: numpy.random.Generator
    """
    sequence = np.random.SeedSequence([int(master_seed), int(cell_index), int(run_index)])
    return np.random.Generator(np.random.PCG64(sequence))


def _method_owner(cls, base, method):
    """
    Where a method of cls comes from: (defined or overridden in cls, available in base).
    """
    if not hasattr(cls, method):
        return False, False
    if not hasattr(base, method):
        return True, False
    if getattr(cls, method) is getattr(base, method):
        return False, True
    return True, True


def check_method_presence(cls, base, required, recommended):
    """
    Warn about recommended methods cls inherits from base (or lacks entirely) and refuse classes that do not
    implement the required ones themselves.

    :param cls: the class to check
    :type cls: type
    :param base: the base class cls falls back on
    :type base: type
    :param required: methods cls must define itself
    :type required: list of str
    :param recommended: methods cls should define itself
    :type recommended: list of str
    :raises NotImplementedError: listing the missing methods
    """
    missing = [method for method in required if not _method_owner(cls, base, method)[0]]
    for method in recommended:
        own, inherited = _method_owner(cls, base, method)
        if own:
            continue
        if inherited:
            logger.debug(f'{cls.__name__} uses {method} of {base.__name__}')
        else:
            logger.warning(f'{cls.__name__} is missing recommended method {method}, also missing in {base.__name__}')
            missing.append(method)
    if missing:
        raise NotImplementedError(f'{cls.__name__} should implement: {", ".join(missing)}')
