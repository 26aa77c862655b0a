import os

import pytest
from hypothesis import HealthCheck, settings

import integra
from integra.core.market_file import load_market

settings.register_profile('integra', deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'integra'))


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run the Monte Carlo reproductions')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


def fixture_file(name):
    return os.path.join(integra.fixtures_path, name + '.mkt')


@pytest.fixture
def prop1():
    return load_market(fixture_file('prop1_2x2'))


@pytest.fixture
def prop2():
    return load_market(fixture_file('prop2_3x3'))


@pytest.fixture
def pretty_ugly():
    return load_market(fixture_file('pretty_ugly_2x2'))
