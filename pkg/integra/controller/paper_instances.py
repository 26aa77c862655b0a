# -*- coding: utf-8 -*-
"""
===============
Worked examples
===============

The small worked examples shipped with integra, as market files in integra/core/defaults/fixtures, together with the
results they are known to produce (fixtures/expectations.yml):

- prop1_2x2: two communities where no stable scheme is weakly integration monotonic,
- prop2_3x3: three communities with cyclic preferences where no Pareto optimal scheme is integration monotonic,
- pretty_ugly_2x2: the within-community scheme is integration monotonic and Pareto optimal but not stable,
- scheme_example_2x2: the man-optimal stable scheme of the two community example.

Each expectation names a check of this module (see CHECKS); ``evaluate`` re-runs all of them against the library.

Example usage can be found at the bottom of the file under if __name__=='__main___'
"""
import logging
import math
import os
from dataclasses import dataclass
from typing import Any, Mapping, Tuple

import yaml

import integra
from integra.core.errors import InvalidArgumentError, UnknownFixtureError
from integra.core.market import AgentId, Matching, Population
from integra.core.market_file import load_market
from integra.model.analytics import gains_from_integration
from integra.model.deferred_acceptance import (man_optimal_stable_matching, mosm_scheme, segregated_and_integrated,
                                               within_community_scheme)
from integra.model.enumeration import build_wim_pareto_scheme, enumerate_pareto_matchings, enumerate_stable_matchings
from integra.model.scheme_properties import (Verdict, find_blocking_pair, hurt_agents, hurt_partition_of, is_im,
                                             is_pareto_scheme, is_stable_scheme, is_wim, partner_rescue_violations,
                                             schemes_from)

logger = logging.getLogger(__name__)

EXPECTATIONS_FILE = 'expectations.yml'


@dataclass(frozen=True)
class Expectation:
    operation: str
    arguments: Mapping[str, Any]
    expected: Any


@dataclass(frozen=True)
class Fixture:
    name: str
    market: Any
    expectations: Tuple[Expectation, ...]


def _read_expectations():
    with open(os.path.join(integra.fixtures_path, EXPECTATIONS_FILE), 'r') as f:
        return yaml.safe_load(f) or {}


def fixture_names():
    """Names of the shipped fixtures, sorted."""
    return sorted(os.path.splitext(f)[0] for f in os.listdir(integra.fixtures_path) if f.endswith('.mkt'))


def load_fixture(name):
    """
    Load a shipped fixture.

    :param name: one of fixture_names()
    :type name: str
    :rtype: Fixture
    :raises UnknownFixtureError: for any other name
    """
    if name not in fixture_names():
        raise UnknownFixtureError(f'no fixture named {name!r} (available: {", ".join(fixture_names())})')
    market = load_market(os.path.join(integra.fixtures_path, name + '.mkt'))
    entries = _read_expectations().get(name, [])
    expectations = tuple(Expectation(e['operation'], dict(e.get('arguments') or {}), e['expected']) for e in entries)
    logger.debug(f'fixture {name} loaded with {len(expectations)} expectations')
    return Fixture(name, market, expectations)


SCHEMES = {
    'mosm': mosm_scheme,
    'within_community': within_community_scheme,
    'wim_pareto': build_wim_pareto_scheme,
}

PROPERTIES = {
    'stable': is_stable_scheme,
    'pareto': is_pareto_scheme,
    'wim': is_wim,
    'im': is_im,
}

CANDIDATES = {
    'stable': enumerate_stable_matchings,
    'pareto': enumerate_pareto_matchings,
}


def _lookup(table, key, kind):
    try:
        return table[key]
    except KeyError:
        raise InvalidArgumentError(f'unknown {kind} {key!r} (choose from {", ".join(table)})') from None


def _partition(market):
    segregated, society = segregated_and_integrated(market)
    segregated = [r.matching for r in segregated]
    return hurt_partition_of(market, segregated, society.matching), segregated


def check_preference_list(market, agent):
    return market.preference_list(AgentId.parse(agent))


def check_mosm(market, population):
    return man_optimal_stable_matching(market, Population(frozenset(population))).matching


def check_scheme(market, scheme):
    built = _lookup(SCHEMES, scheme, 'scheme')(market)
    return {str(p): built[p] for p in built.populations()}


def check_verdict(market, scheme, property):
    return _lookup(PROPERTIES, property, 'property')(_lookup(SCHEMES, scheme, 'scheme')(market))


def check_wim_hurt_agents(market, scheme):
    """Every agent who prefers his community's matching to the society's one."""
    built = _lookup(SCHEMES, scheme, 'scheme')(market)
    if market.kappa == 1:
        return []
    hurt = []
    for c in range(market.kappa):
        rest = Population(market.society.members - {c})
        hurt.extend(h.agent for h in hurt_agents(built, Population.of(c), rest))
    return sorted(hurt)


def check_every_scheme_violates(market, candidates, property):
    """True when every scheme built from the candidate matchings of every population violates the property."""
    enumerate_candidates = _lookup(CANDIDATES, candidates, 'candidate set')
    verifier = _lookup(PROPERTIES, property, 'property')
    options = {p: enumerate_candidates(market, p) for p in Population.all_nonempty(market.kappa)}
    checked = 0
    for scheme in schemes_from(market, options):
        checked += 1
        if verifier(scheme):
            logger.info(f'scheme {checked} satisfies {property}')
            return False
    logger.debug(f'{checked} schemes of {candidates} matchings all violate {property}')
    return True


def check_blocking_pair(market, scheme):
    built = _lookup(SCHEMES, scheme, 'scheme')(market)
    for population in built.populations():
        pair = find_blocking_pair(market, built[population])
        if pair is not None:
            return list(pair)
    return None


def check_frac_worse(market):
    return _partition(market)[0].fraction_worse


def check_rescue_violations(market):
    return partner_rescue_violations(*_partition(market))


def check_gains(market):
    stats = gains_from_integration(market)
    return [stats.gamma_m, stats.gamma_w]


def check_mean_losses(market):
    stats = gains_from_integration(market)
    return [stats.mean_loss_men, stats.mean_loss_women]


CHECKS = {
    'preference_list': check_preference_list,
    'mosm': check_mosm,
    'scheme': check_scheme,
    'verdict': check_verdict,
    'wim_hurt_agents': check_wim_hurt_agents,
    'every_scheme_violates': check_every_scheme_violates,
    'blocking_pair': check_blocking_pair,
    'frac_worse': check_frac_worse,
    'rescue_violations': check_rescue_violations,
    'gains': check_gains,
    'mean_losses': check_mean_losses,
}


def plain(value):
    """Turn library results into the plain values expectations.yml is written in."""
    if isinstance(value, Verdict):
        return value.holds
    if isinstance(value, (AgentId, Matching, Population)):
        return str(value)
    if isinstance(value, Mapping):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    return value


def matches(actual, expected):
    if isinstance(expected, bool) or isinstance(actual, bool):
        return actual is expected
    if isinstance(expected, (int, float)) and isinstance(actual, (int, float)):
        return math.isclose(actual, expected, rel_tol=1e-9, abs_tol=1e-12)
    if isinstance(expected, list) and isinstance(actual, list):
        return len(actual) == len(expected) and all(matches(a, e) for a, e in zip(actual, expected))
    if isinstance(expected, dict) and isinstance(actual, dict):
        return actual.keys() == expected.keys() and all(matches(actual[k], expected[k]) for k in expected)
    return actual == expected


def run_expectation(fixture, expectation):
    """
    Run one expectation of a fixture.

    :return: the actual value (in plain form) and whether it is the expected one
    :rtype: (object, bool)
    """
    check = _lookup(CHECKS, expectation.operation, 'operation')
    actual = plain(check(fixture.market, **expectation.arguments))
    return actual, matches(actual, expectation.expected)


def evaluate(fixture):
    """
    Run every expectation of a fixture.

    :return: one (expectation, actual, passed) triple per expectation
    :rtype: list of tuple
    """
    results = []
    for expectation in fixture.expectations:
        actual, passed = run_expectation(fixture, expectation)
        if not passed:
            logger.warning(f'{fixture.name}: {expectation.operation} {expectation.arguments} gave {actual!r}, '
                           f'expected {expectation.expected!r}')
        results.append((expectation, actual, passed))
    return results


if __name__ == "__main__":
    for name in fixture_names():
        outcome = evaluate(load_fixture(name))
        print(f'{name}: {sum(p for _, _, p in outcome)}/{len(outcome)} expectations hold')
