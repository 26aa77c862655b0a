import numpy as np
import pytest
from scipy import stats

from integra.controller.random_markets import (MarketSpec, RandomMarketController, generate, generate_correlated,
                                               generate_uniform, spearman_to_status_quo, swap_budget)
from integra.core.errors import InvalidArgumentError
from integra.core.market import Side


def test_spec_validation():
    with pytest.raises(InvalidArgumentError):
        MarketSpec(0, 2)
    with pytest.raises(InvalidArgumentError):
        MarketSpec(3, 2, correlation=1.0)
    with pytest.raises(InvalidArgumentError):
        MarketSpec(3, 2, seed=-1)
    assert MarketSpec(3, 2).size == 6


@pytest.mark.parametrize('rho, kappa, n, expected', [
    (0.5, 2, 100, 100),
    (0.9, 1, 30, 2),
    (0.0, 2, 5, 10),
    (0.99, 2, 10, 0),
])
def test_swap_budget(rho, kappa, n, expected):
    assert swap_budget(rho, kappa, n) == expected


def test_same_seed_same_market():
    spec = MarketSpec(5, 2, seed=7)
    assert generate(spec).preferences == generate(spec).preferences
    assert generate(spec).preferences != generate(MarketSpec(5, 2, seed=8)).preferences


def test_uniform_and_correlated_are_not_interchangeable():
    with pytest.raises(InvalidArgumentError):
        generate_uniform(MarketSpec(3, 2, correlation=0.5))
    with pytest.raises(InvalidArgumentError):
        generate_correlated(MarketSpec(3, 2))


def test_uniform_lists_are_uniform():
    rng = np.random.default_rng(11)
    spec = MarketSpec(3, 1)
    counts = {}
    for _ in range(1200):
        first = tuple(generate_uniform(spec, rng).preferences.men_order[0])
        counts[first] = counts.get(first, 0) + 1
    assert len(counts) == 6
    assert stats.chisquare(list(counts.values())).pvalue > 1e-3


@pytest.mark.parametrize('rho', [0.1, 0.5, 0.8])
def test_correlated_lists_differ_in_c_positions(rho):
    spec = MarketSpec(10, 3, correlation=rho, seed=3)
    market = generate(spec)
    for side, status_quo in zip(Side, market.status_quo):
        differing = (market.preferences.order(side) != status_quo).sum(axis=1)
        assert (differing == spec.swaps).all()
        assert spec.swaps % 2 == 0


@pytest.mark.parametrize('rho', [0.1, 0.5, 0.8])
def test_overlapping_swaps_differ_in_at_most_c_positions(rho):
    spec = MarketSpec(10, 3, correlation=rho, seed=3, swap_mode='overlapping')
    market = generate(spec)
    assert market.preferences == generate(spec).preferences
    for side, status_quo in zip(Side, market.status_quo):
        order = market.preferences.order(side)
        differing = (order != status_quo).sum(axis=1)
        assert (differing <= spec.swaps).all()
        assert differing.max() > 0
        assert (np.sort(order, axis=1) == np.arange(spec.size)).all()


def test_swap_mode_is_validated():
    with pytest.raises(InvalidArgumentError):
        MarketSpec(3, 2, correlation=0.5, swap_mode='shuffled')


def test_high_correlation_small_market_is_the_status_quo():
    market = generate(MarketSpec(10, 2, correlation=0.99, seed=5))
    assert (market.preferences.men_order == market.status_quo[0]).all()
    assert spearman_to_status_quo(market, Side.MAN) == pytest.approx(1.0)


def test_spearman_grows_with_correlation():
    values = [spearman_to_status_quo(generate(MarketSpec(50, 2, correlation=rho, seed=1)), Side.WOMAN)
              for rho in (0.1, 0.5, 0.9)]
    assert values == sorted(values)
    assert values[-1] > 0.5


def test_spearman_needs_a_status_quo():
    with pytest.raises(InvalidArgumentError):
        spearman_to_status_quo(generate(MarketSpec(3, 2)), Side.MAN)


def test_controller_streams():
    spec = MarketSpec(4, 2, correlation=0.5, seed=99)
    controller = RandomMarketController(spec, cell_index=0)
    first = controller.get_market(0)
    assert first.preferences == controller.get_market(0).preferences
    assert first.preferences != controller.get_market(1).preferences
    assert first.preferences != RandomMarketController(spec, cell_index=1).get_market(0).preferences
    assert first.kappa == 2 and first.communities_balanced()
    assert controller.markets_drawn == 3
    controller.disconnect()
    controller.connect()
    assert controller.markets_drawn == 0
