import numpy as np
import pytest
from hypothesis import given

from integra.core.errors import UnmatchedAgentError
from integra.core.market import Community, ExtendedMarket, Matching, Population, Side, man, woman
from integra.core.ranks import RankMode, absolute_rank, average_rank, partner_ranks, relative_rank
from integra.model.deferred_acceptance import man_optimal_stable_matching
from strategies import balanced_markets


@pytest.fixture
def two_by_two():
    """Two communities of two men and two women; man 0.m.0 ranks the women of community 1 first."""
    communities = (Community(2, 2), Community(2, 2))
    women = [woman(1, 0), woman(1, 1), woman(0, 1), woman(0, 0)]
    men = [man(0, 0), man(0, 1), man(1, 0), man(1, 1)]
    lists = {m: women for m in men}
    lists.update({w: men for w in [woman(0, 0), woman(0, 1), woman(1, 0), woman(1, 1)]})
    return ExtendedMarket.from_lists(communities, lists)


def test_absolute_rank(two_by_two):
    assert absolute_rank(two_by_two, man(0), woman(1, 0)) == 1
    assert absolute_rank(two_by_two, man(0), woman(0, 0)) == 4


def test_relative_rank(two_by_two):
    # partners from another community preferred to the whole own community
    assert relative_rank(two_by_two, man(0), woman(1, 0)) == 0
    assert relative_rank(two_by_two, man(0), woman(0, 1)) == 1
    assert relative_rank(two_by_two, man(0), woman(0, 0)) == 2
    assert relative_rank(two_by_two, man(1, 1), woman(1, 1)) == 2


def test_average_rank(two_by_two):
    matching = Matching.of(Population.of(0), [(man(0, 0), woman(0, 1)), (man(0, 1), woman(0, 0))])
    assert average_rank(two_by_two, matching, Side.MAN) == pytest.approx(3.5)
    assert average_rank(two_by_two, matching, Side.MAN, RankMode.RELATIVE) == pytest.approx(1.5)
    assert average_rank(two_by_two, matching, Side.WOMAN, 'relative') == pytest.approx(1.5)


def test_average_rank_of_single_agent(two_by_two):
    matching = Matching.of(Population.of(0), [(man(0, 0), woman(0, 1))])
    with pytest.raises(UnmatchedAgentError):
        average_rank(two_by_two, matching, Side.MAN)


@given(balanced_markets())
def test_vectorised_ranks_agree(market):
    result = man_optimal_stable_matching(market)
    for side, partners in ((Side.MAN, result.wife_index), (Side.WOMAN, result.husband_index)):
        agents = market.agents(side)
        absolute = [absolute_rank(market, x, result.matching.partner(x)) for x in agents]
        relative = [relative_rank(market, x, result.matching.partner(x)) for x in agents]
        assert partner_ranks(market, side, partners).tolist() == absolute
        assert partner_ranks(market, side, partners, absolute=False).tolist() == relative
        assert average_rank(market, result.matching, side) == pytest.approx(np.mean(absolute))


def test_vectorised_ranks_of_single_agents(two_by_two):
    with pytest.raises(UnmatchedAgentError):
        partner_ranks(two_by_two, Side.MAN, np.array([0, 1, 2, -1]))
