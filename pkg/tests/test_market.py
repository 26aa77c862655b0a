import numpy as np
import pytest
from hypothesis import given

from integra.core.errors import InvalidArgumentError
from integra.core.market import (AgentId, Community, ExtendedMarket, Matching, MatchingScheme, Population,
                                 PreferenceProfile, Side, man, matching_from_indices, woman)
from strategies import markets


def test_agent_text_form():
    agent = AgentId.parse('1.w.0')
    assert agent == woman(1, 0)
    assert str(agent) == '1.w.0'
    with pytest.raises(InvalidArgumentError):
        AgentId.parse('1.x.0')
    with pytest.raises(InvalidArgumentError):
        AgentId.parse('1.m')


def test_agents_sort_by_community_then_side():
    assert sorted([woman(0), man(1), man(0, 1), man(0)]) == [man(0), man(0, 1), woman(0), man(1)]


def test_population_masks():
    populations = Population.all_nonempty(3)
    assert len(populations) == 7
    assert [p.mask for p in populations] == list(range(1, 8))
    assert Population.from_mask(5) == Population.of(0, 2)
    assert str(Population.of(2, 0)) == '{0,2}'
    assert Population.of(0).isdisjoint(Population.of(1))
    assert Population.of(0).union(Population.of(1)) == Population.of(0, 1)
    assert Population.of(1).issubset(Population.of(0, 1))
    with pytest.raises(InvalidArgumentError):
        Population(frozenset())


def test_community_needs_both_sides():
    with pytest.raises(InvalidArgumentError):
        Community(0, 1)
    assert not Community(2, 1).is_balanced


def test_profile_rejects_non_permutations():
    with pytest.raises(InvalidArgumentError):
        PreferenceProfile(np.array([[0, 0], [0, 1]]), np.array([[0, 1], [1, 0]]))
    with pytest.raises(InvalidArgumentError):
        PreferenceProfile(np.array([[0, 1]]), np.array([[0]]))


def test_profile_positions_invert_orders():
    profile = PreferenceProfile(np.array([[1, 0, 2], [2, 1, 0]]), np.array([[0, 1], [1, 0], [1, 0]]))
    assert profile.men_position[0].tolist() == [1, 0, 2]
    assert profile.men_position[1].tolist() == [2, 1, 0]
    assert not profile.men_order.flags.writeable


def test_prop1_lists(prop1):
    assert prop1.kappa == 2
    assert prop1.preference_list(man(0)) == [woman(0), woman(1)]
    assert prop1.preference_list(woman(1)) == [man(1), man(0)]
    assert prop1.prefers(man(0), woman(0), woman(1))
    assert prop1.prefers(man(0), woman(1), None)
    assert not prop1.prefers(man(0), None, woman(1))


def test_restricted_list(prop2):
    assert list(prop2.restricted_list(man(0), Population.of(0, 2))) == [woman(2), woman(0)]


def test_position_rejects_same_side(prop1):
    with pytest.raises(InvalidArgumentError):
        prop1.position(man(0), man(1))
    with pytest.raises(InvalidArgumentError):
        prop1.index_of(man(2))


@given(markets())
def test_global_numbering(market):
    for side in Side:
        agents = market.agents(side)
        assert [market.index_of(a) for a in agents] == list(range(market.count(side)))
        assert [market.agent_at(side, i) for i in range(market.count(side))] == agents


def test_from_lists_checks_lists():
    communities = (Community(1, 1),)
    with pytest.raises(InvalidArgumentError):
        ExtendedMarket.from_lists(communities, {man(0): [woman(0)]})
    with pytest.raises(InvalidArgumentError):
        ExtendedMarket.from_lists(communities, {man(0): [man(0)], woman(0): [man(0)]})


def test_matching_rejects_polygamy():
    population = Population.of(0, 1)
    with pytest.raises(InvalidArgumentError):
        Matching.of(population, [(man(0), woman(0)), (man(1), woman(0))])
    with pytest.raises(InvalidArgumentError):
        Matching.of(Population.of(0), [(man(0), woman(1))])
    matching = Matching.of(population, [(man(1), woman(0))])
    assert matching.partner(woman(0)) == man(1)
    assert matching.partner(man(0)) is None
    assert matching.is_matched(woman(0)) and not matching.is_matched(man(0))
    assert str(matching) == '1.m.0-0.w.0'


def test_matching_from_indices(prop1):
    matching = matching_from_indices(prop1, prop1.society, np.array([1, -1]))
    assert matching.sorted_pairs == [(man(0), woman(1))]


def test_scheme_needs_every_population(prop1):
    table = {Population.of(0): Matching.of(Population.of(0), [(man(0), woman(0))])}
    with pytest.raises(InvalidArgumentError):
        MatchingScheme(prop1, table)
