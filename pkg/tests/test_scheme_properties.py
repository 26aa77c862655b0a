import pytest
from hypothesis import given

from integra.core.errors import InvalidArgumentError, OracleSizeError, UnmatchedAgentError
from integra.core.market import Matching, Population, Side, man, woman
from integra.model.analytics import loss_summary
from integra.model.deferred_acceptance import mosm_scheme, segregated_and_integrated, within_community_scheme
from integra.model.enumeration import enumerate_pareto_matchings, enumerate_stable_matchings
from integra.model.scheme_properties import (HOLDS, WitnessKind, disjoint_population_pairs, find_blocking_pair,
                                             hurt_agents, hurt_partition, hurt_partition_of, is_im,
                                             is_pareto_optimal, is_pareto_scheme, is_stable, is_stable_scheme,
                                             is_wim, partner_rescue_violations, schemes_from, verify_witness)
from strategies import balanced_markets, markets


def test_blocking_pair(pretty_ugly):
    within = Matching.of(pretty_ugly.society, [(man(0), woman(0)), (man(1), woman(1))])
    assert find_blocking_pair(pretty_ugly, within) == (man(0), woman(1))
    verdict = is_stable(pretty_ugly, within)
    assert not verdict
    assert verdict.witness.kind is WitnessKind.BLOCKING_PAIR
    assert verify_witness(pretty_ugly, verdict.witness)


def test_integration_monotonic_and_efficient_but_unstable(pretty_ugly):
    scheme = within_community_scheme(pretty_ugly)
    assert is_im(scheme)
    assert is_pareto_scheme(scheme)
    assert not is_stable_scheme(scheme)


def test_prop1_wim_witnesses(prop1):
    scheme = mosm_scheme(prop1)
    verdict = is_wim(scheme)
    assert not verdict
    assert verdict.witness.payload.agent == man(0)
    assert verify_witness(scheme, verdict.witness)
    hurt = hurt_agents(scheme, Population.of(0), Population.of(1)) + hurt_agents(scheme, Population.of(1),
                                                                                 Population.of(0))
    assert sorted(h.agent for h in hurt) == [man(0), woman(1)]


def test_every_stable_scheme_of_prop1_violates_wim(prop1):
    candidates = {p: enumerate_stable_matchings(prop1, p) for p in Population.all_nonempty(2)}
    schemes = list(schemes_from(prop1, candidates))
    assert schemes
    assert not any(is_wim(s) for s in schemes)


def test_every_pareto_scheme_of_prop2_violates_im(prop2):
    candidates = {p: enumerate_pareto_matchings(prop2, p) for p in Population.all_nonempty(3)}
    schemes = 0
    for scheme in schemes_from(prop2, candidates):
        verdict = is_im(scheme)
        assert not verdict
        assert verify_witness(scheme, verdict.witness)
        schemes += 1
    assert schemes


def test_dominating_matching_witness(prop1):
    unstable = Matching.of(prop1.society, [(man(0), woman(0))])
    verdict = is_pareto_optimal(prop1, unstable)
    assert verdict.witness.kind is WitnessKind.DOMINATING_MATCHING
    assert verdict.witness.payload == Matching.of(prop1.society, [(man(0), woman(0)), (man(1), woman(1))])
    assert verify_witness(prop1, verdict.witness)


def test_wim_holds_when_nobody_moves(prop1):
    assert is_wim(within_community_scheme(prop1)) is HOLDS


@pytest.mark.parametrize('kappa', [1, 2, 3, 4])
def test_disjoint_population_pairs(kappa):
    pairs = list(disjoint_population_pairs(kappa))
    assert len(pairs) == 3 ** kappa - 2 ** (kappa + 1) + 1
    assert all(p.isdisjoint(q) for p, q in pairs)
    assert pairs == sorted(pairs, key=lambda pq: (pq[0].mask, pq[1].mask))


def test_im_bound(prop2):
    with pytest.raises(OracleSizeError):
        is_im(mosm_scheme(prop2), max_communities=2)


def test_hurt_agents_need_disjoint_populations(prop2):
    with pytest.raises(InvalidArgumentError):
        hurt_agents(mosm_scheme(prop2), Population.of(0, 1), Population.of(1))


def test_prop1_partition(prop1):
    partition = hurt_partition(mosm_scheme(prop1))
    assert partition.worse == {man(0), woman(1)}
    assert partition.better == {man(1), woman(0)}
    assert partition.fraction_worse == 0.5
    assert partition.worse_on(Side.WOMAN) == {woman(1)}
    assert partition.better_on(Side.MAN) == {man(1)}
    assert partition.partners[man(0)] == (woman(0), woman(1))


def test_partition_needs_everybody_matched(prop1):
    empty = [Matching.of(Population.of(c), []) for c in range(2)]
    with pytest.raises(UnmatchedAgentError):
        hurt_partition_of(prop1, empty, mosm_scheme(prop1).society_matching)


@given(balanced_markets(max_communities=4, max_side=3))
def test_at_most_half_is_hurt_and_partners_rescue(market):
    segregated, society = segregated_and_integrated(market)
    segregated = [r.matching for r in segregated]
    partition = hurt_partition_of(market, segregated, society.matching)
    assert partition.size == market.count(Side.MAN) + market.count(Side.WOMAN)
    assert partition.fraction_worse <= 0.5
    assert partner_rescue_violations(partition, segregated) == []
    assert len(partition.better) >= len(partition.worse)
    losses = loss_summary(partition, market)
    if partition.worse_on(Side.MAN):
        assert losses.mean_loss_men > 0
    else:
        assert losses.mean_loss_men is None


@given(markets(max_communities=2))
def test_mosm_scheme_is_stable(market):
    assert is_stable_scheme(mosm_scheme(market))
