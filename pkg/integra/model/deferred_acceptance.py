"""
Deferred Acceptance
===================

Man-proposing deferred acceptance in its one-proposal-at-a-time form: at every step the lowest indexed free man
proposes to the best woman of the population he has not proposed to yet, and she keeps the better of him and her
current partner. The outcome is the man-optimal stable matching (MOSM) of the population; the number of proposals a
man makes equals the population-restricted rank of his wife.

Preferences restricted to a population are never copied: a man walks through his full list and skips women outside
the population.
"""
import heapq
import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from integra.core.market import AgentId, Matching, MatchingScheme, Population, Side, matching_from_indices

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DeferredAcceptanceResult:
    """
    Outcome of deferred acceptance on one population.

    ``wife_index`` and ``husband_index`` cover the whole society (global indices, -1 for single agents and for
    agents outside the population) and are what the vectorised statistics work with.
    """
    matching: Matching
    total_proposals: int
    proposals_per_man: Mapping[AgentId, int]
    wife_index: np.ndarray = field(repr=False)
    husband_index: np.ndarray = field(repr=False)

    @property
    def population(self):
        return self.matching.population


def man_optimal_stable_matching(market, population=None):
    """
    Compute the man-optimal stable matching of a population.

    :param market: the market
    :type market: ExtendedMarket
    :param population: population to solve (default: the whole society)
    :type population: Population
    :return: the matching with its proposal counts
    :rtype: DeferredAcceptanceResult
    """
    population = market.society if population is None else population
    men = market.global_indices(Side.MAN, population)
    in_population = market.member_mask(Side.WOMAN, population).tolist()
    men_order = market.preferences.men_order
    women_position = market.preferences.women_position
    list_length = men_order.shape[1]

    next_position = np.zeros(market.count(Side.MAN), dtype=np.int64)
    proposals = np.zeros(market.count(Side.MAN), dtype=np.int64)
    wife = np.full(market.count(Side.MAN), -1, dtype=np.int64)
    husband = np.full(market.count(Side.WOMAN), -1, dtype=np.int64)

    free = [int(m) for m in men]
    heapq.heapify(free)
    while free:
        m = free[0]
        order = men_order[m]
        k = int(next_position[m])
        while k < list_length and not in_population[order[k]]:
            k += 1
        if k == list_length:
            # no woman of the population left to propose to: he stays single
            next_position[m] = k
            heapq.heappop(free)
            continue
        w = int(order[k])
        next_position[m] = k + 1
        proposals[m] += 1
        current = husband[w]
        if current < 0:
            husband[w] = m
            wife[m] = w
            heapq.heappop(free)
        elif women_position[w, m] < women_position[w, current]:
            husband[w] = m
            wife[m] = w
            wife[current] = -1
            heapq.heapreplace(free, int(current))
        # otherwise he is rejected and, still the lowest free man, proposes again

    wife.flags.writeable = False
    husband.flags.writeable = False
    per_man = {market.agent_at(Side.MAN, int(m)): int(proposals[m]) for m in men}
    total = int(proposals[men].sum())
    logger.debug(f'deferred acceptance on {population}: {total} proposals by {len(men)} men')
    return DeferredAcceptanceResult(matching=matching_from_indices(market, population, wife),
                                    total_proposals=total,
                                    proposals_per_man=MappingProxyType(per_man),
                                    wife_index=wife,
                                    husband_index=husband)


def segregated_and_integrated(market):
    """
    Deferred acceptance inside every community and on the whole society: all that is needed to compare an agent's
    segregated and integrated partners.

    :return: the per-community results (in community order) and the society result
    :rtype: (list of DeferredAcceptanceResult, DeferredAcceptanceResult)
    """
    segregated = [man_optimal_stable_matching(market, Population.of(c)) for c in range(market.kappa)]
    return segregated, man_optimal_stable_matching(market, market.society)


def mosm_scheme(market):
    """
    The man-optimal stable matching scheme: the MOSM of every nonempty population.

    :rtype: MatchingScheme
    """
    table = {p: man_optimal_stable_matching(market, p).matching for p in Population.all_nonempty(market.kappa)}
    return MatchingScheme(market, table)


def community_union(segregated, population):
    """The matching of a population that keeps every couple of its communities' matchings."""
    return Matching(population, frozenset().union(*(segregated[c].pairs for c in population)))


def within_community_scheme(market):
    """
    The scheme that always marries people within their own community (the MOSM of the community), whatever the
    population.

    :rtype: MatchingScheme
    """
    segregated = [man_optimal_stable_matching(market, Population.of(c)).matching for c in range(market.kappa)]
    table = {p: community_union(segregated, p) for p in Population.all_nonempty(market.kappa)}
    return MatchingScheme(market, table)
