"""
Brute force enumeration
=======================

Oracles for small populations: every stable matching, every Pareto optimal matching, and the construction of a
Pareto optimal, weakly integration monotonic matching scheme by repeated Pareto improvements.

All routines work on the maximal matchings of a population only. Preferences are complete, so a matching that leaves
a man and a woman both single is blocked by them and Pareto dominated by adding their pair.

The number of maximal matchings grows factorially; populations above the configured oracle bound (``max_agents`` in
integra_config.yml, 16 agents by default) are refused with an OracleSizeError.
"""
import logging
from functools import lru_cache
from itertools import permutations

import numpy as np

from integra.core.base.tools import oracle_bound
from integra.core.errors import OracleSizeError, UnbalancedCommunityError
from integra.core.market import Matching, MatchingScheme, Population, Side
from integra.model.deferred_acceptance import community_union, man_optimal_stable_matching

logger = logging.getLogger(__name__)


class MatchingSpace:
    """
    All maximal matchings of one population, with the rank every agent gives his partner in each of them.

    Rows of ``rank_table`` are matchings, columns are the men then the women of the population (sorted); single
    agents get a rank worse than any partner.
    """
    def __init__(self, market, population):
        self.logger = logging.getLogger(__name__)
        self.market = market
        self.population = population
        self.men = market.agents(Side.MAN, population)
        self.women = market.agents(Side.WOMAN, population)
        n_men, n_women = len(self.men), len(self.women)
        man_index = np.array([market.index_of(x) for x in self.men])
        woman_index = np.array([market.index_of(x) for x in self.women])
        # positions restricted to the population, shapes (men, women) and (women, men)
        self.men_position = market.preferences.men_position[np.ix_(man_index, woman_index)]
        self.women_position = market.preferences.women_position[np.ix_(woman_index, man_index)]

        if n_men <= n_women:
            wives = np.array(list(permutations(range(n_women), n_men)), dtype=np.int64).reshape(-1, n_men)
        else:
            husbands = np.array(list(permutations(range(n_men), n_women)), dtype=np.int64).reshape(-1, n_women)
            wives = np.full((len(husbands), n_men), -1, dtype=np.int64)
            rows = np.arange(len(husbands))[:, None]
            wives[rows, husbands] = np.arange(n_women)
        self.wives = wives
        self.husbands = np.full((len(wives), n_women), -1, dtype=np.int64)
        rows, cols = np.nonzero(wives >= 0)
        self.husbands[rows, wives[rows, cols]] = cols

        self._single = single = max(market.count(Side.MAN), market.count(Side.WOMAN))
        self._man_cur = np.where(wives >= 0, self.men_position[np.arange(n_men), np.maximum(wives, 0)], single)
        self._woman_cur = np.where(self.husbands >= 0,
                                   self.women_position[np.arange(n_women), np.maximum(self.husbands, 0)], single)
        self.rank_table = np.hstack([self._man_cur, self._woman_cur]) + 1
        self.logger.debug(f'{len(wives)} maximal matchings on population {population}')

    def __len__(self):
        return len(self.wives)

    def matching(self, row):
        pairs = [(self.men[i], self.women[j]) for i, j in enumerate(self.wives[row]) if j >= 0]
        return Matching(self.population, frozenset(pairs))

    def matchings(self, rows):
        return [self.matching(r) for r in rows]

    def rank_vector(self, matching):
        """Ranks of the men then the women of the population under an arbitrary matching of it."""
        single = self._single
        men = [self.men_position[i, self.women.index(w)] if w is not None else single
               for i, w in enumerate(matching.partner(x) for x in self.men)]
        women = [self.women_position[j, self.men.index(m)] if m is not None else single
                 for j, m in enumerate(matching.partner(x) for x in self.women)]
        return np.array(men + women) + 1

    def stable_rows(self):
        men_wants = self.men_position[None, :, :] < self._man_cur[:, :, None]
        women_wants = self.women_position.T[None, :, :] < self._woman_cur[:, None, :]
        blocked = (men_wants & women_wants).any(axis=(1, 2))
        return np.flatnonzero(~blocked)

    def dominating_rows(self, ranks):
        """Rows that Pareto dominate a rank vector: nobody worse off, somebody strictly better off."""
        table = self.rank_table
        return np.flatnonzero((table <= ranks).all(axis=1) & (table < ranks).any(axis=1))

    def pareto_rows(self):
        """Rows not dominated by any other row (skyline scan in order of increasing rank sum)."""
        table = self.rank_table
        frontier = np.empty_like(table)
        size = 0
        kept = []
        for row in np.argsort(table.sum(axis=1), kind='stable'):
            ranks = table[row]
            front = frontier[:size]
            if size and ((front <= ranks).all(axis=1) & (front < ranks).any(axis=1)).any():
                continue
            frontier[size] = ranks
            size += 1
            kept.append(row)
        return np.sort(np.array(kept, dtype=np.int64))

    def first_by_encoding(self, rows):
        """The lexicographically smallest matching (by sorted pair encoding) among some rows."""
        return min(self.matchings(rows), key=Matching.encoding)


@lru_cache(maxsize=64)
def _cached_space(market, population):
    return MatchingSpace(market, population)


def matching_space(market, population=None, max_agents=None):
    """
    The maximal matchings of a population, refusing populations above the oracle bound.

    :raises OracleSizeError: when the population holds more agents than the bound
    """
    population = market.society if population is None else population
    bound = oracle_bound('max_agents', max_agents)
    size = market.count(Side.MAN, population) + market.count(Side.WOMAN, population)
    if size > bound:
        raise OracleSizeError(f'population {population} has {size} agents, the oracle bound is {bound}')
    return _cached_space(market, population)


def enumerate_stable_matchings(market, population=None, max_agents=None):
    """
    Every stable matching of a population.

    :param market: the market
    :type market: ExtendedMarket
    :param population: the population (default: the society)
    :type population: Population
    :param max_agents: override of the oracle bound
    :type max_agents: int
    :rtype: frozenset of Matching
    """
    space = matching_space(market, population, max_agents)
    return frozenset(space.matchings(space.stable_rows()))


def enumerate_pareto_matchings(market, population=None, max_agents=None):
    """
    Every Pareto optimal matching of a population (dominance over the agents of both sides).

    :rtype: frozenset of Matching
    """
    space = matching_space(market, population, max_agents)
    return frozenset(space.matchings(space.pareto_rows()))


def pareto_improve(market, matching, max_agents=None):
    """
    Apply Pareto improvements until none is left. At every step the lexicographically smallest dominating matching
    is taken.

    :return: a Pareto optimal matching every agent weakly prefers to the starting one
    :rtype: Matching
    """
    space = matching_space(market, matching.population, max_agents)
    current = matching
    steps = 0
    while True:
        rows = space.dominating_rows(space.rank_vector(current))
        if not len(rows):
            break
        current = space.first_by_encoding(rows)
        steps += 1
    logger.debug(f'{steps} Pareto improvements on population {matching.population}')
    return current


def build_wim_pareto_scheme(market, max_agents=None):
    """
    A matching scheme that is Pareto optimal on every population and weakly integration monotonic.

    Every community keeps its man-optimal stable matching. Every larger population starts from the union of its
    communities' matchings and is Pareto improved until no improvement is left, so nobody ends up worse off than in
    his own community.

    :param market: a market with balanced communities and at most max_agents agents in total
    :type market: ExtendedMarket
    :rtype: MatchingScheme
    :raises UnbalancedCommunityError: if some community is unbalanced
    :raises OracleSizeError: if the society is above the oracle bound
    """
    if not market.communities_balanced():
        raise UnbalancedCommunityError('every community needs as many men as women')
    matching_space(market, market.society, max_agents)  # size check on the largest population
    segregated = [man_optimal_stable_matching(market, Population.of(c)).matching for c in range(market.kappa)]
    table = {}
    for population in Population.all_nonempty(market.kappa):
        start = community_union(segregated, population)
        table[population] = pareto_improve(market, start, max_agents) if len(population) > 1 else start
    return MatchingScheme(market, table)
