"""
Ranks
=====

Absolute and relative ranks of partners, and average ranks of one side of a matching.

The absolute rank of partner p for agent x counts the partners x weakly prefers to p over the whole society, so the
favourite has rank 1 and the least preferred partner has the size of the opposite side. The relative rank counts
only the opposite-side members of x's own community.
"""
import logging
from enum import Enum

import numpy as np

from integra.core.errors import InvalidArgumentError, UnmatchedAgentError

logger = logging.getLogger(__name__)


class RankMode(Enum):
    ABSOLUTE = 'absolute'
    RELATIVE = 'relative'


def absolute_rank(market, of, partner):
    """
    Absolute rank of partner in the preference list of ``of``.

    :param market: the market holding the preference profile
    :type market: ExtendedMarket
    :param of: the agent whose list is used
    :type of: AgentId
    :param partner: an agent of the opposite side
    :type partner: AgentId
    :return: rank between 1 and the size of the opposite side
    :rtype: int
    """
    return market.position(of, partner) + 1


def relative_rank(market, of, partner):
    """
    Relative rank of partner: the number of opposite-side members of ``of``'s own community that ``of`` weakly
    prefers to partner.

    Returns 0 for a partner from another community that ``of`` prefers to every member of his own community.

    :rtype: int
    """
    cutoff = market.position(of, partner)
    mates = market.index_range(of.side.opposite, of.community)
    positions = market.preferences.position(of.side)[market.index_of(of), mates.start:mates.stop]
    return int(np.count_nonzero(positions <= cutoff))


def average_rank(market, matching, side, mode=RankMode.ABSOLUTE):
    """
    Mean rank that the agents of one side of the matching's population give their partners.

    :param market: the market the matching lives in
    :type market: ExtendedMarket
    :param matching: the matching
    :type matching: Matching
    :param side: whose ranks are averaged
    :type side: Side
    :param mode: absolute or relative ranks
    :type mode: RankMode or str
    :rtype: float
    :raises UnmatchedAgentError: if some agent of that side is single (ranks of single agents are undefined)
    """
    mode = RankMode(mode)
    rank = absolute_rank if mode is RankMode.ABSOLUTE else relative_rank
    ranks = []
    for agent in market.agents(side, matching.population):
        partner = matching.partner(agent)
        if partner is None:
            raise UnmatchedAgentError(f'{agent} is single in the matching on {matching.population}')
        ranks.append(rank(market, agent, partner))
    if not ranks:
        raise InvalidArgumentError('population has no agents on this side')
    return float(np.mean(ranks))


def partner_ranks(market, side, partner_index, absolute=True):
    """
    Vectorised ranks for a whole side of the society.

    :param side: the side whose lists are used
    :type side: Side
    :param partner_index: for every agent of ``side`` the global index of the partner (-1 for single agents)
    :type partner_index: numpy array
    :param absolute: absolute ranks when True, relative ranks otherwise
    :type absolute: bool
    :return: the 1-based ranks (absolute) or relative ranks, as an int array
    :rtype: numpy array
    """
    partner_index = np.asarray(partner_index)
    if (partner_index < 0).any():
        raise UnmatchedAgentError(f'{int((partner_index < 0).sum())} agents are single')
    position = market.preferences.position(side)
    rows = np.arange(len(partner_index))
    cutoff = position[rows, partner_index]
    if absolute:
        return cutoff + 1
    relative = np.empty(len(partner_index), dtype=np.int64)
    for c in range(market.kappa):
        own = market.index_range(side, c)
        mates = market.index_range(side.opposite, c)
        block = position[own.start:own.stop, mates.start:mates.stop]
        relative[own.start:own.stop] = (block <= cutoff[own.start:own.stop, None]).sum(axis=1)
    return relative
