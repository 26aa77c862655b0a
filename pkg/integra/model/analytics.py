"""
Analytics
=========

Gains from integration and welfare losses of the agents who prefer segregation, for the man-optimal stable scheme,
plus the closed-form approximations the Monte Carlo results are compared with.

Sign conventions: a higher rank means a less desired partner, so a positive gain means the side is better off in the
society than in its communities, and a loss is the (positive) number of ranks a hurt agent drops.

All logarithms are natural.
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np

from integra.core.errors import DomainError, InvalidArgumentError, UnbalancedCommunityError
from integra.core.market import Side
from integra.core.ranks import partner_ranks
from integra.model.deferred_acceptance import segregated_and_integrated
from integra.model.scheme_properties import integration_codes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntegrationStats:
    """
    What integration does to one market.

    ``rank_*_community`` and ``rank_*_society`` are the absolute average ranks before and after integration; the
    gains are their differences. ``expected_rank_*`` are the post-integration absolute average ranks of a whole side.
    Means over the hurt agents of a side are None when nobody on that side is hurt.
    """
    gamma_m: float
    gamma_w: float
    frac_worse: float
    frac_worse_men_share: Optional[float]
    frac_worse_women_share: Optional[float]
    mean_loss_men: Optional[float]
    mean_loss_women: Optional[float]
    expected_rank_men: float
    expected_rank_women: float
    expected_rank_men_hurt: Optional[float]
    expected_rank_women_hurt: Optional[float]
    post_rank_men_hurt: Optional[float]
    post_rank_women_hurt: Optional[float]
    rank_m_community: float
    rank_w_community: float
    relative_rank_m: float
    relative_rank_w: float
    worse_men: int
    worse_women: int
    rescue_violations: int

    @property
    def rank_m_society(self):
        return self.expected_rank_men

    @property
    def rank_w_society(self):
        return self.expected_rank_women

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class LossSummary:
    mean_loss_men: Optional[float]
    mean_loss_women: Optional[float]
    expected_rank_men_hurt: Optional[float]
    expected_rank_women_hurt: Optional[float]
    post_rank_men_hurt: Optional[float]
    post_rank_women_hurt: Optional[float]


def _mean_or_none(values):
    values = np.asarray(values, dtype=float)
    return float(values.mean()) if values.size else None


def _share(part, whole):
    return part / whole if whole else None


def desirability(market, side):
    """
    Mean absolute rank every agent of a side gets in the lists of the opposite side (1 is the most desired).

    :rtype: numpy array
    """
    return market.preferences.position(side.opposite).mean(axis=0) + 1


def combined_partners(results, side):
    """
    Partner index array of the whole society assembled from deferred acceptance results on disjoint populations.
    """
    key = 'wife_index' if side is Side.MAN else 'husband_index'
    return np.stack([getattr(r, key) for r in results]).max(axis=0)


def integration_stats(market, segregated, society):
    """
    IntegrationStats from the deferred acceptance results inside every community and on the society.

    :param market: a market whose communities are all balanced
    :type market: ExtendedMarket
    :param segregated: one result per community, in community order
    :type segregated: list of DeferredAcceptanceResult
    :param society: the result on the whole society
    :type society: DeferredAcceptanceResult
    :rtype: IntegrationStats
    """
    arrays = {}
    for side in Side:
        before = combined_partners(segregated, side)
        after = combined_partners([society], side)
        arrays[side] = dict(before=before,
                            codes=integration_codes(market, side, before, after),
                            rank_before=partner_ranks(market, side, before),
                            rank_after=partner_ranks(market, side, after),
                            relative=partner_ranks(market, side, before, absolute=False),
                            desirability=desirability(market, side))
    men, women = arrays[Side.MAN], arrays[Side.WOMAN]
    hurt_men, hurt_women = men['codes'] == -1, women['codes'] == -1
    worse_men, worse_women = int(hurt_men.sum()), int(hurt_women.sum())
    worse = worse_men + worse_women

    # the segregated partner of a hurt agent should be better off
    rescue = (np.count_nonzero(hurt_men & (women['codes'][men['before']] != 1))
              + np.count_nonzero(hurt_women & (men['codes'][women['before']] != 1)))

    def hurt_mean(side_arrays, hurt, key):
        return _mean_or_none(side_arrays[key][hurt])

    return IntegrationStats(
        gamma_m=float(men['rank_before'].mean() - men['rank_after'].mean()),
        gamma_w=float(women['rank_before'].mean() - women['rank_after'].mean()),
        frac_worse=worse / (market.count(Side.MAN) + market.count(Side.WOMAN)),
        frac_worse_men_share=_share(worse_men, worse),
        frac_worse_women_share=_share(worse_women, worse),
        mean_loss_men=_mean_or_none((men['rank_after'] - men['rank_before'])[hurt_men]),
        mean_loss_women=_mean_or_none((women['rank_after'] - women['rank_before'])[hurt_women]),
        expected_rank_men=float(men['rank_after'].mean()),
        expected_rank_women=float(women['rank_after'].mean()),
        expected_rank_men_hurt=hurt_mean(men, hurt_men, 'desirability'),
        expected_rank_women_hurt=hurt_mean(women, hurt_women, 'desirability'),
        post_rank_men_hurt=hurt_mean(men, hurt_men, 'rank_after'),
        post_rank_women_hurt=hurt_mean(women, hurt_women, 'rank_after'),
        rank_m_community=float(men['rank_before'].mean()),
        rank_w_community=float(women['rank_before'].mean()),
        relative_rank_m=float(men['relative'].mean()),
        relative_rank_w=float(women['relative'].mean()),
        worse_men=worse_men,
        worse_women=worse_women,
        rescue_violations=int(rescue))


def gains_from_integration(market):
    """
    Run deferred acceptance in every community and on the society and compare what every agent gets.

    :param market: a market whose communities each hold as many men as women
    :type market: ExtendedMarket
    :rtype: IntegrationStats
    :raises UnbalancedCommunityError: if some community is unbalanced
    """
    if not market.communities_balanced():
        raise UnbalancedCommunityError('gains from integration are defined for balanced communities')
    segregated, society = segregated_and_integrated(market)
    return integration_stats(market, segregated, society)


def loss_summary(partition, market):
    """
    Welfare loss of the hurt agents of a hurt partition, per gender.

    The loss of a hurt agent is absolute_rank(integrated partner) - absolute_rank(segregated partner). The
    expected rank of a hurt agent is how desirable the agent is: the mean absolute rank it gets in the lists of the
    opposite side. The post-integration rank is the absolute rank of the agent's partner in the society.

    :param partition: a partition built by hurt_partition_of or hurt_partition
    :type partition: HurtPartition
    :param market: the market the partition was computed on
    :type market: ExtendedMarket
    :rtype: LossSummary
    """
    if partition.partners is None:
        raise InvalidArgumentError('the partition does not carry the partners of the agents')
    values = {}
    for side in Side:
        hurt = sorted(partition.worse_on(side))
        rows = [market.index_of(x) for x in hurt]
        losses, post = [], []
        for agent in hurt:
            before, after = partition.partners[agent]
            losses.append(market.position(agent, after) - market.position(agent, before))
            post.append(market.position(agent, after) + 1)
        values[side] = (_mean_or_none(losses), _mean_or_none(desirability(market, side)[rows]), _mean_or_none(post))
    return LossSummary(mean_loss_men=values[Side.MAN][0], mean_loss_women=values[Side.WOMAN][0],
                       expected_rank_men_hurt=values[Side.MAN][1], expected_rank_women_hurt=values[Side.WOMAN][1],
                       post_rank_men_hurt=values[Side.MAN][2], post_rank_women_hurt=values[Side.WOMAN][2])


def relative_average_ranks(market, segregated):
    """
    Average relative ranks of both sides before integration.

    :param segregated: deferred acceptance result of every community
    :type segregated: list of DeferredAcceptanceResult
    :rtype: (float, float)
    """
    return tuple(float(partner_ranks(market, side, combined_partners(segregated, side), absolute=False).mean())
                 for side in Side)


def _check_domain(n, kappa):
    if n < 2:
        raise DomainError(f'the approximations need n >= 2 (log n > 0), not n={n}')
    if kappa < 1:
        raise DomainError(f'kappa should be at least 1, not {kappa}')


def asymptotic_gains(n, kappa) -> Tuple[float, float]:
    """
    Approximate expected gains from integration of a uniform market:
    men log(n^(kappa-1) / kappa), women kappa n (1/log n - 1/log(kappa n)).

    :param n: men (and women) per community, at least 2
    :type n: int
    :param kappa: number of communities
    :type kappa: int
    :return: (gamma_m, gamma_w)
    :rtype: (float, float)
    :raises DomainError: for n < 2
    """
    _check_domain(n, kappa)
    gamma_m = (kappa - 1) * math.log(n) - math.log(kappa)
    gamma_w = kappa * n * (1 / math.log(n) - 1 / math.log(kappa * n))
    return gamma_m, gamma_w


def asymptotic_ranks(n, kappa):
    """
    Approximate expected absolute average ranks of a uniform market.

    :return: (men in the society, women in the society, men in their communities, women in their communities), i.e.
        (log kappa n, kappa n / log kappa n, kappa log n, kappa n / log n)
    :rtype: tuple of float
    :raises DomainError: for n < 2
    """
    _check_domain(n, kappa)
    size = kappa * n
    return (math.log(size), size / math.log(size), kappa * math.log(n), kappa * n / math.log(n))


def rank_blow_up(q, n, kappa):
    """
    Expected absolute rank of the partner with relative rank q: q (kappa n + 1) / (n + 1), which tends to q kappa.
    """
    if n < 1 or kappa < 1:
        raise DomainError('n and kappa should be positive')
    return q * (kappa * n + 1) / (n + 1)


def normalised_loss(loss, n, kappa):
    """A loss divided by the size kappa n of the society (None stays None)."""
    return None if loss is None else loss / (kappa * n)
