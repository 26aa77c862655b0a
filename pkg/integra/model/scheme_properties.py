"""
Scheme properties
=================

Verifiers for matchings and matching schemes:

- stability (blocking pairs),
- Pareto optimality (brute force, see integra.model.enumeration),
- weak integration monotonicity (WIM): nobody prefers his own-community partner to his partner in the society,
- integration monotonicity (IM): nobody is hurt when any two disjoint populations merge,

and the partition of the society into the agents who keep their partner, gain, or lose when all communities merge.

Every verifier returns a Verdict. A failed verdict carries the lexicographically first witness, which
verify_witness() re-checks against the instance.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from types import MappingProxyType
from typing import FrozenSet, Mapping, Optional, Tuple, Union

import numpy as np

from integra.core.base.tools import oracle_bound
from integra.core.errors import InvalidArgumentError, OracleSizeError, UnmatchedAgentError
from integra.core.market import AgentId, Matching, MatchingScheme, Population, Side
from integra.model.enumeration import matching_space

logger = logging.getLogger(__name__)


class WitnessKind(Enum):
    BLOCKING_PAIR = 'blocking pair'
    DOMINATING_MATCHING = 'dominating matching'
    HURT_AGENT = 'hurt agent'


@dataclass(frozen=True)
class HurtAgent:
    """An agent of ``population`` who is worse off once ``population`` merges with ``merged_with``."""
    agent: AgentId
    population: Population
    merged_with: Population
    before: Optional[AgentId]
    after: Optional[AgentId]

    @property
    def merged(self):
        return self.population.union(self.merged_with)

    def __str__(self):
        return (f'{self.agent}: {self.before} in {self.population} but {self.after} in {self.merged}')


@dataclass(frozen=True)
class Witness:
    """
    Certificate of a violated property. ``subject`` is the matching the certificate is about (for blocking pairs
    and dominating matchings).
    """
    kind: WitnessKind
    payload: Union[tuple, Matching, HurtAgent]
    subject: Optional[Matching] = None

    def __str__(self):
        if self.kind is WitnessKind.BLOCKING_PAIR:
            return f'blocking pair ({self.payload[0]}, {self.payload[1]})'
        return f'{self.kind.value}: {self.payload}'


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Optional[Witness] = None

    def __bool__(self):
        return self.holds


HOLDS = Verdict(True)


@dataclass(frozen=True)
class HurtPartition:
    """
    The society split by comparing every agent's segregated partner (in his own community) with his integrated
    partner (in the society): same partner, better partner, worse partner.

    ``partners`` maps every agent to its (segregated, integrated) partners.
    """
    same: FrozenSet[AgentId]
    better: FrozenSet[AgentId]
    worse: FrozenSet[AgentId]
    partners: Mapping[AgentId, Tuple[AgentId, AgentId]] = field(default=None, compare=False, repr=False)

    @property
    def size(self):
        return len(self.same) + len(self.better) + len(self.worse)

    @property
    def fraction_worse(self):
        return len(self.worse) / self.size

    def worse_on(self, side):
        return frozenset(x for x in self.worse if x.side is side)

    def better_on(self, side):
        return frozenset(x for x in self.better if x.side is side)


def find_blocking_pair(market, matching):
    """
    First blocking pair of a matching, searching men then women in sorted order.

    :param market: the market
    :type market: ExtendedMarket
    :param matching: the matching to check
    :type matching: Matching
    :return: (man, woman) who both prefer each other to their partners, or None if the matching is stable
    :rtype: tuple or None
    """
    market.validate_matching(matching)
    population = matching.population
    men = market.agents(Side.MAN, population)
    women = market.agents(Side.WOMAN, population)
    man_index = np.array([market.index_of(x) for x in men])
    woman_index = np.array([market.index_of(x) for x in women])
    men_position = market.preferences.men_position[np.ix_(man_index, woman_index)]
    women_position = market.preferences.women_position[np.ix_(woman_index, man_index)]
    single = max(market.count(Side.MAN), market.count(Side.WOMAN))

    def current(agent):
        partner = matching.partner(agent)
        return single if partner is None else market.position(agent, partner)

    man_current = np.array([current(x) for x in men])
    woman_current = np.array([current(x) for x in women])
    blocking = (men_position < man_current[:, None]) & (women_position.T < woman_current[None, :])
    hits = np.argwhere(blocking)
    if not len(hits):
        return None
    i, j = hits[0]
    return men[i], women[j]


def is_stable(market, matching):
    pair = find_blocking_pair(market, matching)
    return HOLDS if pair is None else Verdict(False, Witness(WitnessKind.BLOCKING_PAIR, pair, matching))


def is_pareto_optimal(market, matching, max_agents=None):
    """
    Pareto optimality of a matching, by comparison with every maximal matching of its population.

    :return: a verdict whose witness is the lexicographically first dominating matching
    :rtype: Verdict
    :raises OracleSizeError: above the oracle bound
    """
    space = matching_space(market, matching.population, max_agents)
    rows = space.dominating_rows(space.rank_vector(matching))
    if not len(rows):
        return HOLDS
    return Verdict(False, Witness(WitnessKind.DOMINATING_MATCHING, space.first_by_encoding(rows), matching))


def is_stable_scheme(scheme):
    """Stability on every population; the witness is the first blocking pair in population mask order."""
    for population in scheme.populations():
        verdict = is_stable(scheme.market, scheme[population])
        if not verdict:
            return verdict
    return HOLDS


def is_pareto_scheme(scheme, max_agents=None):
    """Pareto optimality on every population."""
    for population in scheme.populations():
        verdict = is_pareto_optimal(scheme.market, scheme[population], max_agents)
        if not verdict:
            return verdict
    return HOLDS


def hurt_agents(scheme, population, merged_with):
    """
    Every agent of population who is strictly worse off in population | merged_with.

    :rtype: list of HurtAgent
    """
    if not population.isdisjoint(merged_with):
        raise InvalidArgumentError(f'populations {population} and {merged_with} overlap')
    market = scheme.market
    small, large = scheme[population], scheme[population.union(merged_with)]
    hurt = []
    for agent in market.agents(population=population):
        before, after = small.partner(agent), large.partner(agent)
        if market.prefers(agent, before, after):
            hurt.append(HurtAgent(agent, population, merged_with, before, after))
    return hurt


def is_wim(scheme):
    """
    Weak integration monotonicity: every agent weakly prefers his partner in the society to his partner in his own
    community.

    :rtype: Verdict
    """
    market = scheme.market
    if market.kappa == 1:
        return HOLDS
    society = market.society
    for agent in market.agents():
        community = Population.of(agent.community)
        rest = Population(society.members - community.members)
        before, after = scheme[community].partner(agent), scheme[society].partner(agent)
        if market.prefers(agent, before, after):
            return Verdict(False, Witness(WitnessKind.HURT_AGENT, HurtAgent(agent, community, rest, before, after)))
    return HOLDS


def disjoint_population_pairs(kappa):
    """Ordered pairs (P, P') of disjoint nonempty populations, by mask of P then mask of P'."""
    full = 2 ** kappa - 1
    for mask in range(1, full + 1):
        rest = full & ~mask
        other = rest
        submasks = []
        while other:
            submasks.append(other)
            other = (other - 1) & rest
        for other in sorted(submasks):
            yield Population.from_mask(mask), Population.from_mask(other)


def is_im(scheme, max_communities=None):
    """
    Integration monotonicity: for all disjoint populations P, P' and every agent x of P, x weakly prefers his
    partner in P | P' to his partner in P. Only whole communities merge.

    :param max_communities: override of the bound on kappa (3^kappa population pairs are checked)
    :type max_communities: int
    :rtype: Verdict
    :raises OracleSizeError: when kappa is above the bound
    """
    market = scheme.market
    bound = oracle_bound('max_im_communities', max_communities)
    if market.kappa > bound:
        raise OracleSizeError(f'kappa = {market.kappa} is above the bound {bound} of the IM check')
    for population, other in disjoint_population_pairs(market.kappa):
        hurt = hurt_agents(scheme, population, other)
        if hurt:
            return Verdict(False, Witness(WitnessKind.HURT_AGENT, hurt[0]))
    return HOLDS


def verify_witness(instance, witness):
    """
    Re-check a witness.

    :param instance: the market (blocking pairs, dominating matchings) or the scheme (hurt agents) it came from
    :type instance: ExtendedMarket or MatchingScheme
    :rtype: bool
    """
    market = instance.market if isinstance(instance, MatchingScheme) else instance
    if witness.kind is WitnessKind.BLOCKING_PAIR:
        m, w = witness.payload
        subject = witness.subject
        return (m.community in subject.population and w.community in subject.population
                and subject.partner(m) != w
                and market.prefers(m, w, subject.partner(m)) and market.prefers(w, m, subject.partner(w)))
    if witness.kind is WitnessKind.DOMINATING_MATCHING:
        better, subject = witness.payload, witness.subject
        if better.population != subject.population:
            return False
        agents = market.agents(population=subject.population)
        nobody_worse = not any(market.prefers(x, subject.partner(x), better.partner(x)) for x in agents)
        somebody_better = any(market.prefers(x, better.partner(x), subject.partner(x)) for x in agents)
        return nobody_worse and somebody_better
    hurt = witness.payload
    if not isinstance(instance, MatchingScheme):
        raise InvalidArgumentError('a hurt agent witness is checked against a matching scheme')
    before = instance[hurt.population].partner(hurt.agent)
    after = instance[hurt.merged].partner(hurt.agent)
    return (before, after) == (hurt.before, hurt.after) and market.prefers(hurt.agent, before, after)


def integration_codes(market, side, before, after):
    """
    Compare segregated and integrated partners of a whole side at once.

    :param side: the side whose preferences are used
    :type side: Side
    :param before: global index of every agent's segregated partner
    :type before: numpy array
    :param after: global index of every agent's integrated partner
    :type after: numpy array
    :return: +1 where the integrated partner is better, 0 where it is the same, -1 where it is worse
    :rtype: numpy array
    :raises UnmatchedAgentError: if somebody is single before or after
    """
    before, after = np.asarray(before), np.asarray(after)
    if (before < 0).any() or (after < 0).any():
        raise UnmatchedAgentError('the hurt partition needs every agent matched before and after integration')
    position = market.preferences.position(side)
    rows = np.arange(len(before))
    return np.sign(position[rows, before] - position[rows, after]).astype(np.int64)


def hurt_partition_of(market, segregated, integrated):
    """
    Hurt partition from the community matchings and the society matching.

    :param segregated: one matching per community, in community order
    :type segregated: sequence of Matching
    :param integrated: the matching on the whole society
    :type integrated: Matching
    :rtype: HurtPartition
    """
    same, better, worse = [], [], []
    partners = {}
    for agent in market.agents():
        before = segregated[agent.community].partner(agent)
        after = integrated.partner(agent)
        if before is None or after is None:
            raise UnmatchedAgentError(f'{agent} is single before or after integration')
        partners[agent] = (before, after)
        if before == after:
            same.append(agent)
        elif market.prefers(agent, after, before):
            better.append(agent)
        else:
            worse.append(agent)
    return HurtPartition(frozenset(same), frozenset(better), frozenset(worse), MappingProxyType(partners))


def hurt_partition(scheme):
    """
    Hurt partition of a scheme: compares sigma(x, C_x) with sigma(x, S) for every agent x.

    :type scheme: MatchingScheme
    :rtype: HurtPartition
    """
    market = scheme.market
    return hurt_partition_of(market, [scheme.community_matching(c) for c in range(market.kappa)],
                             scheme.society_matching)


def partner_rescue_violations(partition, segregated):
    """
    Agents who lose from integration although their segregated partner does not gain. For a stable scheme the
    segregated partner of a loser always gains, otherwise the two would block the society matching.

    :return: the offending agents, sorted (empty for stable schemes)
    :rtype: list of AgentId
    """
    return sorted(x for x in partition.worse if segregated[x.community].partner(x) not in partition.better)


def schemes_from(market, candidates):
    """
    Every scheme obtained by picking one candidate matching per population.

    :param candidates: for every nonempty population the matchings to choose from
    :type candidates: mapping Population -> iterable of Matching
    :rtype: generator of MatchingScheme
    """
    populations = Population.all_nonempty(market.kappa)
    options = [sorted(candidates[p], key=Matching.encoding) for p in populations]
    for choice in product(*options):
        yield MatchingScheme(market, dict(zip(populations, choice)))
