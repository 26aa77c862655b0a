"""
Market
======

Domain types for extended marriage problems: agents, communities, populations, preference profiles, matchings and
matching schemes.

Conventions
-----------
Agents are identified structurally by (community, side, local index). Internally every side of the society is also
numbered globally: the men of community 0 come first, then those of community 1, and so on (same for women). The
preference arrays are indexed with these global numbers.

Preference positions are 0-based (position 0 is the most preferred partner); the ranks of the rank module are
1-based. For an agent ``i`` of a side, ``order[i, k]`` is the partner at position ``k`` and ``position[i, p]`` the
position of partner ``p``, so ``position[i, order[i, k]] == k``.

All types are immutable after construction (the numpy arrays are flagged read-only), so they can be shared between
worker processes freely.
"""
from dataclasses import dataclass, field
from enum import IntEnum
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from integra.core.errors import InvalidArgumentError


class Side(IntEnum):
    MAN = 0
    WOMAN = 1

    @property
    def opposite(self):
        return Side.WOMAN if self is Side.MAN else Side.MAN

    @property
    def letter(self):
        return 'm' if self is Side.MAN else 'w'

    @classmethod
    def from_letter(cls, letter):
        try:
            return {'m': cls.MAN, 'w': cls.WOMAN}[letter.strip().lower()]
        except KeyError:
            raise InvalidArgumentError(f"side should be 'm' or 'w', not {letter!r}") from None


@dataclass(frozen=True, order=True)
class AgentId:
    """A person, identified by community index, side and index within (community, side)."""
    community: int
    side: Side
    local: int

    def __post_init__(self):
        object.__setattr__(self, 'side', Side(self.side))
        if self.community < 0 or self.local < 0:
            raise InvalidArgumentError(f'negative index in agent {self.community}.{self.local}')

    def __str__(self):
        return f'{self.community}.{self.side.letter}.{self.local}'

    @classmethod
    def parse(cls, text):
        """
        Parse the text form ``c.s.l`` (e.g. ``1.w.0``).

        :param text: agent in text form
        :type text: str
        :rtype: AgentId
        """
        try:
            community, side, local = text.strip().split('.')
            return cls(int(community), Side.from_letter(side), int(local))
        except ValueError:
            raise InvalidArgumentError(f'cannot parse agent {text!r}') from None


def man(community, local=0):
    return AgentId(community, Side.MAN, local)


def woman(community, local=0):
    return AgentId(community, Side.WOMAN, local)


@dataclass(frozen=True)
class Community:
    men_count: int
    women_count: int

    def __post_init__(self):
        if self.men_count < 1 or self.women_count < 1:
            raise InvalidArgumentError('a community contains at least one person of each side')

    def count(self, side):
        return self.men_count if side is Side.MAN else self.women_count

    @property
    def is_balanced(self):
        return self.men_count == self.women_count


@dataclass(frozen=True)
class Population:
    """A nonempty set of community indices."""
    members: FrozenSet[int]

    def __post_init__(self):
        members = frozenset(int(c) for c in self.members)
        if not members:
            raise InvalidArgumentError('a population contains at least one community')
        if min(members) < 0:
            raise InvalidArgumentError('community indices are non-negative')
        object.__setattr__(self, 'members', members)

    @classmethod
    def of(cls, *communities):
        return cls(frozenset(communities))

    @classmethod
    def from_mask(cls, mask):
        return cls(frozenset(i for i in range(mask.bit_length()) if mask >> i & 1))

    @classmethod
    def all_nonempty(cls, kappa):
        """All 2^kappa - 1 nonempty populations of a society, in bit-mask order."""
        return [cls.from_mask(mask) for mask in range(1, 2 ** kappa)]

    @property
    def mask(self):
        return sum(1 << c for c in self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, community):
        return community in self.members

    def union(self, other):
        return Population(self.members | other.members)

    def isdisjoint(self, other):
        return self.members.isdisjoint(other.members)

    def issubset(self, other):
        return self.members <= other.members

    def __str__(self):
        return '{' + ','.join(str(c) for c in self) + '}'


def _inverse(order):
    position = np.empty_like(order)
    rows, cols = order.shape
    np.put_along_axis(position, order, np.broadcast_to(np.arange(cols), (rows, cols)), axis=1)
    return position


def _frozen(array):
    array = np.array(array, dtype=np.int64)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class PreferenceProfile:
    """
    Complete strict preferences of every agent over the whole opposite side of the society.

    ``men_order`` has shape (men, women) and ``women_order`` shape (women, men); both hold global indices of the
    opposite side in preference order. The inverse maps are derived on construction.
    """
    men_order: np.ndarray
    women_order: np.ndarray
    men_position: np.ndarray = field(init=False, repr=False)
    women_position: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        men_order = _frozen(self.men_order)
        women_order = _frozen(self.women_order)
        if men_order.ndim != 2 or women_order.ndim != 2:
            raise InvalidArgumentError('preference orders should be 2 dimensional')
        if men_order.shape != women_order.shape[::-1]:
            raise InvalidArgumentError(f'men lists {men_order.shape} do not fit women lists {women_order.shape}')
        for name, order in (('men', men_order), ('women', women_order)):
            expected = np.broadcast_to(np.arange(order.shape[1]), order.shape)
            if not np.array_equal(np.sort(order, axis=1), expected):
                raise InvalidArgumentError(f'every list of the {name} should be a permutation of the opposite side')
        object.__setattr__(self, 'men_order', men_order)
        object.__setattr__(self, 'women_order', women_order)
        object.__setattr__(self, 'men_position', _frozen(_inverse(men_order)))
        object.__setattr__(self, 'women_position', _frozen(_inverse(women_order)))

    def order(self, side):
        return self.men_order if side is Side.MAN else self.women_order

    def position(self, side):
        return self.men_position if side is Side.MAN else self.women_position

    def __eq__(self, other):
        if not isinstance(other, PreferenceProfile):
            return NotImplemented
        return np.array_equal(self.men_order, other.men_order) and np.array_equal(self.women_order,
                                                                                   other.women_order)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class ExtendedMarket:
    """
    A society of kappa communities with complete strict preferences.

    ``status_quo`` is only set by the correlated generator: the men's and the women's common order the individual
    lists were derived from.
    """
    communities: Tuple[Community, ...]
    preferences: PreferenceProfile
    status_quo: Optional[Tuple[np.ndarray, np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        communities = tuple(self.communities)
        if not communities:
            raise InvalidArgumentError('a society has at least one community')
        object.__setattr__(self, 'communities', communities)
        offsets = {}
        for side in Side:
            counts = [c.count(side) for c in communities]
            offsets[side] = tuple(int(x) for x in np.concatenate(([0], np.cumsum(counts))))
        object.__setattr__(self, '_offsets', MappingProxyType(offsets))
        men, women = offsets[Side.MAN][-1], offsets[Side.WOMAN][-1]
        if self.preferences.men_order.shape != (men, women):
            raise InvalidArgumentError(f'preference lists {self.preferences.men_order.shape} do not fit a society '
                                       f'of {men} men and {women} women')
        if self.status_quo is not None:
            object.__setattr__(self, 'status_quo', tuple(_frozen(order) for order in self.status_quo))

    @classmethod
    def from_lists(cls, communities, lists):
        """
        Build a market from explicit preference lists.

        :param communities: the communities of the society
        :type communities: sequence of Community
        :param lists: for every agent the opposite-side agents in preference order
        :type lists: mapping AgentId -> sequence of AgentId
        :rtype: ExtendedMarket
        """
        communities = tuple(communities)
        skeleton = cls(communities, _identity_profile(communities))
        orders = {side: np.full((skeleton.count(side), skeleton.count(side.opposite)), -1) for side in Side}
        for agent, preference_list in lists.items():
            row = skeleton.index_of(agent)
            partners = list(preference_list)
            if len(partners) != skeleton.count(agent.side.opposite):
                raise InvalidArgumentError(f'list of {agent} has {len(partners)} entries, expected '
                                           f'{skeleton.count(agent.side.opposite)}')
            for partner in partners:
                if partner.side is agent.side:
                    raise InvalidArgumentError(f'{agent} ranks {partner} of the same side')
            orders[agent.side][row] = [skeleton.index_of(p) for p in partners]
        for side in Side:
            if (orders[side] < 0).any():
                raise InvalidArgumentError(f'some {side.name.lower()} have no preference list')
        return cls(communities, PreferenceProfile(orders[Side.MAN], orders[Side.WOMAN]))

    @property
    def kappa(self):
        return len(self.communities)

    @property
    def society(self):
        return Population(frozenset(range(self.kappa)))

    def count(self, side, population=None):
        """Number of agents of a side in a population (default: the society)."""
        if population is None:
            return self._offsets[side][-1]
        return sum(self.communities[c].count(side) for c in self._checked(population))

    def index_range(self, side, community):
        """Global indices of the agents of one side of a community."""
        offsets = self._offsets[side]
        return range(offsets[community], offsets[community + 1])

    def index_of(self, agent):
        """
        Global index of an agent within its side of the society.

        :raises InvalidArgumentError: for agents that are not part of this society
        """
        if not isinstance(agent, AgentId):
            raise InvalidArgumentError(f'{agent!r} is not an AgentId')
        if agent.community >= self.kappa or agent.local >= self.communities[agent.community].count(agent.side):
            raise InvalidArgumentError(f'agent {agent} is not part of this society')
        return self._offsets[agent.side][agent.community] + agent.local

    def agent_at(self, side, index):
        offsets = self._offsets[side]
        if not 0 <= index < offsets[-1]:
            raise InvalidArgumentError(f'no {side.name.lower()} with global index {index}')
        community = int(np.searchsorted(offsets, index, side='right')) - 1
        return AgentId(community, side, int(index) - offsets[community])

    def agents(self, side=None, population=None):
        """Agents of a population (default: the society), sorted; both sides when side is None."""
        sides = list(Side) if side is None else [side]
        population = self.society if population is None else self._checked(population)
        return sorted(AgentId(c, s, local)
                      for c in population for s in sides for local in range(self.communities[c].count(s)))

    def member_mask(self, side, population):
        """Boolean array over the global indices of a side, True for members of the population."""
        mask = np.zeros(self.count(side), dtype=bool)
        for c in self._checked(population):
            r = self.index_range(side, c)
            mask[r.start:r.stop] = True
        return mask

    def global_indices(self, side, population):
        return np.flatnonzero(self.member_mask(side, population))

    def preference_list(self, agent):
        order = self.preferences.order(agent.side)[self.index_of(agent)]
        return [self.agent_at(agent.side.opposite, int(p)) for p in order]

    def restricted_list(self, agent, population):
        """
        Filtered view of an agent's list: the opposite-side members of a population in preference order.

        :rtype: iterator of AgentId
        """
        mask = self.member_mask(agent.side.opposite, population)
        order = self.preferences.order(agent.side)[self.index_of(agent)]
        return (self.agent_at(agent.side.opposite, int(p)) for p in order if mask[p])

    def position(self, of, partner):
        """0-based position of partner in the list of ``of``."""
        if partner.side is of.side:
            raise InvalidArgumentError(f'{of} and {partner} are on the same side')
        return int(self.preferences.position(of.side)[self.index_of(of), self.index_of(partner)])

    def prefers(self, of, a, b):
        """
        True iff ``of`` strictly prefers a to b. None stands for staying single, which is worse than any partner.
        """
        if a is None:
            return False
        if b is None:
            return True
        return self.position(of, a) < self.position(of, b)

    def is_balanced(self, population=None):
        """True when the population holds as many men as women."""
        return self.count(Side.MAN, population) == self.count(Side.WOMAN, population)

    def communities_balanced(self):
        return all(c.is_balanced for c in self.communities)

    def validate_matching(self, matching):
        """
        Check that a matching only uses agents of this society.

        :raises InvalidArgumentError: if it does not
        """
        self._checked(matching.population)
        for m, w in matching.pairs:
            self.index_of(m)
            self.index_of(w)
        return matching

    def _checked(self, population):
        if max(population.members) >= self.kappa:
            raise InvalidArgumentError(f'population {population} is not part of a society of {self.kappa} '
                                       f'communities')
        return population


def _identity_profile(communities):
    men = sum(c.men_count for c in communities)
    women = sum(c.women_count for c in communities)
    return PreferenceProfile(np.tile(np.arange(women), (men, 1)), np.tile(np.arange(men), (women, 1)))


@dataclass(frozen=True)
class Matching:
    """
    A matching on a population, given as its set of (man, woman) pairs. Agents absent from the pairs are single.
    """
    population: Population
    pairs: FrozenSet[Tuple[AgentId, AgentId]]

    def __post_init__(self):
        pairs = frozenset((m, w) for m, w in self.pairs)
        partner: Dict[AgentId, AgentId] = {}
        for m, w in pairs:
            if m.side is not Side.MAN or w.side is not Side.WOMAN:
                raise InvalidArgumentError(f'pair ({m}, {w}) should be (man, woman)')
            if m.community not in self.population or w.community not in self.population:
                raise InvalidArgumentError(f'pair ({m}, {w}) leaves population {self.population}')
            for x, y in ((m, w), (w, m)):
                if x in partner:
                    raise InvalidArgumentError(f'{x} appears in two pairs')
                partner[x] = y
        object.__setattr__(self, 'pairs', pairs)
        object.__setattr__(self, '_partner', MappingProxyType(partner))

    @classmethod
    def of(cls, population, pairs: Iterable[Tuple[AgentId, AgentId]]):
        return cls(population, frozenset(pairs))

    def partner(self, agent) -> Optional[AgentId]:
        """Partner of an agent, None when the agent is single."""
        return self._partner.get(agent)

    def is_matched(self, agent):
        return agent in self._partner

    @property
    def sorted_pairs(self) -> List[Tuple[AgentId, AgentId]]:
        return sorted(self.pairs)

    def encoding(self):
        """Sorted pair tuple; its lexicographic order is the tie-breaking order used throughout."""
        return tuple(self.sorted_pairs)

    def __len__(self):
        return len(self.pairs)

    def __str__(self):
        return ' '.join(f'{m}-{w}' for m, w in self.sorted_pairs) or '(empty)'


@dataclass(frozen=True, eq=False)
class MatchingScheme:
    """A matching for every nonempty population of a society."""
    market: ExtendedMarket
    table: Mapping[Population, Matching]

    def __post_init__(self):
        expected = set(Population.all_nonempty(self.market.kappa))
        table = dict(self.table)
        if set(table) != expected:
            missing = sorted(str(p) for p in expected - set(table))
            extra = sorted(str(p) for p in set(table) - expected)
            raise InvalidArgumentError(f'scheme table should cover every nonempty population '
                                       f'(missing {missing}, unexpected {extra})')
        for population, matching in table.items():
            if matching.population != population:
                raise InvalidArgumentError(f'entry {population} holds a matching on {matching.population}')
            self.market.validate_matching(matching)
        object.__setattr__(self, 'table', MappingProxyType(table))

    def __getitem__(self, population) -> Matching:
        return self.table[population]

    def populations(self) -> List[Population]:
        return sorted(self.table, key=lambda p: p.mask)

    @property
    def society_matching(self):
        return self.table[self.market.society]

    def community_matching(self, community):
        return self.table[Population.of(community)]

    def partner(self, agent, population):
        return self.table[population].partner(agent)


def matching_from_indices(market, population, wife_index):
    """
    Build a Matching from a global wife index array (-1 for single men), as produced by deferred acceptance.

    :param wife_index: for every man of the society, the global index of his wife or -1
    :type wife_index: numpy array
    """
    pairs = [(market.agent_at(Side.MAN, int(m)), market.agent_at(Side.WOMAN, int(w)))
             for m, w in enumerate(wife_index) if w >= 0]
    return Matching(population, frozenset(pairs))
