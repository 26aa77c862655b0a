"""
Market files
============

Plain text, line oriented format for extended markets, used for the shipped fixtures, the ``--market-file`` flag and
``integra gen``.

Grammar::

    # comments and blank lines are ignored
    <kappa> <men_0>x<women_0> <men_1>x<women_1> ...
    <community> <m|w> <local> : <c.l> <c.l> ...

The header gives kappa followed by one ``MENxWOMEN`` size per community. Every agent then has one line with its
identity and its complete list, most preferred first. Partners are written ``community.local``; their side is
implied (always the opposite side). Every agent must appear exactly once.

Example (a society of two communities of one man and one woman)::

    2 1x1 1x1
    0 m 0 : 0.0 1.0
    1 m 0 : 0.0 1.0
    0 w 0 : 1.0 0.0
    1 w 0 : 1.0 0.0
"""
import logging
import os

from integra.core.errors import InvalidArgumentError, MarketFormatError
from integra.core.market import AgentId, Community, ExtendedMarket, Side

logger = logging.getLogger(__name__)


def _content_lines(text):
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if line:
            yield number, line


def _parse_header(number, line):
    fields = line.split()
    try:
        kappa = int(fields[0])
        sizes = [tuple(int(x) for x in size.lower().split('x')) for size in fields[1:]]
    except ValueError:
        raise MarketFormatError(f'cannot parse header {line!r}', number) from None
    if kappa < 1 or len(sizes) != kappa or any(len(s) != 2 for s in sizes):
        raise MarketFormatError(f'header should be kappa followed by {kappa} MENxWOMEN sizes', number)
    try:
        return [Community(men, women) for men, women in sizes]
    except InvalidArgumentError as e:
        raise MarketFormatError(str(e), number) from None


def _check_line(communities, agent, partners, number):
    """Agent and partners of one line exist in the header's communities; the list is complete and without repeats."""
    for person in [agent] + partners:
        if person.community >= len(communities):
            raise MarketFormatError(f'{person} belongs to community {person.community}, the market has '
                                    f'{len(communities)}', number)
        if person.local >= communities[person.community].count(person.side):
            raise MarketFormatError(f'{person} does not exist in community {person.community}', number)
    expected = sum(c.count(agent.side.opposite) for c in communities)
    if len(partners) != expected:
        raise MarketFormatError(f'list of {agent} has {len(partners)} entries, expected {expected}', number)
    if len(set(partners)) != len(partners):
        raise MarketFormatError(f'list of {agent} repeats a partner', number)


def parse_market(text):
    """
    Parse a market from text.

    :param text: content of a market file
    :type text: str
    :rtype: ExtendedMarket
    :raises MarketFormatError: with the offending line number
    """
    lines = _content_lines(text)
    try:
        number, header = next(lines)
    except StopIteration:
        raise MarketFormatError('empty market file') from None
    communities = _parse_header(number, header)
    lists = {}
    for number, line in lines:
        if ':' not in line:
            raise MarketFormatError("agent line should contain ':'", number)
        head, tail = line.split(':', 1)
        try:
            community, side, local = head.split()
            agent = AgentId(int(community), Side.from_letter(side), int(local))
            partners = []
            for token in tail.split():
                c, l = token.split('.')
                partners.append(AgentId(int(c), agent.side.opposite, int(l)))
        except (ValueError, InvalidArgumentError):
            raise MarketFormatError(f'cannot parse agent line {line!r}', number) from None
        if agent in lists:
            raise MarketFormatError(f'agent {agent} listed twice', number)
        _check_line(communities, agent, partners, number)
        lists[agent] = partners
    try:
        return ExtendedMarket.from_lists(communities, lists)
    except InvalidArgumentError as e:
        raise MarketFormatError(str(e)) from None


def format_market(market):
    """
    Write a market in the text format (agents in sorted order, men before women within a community).

    :rtype: str
    """
    sizes = ' '.join(f'{c.men_count}x{c.women_count}' for c in market.communities)
    lines = [f'{market.kappa} {sizes}']
    tokens = {side: [f'{a.community}.{a.local}' for a in market.agents(side)] for side in Side}
    for agent in market.agents():
        order = market.preferences.order(agent.side)[market.index_of(agent)]
        partners = ' '.join(tokens[agent.side.opposite][p] for p in order)
        lines.append(f'{agent.community} {agent.side.letter} {agent.local} : {partners}')
    return '\n'.join(lines) + '\n'


def load_market(filename):
    """
    Read a market file.

    :param filename: path to the file
    :type filename: str
    :rtype: ExtendedMarket
    """
    if not os.path.isfile(filename):
        raise InvalidArgumentError(f'market file not found: {filename}')
    logger.debug(f'Reading market file {filename}')
    try:
        with open(filename, 'r', encoding='utf-8') as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise MarketFormatError(f'{filename} is not utf-8 text (byte {e.start})') from None
    except OSError as e:
        raise InvalidArgumentError(f'cannot read market file {filename}: {e.strerror}') from None
    return parse_market(text)


def dump_market(market, filename):
    """Write a market file, overwriting (with a warning) an existing one."""
    if os.path.exists(filename):
        logger.warning(f'overwriting existing file: {filename}')
    try:
        with open(filename, 'w', encoding='utf-8') as f:
            f.write(format_market(market))
    except OSError as e:
        raise InvalidArgumentError(f'cannot write market file {filename}: {e.strerror}') from None
    logger.info(f'Market saved in {filename}')
