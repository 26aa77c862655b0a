# -*- coding: utf-8 -*-
"""
======================
Random market generator
======================

Seedable generators of extended markets with kappa communities of n men and n women each:

- uniform markets, where every agent's list is an independent uniform permutation of the opposite side of the
  society,
- correlated markets, where each side shares a uniformly drawn status quo order and every agent's list is the
  status quo with c positions exchanged by c/2 disjoint random transpositions. The expected Spearman coefficient
  with the status quo is then 1 - c / (kappa n - 1), close to rho = 1 - c / (kappa n).
  With swap_mode 'overlapping' the c/2 transpositions are drawn independently and may share positions, so a
  list differs from the status quo in at most c positions.

Generators are pure functions of (spec, random generator). RandomMarketController plays the role of an instrument
for the campaign Operator: it derives a fresh stream for every run from the master seed, cell index and run index.

Example usage can be found at the bottom of the file under if __name__=='__main___'
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from integra.core.base.tools import substream
from integra.core.errors import InvalidArgumentError
from integra.core.market import Community, ExtendedMarket, PreferenceProfile, Side

logger = logging.getLogger(__name__)

SWAP_MODES = ('disjoint', 'overlapping')


@dataclass(frozen=True)
class MarketSpec:
    """
    Parameters of a random market: n men and n women per community, kappa communities, optional correlation rho in
    [0, 1), a 64 bit seed and how the transpositions of a correlated list are drawn.
    """
    n: int
    kappa: int
    correlation: Optional[float] = None
    seed: int = 0
    swap_mode: str = 'disjoint'

    def __post_init__(self):
        if self.n < 1 or self.kappa < 1:
            raise InvalidArgumentError(f'n and kappa should be positive (n={self.n}, kappa={self.kappa})')
        if self.correlation is not None and not 0 <= self.correlation < 1:
            raise InvalidArgumentError(f'correlation should be in [0, 1), not {self.correlation}')
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidArgumentError('seed should be a 64 bit unsigned integer')
        if self.swap_mode not in SWAP_MODES:
            raise InvalidArgumentError(f'swap_mode should be one of {", ".join(SWAP_MODES)}, not {self.swap_mode!r}')

    @property
    def size(self):
        """Number of men (and of women) in the society."""
        return self.n * self.kappa

    @property
    def swaps(self):
        return swap_budget(self.correlation, self.kappa, self.n) if self.correlation is not None else 0

    def rng(self):
        return np.random.default_rng(self.seed)


def swap_budget(rho, kappa, n):
    """
    Number c of positions in which a correlated list may differ from the status quo: round((1 - rho) kappa n),
    lowered by one when odd (positions are exchanged pairwise).

    :rtype: int
    """
    size = kappa * n
    c = int(round((1 - rho) * size))
    c = min(c, size)
    if c % 2:
        c -= 1
    return c


def _uniform_lists(rng, rows, cols):
    return rng.permuted(np.tile(np.arange(cols), (rows, 1)), axis=1)


def _communities(spec):
    return tuple(Community(spec.n, spec.n) for _ in range(spec.kappa))


def generate_uniform(spec, rng=None):
    """
    Uniform random extended market.

    :param spec: market parameters (correlation must be absent)
    :type spec: MarketSpec
    :param rng: random generator to draw from (default: one seeded with spec.seed)
    :type rng: numpy.random.Generator
    :rtype: ExtendedMarket
    """
    if spec.correlation is not None:
        raise InvalidArgumentError('generate_uniform draws uncorrelated markets; use generate_correlated')
    rng = spec.rng() if rng is None else rng
    size = spec.size
    men_order = _uniform_lists(rng, size, size)
    women_order = _uniform_lists(rng, size, size)
    return ExtendedMarket(_communities(spec), PreferenceProfile(men_order, women_order))


def _perturbed(rng, status_quo, rows, swaps, swap_mode='disjoint'):
    size = len(status_quo)
    lists = np.tile(status_quo, (rows, 1))
    if swaps == 0:
        return lists
    if swap_mode == 'overlapping':
        row = np.arange(rows)
        for _ in range(swaps // 2):
            left = rng.integers(size, size=rows)
            right = (left + rng.integers(1, size, size=rows)) % size
            lists[row, left], lists[row, right] = lists[row, right], lists[row, left].copy()
        return lists
    # c distinct positions per agent, paired up into c/2 disjoint transpositions
    positions = np.argsort(rng.random((rows, size)), axis=1)[:, :swaps]
    left, right = positions[:, 0::2], positions[:, 1::2]
    row = np.arange(rows)[:, None]
    lists[row, left], lists[row, right] = lists[row, right], lists[row, left].copy()
    return lists


def generate_correlated(spec, rng=None):
    """
    Correlated random extended market. Each side gets one uniform status quo order; every agent's list is the
    status quo except in exactly c = swap_budget(...) positions (at most c with swap_mode 'overlapping').

    :param spec: market parameters with a correlation
    :type spec: MarketSpec
    :param rng: random generator to draw from (default: one seeded with spec.seed)
    :type rng: numpy.random.Generator
    :rtype: ExtendedMarket
    """
    if spec.correlation is None:
        raise InvalidArgumentError('generate_correlated needs a correlation')
    rng = spec.rng() if rng is None else rng
    size, swaps = spec.size, spec.swaps
    men_status_quo = rng.permutation(size)
    women_status_quo = rng.permutation(size)
    men_order = _perturbed(rng, men_status_quo, size, swaps, spec.swap_mode)
    women_order = _perturbed(rng, women_status_quo, size, swaps, spec.swap_mode)
    return ExtendedMarket(_communities(spec), PreferenceProfile(men_order, women_order),
                          status_quo=(men_status_quo, women_status_quo))


def generate(spec, rng=None):
    """Uniform or correlated market, depending on spec.correlation."""
    if spec.correlation is None:
        return generate_uniform(spec, rng)
    return generate_correlated(spec, rng)


def spearman_to_status_quo(market, side):
    """
    Mean Spearman coefficient between the lists of one side and that side's status quo.

    :param market: a correlated market
    :type market: ExtendedMarket
    :param side: the side whose lists are compared
    :type side: Side
    :rtype: float
    """
    if market.status_quo is None:
        raise InvalidArgumentError('market has no status quo (it was not drawn with correlation)')
    status_quo = market.status_quo[0 if side is Side.MAN else 1]
    reference = np.argsort(status_quo)  # position of every partner in the status quo
    positions = market.preferences.position(side)
    if len(reference) < 2:
        return 1.0
    # row 0 of the correlation matrix holds the coefficient of every list with the status quo
    correlation = stats.spearmanr(np.vstack([reference, positions]), axis=1)[0]
    return float(np.mean(np.atleast_2d(correlation)[0, 1:]))


class RandomMarketController:
    """
    Source of random markets for a campaign cell. Each run gets its own stream, keyed on (master seed, cell, run),
    so the market of a run does not depend on which worker draws it or in which order.
    """
    def __init__(self, spec, cell_index=0):
        """
        :param spec: market parameters; spec.seed is the master seed of the campaign
        :type spec: MarketSpec
        :param cell_index: index of the cell in the campaign grid
        :type cell_index: int
        """
        self.logger = logging.getLogger(__name__)
        self.spec = spec
        self.cell_index = cell_index
        self.markets_drawn = 0
        self.logger.debug(f'RandomMarketController for n={spec.n}, kappa={spec.kappa}, '
                          f'rho={spec.correlation} created')
        self.connect()

    def connect(self):
        """Start counting the markets drawn from this cell."""
        self.markets_drawn = 0
        self.logger.debug(f'connected to cell {self.cell_index} (seed {self.spec.seed})')

    def get_market(self, run_index):
        """
        The market of one run.

        :param run_index: index of the run within the cell
        :type run_index: int
        :rtype: ExtendedMarket
        """
        self.markets_drawn += 1
        return generate(self.spec, substream(self.spec.seed, self.cell_index, run_index))

    def disconnect(self):
        self.logger.debug(f'disconnected from cell {self.cell_index} after {self.markets_drawn} markets')


if __name__ == "__main__":
    import integra  # Import integra, for integra style logging

    controller = RandomMarketController(MarketSpec(n=3, kappa=2, correlation=0.5, seed=1))
    market = controller.get_market(0)
    print('men lists:\n', market.preferences.men_order)
    print('spearman to status quo (men):', spearman_to_status_quo(market, Side.MAN))
