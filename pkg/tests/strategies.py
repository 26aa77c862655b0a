"""Hypothesis strategies for small extended markets."""
import numpy as np
from hypothesis import strategies as st

from integra.core.market import Community, ExtendedMarket, PreferenceProfile


@st.composite
def markets(draw, max_communities=3, max_side=2, balanced=False):
    kappa = draw(st.integers(1, max_communities))
    communities = []
    for _ in range(kappa):
        men = draw(st.integers(1, max_side))
        women = men if balanced else draw(st.integers(1, max_side))
        communities.append(Community(men, women))
    men = sum(c.men_count for c in communities)
    women = sum(c.women_count for c in communities)
    men_order = [draw(st.permutations(range(women))) for _ in range(men)]
    women_order = [draw(st.permutations(range(men))) for _ in range(women)]
    return ExtendedMarket(tuple(communities), PreferenceProfile(np.array(men_order), np.array(women_order)))


def balanced_markets(max_communities=3, max_side=2):
    return markets(max_communities, max_side, balanced=True)
