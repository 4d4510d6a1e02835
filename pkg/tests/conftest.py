"""Shared fixtures: a worked three-bidder page and a random-instance factory."""

from __future__ import annotations

import numpy as np
import pytest

from markov_auction import AuctionInstance, Bidder


def random_bidders(rng: np.random.Generator, n: int, cont_high: float = 0.95) -> tuple[Bidder, ...]:
    """Generic-position bidders: continuous draws, so exact ties never occur."""
    bids = np.exp(rng.uniform(np.log(0.01), np.log(10.0), n))
    ctrs = 1.0 - rng.random(n)
    conts = rng.uniform(0.0, cont_high, n)
    return tuple(Bidder(i, float(bids[i]), float(ctrs[i]), float(conts[i])) for i in range(n))


def random_instance(
    rng: np.random.Generator,
    max_n: int = 12,
    max_slots: int = 5,
    min_n: int = 1,
    cont_high: float = 0.95,
) -> AuctionInstance:
    n = int(rng.integers(min_n, max_n + 1))
    slots = int(rng.integers(1, max_slots + 1))
    return AuctionInstance(random_bidders(rng, n, cont_high), slots)


@pytest.fixture
def page() -> AuctionInstance:
    """Two-slot page with three ads whose ecpm and adjusted-ecpm rankings
    disagree: ecpms (1, 2, 0.85) but adjusted ecpms (4, 2.5, 4.25)."""
    return AuctionInstance(
        (
            Bidder(1, 2.0, 0.5, 0.75),
            Bidder(2, 4.0, 0.5, 0.2),
            Bidder(3, 1.7, 0.5, 0.8),
        ),
        2,
    )


@pytest.fixture
def make_random_instance():
    return random_instance
