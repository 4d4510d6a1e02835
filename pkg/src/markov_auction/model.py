"""Domain model for position auctions with a Markovian cascade user.

A user scans an ordered slate of ads from the top. At each ad she clicks
with the ad's click probability (``ctr``) and, independently, continues to
the next ad with its continuation probability (``cont``).  The expected
revenue of a slate therefore telescopes from the bottom up: each ad
contributes its ecpm, discounted by the continuation probabilities of every
ad placed above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "DuplicateBidder",
    "Bidder",
    "AuctionInstance",
    "Assignment",
    "evaluate",
    "canonical_order",
    "click_probabilities",
]


class DuplicateBidder(ValueError):
    """Raised when the same bidder id appears twice in one slate or instance."""


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bidder:
    """One ad with its bid and user-behaviour parameters.

    Attributes:
        id: Unique non-negative integer identity.
        bid: Money the bidder pays per click, >= 0.
        ctr: Probability the user clicks this ad when she reaches it, in (0, 1].
        cont: Probability the user keeps scanning past this ad, in [0, 1).
    """

    id: int
    bid: float
    ctr: float
    cont: float

    def __post_init__(self) -> None:
        if not isinstance(self.id, int) or isinstance(self.id, bool) or self.id < 0:
            raise ValueError(f"id must be a non-negative integer, got {self.id!r}")
        object.__setattr__(self, "bid", float(self.bid))
        object.__setattr__(self, "ctr", float(self.ctr))
        object.__setattr__(self, "cont", float(self.cont))
        if not math.isfinite(self.bid) or self.bid < 0.0:
            raise ValueError(f"bidder {self.id}: bid must be finite and >= 0, got {self.bid!r}")
        if not 0.0 < self.ctr <= 1.0:
            raise ValueError(f"bidder {self.id}: ctr must be in (0, 1], got {self.ctr!r}")
        if not 0.0 <= self.cont < 1.0:
            raise ValueError(f"bidder {self.id}: cont must be in [0, 1), got {self.cont!r}")

    @property
    def ecpm(self) -> float:
        """Expected money per impression: ``ctr * bid``."""
        return self.ctr * self.bid

    @property
    def adjusted_ecpm(self) -> float:
        """ecpm amortized over the expected stop mass: ``ecpm / (1 - cont)``.

        Sorting a slate by decreasing adjusted ecpm maximizes its expected
        revenue, so this is the canonical ranking score.
        """
        return self.ecpm / (1.0 - self.cont)


@dataclass(frozen=True)
class AuctionInstance:
    """A set of competing bidders plus the number of ad slots on the page."""

    bidders: tuple[Bidder, ...]
    slots: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "bidders", tuple(self.bidders))
        if not isinstance(self.slots, int) or isinstance(self.slots, bool) or self.slots < 1:
            raise ValueError(f"slots must be an integer >= 1, got {self.slots!r}")
        seen: set[int] = set()
        for b in self.bidders:
            if b.id in seen:
                raise DuplicateBidder(f"bidder id {b.id} appears more than once")
            seen.add(b.id)

    @property
    def n(self) -> int:
        return len(self.bidders)

    def bidder(self, bidder_id: int) -> Bidder:
        for b in self.bidders:
            if b.id == bidder_id:
                return b
        raise KeyError(bidder_id)

    def with_bid(self, bidder_id: int, bid: float) -> "AuctionInstance":
        """A copy of the instance with one bidder's bid replaced."""
        replaced = tuple(
            Bidder(b.id, bid, b.ctr, b.cont) if b.id == bidder_id else b for b in self.bidders
        )
        if all(b.id != bidder_id for b in self.bidders):
            raise KeyError(bidder_id)
        return AuctionInstance(replaced, self.slots)


@dataclass(frozen=True)
class Assignment:
    """A concrete slate: bidder ids top slot first, with its evaluation.

    ``click_probs[j]`` is the probability that the ad in slot ``j`` is
    clicked, i.e. its ctr discounted by every continuation probability
    above it; ``efficiency`` is the expected revenue of the whole slate.
    """

    order: tuple[int, ...]
    efficiency: float
    click_probs: tuple[float, ...]

    @classmethod
    def from_bidders(cls, ordered: Sequence[Bidder]) -> "Assignment":
        eff, _ = evaluate(ordered)
        return cls(
            order=tuple(b.id for b in ordered),
            efficiency=eff,
            click_probs=click_probabilities(ordered),
        )

    @property
    def selected(self) -> frozenset[int]:
        return frozenset(self.order)


# ---------------------------------------------------------------------------
# Slate arithmetic
# ---------------------------------------------------------------------------


def evaluate(order: Sequence[Bidder]) -> tuple[float, float]:
    """Expected revenue and total continuation mass of a slate.

    The revenue telescopes bottom-up (Horner style): with ``e = ctr * bid``,

        value(x1, .., xm) = e_1 + q_1 * (e_2 + q_2 * (... e_m))

    Returns:
        ``(efficiency, cont_product)`` where ``cont_product`` is the product
        of all continuation probabilities in the slate.  The empty slate
        evaluates to ``(0.0, 1.0)``.

    Raises:
        DuplicateBidder: if the slate repeats a bidder id.
    """
    ids = {b.id for b in order}
    if len(ids) != len(order):
        raise DuplicateBidder("slate repeats a bidder")
    eff = 0.0
    cont = 1.0
    for b in reversed(order):
        eff = b.ecpm + b.cont * eff
        cont *= b.cont
    return eff, cont


def canonical_order(bidders: Iterable[Bidder]) -> list[Bidder]:
    """Bidders sorted by decreasing adjusted ecpm, ties by ascending id.

    Any set of ads extracts its maximum expected revenue in this order, so
    every solver works on slates arranged this way.
    """
    return sorted(bidders, key=lambda b: (-b.adjusted_ecpm, b.id))


def click_probabilities(order: Sequence[Bidder]) -> tuple[float, ...]:
    """Per-slot click probability: own ctr times the continuation above."""
    probs = []
    reach = 1.0
    for b in order:
        probs.append(reach * b.ctr)
        reach *= b.cont
    return tuple(probs)
