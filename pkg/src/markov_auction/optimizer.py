"""Exact slate optimizers: exhaustive, dynamic-programming, and near-linear.

All three maximize the expected revenue of a slate of at most ``j`` ads
drawn from an auction instance.  Because any chosen set extracts its best
value in canonical (adjusted-ecpm) order, search happens over sets:

* ``brute_force_optimal`` enumerates every subset (small instances only),
* ``dp_optimal`` runs a take/skip recursion down the canonical order,
* ``fast_optimal`` grows a chain of nested solutions, adding the single
  best ad per step via hull-index range queries — O(n log n + k^2 log^2 n).
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

from .hull_oracle import HullIndex, LinearQuery, build
from .model import Assignment, AuctionInstance, Bidder, canonical_order, evaluate

__all__ = [
    "SizeLimitExceeded",
    "NoCandidate",
    "OptChain",
    "brute_force_optimal",
    "dp_optimal",
    "fast_optimal",
    "marginal_best_insert",
    "solve",
    "effective_slots",
]

_BRUTE_MAX_BIDDERS = 22
_BRUTE_MAX_SLOTS = 20


class SizeLimitExceeded(ValueError):
    """Raised when an instance is too large for exhaustive search."""


class NoCandidate(ValueError):
    """Raised when a slate already contains every bidder."""


@dataclass(frozen=True)
class OptChain:
    """Nested optimal slates for 1, 2, ... slots.

    ``solutions[i]`` is optimal for ``i + 1`` slots and contains every ad of
    ``solutions[i - 1]``.  The chain stops early if no remaining ad adds
    value (only possible with zero-value candidates).
    """

    solutions: tuple[Assignment, ...]

    @property
    def final(self) -> Assignment:
        return self.solutions[-1] if self.solutions else Assignment((), 0.0, ())


def effective_slots(inst: AuctionInstance, slots: int | None = None) -> int:
    """Number of slots actually fillable: ``min(requested, n)``."""
    k = inst.slots if slots is None else slots
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"slots must be an integer >= 1, got {k!r}")
    return min(k, inst.n)


# ---------------------------------------------------------------------------
# Exhaustive reference
# ---------------------------------------------------------------------------


def brute_force_optimal(inst: AuctionInstance, slots: int | None = None) -> Assignment:
    """Exact maximizer over every subset of at most ``slots`` bidders.

    Equal-value optima resolve to the lexicographically smallest id
    sequence (the empty tail beats any zero-value padding).

    Raises:
        SizeLimitExceeded: when n > 22 or the requested slot count > 20.
    """
    requested = inst.slots if slots is None else slots
    if inst.n > _BRUTE_MAX_BIDDERS or requested > _BRUTE_MAX_SLOTS:
        raise SizeLimitExceeded(
            f"exhaustive search capped at {_BRUTE_MAX_BIDDERS} bidders / "
            f"{_BRUTE_MAX_SLOTS} slots, got n={inst.n}, slots={requested}"
        )
    m = effective_slots(inst, slots)
    ranked = canonical_order(inst.bidders)
    ecpms = [b.ecpm for b in ranked]
    conts = [b.cont for b in ranked]
    ids = [b.id for b in ranked]
    best_eff = 0.0
    best_ids: tuple[int, ...] = ()
    best_combo: tuple[int, ...] = ()
    for r in range(1, m + 1):
        for combo in combinations(range(inst.n), r):
            eff = 0.0
            for t in reversed(combo):
                eff = ecpms[t] + conts[t] * eff
            if eff > best_eff:
                best_eff = eff
                best_ids = tuple(ids[t] for t in combo)
                best_combo = combo
            elif eff == best_eff:
                cand = tuple(ids[t] for t in combo)
                if cand < best_ids:
                    best_ids = cand
                    best_combo = combo
    return Assignment.from_bidders([ranked[t] for t in best_combo])


# ---------------------------------------------------------------------------
# Take/skip dynamic program
# ---------------------------------------------------------------------------


def dp_optimal(inst: AuctionInstance, slots: int | None = None) -> Assignment:
    """Optimal slate by a take/skip recursion over the canonical order.

    With bidders ranked by adjusted ecpm, the best value from rank ``i``
    down with ``r`` open slots is

        best(i, r) = max(best(i+1, r-1) * q_i + e_i,  best(i+1, r))

    Exact ties prefer "skip", so zero-value ads never pad the slate.
    Runs in O(n log n + n * slots); the take/skip bits for backtracking
    cost O(n * slots) memory.
    """
    m = effective_slots(inst, slots)
    n = inst.n
    if n == 0:
        return Assignment.from_bidders(())
    ranked = canonical_order(inst.bidders)
    ecpms = [b.ecpm for b in ranked]
    conts = [b.cont for b in ranked]
    take = [bytearray(m + 1) for _ in range(n)]
    below = [0.0] * (m + 1)
    for i in range(n - 1, -1, -1):
        e_i = ecpms[i]
        q_i = conts[i]
        row = take[i]
        here = [0.0] * (m + 1)
        for r in range(1, m + 1):
            taken = below[r - 1] * q_i + e_i
            skipped = below[r]
            if taken > skipped:
                here[r] = taken
                row[r] = 1
            else:
                here[r] = skipped
        below = here
    chosen: list[Bidder] = []
    r = m
    for i in range(n):
        if r and take[i][r]:
            chosen.append(ranked[i])
            r -= 1
    return Assignment.from_bidders(chosen)


# ---------------------------------------------------------------------------
# Near-linear chain solver
# ---------------------------------------------------------------------------


def _prefix_tables(
    chosen: Sequence[int], ecpms: Sequence[float], conts: Sequence[float]
) -> tuple[list[float], list[float], list[float]]:
    """Running slate tables for the current members (sorted positions).

    Returns ``(cont_prefix, eff_prefix, eff_suffix)`` where entry ``p`` of
    the prefixes covers the first ``p`` members and ``eff_suffix[p]`` is
    the value of the members from rank ``p`` down.
    """
    i = len(chosen)
    cont_prefix = [1.0] * (i + 1)
    eff_prefix = [0.0] * (i + 1)
    for t, p in enumerate(chosen):
        eff_prefix[t + 1] = eff_prefix[t] + cont_prefix[t] * ecpms[p]
        cont_prefix[t + 1] = cont_prefix[t] * conts[p]
    eff_suffix = [0.0] * (i + 1)
    for t in range(i - 1, -1, -1):
        p = chosen[t]
        eff_suffix[t] = ecpms[p] + conts[p] * eff_suffix[t + 1]
    return cont_prefix, eff_prefix, eff_suffix


def _best_insert(
    chosen: Sequence[int],
    ecpms: Sequence[float],
    conts: Sequence[float],
    index: HullIndex,
) -> tuple[float, int, float]:
    """Best single position to add to ``chosen`` (sorted ranks).

    Inserting candidate ``x`` into the gap after the first ``g`` members
    yields value  eff_prefix[g] + cont_prefix[g] * (e_x + q_x * eff_suffix[g]),
    linear in (q_x, e_x) — one hull query per gap.  Returns
    ``(new_value, position, current_value)``; ties go to the lowest
    position.  A gap whose prefix continuation mass is exactly 0 scores
    every candidate alike, so it is answered without a query.
    """
    n = index.n
    i = len(chosen)
    cont_prefix, eff_prefix, eff_suffix = _prefix_tables(chosen, ecpms, conts)
    best_val = -float("inf")
    best_pos = -1
    for g in range(i + 1):
        lo = chosen[g - 1] + 1 if g > 0 else 0
        hi = chosen[g] - 1 if g < i else n - 1
        if lo > hi:
            continue
        ce = cont_prefix[g]
        if ce == 0.0:
            val, pos = eff_prefix[g], lo
        else:
            pos, lin = index.query_max(LinearQuery(ce, ce * eff_suffix[g], lo, hi))
            val = eff_prefix[g] + lin
        if val > best_val:
            best_val, best_pos = val, pos
    return best_val, best_pos, eff_suffix[0]


def fast_optimal(inst: AuctionInstance, slots: int | None = None) -> OptChain:
    """Chain of nested optimal slates, grown one best insertion at a time.

    Every optimal slate for ``i`` slots extends to one for ``i + 1`` slots,
    so the chain member for step ``i + 1`` is found by trying each rank gap
    of the current slate with a hull-index query.  Total cost
    O(n log n + slots^2 log^2 n).
    """
    m = effective_slots(inst, slots)
    if inst.n == 0:
        return OptChain(())
    ranked = canonical_order(inst.bidders)
    ecpms = [b.ecpm for b in ranked]
    conts = [b.cont for b in ranked]
    index = build((b.cont, b.ecpm) for b in ranked)
    chosen: list[int] = []
    chain: list[Assignment] = []
    for _ in range(m):
        new_val, pos, current = _best_insert(chosen, ecpms, conts, index)
        if new_val <= current:
            break
        insort(chosen, pos)
        chain.append(Assignment.from_bidders([ranked[p] for p in chosen]))
    return OptChain(tuple(chain))


def marginal_best_insert(
    inst: AuctionInstance,
    slate: Assignment,
    index: HullIndex | None = None,
) -> tuple[int, float]:
    """The single ad whose insertion into ``slate`` gains the most value.

    The slate's members must come from ``inst``; candidates are everyone
    else.  Returns ``(bidder_id, new_efficiency)``; ties resolve to the
    earliest canonical rank, matching the hull index's lowest-index rule.

    Raises:
        NoCandidate: if the slate already contains every bidder.
    """
    ranked = canonical_order(inst.bidders)
    if index is None:
        index = build((b.cont, b.ecpm) for b in ranked)
    rank_of = {b.id: t for t, b in enumerate(ranked)}
    chosen = sorted(rank_of[bid_id] for bid_id in slate.order)
    if len(chosen) >= inst.n:
        raise NoCandidate("every bidder is already in the slate")
    ecpms = [b.ecpm for b in ranked]
    conts = [b.cont for b in ranked]
    _, pos, _ = _best_insert(chosen, ecpms, conts, index)
    insort(chosen, pos)
    eff, _ = evaluate([ranked[p] for p in chosen])
    return ranked[pos].id, eff


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

_SOLVERS: dict[str, Callable[[AuctionInstance, int | None], Assignment]] = {
    "brute": brute_force_optimal,
    "dp": dp_optimal,
    "fast": lambda inst, slots=None: fast_optimal(inst, slots).final,
}


def solve(inst: AuctionInstance, slots: int | None = None, method: str = "dp") -> Assignment:
    """Run the named solver ("brute", "dp", or "fast") on an instance."""
    try:
        solver = _SOLVERS[method]
    except KeyError:
        raise ValueError(f"unknown solver {method!r}; expected one of {sorted(_SOLVERS)}")
    return solver(inst, slots)
