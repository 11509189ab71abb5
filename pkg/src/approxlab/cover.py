"""Exact minimum set cover by branch and bound.

The engine works on bitmask universes.  A greedy pass supplies the
incumbent, element branching with a fewest-candidates pivot does the
exact search, and a second lexicographic pass reconstructs the unique
canonical witness: among all minimum covers, the one whose ascending
candidate-index tuple is smallest.  Callers fix the canonical meaning
of an index by sorting their candidate lists up front.
"""

from __future__ import annotations

from dataclasses import dataclass

from .budgets import effective_budget
from .errors import ResourceBudgetError
from .truthtable import popcount


@dataclass(frozen=True)
class CoverSolution:
    size: int
    chosen: tuple[int, ...]


def greedy_cover(masks: list[int], universe: int) -> list[int] | None:
    """Max-new-coverage greedy pass; ties break on the lower index.  None if stuck."""
    uncovered = universe
    chosen: list[int] = []
    while uncovered:
        best_idx, best_gain = -1, 0
        for i, m in enumerate(masks):
            gain = popcount(m & uncovered)
            if gain > best_gain:
                best_idx, best_gain = i, gain
        if best_idx < 0:
            return None
        chosen.append(best_idx)
        uncovered &= ~masks[best_idx]
    return chosen


class _Search:
    def __init__(self, masks: list[int], budget: int):
        self.masks = masks
        self.nodes = 0
        self.budget = budget

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceBudgetError(
                f"set cover search exceeded {self.budget} nodes",
                estimate=self.nodes, budget=self.budget,
            )

    def covers_of(self, uncovered: int) -> list[int]:
        """Candidate indices covering the pivot element with fewest candidates."""
        best: list[int] | None = None
        probe = uncovered
        while probe:
            bit = probe & -probe
            cands = [i for i, m in enumerate(self.masks) if m & bit]
            if best is None or len(cands) < len(best):
                best = cands
                if len(best) <= 1:
                    break
            probe ^= bit
        return best or []

    def min_size(self, uncovered: int, depth: int, best: int) -> int:
        """Smallest completion size from this state, or best if not beatable."""
        self._tick()
        if not uncovered:
            return depth
        if depth + 1 >= best:
            return best
        for i in self.covers_of(uncovered):
            best = self.min_size(uncovered & ~self.masks[i], depth + 1, best)
        return best

    def feasible(self, uncovered: int, avail: int, slots: int) -> bool:
        """Can uncovered be covered by at most slots of the avail candidates?

        avail is an index bitmask.  Branching covers the pivot element
        with each of its candidates in turn; only the used candidate is
        removed, the rest stay available in any order.
        """
        self._tick()
        if not uncovered:
            return True
        if slots == 0:
            return False
        pool = []
        probe = avail
        while probe:
            bit = probe & -probe
            i = bit.bit_length() - 1
            if self.masks[i] & uncovered:
                pool.append(i)
            probe ^= bit
        union = 0
        for i in pool:
            union |= self.masks[i]
        if uncovered & ~union:
            return False
        # pivot on the element with fewest remaining candidates
        bit_cands: list[int] | None = None
        probe = uncovered
        while probe:
            bit = probe & -probe
            cands = [i for i in pool if self.masks[i] & bit]
            if bit_cands is None or len(cands) < len(bit_cands):
                bit_cands = cands
                if len(bit_cands) <= 1:
                    break
            probe ^= bit
        for i in bit_cands or []:
            if self.feasible(uncovered & ~self.masks[i], avail & ~(1 << i), slots - 1):
                return True
        return False


def exact_min_cover(masks: list[int], universe: int, cap: int | None = None,
                    budget: int | None = None) -> CoverSolution | None:
    """Exact minimum cover with the canonical lexicographic witness.

    Returns None when no cover exists.  A cap bounds the acceptable
    cover size; a cap miss also returns None.
    """
    masks = [m & universe for m in masks]
    if not universe:
        return CoverSolution(0, ())
    union = 0
    for m in masks:
        union |= m
    if universe & ~union:
        return None

    search = _Search(masks, effective_budget(budget))
    greedy = greedy_cover(masks, universe)
    upper = len(greedy) if greedy is not None else popcount(universe) + 1
    best = search.min_size(universe, 0, upper + 1)
    if cap is not None and best > cap:
        return None

    chosen: list[int] = []
    uncovered = universe
    start = 0
    everything = (1 << len(masks)) - 1
    for slot in range(best, 0, -1):
        for i in range(start, len(masks)):
            if not masks[i] & uncovered:
                continue
            tail = everything & ~((1 << (i + 1)) - 1)
            if search.feasible(uncovered & ~masks[i], tail, slot - 1):
                chosen.append(i)
                uncovered &= ~masks[i]
                start = i + 1
                break
        else:
            raise AssertionError("lexicographic reconstruction lost feasibility")
    return CoverSolution(best, tuple(chosen))


def min_hitting_set(sets: list[int], n_points: int, budget: int | None = None
                    ) -> CoverSolution | None:
    """Minimum point set hitting every listed set (points are bit positions).

    Transposes to set cover: candidate j is the point j, covering the
    sets it hits; the canonical witness is ascending in point order.
    """
    masks = []
    for point in range(n_points):
        m = 0
        for k, s in enumerate(sets):
            if s & (1 << point):
                m |= 1 << k
        masks.append(m)
    universe = (1 << len(sets)) - 1
    return exact_min_cover(masks, universe, budget=budget)
