"""Covers by semi-filters: the fusion route between circuits and set families.

A target f splits its assignments into the zero-set U and the one-set V.
Any candidate function g is tracked by the part of U it accepts,
bracket(g); brackets send AND to intersection and OR to union, and the
target itself brackets to the empty set.  A semi-filter is a nontrivial
monotone 0/1 family over the subsets of U whose literal decisions
assemble into a point v(F).  A pair (A, B) covers F when F accepts both
sides but rejects their meet, and the least number of pairs covering
every semi-filter with a one-set point bounds circuit size from below:
the cover value is at most twice the gate count over {NOT, AND2, OR2}.

The converse direction is constructive.  Closing the literal sets of an
assignment z under supersets and the listed meets either reaches the
empty set (verdict 1) or provably cannot (verdict 0), and when the pair
list covers every semi-filter the verdict agrees with f(z) everywhere.
Running the same closure symbolically, one gate per tracked set per
round, rebuilds a circuit for f from the pair list (extract_circuit).
The layered variant replaces semi-filters by short chains of families
and recovers bounded-depth circuits with wide gates
(enumerate_dsemifilters, rho_F0_d_t, extract_depth_circuit).

Conventions.  The universe is the ascending tuple of zero-assignments.
A subset of it is an int whose bit p selects position p; a family over
the subsets is an int whose bit A is F(A), so families over m points
occupy 2^m bits.  Enumeration orders are ascending, pair and tuple
pools are scanned lexicographically, and minimum covers inherit the
canonical witness of the exact cover solver, so equal inputs give equal
outputs everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .budgets import charge, effective_budget
from .circuits import Circuit, CircuitBuilder, standard_basis, subcircuit, truth_table
from .cover import exact_min_cover, min_hitting_set
from .enumeration import enumerate_circuits, min_circuit_size
from .errors import (
    FusionDegenerateError,
    NoAnticheckersError,
    NotACoverError,
    ResourceBudgetError,
)
from .truthtable import TruthTable

MAX_UNIVERSE = 5
MAX_DEPTH_UNIVERSE = 4
MAX_CHAIN_D = 3
MAX_TUPLE_T = 3

_DEDEKIND = {0: 2, 1: 3, 2: 6, 3: 20, 4: 168, 5: 7581}


# -- brackets ---------------------------------------------------------


def bracket(g: TruthTable, universe: tuple[int, ...]) -> int:
    """The subset of universe positions whose assignments g accepts."""
    out = 0
    for p, u in enumerate(universe):
        if (g.mask >> u) & 1:
            out |= 1 << p
    return out


def _literal_brackets(n: int, universe) -> tuple[list[int], list[int]]:
    """Bracket masks of x_1..x_n and of their negations."""
    full = (1 << len(universe)) - 1
    pos = []
    for i in range(n):
        mask = 0
        for p, u in enumerate(universe):
            if (u >> i) & 1:
                mask |= 1 << p
        pos.append(mask)
    return pos, [full ^ mask for mask in pos]


def _upclose(bits: int, m: int) -> int:
    """Close a family indicator under supersets inside an m-point universe."""
    for j in range(m):
        without = 0
        for a in range(1 << m):
            if not (a >> j) & 1:
                without |= 1 << a
        bits |= (bits & without) << (1 << j)
    return bits


def monotone_families(m: int, budget: int | None = None) -> tuple[int, ...]:
    """All monotone 0/1 families over the subsets of an m-point set.

    Subsets are assigned in order of decreasing cardinality and a set
    may be marked 1 only when no strict superset was marked 0, so every
    leaf of the walk is monotone by construction.  The counts are the
    Dedekind numbers 2, 3, 6, 20, 168, 7581 for m = 0..5, which doubles
    as the enumeration's own cross-check; m above 5 is refused.
    """
    if m < 0:
        raise ValueError("universe size must be >= 0")
    if m > MAX_UNIVERSE:
        raise ResourceBudgetError(
            f"monotone families over {m} points outgrow the desk scale (cap {MAX_UNIVERSE})"
        )
    charge(_DEDEKIND[m] * (m + 1) * (1 << m), budget, "monotone_families")
    order = sorted(range(1 << m), key=lambda s: (-bin(s).count("1"), s))
    out: list[int] = []
    zeros: list[int] = []

    def walk(idx: int, bits: int) -> None:
        if idx == len(order):
            out.append(bits)
            return
        s = order[idx]
        if not any(z & s == s for z in zeros):
            walk(idx + 1, bits | (1 << s))
        zeros.append(s)
        walk(idx + 1, bits)
        zeros.pop()

    walk(0, 0)
    return tuple(sorted(out))


# -- semi-filters -----------------------------------------------------


def _check_universe(n: int, universe: tuple[int, ...]) -> None:
    if list(universe) != sorted(set(universe)):
        raise ValueError("universe must be strictly increasing")
    if any(not 0 <= u < (1 << n) for u in universe):
        raise ValueError("universe points must be assignments of the n variables")


@dataclass(frozen=True)
class SemiFilter:
    """A nontrivial monotone family over the subsets of the universe.

    bits is the indicator: bit A holds F(A).  The literal decisions
    F(bracket(x_i)) either assemble into a point v() or clash on some
    variable, in which case v() is None.
    """

    n: int
    universe: tuple[int, ...]
    bits: int

    def __post_init__(self):
        m = len(self.universe)
        if m == 0:
            raise FusionDegenerateError("an empty universe admits no semi-filter")
        _check_universe(self.n, self.universe)
        if not 0 <= self.bits < (1 << (1 << m)):
            raise ValueError("family indicator does not fit the universe")
        if self.bits & 1:
            raise ValueError("not a semi-filter: accepts the empty set")
        if not (self.bits >> ((1 << m) - 1)) & 1:
            raise ValueError("not a semi-filter: rejects the whole universe")
        if _upclose(self.bits, m) != self.bits:
            raise ValueError("not a semi-filter: fails monotonicity under supersets")

    def __call__(self, subset: int) -> int:
        return (self.bits >> subset) & 1

    @property
    def size(self) -> int:
        return len(self.universe)

    def v(self) -> int | None:
        """The assembled point, or None when some literal is undecided."""
        pos, neg = _literal_brackets(self.n, self.universe)
        out = 0
        for i in range(self.n):
            a, b = self(pos[i]), self(neg[i])
            if a == b:
                return None
            if a:
                out |= 1 << i
        return out


def preserves(F: SemiFilter, a: int, b: int) -> bool:
    """Whether F survives the pair: accepting both sides forces the meet."""
    return not (F(a) and F(b) and not F(a & b))


def pair_covers(F: SemiFilter, a: int, b: int) -> bool:
    return not preserves(F, a, b)


@dataclass(frozen=True)
class SemiFilterSet:
    """Semi-filters over a shared universe, tagged with the admissible points.

    v_universe lists the assignments the members' points are drawn
    from.  note carries a diagnostic when the set is degenerate: an
    empty universe, or no family attaining an admissible point.
    """

    n: int
    universe: tuple[int, ...]
    v_universe: tuple[int, ...]
    filters: tuple[SemiFilter, ...]
    note: str = ""

    def __post_init__(self):
        for F in self.filters:
            if F.n != self.n or F.universe != self.universe:
                raise ValueError("filter lives on a different universe")
            v = F.v()
            if v is None or v not in self.v_universe:
                raise ValueError("filter point outside the declared v-universe")

    def __len__(self) -> int:
        return len(self.filters)

    def __iter__(self):
        return iter(self.filters)

    @classmethod
    def from_masks(cls, n, universe, v_universe, masks, note: str = "") -> "SemiFilterSet":
        filters = tuple(SemiFilter(n, tuple(universe), bits) for bits in masks)
        return cls(n, tuple(universe), tuple(v_universe), filters, note)


def _semifilters(n: int, universe: tuple[int, ...], admissible, budget) -> tuple[SemiFilter, ...]:
    m = len(universe)
    top = (1 << m) - 1
    out = []
    for bits in monotone_families(m, budget):
        if bits & 1 or not (bits >> top) & 1:
            continue
        F = SemiFilter(n, universe, bits)
        v = F.v()
        if v is not None and v in admissible:
            out.append(F)
    return tuple(out)


def enumerate_semifilters(f: TruthTable, budget: int | None = None) -> SemiFilterSet:
    """Every semi-filter over the zero-set of f whose point is a one of f.

    Degenerate targets come back empty with a note instead of an error:
    a target without zeros has no universe to build families over, and
    small universes often admit no family with an admissible point at
    all.  The universe is capped at 5 points (Dedekind growth).
    """
    universe = tuple(f.zeros())
    v_universe = tuple(f.ones())
    if not universe:
        return SemiFilterSet(
            f.n, (), v_universe, (), note="empty universe: the target has no zeros"
        )
    if len(universe) > MAX_UNIVERSE:
        raise ResourceBudgetError(
            f"universe of {len(universe)} points outgrows the desk scale (cap {MAX_UNIVERSE})"
        )
    filters = _semifilters(f.n, universe, set(v_universe), budget)
    note = "" if filters else "no semi-filter attains a point in the one-set"
    return SemiFilterSet(f.n, universe, v_universe, filters, note)


# -- pair covers ------------------------------------------------------


@dataclass(frozen=True)
class PairCover:
    """An ordered list of subset pairs, each stored with a <= b."""

    n: int
    universe: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]

    def first_uncovered(self, filters):
        for F in filters:
            if not any(pair_covers(F, a, b) for a, b in self.pairs):
                return F
        return None


@dataclass(frozen=True)
class TupleCover:
    """An ordered list of subset tuples for the depth-d covering game."""

    n: int
    universe: tuple[int, ...]
    d: int
    tuples: tuple[tuple[int, ...], ...]

    def first_uncovered(self, chains):
        for F in chains:
            if not any(tuple_covers(F, tup) for tup in self.tuples):
                return F
        return None


@dataclass(frozen=True)
class FusionRhoResult:
    """A cover value with its canonical witness; unpacks as (value, cover).

    scope counts the families that actually carried a covering
    obligation, infeasible instances report value infinity and no
    cover.
    """

    value: int | float
    cover: PairCover | TupleCover | None
    scope: int

    def __iter__(self):
        yield self.value
        yield self.cover


def _as_pairs(pairs) -> tuple[tuple[int, int], ...]:
    if isinstance(pairs, PairCover):
        return pairs.pairs
    out = []
    for a, b in pairs:
        out.append((a, b) if a <= b else (b, a))
    return tuple(out)


def _pair_pool(mode, universe) -> list[tuple[int, int]]:
    m = len(universe)
    if mode in (None, "all", "brackets"):
        # Every subset T of U is the bracket of the disjunction of the
        # minterms of T's points, so the realized-bracket pool equals
        # the full power set; the mode only matters for explicit pools.
        return [(a, b) for a in range(1 << m) for b in range(a, 1 << m)]
    return list(_as_pairs(mode))


def _exact_group_cover(elements, groups, hits, budget):
    """Minimum choice of groups hitting every element.

    Coverage-equal groups collapse to their first occurrence, which
    keeps the solver's witness the lexicographically least one over the
    original group order.  Returns (size, chosen, None), or
    (None, None, witness) with some unhit element.
    """
    masks, kept = [], []
    seen = set()
    for grp in groups:
        mask = 0
        for k, el in enumerate(elements):
            if hits(el, grp):
                mask |= 1 << k
        if mask and mask not in seen:
            seen.add(mask)
            masks.append(mask)
            kept.append(grp)
    want = (1 << len(elements)) - 1
    got = 0
    for mask in masks:
        got |= mask
    if got != want:
        missing = (got ^ want) & -(got ^ want)
        return None, None, elements[missing.bit_length() - 1]
    solution = exact_min_cover(masks, want, budget=budget)
    return solution.size, tuple(kept[i] for i in solution.chosen), None


def rho_F0(f: TruthTable, F0, pair_pool=None, budget: int | None = None) -> FusionRhoResult:
    """Fewest pairs covering every family of F0 whose point is a one of f.

    F0 is a SemiFilterSet or any iterable of SemiFilter over the
    zero-set of f.  Members whose point falls outside the one-set
    cannot arise from any assignment the lower bound argues about, so
    they carry no covering obligation; for the enumerated family of f
    this scoping changes nothing.  pair_pool None (or "all", or
    "brackets", which provably coincide) scans all unordered subset
    pairs in lexicographic order, an explicit iterable is used in the
    given order.  The value is at most twice the optimal circuit size
    of f over {NOT, AND2, OR2}; infeasible instances return infinity
    and no cover.
    """
    filters = tuple(F0.filters) if hasattr(F0, "filters") else tuple(F0)
    universe = tuple(f.zeros())
    for F in filters:
        if F.n != f.n or F.universe != universe:
            raise ValueError("filter set does not live on the zero-set of the target")
    ones = set(f.ones())
    scoped = [F for F in filters if F.v() in ones]
    if not scoped:
        return FusionRhoResult(0, PairCover(f.n, universe, ()), 0)
    pool = _pair_pool(pair_pool, universe)
    charge(len(scoped) * len(pool), budget, "rho_F0 coverage table")
    value, chosen, _ = _exact_group_cover(
        scoped, pool, lambda F, pr: pair_covers(F, pr[0], pr[1]), budget
    )
    if value is None:
        return FusionRhoResult(math.inf, None, len(scoped))
    return FusionRhoResult(value, PairCover(f.n, universe, chosen), len(scoped))


def rho_S_F0(f: TruthTable, sample, pair_pool=None, budget: int | None = None) -> FusionRhoResult:
    """The pair cover value over the universe restricted to a sample.

    Only zeros of f inside the sample form the universe and only ones
    inside it are admissible points.  Restriction never increases the
    value: a family over the restricted universe extends to the full
    one by reading each subset through its trace on the sample, and the
    extension is covered by the same pairs.
    """
    points = set(sample)
    universe = tuple(u for u in f.zeros() if u in points)
    v_universe = tuple(v for v in f.ones() if v in points)
    if not universe:
        return FusionRhoResult(0, PairCover(f.n, (), ()), 0)
    if len(universe) > MAX_UNIVERSE:
        raise ResourceBudgetError(
            f"restricted universe of {len(universe)} points outgrows the desk scale"
        )
    filters = _semifilters(f.n, universe, set(v_universe), budget)
    if not filters:
        return FusionRhoResult(0, PairCover(f.n, universe, ()), 0)
    pool = _pair_pool(pair_pool, universe)
    charge(len(filters) * len(pool), budget, "rho_S_F0 coverage table")
    value, chosen, _ = _exact_group_cover(
        filters, pool, lambda F, pr: pair_covers(F, pr[0], pr[1]), budget
    )
    if value is None:
        return FusionRhoResult(math.inf, None, len(filters))
    return FusionRhoResult(value, PairCover(f.n, universe, chosen), len(filters))


# -- closures and extraction -----------------------------------------


@dataclass(frozen=True)
class ClosureTrace:
    """Round by round closure values over the tracked family.

    family lists the tracked subsets in ascending order; levels[k][j]
    is the round-k value at family[j]; the verdict is the final value
    at the empty set.
    """

    n: int
    universe: tuple[int, ...]
    z: int
    family: tuple[int, ...]
    levels: tuple[tuple[int, ...], ...]
    verdict: int

    def value(self, k: int, subset: int) -> int:
        return self.levels[k][self.family.index(subset)]


def _pair_family(n: int, universe, pairs) -> tuple[int, ...]:
    pos, neg = _literal_brackets(n, universe)
    fam = {0}
    fam.update(pos)
    fam.update(neg)
    for a, b in pairs:
        fam.update((a, b, a & b))
    return tuple(sorted(fam))


def fz_closure(pairs, f: TruthTable, z: int, budget: int | None = None) -> ClosureTrace:
    """Close the literal sets of z under the pair rules and read a verdict.

    Only the subsets the rules can mention are tracked: the sides and
    meets of the pairs, the literal brackets and the empty set.  Round
    zero holds the literal sets of z; each later round adds tracked
    subsets of accepted sets, meets of accepted pair sides, and the
    empty set once some variable has both its literal sets accepted.
    As many rounds run as there are tracked sets, which always reaches
    the fixpoint.  The verdict (the final value at the empty set)
    equals f(z) at every z whenever the pairs cover every semi-filter
    of the target.
    """
    if not 0 <= z < (1 << f.n):
        raise ValueError(f"assignment {z} does not fit {f.n} variables")
    if f.n == 0 and f.mask == 1:
        raise FusionDegenerateError(
            "a zero-variable tautology leaves the closure nothing to start from"
        )
    plist = _as_pairs(pairs)
    universe = tuple(f.zeros())
    pos, neg = _literal_brackets(f.n, universe)
    fam = _pair_family(f.n, universe, plist)
    rounds = len(fam)
    charge(rounds * len(fam) * (len(fam) + len(plist) + f.n), budget, "fz_closure")
    w = {}
    for B in fam:
        hit = any(
            (B == pos[i] and (z >> i) & 1) or (B == neg[i] and not (z >> i) & 1)
            for i in range(f.n)
        )
        w[B] = 1 if hit else 0
    levels = [tuple(w[B] for B in fam)]
    subs = {B: [C for C in fam if C & B == C] for B in fam}
    meets = {B: [(a, b) for a, b in plist if a & b == B] for B in fam}
    for _ in range(rounds):
        litpair = any(w[pos[i]] and w[neg[i]] for i in range(f.n))
        nxt = {}
        for B in fam:
            val = (
                litpair
                or any(w[C] for C in subs[B])
                or any(w[a] and w[b] for a, b in meets[B])
            )
            nxt[B] = 1 if val else 0
        w = nxt
        levels.append(tuple(w[B] for B in fam))
    return ClosureTrace(f.n, universe, z, fam, tuple(levels), w[0])


def closure_filters(pairs, f: TruthTable, budget: int | None = None):
    """The valid closures of a pair list: its certificate of failure.

    For each one z of f, the semantic closure starts from the literal
    sets of z and closes under supersets, the meets of accepted pair
    sides, and the meet of any decided literal pair.  A closure missing
    the empty set is a semi-filter with point z that preserves every
    listed pair, so no list covers its own valid closures; an empty
    result is exactly the situation where every closure verdict matches
    the target.  Returns (z, closure) pairs in ascending z order.
    """
    plist = _as_pairs(pairs)
    universe = tuple(f.zeros())
    m = len(universe)
    if m > MAX_UNIVERSE:
        raise ResourceBudgetError(
            f"universe of {m} points outgrows the desk scale (cap {MAX_UNIVERSE})"
        )
    pos, neg = _literal_brackets(f.n, universe)
    ones = f.ones()
    charge(len(ones) * (1 << m) * (len(plist) + f.n + m + 1), budget, "closure_filters")
    out = []
    for z in ones:
        bits = 0
        for i in range(f.n):
            bits |= 1 << (pos[i] if (z >> i) & 1 else neg[i])
        while True:
            new = _upclose(bits, m)
            for a, b in plist:
                if (new >> a) & 1 and (new >> b) & 1:
                    new |= 1 << (a & b)
            for i in range(f.n):
                if (new >> pos[i]) & 1 and (new >> neg[i]) & 1:
                    new |= 1
            if new == bits:
                break
            bits = new
        if not bits & 1:
            out.append((z, SemiFilter(f.n, universe, bits)))
    return tuple(out)


@dataclass(frozen=True)
class ExtractionReport:
    """A circuit rebuilt from a pair list, with its size accounting."""

    circuit: Circuit
    size: int
    depth: int
    pair_count: int
    family_size: int
    rounds: int


def extract_circuit(pairs, f: TruthTable, budget: int | None = None) -> ExtractionReport:
    """Rebuild a circuit for f from a pair list covering its semi-filters.

    The closure of fz_closure runs symbolically: round zero is a
    disjunction of literals per tracked set, each later round one OR
    gate over tracked subsets, listed meets and the shared literal-pair
    clash term.  Negations enter only through round-zero literals.  The
    gate count is bounded by rounds * family work, cubic in the pair
    count in the worst case; the report carries the exact numbers.

    pre: the pairs cover every enumerated semi-filter of f, otherwise
    NotACoverError names an uncovered one.
    """
    if f.n == 0 and f.mask == 1:
        raise FusionDegenerateError(
            "a zero-variable tautology leaves the closure nothing to start from"
        )
    plist = _as_pairs(pairs)
    universe = tuple(f.zeros())
    family_all = enumerate_semifilters(f, budget)
    bad = PairCover(f.n, universe, plist).first_uncovered(family_all.filters)
    if bad is not None:
        raise NotACoverError(
            f"pair list misses a semi-filter with point {bad.v()}", witness=bad
        )
    pos, neg = _literal_brackets(f.n, universe)
    fam = _pair_family(f.n, universe, plist)
    charge(len(fam) * len(fam) * (len(fam) + len(plist) + f.n), budget, "extract_circuit")
    bld = CircuitBuilder(f.n, intern=True)
    w = {}
    for B in fam:
        lits = [bld.literal(i + 1, True) for i in range(f.n) if pos[i] == B]
        lits += [bld.literal(i + 1, False) for i in range(f.n) if neg[i] == B]
        w[B] = bld.or_all(lits)
    subs = {B: [C for C in fam if C & B == C] for B in fam}
    meets = {B: [(a, b) for a, b in plist if a & b == B] for B in fam}
    for _ in range(len(fam)):
        litpair = bld.or_all(
            [bld.and_all([w[pos[i]], w[neg[i]]]) for i in range(f.n)]
        )
        nxt = {}
        for B in fam:
            terms = [w[C] for C in subs[B]]
            terms += [bld.and_all([w[a], w[b]]) for a, b in meets[B]]
            terms.append(litpair)
            nxt[B] = bld.or_all(terms)
        w = nxt
    circuit = subcircuit(bld.build(w[0]), w[0])
    assert truth_table(circuit) == f, "closure extraction must reproduce the target"
    return ExtractionReport(
        circuit=circuit,
        size=circuit.size,
        depth=circuit.depth,
        pair_count=len(plist),
        family_size=len(fam),
        rounds=len(fam),
    )


# -- anticheckers -----------------------------------------------------


def anticheckers(f: TruthTable, s: int, basis=None, budget: int | None = None) -> tuple[int, ...]:
    """A smallest assignment set witnessing that size-s circuits miss f.

    Enumerates all circuits of at most s gates over the basis,
    collapses them to their truth tables, and takes a minimum hitting
    set of the disagreement sets with f.  Every circuit of size at most
    s then differs from f somewhere on the returned set.  When f itself
    is computable within the bound no set can work and
    NoAnticheckersError reports the achieved size.
    """
    basis = tuple(basis) if basis is not None else standard_basis()
    achieved = min_circuit_size(f, basis, s, budget=budget)
    if achieved is not None:
        raise NoAnticheckersError(
            f"target is computable in size {achieved} within the bound {s}"
        )
    seen = set()
    disagreements = []
    for circuit in enumerate_circuits(f.n, basis, s, budget=budget):
        g = truth_table(circuit)
        if g.mask in seen:
            continue
        seen.add(g.mask)
        disagreements.append((f ^ g).mask)
    solution = min_hitting_set(disagreements, 1 << f.n, budget=budget)
    return tuple(solution.chosen)


# -- layered chains ---------------------------------------------------


@dataclass(frozen=True)
class DSemiFilter:
    """A chain of families with layered monotonicity between levels.

    levels holds the indicators of F^0 .. F^d.  A member of level k-1
    forces all its supersets into level k; individual levels need not
    be monotone on their own.  The endpoints are pinned (the last level
    rejects the empty set, the first accepts the universe) and level
    zero decides every literal, so the point v() is always defined.
    The pinning propagates: no level accepts the empty set, every
    level accepts the universe.
    """

    n: int
    universe: tuple[int, ...]
    levels: tuple[int, ...]

    def __post_init__(self):
        m = len(self.universe)
        if m == 0:
            raise FusionDegenerateError("an empty universe admits no chain")
        _check_universe(self.n, self.universe)
        if not self.levels:
            raise ValueError("a chain needs at least one level")
        for bits in self.levels:
            if not 0 <= bits < (1 << (1 << m)):
                raise ValueError("level indicator does not fit the universe")
        if self.levels[-1] & 1:
            raise ValueError("not a chain: the last level accepts the empty set")
        if not (self.levels[0] >> ((1 << m) - 1)) & 1:
            raise ValueError("not a chain: the first level rejects the universe")
        for k in range(1, len(self.levels)):
            if _upclose(self.levels[k - 1], m) & ~self.levels[k]:
                raise ValueError(f"not a chain: level {k} drops a forced superset")
        if self.v() is None:
            raise ValueError("not a chain: some literal is undecided at level zero")

    @property
    def d(self) -> int:
        return len(self.levels) - 1

    def level(self, k: int, subset: int) -> int:
        return (self.levels[k] >> subset) & 1

    def v(self) -> int | None:
        pos, neg = _literal_brackets(self.n, self.universe)
        out = 0
        for i in range(self.n):
            a, b = self.level(0, pos[i]), self.level(0, neg[i])
            if a == b:
                return None
            if a:
                out |= 1 << i
        return out


def k_preserves(F: DSemiFilter, k: int, sets) -> bool:
    """Whether the chain survives the tuple at step k.

    All members accepted at level k-1 force their meet at level k;
    breaking that is what a tuple covering the chain means.
    """
    if not 1 <= k <= F.d:
        raise ValueError(f"step {k} outside 1..{F.d}")
    meet = (1 << len(F.universe)) - 1
    premise = True
    for a in sets:
        premise = premise and bool(F.level(k - 1, a))
        meet &= a
    return not (premise and not F.level(k, meet))


def tuple_covers(F: DSemiFilter, sets) -> bool:
    return any(not k_preserves(F, k, sets) for k in range(1, F.d + 1))


def enumerate_dsemifilters(f: TruthTable, d: int, budget: int | None = None) -> tuple[DSemiFilter, ...]:
    """All d-step chains over the zero-set of f with a one-set point.

    Level zero ranges over indicators rejecting the empty set,
    accepting the universe and deciding every literal into the one-set;
    each later level extends the superset closure of its predecessor by
    any empty-set-free choice of further members.  Chains come back in
    ascending lexicographic order of their level indicators.  The
    universe is capped at 4 points and d at 3; the walk charges the
    budget as it goes, since level extensions multiply.
    """
    if d < 0:
        raise ValueError("chain length d must be >= 0")
    if d > MAX_CHAIN_D:
        raise ResourceBudgetError(
            f"chains of {d} steps outgrow the desk scale (cap {MAX_CHAIN_D})"
        )
    universe = tuple(f.zeros())
    if not universe:
        return ()
    if len(universe) > MAX_DEPTH_UNIVERSE:
        raise ResourceBudgetError(
            f"universe of {len(universe)} points outgrows the chain scale"
            f" (cap {MAX_DEPTH_UNIVERSE})"
        )
    m = len(universe)
    nsub = 1 << m
    top = nsub - 1
    limit = effective_budget(budget)
    spent = 0

    def tick():
        nonlocal spent
        spent += 1
        if spent > limit:
            raise ResourceBudgetError(
                "chain enumeration ran out of budget", estimate=spent, budget=limit
            )

    ones = set(f.ones())
    pos, neg = _literal_brackets(f.n, universe)
    starts = []
    for bits in range(1 << nsub):
        tick()
        if bits & 1 or not (bits >> top) & 1:
            continue
        v, ok = 0, True
        for i in range(f.n):
            a, b = (bits >> pos[i]) & 1, (bits >> neg[i]) & 1
            if a == b:
                ok = False
                break
            if a:
                v |= 1 << i
        if ok and v in ones:
            starts.append(bits)
    out = []

    def extend(levels: list[int]) -> None:
        if len(levels) == d + 1:
            out.append(DSemiFilter(f.n, universe, tuple(levels)))
            return
        base = _upclose(levels[-1], m)
        free = ((1 << nsub) - 1) & ~base & ~1
        s = 0
        while True:
            tick()
            levels.append(base | s)
            extend(levels)
            levels.pop()
            s = (s - free) & free
            if s == 0:
                break

    for b0 in starts:
        extend([b0])
    return tuple(out)


def rho_F0_d_t(
    f: TruthTable, F0, d: int, t: int, budget: int | None = None
) -> FusionRhoResult:
    """Fewest t-tuples of subsets breaking every chain in F0 at some step.

    F0 holds chains of d-1 steps (as built by enumerate_dsemifilters
    with d-1); a tuple covers a chain when k_preserves fails for some
    step.  Candidate tuples are the ascending multisets over the subset
    lattice: padding with the universe emulates shorter tuples and
    repeats are meaningful, because the levels of a premise and its
    conclusion differ.  Chains whose point falls outside the one-set
    carry no obligation, matching the pair case.  Value infinity with
    no cover when the whole pool leaves some chain unbroken.
    """
    if d < 2:
        raise ValueError("depth parameter d must be >= 2")
    if d > MAX_CHAIN_D:
        raise ResourceBudgetError(
            f"depth parameter {d} outgrows the desk scale (cap {MAX_CHAIN_D})"
        )
    if t < 1:
        raise ValueError("tuple width t must be >= 1")
    if t > MAX_TUPLE_T:
        raise ResourceBudgetError(
            f"tuple width {t} outgrows the desk scale (cap {MAX_TUPLE_T})"
        )
    chains = tuple(F0)
    universe = tuple(f.zeros())
    for F in chains:
        if F.n != f.n or F.universe != universe:
            raise ValueError("chain does not live on the zero-set of the target")
        if F.d != d - 1:
            raise ValueError(f"chain has {F.d} steps, expected {d - 1}")
    ones = set(f.ones())
    scoped = [F for F in chains if F.v() in ones]
    if not scoped:
        return FusionRhoResult(0, TupleCover(f.n, universe, d, ()), 0)
    m = len(universe)
    pool = list(combinations_with_replacement(range(1 << m), t))
    charge(len(scoped) * len(pool) * t * (d - 1), budget, "rho_F0_d_t coverage table")
    value, chosen, _ = _exact_group_cover(scoped, pool, tuple_covers, budget)
    if value is None:
        return FusionRhoResult(math.inf, None, len(scoped))
    return FusionRhoResult(value, TupleCover(f.n, universe, d, chosen), len(scoped))


def _as_tuples(tuples) -> tuple[tuple[int, ...], ...]:
    if isinstance(tuples, TupleCover):
        return tuples.tuples
    return tuple(tuple(tup) for tup in tuples)


def _tuple_meet(tup, full: int) -> int:
    out = full
    for a in tup:
        out &= a
    return out


def _tuple_family(n: int, universe, tuples) -> tuple[int, ...]:
    full = (1 << len(universe)) - 1
    pos, neg = _literal_brackets(n, universe)
    fam = {0, full}
    fam.update(pos)
    fam.update(neg)
    for tup in tuples:
        fam.update(tup)
        fam.add(_tuple_meet(tup, full))
    return tuple(sorted(fam))


@dataclass(frozen=True)
class DepthExtractionReport:
    """A bounded-depth circuit rebuilt from a tuple list, with its bounds."""

    circuit: Circuit
    size: int
    depth: int
    depth_bound: int
    fan_in: int
    fan_in_bound: int
    tuple_count: int
    family_size: int


def extract_depth_circuit(
    tuples, f: TruthTable, d: int, t: int, budget: int | None = None
) -> DepthExtractionReport:
    """Rebuild a bounded-depth circuit from a covering tuple list.

    The layered closure runs one round per chain step (d-1 rounds) over
    the tracked family with wide gates: round zero is a wide OR of
    literals per tracked set (constant 1 at the universe itself), each
    later round one wide OR over tracked subsets and listed meets.  The
    result stays within depth 2d+1 over negations and wide gates and
    within fan-in s(t+2) + 2n + 2 for s tuples; the report carries the
    measured values next to those bounds.

    pre: the tuples cover every chain of d-1 steps over the zero-set,
    otherwise NotACoverError names an uncovered one.
    """
    if d < 2:
        raise ValueError("depth parameter d must be >= 2")
    if d > MAX_CHAIN_D:
        raise ResourceBudgetError(
            f"depth parameter {d} outgrows the desk scale (cap {MAX_CHAIN_D})"
        )
    tlist = _as_tuples(tuples)
    for tup in tlist:
        if len(tup) != t:
            raise ValueError(f"tuple {tup} does not have the declared width {t}")
    universe = tuple(f.zeros())
    chains = enumerate_dsemifilters(f, d - 1, budget)
    bad = TupleCover(f.n, universe, d, tlist).first_uncovered(chains)
    if bad is not None:
        raise NotACoverError(
            f"tuple list misses a chain with point {bad.v()}", witness=bad
        )
    m = len(universe)
    full = (1 << m) - 1
    pos, neg = _literal_brackets(f.n, universe)
    fam = _tuple_family(f.n, universe, tlist)
    charge((d - 1) * len(fam) * (len(fam) + len(tlist) * t + f.n), budget,
           "extract_depth_circuit")
    bld = CircuitBuilder(f.n, intern=True)
    w = {}
    for B in fam:
        if B == full:
            w[B] = bld.const(1)
            continue
        lits = [bld.literal(i + 1, True) for i in range(f.n) if pos[i] == B]
        lits += [bld.literal(i + 1, False) for i in range(f.n) if neg[i] == B]
        w[B] = bld.or_wide(lits)
    subs = {B: [C for C in fam if C & B == C] for B in fam}
    meets = {B: [tup for tup in tlist if _tuple_meet(tup, full) == B] for B in fam}
    for _ in range(d - 1):
        nxt = {}
        for B in fam:
            terms = [w[C] for C in subs[B]]
            terms += [bld.and_wide([w[a] for a in tup]) for tup in meets[B]]
            nxt[B] = bld.or_wide(terms)
        w = nxt
    circuit = subcircuit(bld.build(w[0]), w[0])
    assert truth_table(circuit) == f, "layered extraction must reproduce the target"
    fan_in = max(
        (len(g.children) for g in circuit.gates if g.is_application()), default=0
    )
    depth_bound = 2 * d + 1
    fan_in_bound = len(tlist) * (t + 2) + 2 * f.n + 2
    assert circuit.depth <= depth_bound, "layered extraction exceeded its depth bound"
    assert fan_in <= fan_in_bound, "layered extraction exceeded its fan-in bound"
    return DepthExtractionReport(
        circuit=circuit,
        size=circuit.size,
        depth=circuit.depth,
        depth_bound=depth_bound,
        fan_in=fan_in,
        fan_in_bound=fan_in_bound,
        tuple_count=len(tlist),
        family_size=len(fam),
    )
