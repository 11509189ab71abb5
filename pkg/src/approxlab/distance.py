"""Distances between functions and approximation models.

A cover certificate names a member g and a list of gate tuples whose
error sets absorb the disagreement between the target and g.  In
symmetric mode the full deltas cover f xor g; in the asymmetric
(Razborov-oriented) mode each tuple is tagged with the side it serves:
plus-tagged tuples cover f minus g through their positive error sets,
minus-tagged tuples cover g minus f through the negative ones.

rho_exact minimizes the tuple count over candidate g's by exact set
cover; rho_probabilistic is the error-density ratio under an input
distribution, computed in exact rationals; rho_d_exact restricts g and
the tuple inputs to approximators of depth-bounded circuits and
returns witness circuits alongside the cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .budgets import charge
from .circuits import Circuit, Connective, standard_basis, truth_table
from .cover import exact_min_cover, greedy_cover
from .enumeration import enumerate_circuits
from .errors import DegenerateModelError, MalformedCertificateError
from .models import ApproxModel, ErrorSetTuple
from .truthtable import TruthTable, full_mask


# -- input distributions ---------------------------------------------


class InputDistribution:
    """Exact rational probabilities over the 2^n assignments."""

    def __init__(self, n: int, weights: dict[int, Fraction]):
        self.n = n
        self.weights = {x: Fraction(p) for x, p in weights.items() if p}
        for x, p in self.weights.items():
            if not 0 <= x < (1 << n):
                raise ValueError(f"assignment {x} outside range")
            if p < 0:
                raise ValueError(f"negative probability at {x}")
        if sum(self.weights.values(), Fraction(0)) != 1:
            raise ValueError("probabilities do not sum to 1")

    @classmethod
    def uniform(cls, n: int) -> "InputDistribution":
        p = Fraction(1, 1 << n)
        return cls(n, {x: p for x in range(1 << n)})

    def prob(self, x: int) -> Fraction:
        return self.weights.get(x, Fraction(0))

    def mass(self, table: TruthTable) -> Fraction:
        return sum((p for x, p in self.weights.items() if table(x)), Fraction(0))


# -- certificates ----------------------------------------------------


@dataclass(frozen=True)
class CertTuple:
    conn: Connective
    members: tuple[int, ...]
    side: str | None = None  # '+' or '-' in asymmetric mode

    def key(self) -> tuple:
        return (self.conn.name, self.conn.arity, self.members, self.side or "")


@dataclass(frozen=True)
class CoverCertificate:
    mode: str  # 'sym' | 'asym'
    g: int
    tuples: tuple[CertTuple, ...]

    @property
    def size(self) -> int:
        return len(self.tuples)


@dataclass(frozen=True)
class DepthCoverCertificate:
    """Cover certificate whose g and tuple inputs carry depth-bounded witnesses."""

    mode: str
    g: int
    tuples: tuple[CertTuple, ...]
    depth: int
    g_witness: Circuit
    input_witnesses: tuple[tuple[int, Circuit], ...]  # member id -> witness, sorted by id

    @property
    def size(self) -> int:
        return len(self.tuples)

    def witness_for(self, member: int) -> Circuit | None:
        for mid, circ in self.input_witnesses:
            if mid == member:
                return circ
        return None


@dataclass
class VerifyResult:
    ok: bool
    reason: str = ""
    witness: int | None = None  # uncovered assignment, when coverage fails


def _check_ids(model: ApproxModel, cert):
    limit = len(model.members)
    if not 0 <= cert.g < limit:
        raise MalformedCertificateError(f"g={cert.g} is not a member id (have {limit})")
    for t in cert.tuples:
        for i in t.members:
            if not 0 <= i < limit:
                raise MalformedCertificateError(
                    f"tuple {t.key()} references member {i} (have {limit})"
                )


def verify_cover(f: TruthTable, model: ApproxModel, cert) -> VerifyResult:
    """Check the coverage inclusions of a certificate; depth side-conditions included."""
    _check_ids(model, cert)
    g = model.members[cert.g]
    if cert.mode == "sym":
        target = f ^ g
        union = TruthTable.const(model.n, 0)
        for t in cert.tuples:
            union |= model.error_set(t.conn, t.members).delta
        missing = target.minus(union)
        if not missing.is_zero():
            x = missing.ones()[0]
            return VerifyResult(False, f"assignment {x} in f xor g escapes every delta", x)
    elif cert.mode == "asym":
        plus = TruthTable.const(model.n, 0)
        minus = TruthTable.const(model.n, 0)
        for t in cert.tuples:
            if t.side == "+":
                plus |= model.error_set(t.conn, t.members).delta_plus
            elif t.side == "-":
                minus |= model.error_set(t.conn, t.members).delta_minus
            else:
                raise MalformedCertificateError(f"asym tuple {t.key()} has no side tag")
        miss_plus = f.minus(g).minus(plus)
        if not miss_plus.is_zero():
            x = miss_plus.ones()[0]
            return VerifyResult(False, f"assignment {x} in f minus g escapes the plus side", x)
        miss_minus = g.minus(f).minus(minus)
        if not miss_minus.is_zero():
            x = miss_minus.ones()[0]
            return VerifyResult(False, f"assignment {x} in g minus f escapes the minus side", x)
    else:
        raise MalformedCertificateError(f"unknown certificate mode {cert.mode!r}")

    if isinstance(cert, DepthCoverCertificate):
        return _verify_depth_side(f, model, cert)
    return VerifyResult(True)


def _verify_depth_side(f: TruthTable, model: ApproxModel, cert: DepthCoverCertificate
                       ) -> VerifyResult:
    if cert.g_witness.depth > cert.depth:
        return VerifyResult(False, f"g witness depth {cert.g_witness.depth} > {cert.depth}")
    if model.approximate_circuit(cert.g_witness) != cert.g:
        return VerifyResult(False, "g witness does not approximate to g")
    witnessed = dict(cert.input_witnesses)
    for t in cert.tuples:
        for i in t.members:
            circ = witnessed.get(i)
            if circ is None:
                return VerifyResult(False, f"tuple input member {i} has no witness circuit")
            if circ.depth > cert.depth - 1:
                return VerifyResult(
                    False, f"witness for member {i} has depth {circ.depth} > {cert.depth - 1}"
                )
            if model.approximate_circuit(circ) != i:
                return VerifyResult(False, f"witness for member {i} approximates elsewhere")
    return VerifyResult(True)


def asym_from_sym(cert: CoverCertificate) -> CoverCertificate:
    """Use every tuple on both sides; at most doubles the size."""
    if cert.mode != "sym":
        raise ValueError("expected a symmetric certificate")
    tuples = []
    for t in cert.tuples:
        tuples.append(CertTuple(t.conn, t.members, "+"))
        tuples.append(CertTuple(t.conn, t.members, "-"))
    return CoverCertificate("asym", cert.g, tuple(tuples))


# -- rho computations ------------------------------------------------


@dataclass
class RhoResult:
    value: float  # int-valued, or math.inf
    exact: bool
    cert: object | None
    g: int | None = None
    note: str = ""

    @property
    def infinite(self) -> bool:
        return self.value == math.inf


def _sym_universe(f, g_table, n):
    return (f ^ g_table).mask


def _candidate_masks(mode: str, pool: list[ErrorSetTuple], f: TruthTable, g_table: TruthTable,
                     n: int) -> tuple[list[CertTuple], list[int], int]:
    if mode == "sym":
        cands = [CertTuple(t.conn, t.members) for t in pool]
        masks = [t.delta.mask for t in pool]
        return cands, masks, (f ^ g_table).mask
    shift = 1 << n
    cands, masks = [], []
    for t in pool:
        cands.append(CertTuple(t.conn, t.members, "+"))
        masks.append(t.delta_plus.mask)
        cands.append(CertTuple(t.conn, t.members, "-"))
        masks.append(t.delta_minus.mask << shift)
    universe = f.minus(g_table).mask | (g_table.minus(f).mask << shift)
    return cands, masks, universe


def rho_exact(f: TruthTable, model: ApproxModel, mode: str = "sym",
              basis=None, pool: list[ErrorSetTuple] | None = None,
              g_candidates: list[int] | None = None,
              size_cap: int | None = None, budget: int | None = None,
              greedy_only: bool = False) -> RhoResult:
    """Minimum tuple count over candidate g's, with the canonical witness cover.

    The pool defaults to every tuple over the materialized members.
    The result is exact relative to the supplied pools; capped pools
    make it a labeled upper bound.  Ties break on the lowest g index,
    then the lexicographically least set of tuple keys.
    """
    if mode not in ("sym", "asym"):
        raise ValueError(f"unknown mode {mode!r}")
    if pool is None:
        pool = model.enumerate_error_sets(basis or standard_basis(), budget=budget)
    pool = sorted(pool, key=lambda t: t.key())
    if g_candidates is None:
        g_candidates = list(range(len(model.members)))
    exact = size_cap is None

    best: tuple[int, int, tuple[CertTuple, ...]] | None = None
    for g in g_candidates:
        g_table = model.members[g]
        cands, masks, universe = _candidate_masks(mode, pool, f, g_table, model.n)
        if greedy_only:
            chosen = greedy_cover(masks, universe)
            if chosen is None:
                continue
            if best is None or len(chosen) < best[0]:
                best = (len(chosen), g, tuple(cands[i] for i in chosen))
            continue
        cap = size_cap
        if best is not None:
            cap = best[0] - 1 if cap is None else min(cap, best[0] - 1)
        sol = exact_min_cover(masks, universe, cap=cap, budget=budget)
        if sol is None:
            continue
        if best is None or sol.size < best[0]:
            best = (sol.size, g, tuple(cands[i] for i in sol.chosen))

    if best is None:
        note = "no candidate g admits a cover"
        if size_cap is not None:
            note += f" within size cap {size_cap}"
        return RhoResult(math.inf, exact, None, note=note)
    size, g, tuples = best
    cert = CoverCertificate(mode, g, tuples)
    note = "" if not greedy_only else "greedy upper bound"
    return RhoResult(size, exact and not greedy_only, cert, g=g, note=note)


@dataclass
class RhoProbResult:
    value: Fraction
    density: Fraction
    g: int
    bound_tuple: tuple


def rho_probabilistic(f: TruthTable, model: ApproxModel, dist: InputDistribution,
                      basis=None, budget: int | None = None) -> RhoProbResult:
    """min_g Pr[f != g] / d with d the largest delta mass over the pool.

    Undefined when d = 0 (the exact model); raises then.
    """
    pool = model.enumerate_error_sets(basis or standard_basis(), budget=budget)
    density = Fraction(0)
    densest: tuple = ()
    for t in sorted(pool, key=lambda t: t.key()):
        mass = dist.mass(t.delta)
        if mass > density:
            density, densest = mass, t.key()
    if density == 0:
        raise DegenerateModelError(
            "every tuple has zero error mass; the ratio is undefined for this model"
        )
    best_g, best_err = -1, None
    for g, table in enumerate(model.members):
        err = dist.mass(f ^ table)
        if best_err is None or err < best_err:
            best_g, best_err = g, err
    return RhoProbResult(best_err / density, density, best_g, densest)


def rho_d_exact(f: TruthTable, model: ApproxModel, d: int, mode: str = "sym",
                basis=None, size_cap: int = 6, budget: int | None = None) -> RhoResult:
    """rho restricted to depth-d approximator g's and depth-(d-1) tuple inputs.

    Witness circuits come from canonical enumeration capped at size_cap
    gates, so the value is exact relative to that pool and never
    smaller than unrestricted rho on the same tuples.
    """
    basis = basis or standard_basis()
    g_pool: dict[int, Circuit] = {}
    input_pool: dict[int, Circuit] = {}
    for circuit in enumerate_circuits(f.n, basis, size_cap, max_depth=d, budget=budget):
        member = model.approximate_circuit(circuit)
        if member not in g_pool:
            g_pool[member] = circuit
        if circuit.depth <= d - 1 and member not in input_pool:
            input_pool[member] = circuit

    eligible = sorted(input_pool)
    pool = []
    import itertools

    for conn in sorted(basis, key=lambda c: (c.name, c.arity)):
        for ids in itertools.combinations_with_replacement(eligible, conn.arity):
            pool.append(model.error_set(conn, ids))
    pool.sort(key=lambda t: t.key())

    best: tuple[int, int, tuple[CertTuple, ...]] | None = None
    for g in sorted(g_pool):
        g_table = model.members[g]
        cands, masks, universe = _candidate_masks(mode, pool, f, g_table, model.n)
        cap = None if best is None else best[0] - 1
        sol = exact_min_cover(masks, universe, cap=cap, budget=budget)
        if sol is None:
            continue
        if best is None or sol.size < best[0]:
            best = (sol.size, g, tuple(cands[i] for i in sol.chosen))

    if best is None:
        return RhoResult(math.inf, True, None, note="no depth-bounded cover exists")
    size, g, tuples = best
    used = sorted({i for t in tuples for i in t.members})
    cert = DepthCoverCertificate(
        mode, g, tuples, d, g_pool[g],
        tuple((i, input_pool[i]) for i in used),
    )
    return RhoResult(size, True, cert, g=g)


def cert_from_circuit(f: TruthTable, model: ApproxModel, circuit: Circuit) -> CoverCertificate:
    """Per-gate tuple certificate; tuple count is at most the circuit size.

    Walking an error from the output to a gate whose inputs agree with
    their approximators lands it in that gate's error set, so the
    per-gate tuples always cover f xor g.
    """
    if truth_table(circuit) != f:
        raise ValueError("circuit does not compute the target function")
    assigned = model.approximate_gates(circuit)
    seen = set()
    tuples = []
    for gate, member in zip(circuit.gates, assigned):
        if gate.kind != "op":
            continue
        ids = tuple(assigned[c] for c in gate.children)
        if gate.conn.commutative:
            ids = tuple(sorted(ids))
        key = (gate.conn.name, gate.conn.arity, ids)
        if key not in seen:
            seen.add(key)
            tuples.append(CertTuple(gate.conn, ids))
    tuples.sort(key=lambda t: t.key())
    return CoverCertificate("sym", assigned[circuit.output], tuple(tuples))
