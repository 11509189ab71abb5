"""Branching-tree approximators and their exact error statistics.

For a target f and an arbitrary g, the circuit

    D_g = (C_[f xor g] and C_[not g]) or (C_[not (f xor g)] and C_g)

computes f no matter which g was chosen, where C_h is the decision-tree
circuit branching on one variable per level (or on a block of variables
in the depth-bounded variant) with fresh constant leaves h(b).  Running
an approximation model over D_g for uniformly random g yields two laws:
the law of the approximated output h, and a law over error-set tuples
read off the finitely many gate types of the construction.  The
displayed inequality bounds the pointwise miss probability of h by a
fixed multiple of the error-set mass, which this module checks in exact
rationals.

The cover builders turn the statistics into verified certificates.
Assignments where the random approximator is usually correct are
handled by a derandomized exact majority of high-probability members
together with the per-gate tuples of the walked majority circuit; the
remaining assignments are covered greedily by heavy error sets.  The
zero-projective variant additionally audits that every emitted object
depends only on the target's essential variables, and the depth variant
records witness circuits so the certificate passes the depth
side-conditions.

Everything here is exhaustive; nothing is sampled.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .budgets import charge, effective_budget
from .circuits import (AND, OR, Circuit, CircuitBuilder, gate_tables,
                       standard_basis, subcircuit, truth_table)
from .distance import (CertTuple, CoverCertificate, DepthCoverCertificate,
                       asym_from_sym, verify_cover)
from .enumeration import enumerate_circuits
from .errors import (ApproxLabError, PreconditionError, ResourceBudgetError)
from .models import ApproxModel, ErrorSetTuple, check_0_projective
from .truthtable import TruthTable, all_tables

ONE_THIRD = Fraction(1, 3)


# -- type indices ----------------------------------------------------


class Level(enum.Enum):
    """Distinguished non-numeric level for the combination stage on top."""

    XOR = "xor"

    def __str__(self):
        return self.value


XOR_LEVEL = Level.XOR


@dataclass(frozen=True)
class TypeIndex:
    """Which displayed case produced an error-set atom.

    m is the branching level counted from the bottom of the tree, or
    XOR_LEVEL for the combination stage.  t is "or" for a level's
    disjunction gate and a tuple of literal values naming one
    conjunction branch otherwise.
    """

    m: int | Level
    t: str | tuple[int, ...]

    def label(self) -> str:
        t = self.t if isinstance(self.t, str) else "".join(map(str, self.t))
        return f"(m={self.m},t={t})"


def _type_order(ti: TypeIndex) -> tuple:
    # Combination stage first, then tree levels from the top down;
    # within a level the disjunction precedes the branches, branches in
    # the construction's descending literal order.
    if ti.m is XOR_LEVEL:
        level = (0, 0)
    else:
        level = (1, -ti.m)
    if ti.t == "or":
        return (*level, 0, 0)
    value = 0
    for bit in ti.t:
        value = (value << 1) | bit
    return (*level, 1, (1 << len(ti.t)) - 1 - value)


# -- distributions ---------------------------------------------------


@dataclass(frozen=True)
class ExactDistribution:
    """Finitely supported rational law, exhaustively constructed."""

    support: tuple[tuple[object, Fraction], ...]

    def __post_init__(self):
        total = sum((p for _, p in self.support), Fraction(0))
        if total != 1:
            raise ValueError(f"distribution mass {total} != 1")

    def __iter__(self):
        return iter(self.support)

    def __len__(self):
        return len(self.support)


@dataclass(frozen=True)
class Slot:
    """One branching position: a member realizing a function of x.

    The barrier builders fill slots with ambient variables; the
    localization transforms substitute arbitrary members and leave var
    unset.
    """

    member: int
    table: TruthTable
    var: int | None = None


@dataclass(frozen=True)
class BarrierParams:
    kind: str            # 'general' or 'depth'
    n: int               # ambient variable count
    s: int               # branching slot count
    u: int               # branching width per level
    bottom: int          # width of the lowest level (equals u when u | s)
    levels: int
    d: int | None
    factor: int


@dataclass
class DistributionPair:
    """The h-law and the error-set law of the approximated branchings.

    atoms keeps the per-type resolution (type, tuple, probability) in
    canonical order; h_witnesses maps each support member to one D_g
    circuit approximating to it, member_witnesses maps every tuple
    participant to a shallow subcircuit witness.  Iterating yields the
    two laws, h first.
    """

    h: ExactDistribution
    delta: ExactDistribution
    atoms: tuple[tuple[TypeIndex, ErrorSetTuple, Fraction], ...]
    params: BarrierParams
    slots: tuple[Slot, ...]
    h_witnesses: dict[int, Circuit]
    member_witnesses: dict[int, Circuit]
    model: ApproxModel

    def __iter__(self):
        yield self.h
        yield self.delta


# -- tree construction -----------------------------------------------


@dataclass(frozen=True)
class _Branch:
    z: tuple[int, ...]          # literal values, low slot of the block first
    gate: int                   # the conjunction gate
    lits: tuple[int, ...]       # literal gates in slot order
    child: "_Node"


@dataclass(frozen=True)
class _Node:
    slots: int                  # slots below this node
    gate: int                   # disjunction gate (constant leaf when slots=0)
    width: int
    branches: tuple[_Branch, ...]


def _emit_tree(b: CircuitBuilder, leaf, h: TruthTable, u: int) -> tuple[int, _Node]:
    s = h.n
    if s == 0:
        gate = b.fresh_const(h(0))
        return gate, _Node(slots=0, gate=gate, width=0, branches=())
    ue = min(u, s)
    branches = []
    for packed in range((1 << ue) - 1, -1, -1):
        z = tuple((packed >> (ue - j)) & 1 for j in range(1, ue + 1))
        sub = h
        for bit in reversed(z):
            sub = sub.restrict(sub.n, bit)
        child_gate, child = _emit_tree(b, leaf, sub, u)
        lits = []
        for j, bit in enumerate(z, 1):
            var_gate = leaf(b, s - ue + j)
            lits.append(var_gate if bit else b.neg(var_gate))
        gate = b.op(AND(1 + ue), child_gate, *lits)
        branches.append(_Branch(z=z, gate=gate, lits=tuple(lits), child=child))
    or_gate = b.op(OR(1 << ue), *(br.gate for br in branches))
    return or_gate, _Node(slots=s, gate=or_gate, width=ue, branches=tuple(branches))


@dataclass(frozen=True)
class BranchingDecomposition:
    """A decision-tree circuit for h with its branching structure."""

    h: TruthTable
    width: int
    circuit: Circuit
    root: _Node
    var_map: tuple[int, ...]

    @property
    def levels(self) -> int:
        return -(-self.h.n // self.width) if self.h.n else 0


def build_C_h(h: TruthTable, u: int, var_map: tuple[int, ...] | None = None,
              n: int | None = None, budget: int | None = None) -> BranchingDecomposition:
    """Decision-tree circuit for h branching on u variables per level.

    Every leaf is a fresh constant h(b), so the underlying gate graph is
    identical for all targets on the same slot count.  var_map names the
    ambient variable realizing each slot (default 1..m over n = m).
    """
    if u < 1:
        raise ValueError(f"branching width {u} must be >= 1")
    if h.n > 10:
        raise ResourceBudgetError(f"branching tree over {h.n} slots",
                                  estimate=4 << h.n, budget=effective_budget(budget))
    charge(4 << h.n, budget, "build_C_h")
    var_map = tuple(range(1, h.n + 1)) if var_map is None else tuple(var_map)
    if len(var_map) != h.n:
        raise ValueError(f"var_map length {len(var_map)} != slot count {h.n}")
    ambient = (max(var_map, default=0)) if n is None else n
    b = CircuitBuilder(ambient)
    gate, root = _emit_tree(b, lambda bb, j: bb.inp(var_map[j - 1]), h, u)
    return BranchingDecomposition(h=h, width=min(u, h.n) if h.n else u,
                                  circuit=b.build(gate), root=root, var_map=var_map)


@dataclass(frozen=True)
class _SubTree:
    name: str
    target: TruthTable
    gate: int
    root: _Node


@dataclass(frozen=True)
class DGCircuit:
    """The two-wing combination of four branching trees; computes f for every g."""

    f: TruthTable
    g: TruthTable
    width: int
    circuit: Circuit
    out_or: int
    wings: tuple[int, int]
    subs: tuple[_SubTree, _SubTree, _SubTree, _SubTree]
    var_map: tuple[int, ...]


def build_D_g(f: TruthTable, g: TruthTable, u: int = 1,
              var_map: tuple[int, ...] | None = None, n: int | None = None,
              budget: int | None = None) -> DGCircuit:
    """(C_[f xor g] and C_[not g]) or (C_[not (f xor g)] and C_g).

    Input gates are shared between the four trees, constants are not,
    so the shape is independent of g while the leaves carry it.
    """
    if f.n != g.n:
        raise ValueError(f"f has {f.n} slots, g has {g.n}")
    if f.n > 10:
        raise ResourceBudgetError(f"branching trees over {f.n} slots",
                                  estimate=16 << f.n, budget=effective_budget(budget))
    charge(16 << f.n, budget, "build_D_g")
    var_map = tuple(range(1, f.n + 1)) if var_map is None else tuple(var_map)
    if len(var_map) != f.n:
        raise ValueError(f"var_map length {len(var_map)} != slot count {f.n}")
    ambient = (max(var_map, default=0)) if n is None else n
    b = CircuitBuilder(ambient)
    leaf = lambda bb, j: bb.inp(var_map[j - 1])
    subs = []
    for name, target in (("f xor g", f ^ g), ("not g", ~g),
                         ("not (f xor g)", ~(f ^ g)), ("g", g)):
        gate, root = _emit_tree(b, leaf, target, u)
        subs.append(_SubTree(name=name, target=target, gate=gate, root=root))
    left = b.op(AND(2), subs[0].gate, subs[1].gate)
    right = b.op(AND(2), subs[2].gate, subs[3].gate)
    out = b.op(OR(2), left, right)
    return DGCircuit(f=f, g=g, width=min(u, f.n) if f.n else u, circuit=b.build(out),
                     out_or=out, wings=(left, right), subs=tuple(subs), var_map=var_map)


# -- slot realization ------------------------------------------------


class _Frame:
    """How slot literals meet the model: ambient variables or members."""

    def __init__(self, model: ApproxModel, slots: tuple[Slot, ...]):
        self.model = model
        self.slots = slots
        self.by_var = all(s.var is not None for s in slots)

    def var_map(self) -> tuple[int, ...]:
        if self.by_var:
            return tuple(s.var for s in self.slots)
        return tuple(range(1, len(self.slots) + 1))

    def ambient(self) -> int:
        return self.model.n if self.by_var else len(self.slots)

    def walk(self, circuit: Circuit) -> list[int]:
        if self.by_var:
            return self.model.approximate_gates(circuit)
        leafs = {j: s.member for j, s in enumerate(self.slots, 1)}
        return self.model.approximate_gates(circuit, leafs)

    def tables(self, circuit: Circuit) -> list[TruthTable]:
        if self.by_var:
            return gate_tables(circuit)
        leafs = {j: s.table for j, s in enumerate(self.slots, 1)}
        return gate_tables(circuit, leafs)


def _var_slots(model: ApproxModel, vars_: tuple[int, ...]) -> tuple[Slot, ...]:
    slots = []
    for j in vars_:
        table = TruthTable.variable(model.n, j)
        try:
            member = model.member_id(table)
        except KeyError:
            raise PreconditionError(
                f"model {model.label} lacks the variable member x_{j} "
                "needed as a branching slot") from None
        slots.append(Slot(member=member, table=table, var=j))
    return tuple(slots)


# -- the two laws ----------------------------------------------------


def slot_distributions(model: ApproxModel, target: TruthTable,
                       slots: tuple[Slot, ...], depth: int | None = None,
                       budget: int | None = None) -> DistributionPair:
    """Exact (h, delta) laws of the branching approximators over the slots.

    target is a function of the slot values.  General mode branches one
    slot per level, giving the 3(s+1) single-literal types with overall
    factor 12(s+1); depth mode branches ceil(s/depth) slots per level
    with factor 4(depth+1)(2^width+1).
    """
    if not model.neg_exact:
        raise PreconditionError(
            f"the branching distributions assume exact negation; model "
            f"{model.label} does not declare it")
    slots = tuple(slots)
    s = len(slots)
    if target.n != s:
        raise ValueError(f"target arity {target.n} != slot count {s}")
    if s > 3:
        raise ResourceBudgetError(
            f"exhaustive enumeration over F_{s} takes {1 << (1 << s)} branching circuits",
            estimate=1 << (1 << s), budget=effective_budget(budget))
    if depth is None:
        kind, u, d = "general", 1, None
        factor = 12 * (s + 1)
    else:
        if depth < 1:
            raise ValueError(f"depth {depth} must be >= 1")
        kind, d = "depth", depth
        u = -(-s // d) if s else 1
        factor = 4 * (d + 1) * ((1 << u) + 1)
    levels = -(-s // u) if s else 0
    bottom = s - u * (levels - 1) if levels else u
    frame = _Frame(model, slots)
    vm = frame.var_map()
    ambient = frame.ambient()

    est_work = (1 << (1 << s)) * (16 << s)
    for m in range(1, levels + 1):
        k = bottom + (m - 1) * u
        est_work += (1 << (1 << k)) * (8 << k)
    charge(est_work, budget, "slot_distributions")

    h_acc: dict[int, Fraction] = {}
    h_wit: dict[int, Circuit] = {}
    wit: dict[int, Circuit] = {}
    atom_p: dict[tuple, Fraction] = {}
    atom_obj: dict[tuple, tuple[TypeIndex, ErrorSetTuple]] = {}

    def note(ti: TypeIndex, est: ErrorSetTuple, p: Fraction):
        key = (ti, est.key())
        atom_p[key] = atom_p.get(key, Fraction(0)) + p
        atom_obj.setdefault(key, (ti, est))

    def note_wit(walked: list[int], circuit: Circuit, gates):
        for gate in gates:
            if walked[gate] not in wit:
                wit[walked[gate]] = subcircuit(circuit, gate)

    def gate_tuple(circuit: Circuit, walked: list[int], gate: int) -> ErrorSetTuple:
        g = circuit.gates[gate]
        return model.error_set(g.conn, tuple(walked[c] for c in g.children))

    p_level = Fraction(1, levels + 1)
    p_g = Fraction(1, 1 << (1 << s))

    # Combination stage: the top disjunction and the two wings of D_g.
    for g in all_tables(s):
        dg = build_D_g(target, g, u, var_map=vm, n=ambient, budget=budget)
        walked = frame.walk(dg.circuit)
        hid = walked[dg.circuit.output]
        h_acc[hid] = h_acc.get(hid, Fraction(0)) + p_g
        h_wit.setdefault(hid, dg.circuit)
        p_t = p_level / 3 * p_g
        note(TypeIndex(XOR_LEVEL, "or"), gate_tuple(dg.circuit, walked, dg.out_or), p_t)
        note(TypeIndex(XOR_LEVEL, (0,)), gate_tuple(dg.circuit, walked, dg.wings[0]), p_t)
        note(TypeIndex(XOR_LEVEL, (1,)), gate_tuple(dg.circuit, walked, dg.wings[1]), p_t)
        note_wit(walked, dg.circuit,
                 [dg.wings[0], dg.wings[1]] + [st.gate for st in dg.subs])

    # Tree levels, from the bottom up: the top gates of C_[g_k] where
    # k counts the slots a level-m subtree sees.
    for m in range(1, levels + 1):
        r = u if m > 1 else bottom
        k = bottom + (m - 1) * u
        p_t = p_level / ((1 << r) + 1)
        p_gk = Fraction(1, 1 << (1 << k))
        for gk in all_tables(k):
            dec = build_C_h(gk, u, var_map=vm[:k], n=ambient, budget=budget)
            walked = frame.walk(dec.circuit)
            top = dec.root
            weight = p_t * p_gk
            note(TypeIndex(m, "or"), gate_tuple(dec.circuit, walked, top.gate), weight)
            wit_gates = [br.gate for br in top.branches]
            for br in top.branches:
                t = br.z if kind == "depth" else (1 - br.z[0],)
                note(TypeIndex(m, t), gate_tuple(dec.circuit, walked, br.gate), weight)
                wit_gates.append(br.child.gate)
                wit_gates.extend(br.lits)
            note_wit(walked, dec.circuit, wit_gates)

    order = sorted(atom_obj, key=lambda key: (_type_order(atom_obj[key][0]), key[1]))
    atoms = tuple((atom_obj[k][0], atom_obj[k][1], atom_p[k]) for k in order)
    delta_acc: dict[tuple, Fraction] = {}
    delta_obj: dict[tuple, ErrorSetTuple] = {}
    for ti, est, p in atoms:
        dk = est.key()
        delta_acc[dk] = delta_acc.get(dk, Fraction(0)) + p
        delta_obj.setdefault(dk, est)

    params = BarrierParams(kind=kind, n=model.n, s=s, u=u, bottom=bottom,
                           levels=levels, d=d, factor=factor)
    return DistributionPair(
        h=ExactDistribution(tuple(sorted(h_acc.items()))),
        delta=ExactDistribution(tuple((delta_obj[k], delta_acc[k])
                                      for k in sorted(delta_acc))),
        atoms=atoms, params=params, slots=slots,
        h_witnesses=h_wit, member_witnesses=wit, model=model)


def distr_h_delta(model: ApproxModel, f: TruthTable, depth: int | None = None,
                  budget: int | None = None) -> DistributionPair:
    """Laws of the approximated D_g output and of its error sets, g uniform.

    The general branching runs over the essential variables of f only,
    so the factor reads off the essential count; the depth variant
    branches all ambient variables in blocks of ceil(n/depth).
    """
    if f.n != model.n:
        raise ValueError(f"f has {f.n} variables, model order is {model.n}")
    if depth is None:
        J = f.essential_vars()
        return slot_distributions(model, f.project(J), _var_slots(model, J),
                                  budget=budget)
    ambient = tuple(range(1, model.n + 1))
    return slot_distributions(model, f, _var_slots(model, ambient),
                              depth=depth, budget=budget)


# -- the displayed inequality ----------------------------------------


@dataclass(frozen=True)
class LemmaRow:
    x: int
    lhs: Fraction          # Pr[h(x) != f(x)]
    delta_mass: Fraction   # Pr[x in delta]
    rhs: Fraction          # factor * delta_mass
    ok: bool


@dataclass(frozen=True)
class LemmaReport:
    params: BarrierParams
    factor: int
    rows: tuple[LemmaRow, ...]
    passed: bool
    witness: int | None        # first failing assignment
    max_ratio: Fraction | None # max lhs / delta_mass over rows with mass


def verify_distr_lemma(model: ApproxModel, f: TruthTable, depth: int | None = None,
                       budget: int | None = None) -> LemmaReport:
    """Check lhs <= factor * delta mass at every assignment, exactly."""
    dp = distr_h_delta(model, f, depth=depth, budget=budget)
    rows = []
    witness = None
    max_ratio = None
    for x in range(1 << model.n):
        lhs = sum((p for mid, p in dp.h if dp.model.members[mid](x) != f(x)),
                  Fraction(0))
        mass = sum((p for est, p in dp.delta if est.delta(x)), Fraction(0))
        rhs = dp.params.factor * mass
        ok = lhs <= rhs
        rows.append(LemmaRow(x=x, lhs=lhs, delta_mass=mass, rhs=rhs, ok=ok))
        if not ok and witness is None:
            witness = x
        if mass:
            ratio = lhs / mass
            if max_ratio is None or ratio > max_ratio:
                max_ratio = ratio
    return LemmaReport(params=dp.params, factor=dp.params.factor, rows=tuple(rows),
                       passed=witness is None, witness=witness, max_ratio=max_ratio)


# -- position analysis -----------------------------------------------


@dataclass(frozen=True)
class Position:
    index: int
    place: str                      # 'output or', 'left and', 'right and',
    sub: str | None                 # 'branch or', 'branch and'
    m: int | None                   # level, counted from the bottom
    role: str | None                # 'consistent' or 'deviating' for branches
    z: tuple[int, ...] | None
    gate: int


@dataclass(frozen=True)
class PositionWitness:
    position: Position
    total: int                      # number of canonical positions
    est: ErrorSetTuple
    side: str                       # '+' or '-'
    approx_value: int               # the gate member's value at x
    input_values: tuple[int, ...]   # member values of the tuple inputs at x


def canonical_positions(dg: DGCircuit, x: int) -> tuple[Position, ...]:
    """The 3 + (subcircuits * levels * branches+1) gate positions for x.

    The top three gates come first; inside each subtree the walk
    follows the branch consistent with x and lists, per level from the
    top, the disjunction, the consistent conjunction, then the
    deviating conjunctions in construction order.  At width 1 the count
    is 3 + 12n.
    """
    positions = [
        Position(0, "output or", None, None, None, None, dg.out_or),
        Position(1, "left and", None, None, None, None, dg.wings[0]),
        Position(2, "right and", None, None, None, None, dg.wings[1]),
    ]
    idx = 3
    for st in dg.subs:
        node = st.root
        while node.slots:
            m = -(-node.slots // node.width)
            positions.append(Position(idx, "branch or", st.name, m, None, None,
                                      node.gate))
            idx += 1
            low = node.slots - node.width
            bits = tuple((x >> (dg.var_map[low + j - 1] - 1)) & 1
                         for j in range(1, node.width + 1))
            consistent = next(br for br in node.branches if br.z == bits)
            positions.append(Position(idx, "branch and", st.name, m, "consistent",
                                      consistent.z, consistent.gate))
            idx += 1
            for br in node.branches:
                if br.z == bits:
                    continue
                positions.append(Position(idx, "branch and", st.name, m, "deviating",
                                          br.z, br.gate))
                idx += 1
            node = consistent.child
    return tuple(positions)


def positions_cover_check(model: ApproxModel, f: TruthTable, g: TruthTable,
                          x: int, budget: int | None = None) -> PositionWitness:
    """Locate an approximation error of D_g at x in a canonical position.

    Scans the canonical positions in order and returns the first whose
    error set contains x; by the locating argument one always exists
    when the approximated circuit misses f at x, so exhausting the scan
    raises (it would refute the position-coverage claim).
    """
    if not model.neg_exact:
        raise PreconditionError("position analysis assumes exact negation")
    if f.n != model.n or g.n != model.n:
        raise ValueError("f and g must live on the model's ambient variables")
    dg = build_D_g(f, g, 1, n=model.n, budget=budget)
    walked = model.approximate_gates(dg.circuit)
    if model.members[walked[dg.circuit.output]](x) == f(x):
        raise PreconditionError(
            f"no error to locate: the approximated branching circuit agrees "
            f"with f at assignment {x}")
    positions = canonical_positions(dg, x)
    for pos in positions:
        gate = dg.circuit.gates[pos.gate]
        if not gate.is_application():
            continue
        inputs = tuple(walked[c] for c in gate.children)
        est = model.error_set(gate.conn, inputs)
        if est.delta(x):
            return PositionWitness(
                position=pos, total=len(positions), est=est,
                side="+" if est.delta_plus(x) else "-",
                approx_value=model.members[walked[pos.gate]](x),
                input_values=tuple(model.members[i](x) for i in inputs))
    raise ApproxLabError(
        f"no canonical position covers the error at assignment {x}; this "
        f"refutes the position-coverage claim for model {model.label}")


# -- cover construction ----------------------------------------------


@dataclass
class BarrierCoverReport:
    kind: str
    model: str
    f: TruthTable
    n: int
    n0: int
    factor: int
    majority_width: int
    threshold: int
    case1_region: int              # assignments with miss probability < 1/3
    case1_count: int               # tuples contributed by the walked majority
    case2_count: int
    size: int
    types_used: tuple[TypeIndex, ...]
    constant: Fraction | None      # size over the kind's denominator
    extras: dict = field(default_factory=dict)


def _pointwise_miss(dp: DistributionPair, f: TruthTable) -> list[Fraction]:
    members = dp.model.members
    return [sum((p for mid, p in dp.h if members[mid](x) != f(x)), Fraction(0))
            for x in range(1 << dp.model.n)]


def _derandomize_majority(dp: DistributionPair, f: TruthTable,
                          region: list[int]) -> list[int]:
    """Fewest leading support members with exact pointwise majority on region.

    Members are taken in descending probability (ties by member id) and
    accepted greedily; the cap mirrors the exponent the probabilistic
    argument would use, and hitting it is a genuine failure.
    """
    members = dp.model.members
    ranked = sorted(dp.h, key=lambda item: (-item[1], item[0]))
    cap = int(48 * dp.model.n * math.log(2)) + 1
    chosen: list[int] = []
    for mid, _ in ranked:
        chosen.append(mid)
        if len(chosen) > cap:
            raise ApproxLabError(
                f"majority derandomization exceeded the cap of {cap} members "
                f"on {len(region)} assignments; the one-third miss bound "
                f"should have prevented this")
        if all(2 * sum(1 for m in chosen if members[m](x) == f(x)) > len(chosen)
               for x in region):
            return chosen
    raise ApproxLabError(
        "support exhausted before a pointwise majority held; the one-third "
        "miss bound should have prevented this")


def _majority_circuit(k: int, wide: bool,
                      budget: int | None = None) -> tuple[Circuit | None, int]:
    """Exact strict majority over k formal inputs as a threshold DNF.

    Returns (None, 1) for k = 1.  The wide variant is a depth-2 block
    of fan-in tau conjunctions under one disjunction; the binary
    variant folds the same terms through shared two-input chains.
    """
    if k == 1:
        return None, 1
    tau = k // 2 + 1
    charge(math.comb(k, tau) * (tau + 1), budget, "majority circuit")
    b = CircuitBuilder(k, intern=True)
    terms = []
    for subset in itertools.combinations(range(1, k + 1), tau):
        ins = [b.inp(i) for i in subset]
        terms.append(b.and_wide(ins) if wide else b.and_all(ins))
    top = b.or_wide(terms) if wide else b.or_all(terms)
    return b.build(top), tau


def _walk_tuples(model: ApproxModel, circuit: Circuit,
                 walked: list[int]) -> list[tuple[int, CertTuple]]:
    """Per-gate tuples of a walked circuit, one per distinct key, with gates."""
    seen = set()
    out = []
    for i, gate in enumerate(circuit.gates):
        if not gate.is_application():
            continue
        ids = tuple(sorted(walked[c] for c in gate.children))
        ct = CertTuple(gate.conn, ids)
        if ct.key() not in seen:
            seen.add(ct.key())
            out.append((i, ct))
    return out


def _greedy_delta_cover(dp: DistributionPair,
                        target_mask: int) -> tuple[list[CertTuple], list[TypeIndex]]:
    """Cover the target assignments by error sets of descending probability."""
    first_type: dict[tuple, TypeIndex] = {}
    for ti, est, _ in dp.atoms:
        first_type.setdefault(est.key(), ti)
    ranked = sorted(dp.delta, key=lambda item: (-item[1], item[0].key()))
    left = target_mask
    picked: list[CertTuple] = []
    types: list[TypeIndex] = []
    for est, _ in ranked:
        if not left:
            break
        if est.delta.mask & left:
            left &= ~est.delta.mask
            picked.append(CertTuple(est.conn, est.members))
            types.append(first_type[est.key()])
    if left:
        x = (left & -left).bit_length() - 1
        raise ApproxLabError(
            f"assignment {x} lies in no error set of the distribution; the "
            f"distribution inequality rules this out for model {dp.model.label}")
    return picked, types


def _assemble_cover(dp: DistributionPair, f: TruthTable
                    ) -> tuple[CoverCertificate, BarrierCoverReport]:
    model = dp.model
    n = model.n
    miss = _pointwise_miss(dp, f)
    region = [x for x in range(1 << n) if miss[x] < ONE_THIRD]
    chosen = _derandomize_majority(dp, f, region)
    combiner, tau = _majority_circuit(len(chosen), wide=False)
    if combiner is None:
        gid = chosen[0]
        case1: list[CertTuple] = []
    else:
        walked = model.approximate_gates(
            combiner, {j: mid for j, mid in enumerate(chosen, 1)})
        gid = walked[combiner.output]
        case1 = [ct for _, ct in _walk_tuples(model, combiner, walked)]
    covered = 0
    for ct in case1:
        covered |= model.error_set(ct.conn, ct.members).delta.mask
    target = (f ^ model.members[gid]).mask & ~covered
    case2, types = _greedy_delta_cover(dp, target)
    merged: dict[tuple, CertTuple] = {}
    for ct in case1 + case2:
        merged.setdefault(ct.key(), ct)
    tuples = tuple(sorted(merged.values(), key=lambda ct: ct.key()))
    cert = CoverCertificate("sym", gid, tuples)
    n0 = len(f.essential_vars())
    report = BarrierCoverReport(
        kind=dp.params.kind, model=model.label, f=f, n=n, n0=n0,
        factor=dp.params.factor, majority_width=len(chosen), threshold=tau,
        case1_region=len(region), case1_count=len(case1), case2_count=len(case2),
        size=len(tuples), types_used=tuple(dict.fromkeys(types)),
        constant=Fraction(len(tuples), n * n0) if n * n0 else None)
    return cert, report


def barrier_cover(model: ApproxModel, f: TruthTable, mode: str = "sym",
                  budget: int | None = None
                  ) -> tuple[CoverCertificate, BarrierCoverReport]:
    """Verified cover certificate from the branching statistics.

    A derandomized majority of likely approximators pins f wherever the
    miss probability stays below one third; its walked gate tuples plus
    greedily chosen heavy error sets cover everything else.  Asymmetric
    mode reuses the symmetric tuples on both sides, which is recorded
    rather than asserted (direction can flip through exact negation).
    """
    dp = distr_h_delta(model, f, budget=budget)
    cert, report = _assemble_cover(dp, f)
    if mode == "asym":
        cert = asym_from_sym(cert)
        report.extras["asym_verified"] = verify_cover(f, model, cert).ok
        report.size = cert.size
        return cert, report
    if mode != "sym":
        raise ValueError(f"unknown mode {mode!r}")
    result = verify_cover(f, model, cert)
    if not result.ok:
        raise ApproxLabError(f"emitted certificate failed verification: {result.reason}")
    return cert, report


def barrier_cover_0proj(model: ApproxModel, f: TruthTable, circuits=None,
                        projectivity=None, budget: int | None = None
                        ) -> tuple[CoverCertificate, BarrierCoverReport]:
    """The cover builder for models whose approximators ignore dead variables.

    Requires an established 0-projectivity check (pass a report, a
    circuit family to check, or accept the default small-circuit
    corpus).  Audits that every emitted member and error set depends
    only on the essential variables of f; the certificate then covers
    whole projection classes at once and its size compares to n0^2.
    """
    check = projectivity
    if check is None:
        family = circuits
        if family is None:
            family = list(enumerate_circuits(model.n, standard_basis(), 2,
                                             budget=budget))
        check = check_0_projective(model, family)
    if not check.passed:
        raise PreconditionError(
            f"0-projectivity is not established for model {model.label} "
            f"(counterexample {check.counterexample}); certify the family "
            f"first, e.g. via 'model check-proj', then rerun")
    dp = distr_h_delta(model, f, budget=budget)
    J = f.essential_vars()
    for mid, _ in dp.h:
        _audit_saturation(model, mid, J, "approximator")
    for est, _ in dp.delta:
        for mid in est.members:
            _audit_saturation(model, mid, J, "tuple input")
        outside = [v for v in est.delta.essential_vars() if v not in J]
        if outside:
            raise ApproxLabError(
                f"error set of {est.key()} depends on {outside} outside the "
                f"essential set {tuple(J)}; the model is not 0-projective "
                f"on the branching family")
    cert, report = _assemble_cover(dp, f)
    result = verify_cover(f, model, cert)
    if not result.ok:
        raise ApproxLabError(f"emitted certificate failed verification: {result.reason}")
    n0 = len(J)
    report.kind = "zero-projective"
    report.constant = Fraction(cert.size, n0 * n0) if n0 else None
    g_table = model.members[cert.g]
    classes = {x & _mask_of(J) for x in (f ^ g_table).ones()}
    report.extras["projection_classes"] = 1 << n0
    report.extras["covered_classes"] = len(classes)
    return cert, report


def _mask_of(vars_) -> int:
    mask = 0
    for j in vars_:
        mask |= 1 << (j - 1)
    return mask


def _audit_saturation(model: ApproxModel, mid: int, J, what: str):
    outside = [v for v in model.members[mid].essential_vars() if v not in J]
    if outside:
        raise ApproxLabError(
            f"{what} member {mid} depends on {outside} outside the essential "
            f"set {tuple(J)}; the model is not 0-projective on the branching "
            f"family")


def barrier_cover_depth(model: ApproxModel, f: TruthTable, d: int,
                        budget: int | None = None
                        ) -> tuple[DepthCoverCertificate, BarrierCoverReport]:
    """Depth-budgeted cover: every member in the certificate carries a witness.

    The combining circuit is a depth-2 exact majority stacked over the
    chosen members' branching circuits, so g's witness stays within
    depth 3d+5 and every tuple input within 3d+4; greedily chosen error
    sets reuse the shallow witnesses recorded while the distributions
    were built.
    """
    if d < 1:
        raise ValueError(f"depth {d} must be >= 1")
    dp = distr_h_delta(model, f, depth=d, budget=budget)
    n = model.n
    miss = _pointwise_miss(dp, f)
    region = [x for x in range(1 << n) if miss[x] < ONE_THIRD]
    chosen = _derandomize_majority(dp, f, region)
    combiner, tau = _majority_circuit(len(chosen), wide=True, budget=budget)
    blocks = [dp.h_witnesses[mid] for mid in chosen]
    witnesses: dict[int, Circuit] = {}
    if combiner is None:
        stacked = blocks[0]
        walked = model.approximate_gates(stacked)
        gid = walked[stacked.output]
        if gid != chosen[0]:
            raise ApproxLabError("restacked branching circuit approximates elsewhere")
        case1: list[CertTuple] = []
    else:
        stacked, m_gates = _stack(n, blocks, combiner)
        walked = model.approximate_gates(stacked)
        gid = walked[stacked.output]
        case1 = []
        for gate in sorted(m_gates):
            g = stacked.gates[gate]
            ids = tuple(sorted(walked[c] for c in g.children))
            ct = CertTuple(g.conn, ids)
            if ct not in case1:
                case1.append(ct)
            for c in g.children:
                witnesses.setdefault(walked[c], subcircuit(stacked, c))
    covered = 0
    for ct in case1:
        covered |= model.error_set(ct.conn, ct.members).delta.mask
    target = (f ^ model.members[gid]).mask & ~covered
    case2, types = _greedy_delta_cover(dp, target)
    merged: dict[tuple, CertTuple] = {}
    for ct in case1 + case2:
        merged.setdefault(ct.key(), ct)
    tuples = tuple(sorted(merged.values(), key=lambda ct: ct.key()))

    cert_depth = 3 * d + 5
    g_witness = stacked if combiner is not None else blocks[0]
    if not tuples:
        shallow = _shallow_witness(model, gid, d, budget)
        if shallow is not None:
            g_witness = shallow
    needed: dict[int, Circuit] = {}
    for ct in tuples:
        for mid in ct.members:
            if mid in needed:
                continue
            circ = dp.member_witnesses.get(mid) or witnesses.get(mid)
            if circ is None:
                raise ApproxLabError(f"no witness recorded for tuple member {mid}")
            needed[mid] = circ
    cert = DepthCoverCertificate("sym", gid, tuples, cert_depth, g_witness,
                                 tuple(sorted(needed.items())))
    result = verify_cover(f, model, cert)
    if not result.ok:
        raise ApproxLabError(f"emitted depth certificate failed verification: "
                             f"{result.reason}")
    n0 = len(f.essential_vars())
    v = dp.params.u
    type_bound = ((1 << v) + 1) * (d + 1)
    denom = d * ((1 << v) + 1) * n
    report = BarrierCoverReport(
        kind="depth", model=model.label, f=f, n=n, n0=n0, factor=dp.params.factor,
        majority_width=len(chosen), threshold=tau, case1_region=len(region),
        case1_count=len(case1), case2_count=len(case2), size=len(tuples),
        types_used=tuple(dict.fromkeys(types)),
        constant=Fraction(len(tuples), denom) if denom else None,
        extras={"d": d, "v": v, "w": dp.params.bottom, "levels": dp.params.levels,
                "certificate_depth": cert_depth, "g_witness_depth": g_witness.depth,
                "type_bound": type_bound,
                "max_input_witness_depth": max((c.depth for c in needed.values()),
                                               default=0)})
    return cert, report


def _stack(n: int, blocks: list[Circuit], combiner: Circuit
           ) -> tuple[Circuit, set[int]]:
    """Inline the blocks under the combiner's formal inputs.

    Inputs are shared, constants stay fresh per block, and the returned
    set holds the gate positions originating from the combiner.
    """
    b = CircuitBuilder(n)
    outs = []
    for block in blocks:
        remap: dict[int, int] = {}
        for i, gate in enumerate(block.gates):
            if gate.kind == "input":
                remap[i] = b.inp(gate.var)
            elif gate.kind == "const":
                remap[i] = b.fresh_const(gate.value)
            else:
                remap[i] = b.op(gate.conn, *(remap[c] for c in gate.children))
        outs.append(remap[block.output])
    m_gates: set[int] = set()
    remap = {}
    for i, gate in enumerate(combiner.gates):
        if gate.kind == "input":
            remap[i] = outs[gate.var - 1]
        elif gate.kind == "const":
            remap[i] = b.fresh_const(gate.value)
        else:
            remap[i] = b.op(gate.conn, *(remap[c] for c in gate.children))
            m_gates.add(remap[i])
    return b.build(remap[combiner.output]), m_gates


def _shallow_witness(model: ApproxModel, gid: int, d: int,
                     budget: int | None) -> Circuit | None:
    """Smallest plain circuit of depth <= d that the model approximates to gid."""
    table = model.members[gid]
    try:
        for circ in enumerate_circuits(model.n, standard_basis(), 3, max_depth=d,
                                       budget=budget):
            if truth_table(circ) != table:
                continue
            walked = model.approximate_gates(circ)
            if walked[circ.output] == gid:
                return circ
    except ResourceBudgetError:
        return None
    return None
