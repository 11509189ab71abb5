"""Oracle circuits and the gate-walk localization of their errors.

A distance lower bound speaks about plain circuits; the transforms here
extend its reach to circuits that may call a few arbitrary gates.  An
oracle gate carries its own truth function and an ordered child list
(order matters, the function need not be commutative).  Walking such a
circuit bottom-up, every gate e_i gets an associated member f_i of the
approximation model together with error sets covering the assignments
where the function computed at the gate can disagree with its member.
A plain gate costs one tuple.  An oracle gate costs a batch: the
branching statistics of the barrier module are instantiated with the
children's members in place of input variables, assignments where the
random branching approximator is usually right are handled by a
derandomized majority of likely members, and whatever remains is
covered greedily by heavy error sets.  The result is an ordinary cover
certificate for the circuit's function, so a verified distance lower
bound above its size rules the whole oracle circuit out.

Four transforms share the walk.  The general one accepts oracles
anywhere in the circuit.  The zero-projective one wants them at the
bottom over literals; a negated child is absorbed by twisting the
oracle's table, after which the batch runs over the oracle's own
variables and its accounting no longer sees the ambient padding.  The
projective one charges the covering work to the value profiles of the
children instead of to raw assignments.  The depth variant keeps a
plain witness circuit for every member it touches, so the certificate
passes the depth side-conditions; its combiner is an approximate
majority whose threshold behavior is checked exactly at the realized
width.

Tiny oracles are not worth the machinery: at arity two or below the
gate is expanded into an explicit disjunctive form and walked like any
other plain subcircuit.  The projective transform keeps the machinery
even then, because its accounting lives on the profiles.  Every
transform returns the certificate together with a per-gate ledger of
members and added tuples, with the running total compared against the
walk's budget shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .barrier import (ONE_THIRD, Slot, _greedy_delta_cover, _majority_circuit,
                      _pointwise_miss, _stack, _var_slots, _walk_tuples,
                      slot_distributions)
from .budgets import effective_budget
from .circuits import (Circuit, CircuitBuilder, apply_pointwise, evaluate,
                       gate_tables, input_gate, standard_basis, subcircuit,
                       truth_table)
from .distance import (CertTuple, CoverCertificate, DepthCoverCertificate,
                       verify_cover)
from .enumeration import enumerate_circuits
from .errors import (ApproxLabError, PreconditionError, ResourceBudgetError)
from .models import ApproxModel, check_0_projective, check_projective
from .truthtable import TruthTable

ONE_SIXTH = Fraction(1, 6)

EXPAND_ARITY = 2          # oracles this small become explicit circuits
MAX_ORACLE_AMBIENT = 3    # ambient cap once the distribution machinery runs
MAX_COMBINER_WIDTH = 20   # exact-threshold approximate majority stays exact


# -- oracle circuits -------------------------------------------------


def oracle_stats(circuit: Circuit) -> tuple[int, int]:
    """Oracle count and maximum oracle arity; (0, 0) for a plain circuit."""
    count = 0
    arity = 0
    for g in circuit.gates:
        if g.kind == "oracle":
            count += 1
            arity = max(arity, len(g.children))
    return count, arity


def eval_oracle_circuit(circuit: Circuit, x: int) -> int:
    """Evaluate a circuit that may contain oracle gates at one assignment.

    Oracle gates apply their truth function to the child values packed
    in declared order, bit j holding child j; everything else evaluates
    as usual.  Arity mismatches never get this far, circuit validation
    rejects them at construction.
    """
    return evaluate(circuit, x)


# -- the walk ledger -------------------------------------------------


@dataclass(frozen=True)
class LocalizationStep:
    """One row of the walk ledger.

    true_table is the function the gate really computes and member the
    id the walk associated with it.  added counts tuples first seen at
    this gate, cumulative the distinct total so far, oracles how many
    oracle gates the walk has passed, this one included.  The depth
    transform also records the witness depth next to its allowance.
    """

    gate: int
    kind: str
    member: int
    true_table: TruthTable
    added: int
    cumulative: int
    oracles: int
    witness_depth: int | None = None
    allowance: int | None = None


@dataclass(frozen=True)
class OracleNote:
    """Cover statistics of one oracle gate."""

    gate: int
    arity: int
    expanded: bool
    factor: int = 0
    region: int = 0
    width: int = 0
    threshold: int = 0
    case1: int = 0
    case2: int = 0
    classes: int | None = None
    covered: int | None = None


@dataclass
class LocalizationReport:
    """Per-gate ledger of a localization walk plus the final certificate.

    unit is the per-oracle budget denominator of the transform (m * n
    for the general walk, m * m for the structural variants, and
    d * (2^ceil(m/d) + 1) * n for the depth walk); constant is the
    smallest C with cumulative <= i + C * oracles * unit on every row,
    zero when the plain one-tuple-per-gate pace was never exceeded.
    """

    mode: str
    model: str
    f: TruthTable
    n: int
    oracle_count: int
    max_arity: int
    unit: int
    constant: Fraction
    steps: tuple[LocalizationStep, ...]
    oracles: tuple[OracleNote, ...]
    cert: CoverCertificate | DepthCoverCertificate
    extras: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.cert.size

    def bound(self, step: LocalizationStep) -> Fraction:
        """The budget line i + C * o_i * unit at one ledger row."""
        return step.gate + 1 + self.constant * step.oracles * self.unit

    def ledger_ok(self) -> bool:
        cum = 0
        for step in self.steps:
            if step.cumulative != cum + step.added:
                return False
            cum = step.cumulative
            if step.cumulative > self.bound(step):
                return False
        return cum == self.cert.size


# -- circuit plumbing ------------------------------------------------


def _inline(b: CircuitBuilder, circuit: Circuit, fresh_inputs: bool = False) -> int:
    """Append a plain circuit into a builder; inputs shared, constants fresh.

    fresh_inputs forces distinct input gates, for callers about to make
    the result a sibling of an identical copy (multi-edges are invalid).
    """
    remap: dict[int, int] = {}
    for i, g in enumerate(circuit.gates):
        if g.kind == "input":
            remap[i] = b._add(input_gate(g.var)) if fresh_inputs else b.inp(g.var)
        elif g.kind == "const":
            remap[i] = b.fresh_const(g.value)
        else:
            remap[i] = b.op(g.conn, *(remap[c] for c in g.children))
    return remap[circuit.output]


def _graft(n: int, formal: Circuit,
           leaves: dict[int, Circuit]) -> tuple[Circuit, dict[int, int]]:
    """Substitute leaf circuits for the formal inputs of a slot circuit.

    Returns the ambient circuit together with the map from formal gate
    positions to their images; every leaf is inlined once and shared.
    """
    b = CircuitBuilder(n)
    done: dict[int, int] = {}
    gmap: dict[int, int] = {}
    for i, g in enumerate(formal.gates):
        if g.kind == "input":
            if g.var not in done:
                done[g.var] = _inline(b, leaves[g.var])
            gmap[i] = done[g.var]
        elif g.kind == "const":
            gmap[i] = b.fresh_const(g.value)
        else:
            kids: list[int] = []
            for c in g.children:
                o = gmap[c]
                if o in kids and formal.gates[c].kind == "input":
                    o = _inline(b, leaves[formal.gates[c].var], fresh_inputs=True)
                kids.append(o)
            gmap[i] = b.op(g.conn, *kids)
    return b.build(gmap[formal.output]), gmap


def _leaf_circuit(n: int, g) -> Circuit:
    b = CircuitBuilder(n)
    return b.build(b.inp(g.var) if g.kind == "input" else b.fresh_const(g.value))


def _expansion(table: TruthTable, wide: bool) -> Circuit:
    """Explicit formal circuit for a small oracle: disjoined minterms.

    The identity table collapses to a bare wire and the constant tables
    to a constant vertex, so a trivial oracle never costs a tuple.
    """
    m = table.n
    b = CircuitBuilder(m, intern=True)
    ones = table.ones()
    if not ones:
        out = b.const(0)
    elif len(ones) == 1 << m:
        out = b.const(1)
    else:
        terms = []
        for a in ones:
            lits = [b.literal(j, bool((a >> (j - 1)) & 1)) for j in range(1, m + 1)]
            if len(lits) == 1:
                terms.append(lits[0])
            else:
                terms.append(b.and_wide(lits) if wide else b.and_all(lits))
        if len(terms) == 1:
            out = terms[0]
        else:
            out = b.or_wide(terms) if wide else b.or_all(terms)
    return b.build(out)


def _connective_templates() -> list[Circuit]:
    """One-gate templates over formal inputs, one per standard connective."""
    out = []
    for conn in standard_basis():
        b = CircuitBuilder(conn.arity)
        out.append(b.build(b.op(conn, *(b.inp(j) for j in range(1, conn.arity + 1)))))
    return out


def _consumer_kinds(circuit: Circuit) -> list[set[str]]:
    kinds: list[set[str]] = [set() for _ in circuit.gates]
    for g in circuit.gates:
        for c in g.children:
            kinds[c].add(g.kind)
    return kinds


def _literal_slots(model: ApproxModel, circuit: Circuit,
                   g) -> tuple[tuple[Slot, ...], TruthTable]:
    """Variable slots for a bottom oracle, negations twisted into the table."""
    vars_ = []
    flips = 0
    for pos, c in enumerate(g.children):
        cg = circuit.gates[c]
        if cg.kind == "input":
            vars_.append(cg.var)
            continue
        if (cg.kind == "op" and cg.conn.name == "NOT"
                and circuit.gates[cg.children[0]].kind == "input"):
            vars_.append(circuit.gates[cg.children[0]].var)
            flips |= 1 << pos
            continue
        raise PreconditionError(
            f"g{c}: oracle children must be literals over the inputs; "
            f"an oracle above internal gates needs localize_general")
    m = g.table.n
    twisted = TruthTable(
        m, sum(((g.table.mask >> (y ^ flips)) & 1) << y for y in range(1 << m)))
    return _var_slots(model, tuple(vars_)), twisted


# -- batch ingredients -----------------------------------------------


def _derandomize(dp, target: TruthTable, region: list[int], num: int, den: int,
                 bound_name: str) -> list[int]:
    """Fewest leading support members beating the num/den quota on region.

    Members are taken in descending probability (ties by member id) and
    accepted greedily once, at every region assignment, strictly more
    than num/den of them agree with the target; the cap mirrors the
    exponent the probabilistic argument would use.
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
                f"on {len(region)} assignments; the {bound_name} miss bound "
                f"should have prevented this")
        if all(den * sum(1 for m in chosen if members[m](x) == target(x))
               > num * len(chosen) for x in region):
            return chosen
    raise ApproxLabError(
        f"support exhausted before a pointwise majority held; the {bound_name} "
        f"miss bound should have prevented this")


def _audit_approx_majority(combiner: Circuit | None, k: int, budget):
    """Exact threshold check of the combiner at the realized width.

    Any realization is acceptable as long as vectors with more than
    three quarters ones map to 1 and vectors with fewer than one
    quarter ones map to 0; the exact-threshold disjunctive form
    satisfies this, and the check keeps it honest.
    """
    if k > MAX_COMBINER_WIDTH:
        raise ResourceBudgetError(
            f"approximate-majority audit at width {k}",
            estimate=1 << k, budget=effective_budget(budget))
    sem = TruthTable(1, 0b10) if combiner is None else truth_table(combiner)
    for v in range(1 << k):
        ones = bin(v).count("1")
        if 4 * ones > 3 * k:
            assert sem(v) == 1, f"combiner rejects a vector with {ones}/{k} ones"
        elif 4 * ones < k:
            assert sem(v) == 0, f"combiner accepts a vector with {ones}/{k} ones"


def _audit_inside(model: ApproxModel, mid: int, J: set[int], what: str):
    outside = [v for v in model.members[mid].essential_vars() if v not in J]
    if outside:
        raise ApproxLabError(
            f"{what} member {mid} depends on {outside} outside the oracle "
            f"variables {sorted(J)}; the model is not 0-projective on the "
            f"branching family")


def _audit_variables(dp, J: set[int]):
    for mid, _ in dp.h:
        _audit_inside(dp.model, mid, J, "approximator")
    for est, _ in dp.delta:
        for mid in est.members:
            _audit_inside(dp.model, mid, J, "tuple input")
        outside = [v for v in est.delta.essential_vars() if v not in J]
        if outside:
            raise ApproxLabError(
                f"error set of {est.key()} depends on {outside} outside the "
                f"oracle variables {sorted(J)}; the model is not 0-projective "
                f"on the branching family")


def _profile_map(n: int, slots: tuple[Slot, ...]) -> list[int]:
    out = []
    for x in range(1 << n):
        p = 0
        for j, s in enumerate(slots):
            if s.table(x):
                p |= 1 << j
        out.append(p)
    return out


def _profile_determined(table: TruthTable, profiles: list[int]) -> bool:
    seen: dict[int, int] = {}
    for x in range(1 << table.n):
        v = table(x)
        if seen.setdefault(profiles[x], v) != v:
            return False
    return True


def _audit_profiles(dp, profiles: list[int]):
    for mid, _ in dp.h:
        if not _profile_determined(dp.model.members[mid], profiles):
            raise ApproxLabError(
                f"approximator member {mid} is not a function of the children "
                f"profiles; the model is not projective on the branching family")
    for est, _ in dp.delta:
        for mid in est.members:
            if not _profile_determined(dp.model.members[mid], profiles):
                raise ApproxLabError(
                    f"tuple input member {mid} is not a function of the children "
                    f"profiles; the model is not projective on the branching family")
        if not _profile_determined(est.delta, profiles):
            raise ApproxLabError(
                f"error set of {est.key()} splits a children profile class; "
                f"the model is not projective on the branching family")


# -- the walk --------------------------------------------------------


def _localize(model: ApproxModel, circuit: Circuit, f: TruthTable, mode: str,
              d: int | None = None, circuits=None, projectivity=None,
              budget: int | None = None):
    if circuit.n != model.n:
        raise ValueError(f"circuit over {circuit.n} variables, model order {model.n}")
    if f.n != model.n:
        raise ValueError(f"target arity {f.n} != model order {model.n}")
    if truth_table(circuit) != f:
        raise PreconditionError("the circuit does not compute the target function")

    k, m = oracle_stats(circuit)
    depth_mode = mode == "depth"
    n = model.n
    oc_depths = circuit.gate_depths()
    dd = max(oc_depths, default=0)
    span = 2 * d + 6 if depth_mode else 0
    if depth_mode:
        if d is None or d < 1:
            raise ValueError(f"depth {d} must be >= 1")
        if dd > d:
            raise PreconditionError(
                f"circuit depth {dd} exceeds the declared bound {d}")
    if k:
        if not model.neg_exact:
            raise PreconditionError(
                f"the localization transforms assume exact negation; model "
                f"{model.label} does not declare it")
        if mode == "proj" or m > EXPAND_ARITY:
            if n > MAX_ORACLE_AMBIENT:
                raise ResourceBudgetError(
                    f"oracle localization over {n} ambient variables",
                    estimate=(1 << (1 << m)) << (1 << n),
                    budget=effective_budget(budget))

    if mode == "0proj":
        check = projectivity
        if check is None:
            family = circuits
            if family is None:
                family = list(enumerate_circuits(n, standard_basis(), 2,
                                                 budget=budget))
            check = check_0_projective(model, family)
        if not check.passed:
            raise PreconditionError(
                f"0-projectivity is not established for model {model.label} "
                f"(counterexample {check.counterexample}); certify the family "
                f"first, e.g. via 'model check-proj', then rerun")
    if mode == "proj":
        check = projectivity
        if check is None:
            family = circuits
            if family is None:
                family = _connective_templates()
            check = check_projective(model, family, tuple_budget=budget)
        if not check.passed:
            raise PreconditionError(
                f"projectivity is not established for model {model.label} "
                f"(counterexample {check.counterexample}); certify a template "
                f"family first, then rerun")

    true_tables = gate_tables(circuit)
    kinds_used = _consumer_kinds(circuit) if mode == "0proj" else None
    assigned: list[int] = []
    gate_wit: list[Circuit | None] = []
    witness: dict[int, Circuit] = {}
    merged: dict[tuple, CertTuple] = {}
    steps: list[LocalizationStep] = []
    notes: list[OracleNote] = []
    step_new: list[CertTuple] = []
    o_seen = 0

    def merge(ct: CertTuple) -> int:
        if ct.key() in merged:
            return 0
        merged[ct.key()] = ct
        step_new.append(ct)
        return 1

    def note_witness(mid: int, circ: Circuit):
        old = witness.get(mid)
        if old is None or circ.depth < old.depth:
            witness[mid] = circ

    def walk_formal(formal: Circuit, leafs: dict[int, int]) -> tuple[int, int]:
        walked = model.approximate_gates(formal, leafs)
        added = 0
        for i, fg in enumerate(formal.gates):
            if not fg.is_application():
                continue
            ids = tuple(walked[c] for c in fg.children)
            if fg.conn.commutative:
                ids = tuple(sorted(ids))
            added += merge(CertTuple(fg.conn, ids))
        return walked[formal.output], added

    def oracle_step(idx: int, g) -> tuple[int, int, Circuit | None]:
        m_g = len(g.children)
        if mode == "0proj":
            slots, table = _literal_slots(model, circuit, g)
        else:
            table = g.table
            slots = tuple(Slot(member=assigned[c], table=model.members[assigned[c]])
                          for c in g.children)

        if m_g <= EXPAND_ARITY and mode != "proj":
            formal = _expansion(table, wide=depth_mode)
            if not depth_mode:
                leafs = {j: slots[j - 1].member for j in range(1, m_g + 1)}
                mid, added = walk_formal(formal, leafs)
                notes.append(OracleNote(gate=idx, arity=m_g, expanded=True,
                                        case1=added))
                return mid, added, None
            leaves = {j: gate_wit[c] for j, c in enumerate(g.children, 1)}
            grown, gmap = _graft(n, formal, leaves)
            walked = model.approximate_gates(grown)
            added = 0
            for i, fg in enumerate(formal.gates):
                if not fg.is_application():
                    continue
                gi = gmap[i]
                ids = tuple(walked[c] for c in grown.gates[gi].children)
                if fg.conn.commutative:
                    ids = tuple(sorted(ids))
                added += merge(CertTuple(fg.conn, ids))
                for c in grown.gates[gi].children:
                    note_witness(walked[c], subcircuit(grown, c))
            notes.append(OracleNote(gate=idx, arity=m_g, expanded=True,
                                    case1=added))
            return walked[grown.output], added, subcircuit(grown, grown.output)

        dp = slot_distributions(model, table, slots,
                                depth=d if depth_mode else None, budget=budget)
        composed = apply_pointwise(table, [s.table for s in slots])
        profiles = None
        if mode == "0proj":
            _audit_variables(dp, {s.var for s in slots})
        elif mode == "proj":
            profiles = _profile_map(n, slots)
            _audit_profiles(dp, profiles)

        miss = _pointwise_miss(dp, composed)
        threshold = ONE_SIXTH if depth_mode else ONE_THIRD
        region = [x for x in range(1 << n) if miss[x] < threshold]
        if depth_mode:
            chosen = _derandomize(dp, composed, region, 3, 4, "one-sixth")
        else:
            chosen = _derandomize(dp, composed, region, 1, 2, "one-third")

        case1: list[CertTuple] = []
        wit_c: Circuit | None = None
        if depth_mode:
            combiner, tau = _majority_circuit(len(chosen), wide=True,
                                              budget=budget)
            _audit_approx_majority(combiner, len(chosen), budget)
            leaves = {j: gate_wit[c] for j, c in enumerate(g.children, 1)}
            blocks = [_graft(n, dp.h_witnesses[h], leaves)[0] for h in chosen]
            if combiner is None:
                stacked = blocks[0]
                walked = model.approximate_gates(stacked)
                gid = walked[stacked.output]
                if gid != chosen[0]:
                    raise ApproxLabError(
                        "regrafted branching circuit approximates elsewhere")
            else:
                stacked, m_gates = _stack(n, blocks, combiner)
                walked = model.approximate_gates(stacked)
                gid = walked[stacked.output]
                seen_keys = set()
                for gate in sorted(m_gates):
                    gg = stacked.gates[gate]
                    ids = tuple(sorted(walked[c] for c in gg.children))
                    ct = CertTuple(gg.conn, ids)
                    if ct.key() not in seen_keys:
                        seen_keys.add(ct.key())
                        case1.append(ct)
                    for c in gg.children:
                        note_witness(walked[c], subcircuit(stacked, c))
            wit_c = stacked
        else:
            combiner, tau = _majority_circuit(len(chosen), wide=False,
                                              budget=budget)
            if combiner is None:
                gid = chosen[0]
            else:
                leafs = {j: h for j, h in enumerate(chosen, 1)}
                walked = model.approximate_gates(combiner, leafs)
                gid = walked[combiner.output]
                case1 = [ct for _, ct in _walk_tuples(model, combiner, walked)]

        covered = 0
        for ct in case1:
            covered |= model.error_set(ct.conn, ct.members).delta.mask
        target = (composed ^ model.members[gid]).mask & ~covered
        case2, _types = _greedy_delta_cover(dp, target)
        if depth_mode:
            for ct in case2:
                for h in ct.members:
                    if h in witness:
                        continue
                    formalw = dp.member_witnesses.get(h)
                    if formalw is None:
                        raise ApproxLabError(
                            f"no witness recorded for tuple member {h}")
                    note_witness(h, _graft(n, formalw, leaves)[0])

        added = 0
        for ct in case1 + case2:
            added += merge(ct)
        classes = covered_classes = None
        if mode == "proj":
            classes = 1 << m_g
            disagree = composed ^ model.members[gid]
            covered_classes = len({profiles[x] for x in disagree.ones()})
            remaining = {profiles[x] for x in range(1 << n)
                         if (target >> x) & 1}
            assert len(case2) <= len(remaining), (
                "greedy cover exceeded the profile class count")
        notes.append(OracleNote(gate=idx, arity=m_g, expanded=False,
                                factor=dp.params.factor, region=len(region),
                                width=len(chosen), threshold=tau,
                                case1=len(case1), case2=len(case2),
                                classes=classes, covered=covered_classes))
        return gid, added, wit_c

    for idx, g in enumerate(circuit.gates):
        step_new.clear()
        wit_c: Circuit | None = None
        if g.kind == "input":
            try:
                mid = model.var_member(g.var)
            except KeyError:
                raise PreconditionError(
                    f"model {model.label} lacks the variable member x_{g.var} "
                    f"needed to seed the gate walk") from None
            kind, added = "input", 0
            if depth_mode:
                wit_c = _leaf_circuit(n, g)
        elif g.kind == "const":
            mid = model.const_member(g.value)
            kind, added = "const", 0
            if depth_mode:
                wit_c = _leaf_circuit(n, g)
        elif g.kind == "op":
            if depth_mode and g.conn.name == "XOR":
                raise PreconditionError(
                    "depth circuits stay over negation with wide conjunction "
                    "and disjunction; XOR gates have no depth ledger here")
            ids = tuple(assigned[c] for c in g.children)
            if g.conn.commutative:
                ids = tuple(sorted(ids))
            mid = model.op(g.conn, ids)
            absorbed = (mode == "0proj" and g.conn.name == "NOT"
                        and idx != circuit.output
                        and kinds_used[idx] == {"oracle"}
                        and circuit.gates[g.children[0]].kind == "input")
            if absorbed:
                kind, added = "literal", 0
            else:
                kind, added = "op", merge(CertTuple(g.conn, ids))
            if depth_mode:
                b = CircuitBuilder(n)
                outs: list[int] = []
                for c in g.children:
                    o = _inline(b, gate_wit[c])
                    if o in outs:
                        o = _inline(b, gate_wit[c], fresh_inputs=True)
                    outs.append(o)
                wit_c = b.build(b.op(g.conn, *outs))
        else:
            o_seen += 1
            mid, added, wit_c = oracle_step(idx, g)
            kind = "oracle-expanded" if notes[-1].expanded else "oracle"

        assigned.append(mid)
        gate_wit.append(wit_c)
        wdepth = allowance = None
        if depth_mode:
            note_witness(mid, wit_c)
            wdepth = wit_c.depth
            allowance = oc_depths[idx] * span
            assert wdepth <= allowance, (
                f"witness depth {wdepth} over the allowance {allowance} at g{idx}")
            for ct in step_new:
                for h in ct.members:
                    assert witness[h].depth <= allowance - 1, (
                        f"tuple input {h} carries witness depth "
                        f"{witness[h].depth} at g{idx}, allowance {allowance - 1}")
        steps.append(LocalizationStep(
            gate=idx, kind=kind, member=mid, true_table=true_tables[idx],
            added=added, cumulative=len(merged), oracles=o_seen,
            witness_depth=wdepth, allowance=allowance))

    g_out = assigned[circuit.output]
    tuples = tuple(sorted(merged.values(), key=lambda t: t.key()))
    if depth_mode:
        used = sorted({i for t in tuples for i in t.members})
        for i in used:
            if i not in witness:
                raise ApproxLabError(f"no witness recorded for tuple member {i}")
        cert = DepthCoverCertificate("sym", g_out, tuples, dd * span,
                                     gate_wit[circuit.output],
                                     tuple((i, witness[i]) for i in used))
    else:
        cert = CoverCertificate("sym", g_out, tuples)
    result = verify_cover(f, model, cert)
    if not result.ok:
        raise ApproxLabError(
            f"emitted certificate failed verification: {result.reason}")

    if not k:
        unit = 0
    elif mode == "general":
        unit = m * n
    elif mode in ("0proj", "proj"):
        unit = m * m
    else:
        unit = d * ((1 << -(-m // d)) + 1) * n
    slack = [Fraction(s.cumulative - (s.gate + 1), s.oracles * unit)
             for s in steps if s.oracles and unit and s.cumulative > s.gate + 1]
    constant = max(slack, default=Fraction(0))

    report = LocalizationReport(
        mode=mode, model=model.label, f=f, n=n, oracle_count=k, max_arity=m,
        unit=unit, constant=constant, steps=tuple(steps), oracles=tuple(notes),
        cert=cert)
    if depth_mode:
        report.extras.update({
            "d": d, "span": span, "certificate_depth": cert.depth,
            "g_witness_depth": cert.g_witness.depth})
    assert report.ledger_ok(), "per-gate ledger out of shape"
    return cert, report


# -- the transforms --------------------------------------------------


def localize_general(model: ApproxModel, circuit: Circuit, f: TruthTable,
                     budget: int | None = None
                     ) -> tuple[CoverCertificate, LocalizationReport]:
    """Cover certificate for a circuit whose gates may include oracles.

    Walks the gates in order, associating a member with each.  Plain
    gates contribute their one error-set tuple; an oracle gate runs the
    branching statistics over its children's members, combines the
    likely approximators through a derandomized exact majority where
    the miss probability stays below one third, and covers the rest
    greedily.  Without oracle gates the walk degenerates to the
    per-gate certificate of cert_from_circuit.
    """
    return _localize(model, circuit, f, "general", budget=budget)


def localize_0proj(model: ApproxModel, circuit: Circuit, f: TruthTable,
                   circuits=None, projectivity=None, budget: int | None = None
                   ) -> tuple[CoverCertificate, LocalizationReport]:
    """The walk for bottom oracles over literals on a zero-projective model.

    Oracle children must be inputs or negated inputs; a negation is
    absorbed by twisting the oracle's table, and a negation gate
    feeding only oracles is skipped by the ledger.  Every batch is
    audited to read nothing outside the oracle's own variables, which
    is what detaches the per-oracle accounting from the ambient
    padding.  Projectivity is established like in the barrier module:
    pass a report, a circuit family to check, or accept the default
    small-circuit corpus.
    """
    return _localize(model, circuit, f, "0proj", circuits=circuits,
                     projectivity=projectivity, budget=budget)


def localize_projective(model: ApproxModel, circuit: Circuit, f: TruthTable,
                        circuits=None, projectivity=None,
                        budget: int | None = None
                        ) -> tuple[CoverCertificate, LocalizationReport]:
    """The walk for projective models, charged to children value profiles.

    Requires an established projectivity check (a report, a template
    family, or the default one-gate templates).  The batch audits that
    every member and error set it touches is a function of the profile
    vector of the oracle's children; error sets then cover whole
    profile classes at once, so the greedy stage needs at most one set
    per class and the per-oracle accounting compares to 2^m rather
    than to the assignment space.
    """
    return _localize(model, circuit, f, "proj", circuits=circuits,
                     projectivity=projectivity, budget=budget)


def localize_depth(model: ApproxModel, circuit: Circuit, f: TruthTable, d: int,
                   budget: int | None = None
                   ) -> tuple[DepthCoverCertificate, LocalizationReport]:
    """Depth-budgeted walk: every member in the certificate carries a witness.

    The circuit must have depth at most d over negation and the wide
    monotone connectives plus oracles.  Oracle batches run the
    depth-bounded branching statistics at the one-sixth threshold and
    combine through an approximate majority checked exactly at its
    realized width; witnesses are grafted from the children's witness
    circuits, and the ledger asserts the allowance depth_i * (2d + 6)
    at every gate with tuple inputs one below it.
    """
    return _localize(model, circuit, f, "depth", d=d, budget=budget)
