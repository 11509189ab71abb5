"""Approximation models: member families with commutative gate tables.

A model over n variables is a family of member functions containing
the constants and (unless relaxed) every variable, together with one
approximating operation table per connective.  Tables are keyed by the
multiset of member indices, so commutativity is structural.  Lazy
models carry a rule that fills missing entries on first use; models
parsed from files have no rule and refuse unknown tuples.

Three generated families ship here: the exact model (every delta
empty), the seeded random-parity polynomial model over GF(2), where
negation and parity are exact and AND/OR are approximated by products
of sampled parities, Razborov-Smolensky style, and the fusion model,
whose members answer a battery of semi-filters on selected rows and
whose mistakes all sit on the selection diagonal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import anf
from .budgets import charge
from .circuits import Circuit, Connective, apply_pointwise
from .errors import (DegenerateModelError, FusionDegenerateError,
                     IncompleteModelError, MalformedCircuitError)
from .truthtable import TruthTable, all_tables


@dataclass(frozen=True)
class ErrorSetTuple:
    """One gate tuple with its positive and negative error sets.

    delta_plus holds assignments where the true connective exceeds the
    approximating one, delta_minus the converse; delta is their union.
    """

    conn: Connective
    members: tuple[int, ...]
    delta_plus: TruthTable
    delta_minus: TruthTable

    @property
    def delta(self) -> TruthTable:
        return self.delta_plus | self.delta_minus

    def key(self) -> tuple:
        return (self.conn.name, self.conn.arity, self.members)


class ApproxModel:
    def __init__(self, n: int, neg_exact: bool = False, relaxed_vars: bool = False,
                 rule=None, label: str = "model", member_predicate=None,
                 spec: str | None = None):
        self.n = n
        self.neg_exact = neg_exact
        self.relaxed_vars = relaxed_vars
        self.label = label
        self.spec = spec
        self._rule = rule
        self._predicate = member_predicate
        self.members: list[TruthTable] = []
        self._index: dict[TruthTable, int] = {}
        self._ops: dict[tuple, int] = {}
        self.debug: dict = {}
        self.truncations: list[tuple] = []

    # -- members -----------------------------------------------------

    def add_member(self, table: TruthTable) -> int:
        if table.n != self.n:
            raise ValueError(f"member arity {table.n} != model order {self.n}")
        if table not in self._index:
            self._index[table] = len(self.members)
            self.members.append(table)
        return self._index[table]

    def member_id(self, table: TruthTable) -> int:
        if table not in self._index:
            raise KeyError(f"not a materialized member: {table!r}")
        return self._index[table]

    def has_member(self, table: TruthTable) -> bool:
        return table in self._index

    def var_member(self, i: int) -> int:
        return self.member_id(TruthTable.variable(self.n, i))

    def const_member(self, value: int) -> int:
        return self.member_id(TruthTable.const(self.n, value))

    def ensure_all_members(self, budget: int | None = None):
        """Materialize the whole declared member family (needs a predicate)."""
        if self._predicate is None:
            raise DegenerateModelError(f"{self.label}: no membership predicate to materialize")
        charge(1 << (1 << self.n), budget, "ensure_all_members")
        for table in all_tables(self.n):
            if self._predicate(table):
                self.add_member(table)

    # -- operations --------------------------------------------------

    def _key(self, conn: Connective, ids) -> tuple:
        ids = tuple(ids)
        if len(ids) != conn.arity:
            raise ValueError(f"{conn}: {len(ids)} arguments")
        if conn.commutative:
            ids = tuple(sorted(ids))
        return (conn.name, conn.arity, ids)

    def ops(self) -> dict[tuple, int]:
        """Snapshot of the materialized operation entries, canonically keyed."""
        return dict(self._ops)

    def set_op(self, conn: Connective, ids, result: int):
        key = self._key(conn, ids)
        if key in self._ops and self._ops[key] != result:
            raise ValueError(f"conflicting op entries for {key}")
        self._ops[key] = result

    def op(self, conn: Connective, ids) -> int:
        key = self._key(conn, ids)
        if key in self._ops:
            return self._ops[key]
        if self._rule is None:
            raise IncompleteModelError(
                f"{self.label}: no op entry for {key} and lazy extension is disabled"
            )
        tables = [self.members[i] for i in key[2]]
        result = self._rule(self, conn, key[2], tables)
        rid = self.add_member(result)
        self._ops[key] = rid
        return rid

    def op_entries(self) -> list[tuple]:
        return list(self._ops.items())

    # -- error sets --------------------------------------------------

    def error_set(self, conn: Connective, ids) -> ErrorSetTuple:
        key = self._key(conn, ids)
        tables = [self.members[i] for i in key[2]]
        true = apply_pointwise(conn.table, tables)
        approx = self.members[self.op(conn, key[2])]
        return ErrorSetTuple(conn, key[2], true.minus(approx), approx.minus(true))

    def enumerate_error_sets(self, basis, budget: int | None = None) -> list[ErrorSetTuple]:
        """Every tuple over the materialized members, canonical order.

        Connectives sorted by (name, arity), then index multisets
        ascending (combinations with replacement).
        """
        import itertools

        conns = sorted(basis, key=lambda c: (c.name, c.arity))
        m = len(self.members)
        est = sum(self._multiset_count(m, c.arity) for c in conns)
        charge(est * (1 << self.n), budget, "enumerate_error_sets")
        out = []
        for conn in conns:
            if conn.commutative:
                combos = itertools.combinations_with_replacement(range(m), conn.arity)
            else:
                combos = itertools.product(range(m), repeat=conn.arity)
            for ids in combos:
                out.append(self.error_set(conn, ids))
        return out

    @staticmethod
    def _multiset_count(m: int, r: int) -> int:
        import math

        return math.comb(m + r - 1, r) if m else 0

    # -- circuit approximation ---------------------------------------

    def approximate_gates(self, circuit: Circuit, leaf_members: dict[int, int] | None = None
                          ) -> list[int]:
        """Member assigned to every gate, bottom-up through the op table.

        leaf_members optionally reroutes input variables to arbitrary
        members (the localization transforms instantiate subcircuits
        over members this way).  Oracle gates are not approximable.
        """
        assigned: list[int] = []
        for idx, g in enumerate(circuit.gates):
            if g.kind == "input":
                if leaf_members and g.var in leaf_members:
                    assigned.append(leaf_members[g.var])
                else:
                    assigned.append(self.var_member(g.var))
            elif g.kind == "const":
                assigned.append(self.const_member(g.value))
            elif g.kind == "op":
                assigned.append(self.op(g.conn, [assigned[c] for c in g.children]))
            else:
                raise MalformedCircuitError(
                    f"g{idx}: oracle gates have no model semantics; localize instead"
                )
        return assigned

    def approximate_circuit(self, circuit: Circuit,
                            leaf_members: dict[int, int] | None = None) -> int:
        return self.approximate_gates(circuit, leaf_members)[circuit.output]

    # -- hygiene -----------------------------------------------------

    def validate(self) -> list[str]:
        """Invariant scan; returns human-readable violations (empty = clean)."""
        problems = []
        ids = set(range(len(self.members)))
        for value in (0, 1):
            if not self.has_member(TruthTable.const(self.n, value)):
                problems.append(f"constant {value} is not a member")
        if not self.relaxed_vars:
            for i in range(1, self.n + 1):
                if not self.has_member(TruthTable.variable(self.n, i)):
                    problems.append(f"variable x{i} is not a member")
        for (name, arity, ids_key), result in self._ops.items():
            if result not in ids or any(i not in ids for i in ids_key):
                problems.append(f"op {name}/{arity} {ids_key} references unknown member")
                continue
            if self.neg_exact and name == "NOT":
                if self.members[result] != ~self.members[ids_key[0]]:
                    problems.append(f"NOT entry for member {ids_key[0]} is not exact")
        return problems


# -- generators ------------------------------------------------------


def _seed_base(model: ApproxModel) -> list[int]:
    ids = [model.add_member(TruthTable.const(model.n, 0)),
           model.add_member(TruthTable.const(model.n, 1))]
    for i in range(1, model.n + 1):
        ids.append(model.add_member(TruthTable.variable(model.n, i)))
    return ids


def gen_exact_model(n: int, materialize: str = "auto", budget: int | None = None) -> ApproxModel:
    """The model whose operations are the true connectives; every delta is empty.

    materialize: 'full' adds all 2^(2^n) functions up front (n <= 4),
    'lazy' only the base members, 'auto' picks full for n <= 2.
    """

    def rule(model, conn, ids, tables):
        return apply_pointwise(conn.table, tables)

    model = ApproxModel(n, neg_exact=True, rule=rule, label=f"exact(n={n})",
                        member_predicate=lambda t: True, spec=f"gen:exact:{n}")
    _seed_base(model)
    if materialize == "full" or (materialize == "auto" and n <= 2):
        if n > 4:
            raise DegenerateModelError(f"full exact family at n={n} is out of reach")
        model.ensure_all_members(budget)
    return model


def gen_rs_model(n: int, t: int, seed: int, degree_cap: int | None = None) -> ApproxModel:
    """Seeded random-parity polynomial model over GF(2).

    Members are the multilinear polynomials of degree at most the cap
    (default n, which admits every function).  NOT and XOR entries are
    exact; AND/OR entries compose the t-repetition random-parity
    product with the argument polynomials.  Sampled parity sets depend
    only on (seed, connective, the argument functions restricted to
    their live variables), so equal constructions agree entry by entry
    regardless of query order, and entries for functions that ignore
    the padding variables agree across paddings and across relabelings
    that fix the live variables.
    """
    if t < 1:
        raise ValueError("repetition count t must be >= 1")
    cap = n if degree_cap is None else degree_cap

    def sample_sets(conn, tables) -> list[frozenset[int]]:
        live = tuple(sorted(set().union(*(tt.essential_vars() for tt in tables))))
        masks = ",".join(tt.project(live).hex() for tt in tables)
        rng = random.Random(f"rs:{seed}:{conn.name}:{conn.arity}:{len(live)}:{masks}")
        return [frozenset(i for i in range(conn.arity) if rng.getrandbits(1))
                for _ in range(t)]

    def parity(tables, subset) -> TruthTable:
        acc = TruthTable.const(n, 0)
        for i in subset:
            acc ^= tables[i]
        return acc

    def rule(model, conn, ids, tables):
        if conn.name == "NOT":
            return ~tables[0]
        if conn.name == "XOR":
            acc = TruthTable.const(n, 0)
            for tt in tables:
                acc ^= tt
            return acc
        if conn.name not in ("AND", "OR"):
            raise IncompleteModelError(f"random-parity model has no rule for {conn}")
        tables = sorted(tables, key=lambda tt: tt.mask)
        sets = sample_sets(conn, tables)
        model.debug[("rs-sets", conn.name, conn.arity, tuple(tt.mask for tt in tables))] = sets
        if conn.name == "OR":
            acc = TruthTable.const(n, 1)
            for s in sets:
                acc &= ~parity(tables, s)
            result = ~acc
        else:
            acc = TruthTable.const(n, 1)
            for s in sets:
                acc &= ~parity([~tt for tt in tables], s)
            result = acc
        if anf.degree(result) > cap:
            exact = apply_pointwise(conn.table, tables)
            kept = 0
            for mono in anf.monomials(exact):
                if bin(mono).count("1") <= cap:
                    kept |= 1 << mono
            result = anf.table_from_anf(n, kept)
            model.truncations.append((conn.name, conn.arity, ids))
        return result

    model = ApproxModel(
        n, neg_exact=True, rule=rule, label=f"rs(n={n},t={t},seed={seed})",
        member_predicate=lambda tt: anf.degree(tt) <= cap,
        spec=f"gen:rs:{n}:{t}:{seed}",
    )
    _seed_base(model)
    return model


def gen_fusion_model(f: TruthTable, F0, budget: int | None = None):
    """Approximation model whose members track a battery of semi-filters.

    Members are indexed by the base functions g on the first n
    variables of the target; q = ceil(log2 k) extra variables select
    one of the k filters in F0.  A member answers g(x), except on the
    diagonal rows where the selected filter's point equals x; there it
    answers the filter's vote on the bracket of g.  Selector values
    beyond k change nothing.  AND2 and OR2 entries approximate the
    composed base functions the same way; other connectives have no
    rule.  Two distinct points in F0 make the tracking injective, so
    the model holds exactly 2^(2^n) members, one per base function, and
    every error set lives on the diagonal.

    Returns the model together with the lifted target f'(x, y) = f(x).
    pre: F0 holds at least two semi-filters over the zero-set of f and
    realizes at least two distinct points, FusionDegenerateError
    otherwise.
    """
    from .fusion import bracket

    filters = tuple(F0.filters) if hasattr(F0, "filters") else tuple(F0)
    n = f.n
    universe = tuple(f.zeros())
    if len(filters) < 2:
        raise FusionDegenerateError("need at least two semi-filters to select between")
    for F in filters:
        if F.n != n or F.universe != universe:
            raise FusionDegenerateError(
                "filter set does not live on the zero-set of the target"
            )
    points = [F.v() for F in filters]
    declared = getattr(F0, "v_universe", None)
    if len(set(points)) < 2 or (declared is not None and len(set(declared)) < 2):
        raise FusionDegenerateError("well-defined selection needs two distinct points")
    q = (len(filters) - 1).bit_length()
    big = n + q
    charge((1 << (1 << n)) * (1 << big), budget, "gen_fusion_model members")

    def fused(g: TruthTable) -> TruthTable:
        br = bracket(g, universe)
        mask = 0
        for w in range(1 << big):
            x = w & ((1 << n) - 1)
            y = w >> n
            if y < len(filters) and points[y] == x:
                bit = filters[y](br)
            else:
                bit = (g.mask >> x) & 1
            if bit:
                mask |= 1 << w
        return TruthTable(big, mask)

    base: dict[int, TruthTable] = {}

    def rule(model, conn, ids, tables):
        if conn.name == "AND" and conn.arity == 2:
            combo = base[ids[0]] & base[ids[1]]
        elif conn.name == "OR" and conn.arity == 2:
            combo = base[ids[0]] | base[ids[1]]
        else:
            raise IncompleteModelError(f"fusion model has no rule for {conn}")
        return fused(combo)

    model = ApproxModel(
        big, relaxed_vars=True, rule=rule,
        label=f"fusion(n={n},k={len(filters)})",
        spec=f"gen:fusion:{f.hex()}:{len(filters)}",
    )
    for g in all_tables(n):
        base[model.add_member(fused(g))] = g
    if len(model.members) != 1 << (1 << n):
        raise FusionDegenerateError("filter battery identifies two base functions")
    return model, f.lift(tuple(range(1, n + 1)), big)


# -- projectivity checks ---------------------------------------------


@dataclass
class ProjectivityReport:
    passed: bool
    checked: int
    counterexample: tuple | None = None
    detail: str = ""


def check_0_projective(model: ApproxModel, circuits) -> ProjectivityReport:
    """Does every approximated circuit depend only on the circuit's own variables?

    The family is whatever iterable of circuits the caller declares;
    the verdict is relative to it.  The counterexample, if any, names
    the first circuit and an assignment pair agreeing on the circuit's
    variables but split by the approximator.
    """
    checked = 0
    for circuit in circuits:
        checked += 1
        member = model.members[model.approximate_circuit(circuit)]
        inside = set(circuit.used_vars())
        for i in member.essential_vars():
            if i not in inside:
                for x in range(1 << model.n):
                    y = x ^ (1 << (i - 1))
                    if member(x) != member(y):
                        return ProjectivityReport(
                            False, checked, (circuit, x, y),
                            f"approximator reads x{i} outside circuit variables {sorted(inside)}",
                        )
    return ProjectivityReport(True, checked)


def check_projective(model: ApproxModel, circuits, tuple_budget: int | None = None
                     ) -> ProjectivityReport:
    """Value-profile condition: member tuples with equal input profiles at two
    assignments force equal approximated values there.

    Circuits are read as templates over formal inputs y_1..y_m; every
    ordered tuple of materialized members instantiates the leaves.
    """
    import itertools

    checked = 0
    members = range(len(model.members))
    for circuit in circuits:
        formals = circuit.used_vars()
        m = len(formals)
        charge(len(model.members) ** m * (1 << model.n), tuple_budget, "check_projective")
        for tup in itertools.product(members, repeat=m):
            checked += 1
            leaf = dict(zip(formals, tup))
            out = model.members[model.approximate_circuit(circuit, leaf)]
            profile_value: dict[tuple, int] = {}
            for x in range(1 << model.n):
                profile = tuple(model.members[f](x) for f in tup)
                v = out(x)
                if profile_value.setdefault(profile, v) != v:
                    return ProjectivityReport(
                        False, checked, (circuit, tup, x),
                        f"profile {profile} maps to both outputs at assignment {x}",
                    )
    return ProjectivityReport(True, checked)
